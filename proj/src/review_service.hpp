// Copyright 2026 The relpii Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Review store and HTTP front end for human label correction.
//
// Edits use optimistic concurrency: each update names the revision it was
// made against and is refused when the sample has moved on. Readers work on
// immutable snapshots of the whole dataset. Every accepted edit is written
// to disk (whole-file atomic rewrite) and to an append-only audit log before
// it is acknowledged.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "dataset.hpp"
#include "io.hpp"
#include "json.hpp"
#include "types.hpp"

namespace httplib {
class Server;
}

namespace relpii {

struct SampleSummary {
  std::string id;
  ReviewStatus status = ReviewStatus::kRaw;
  Provenance provenance = Provenance::kSynthetic;
  std::uint64_t revision = 0;
  std::size_t span_count = 0;
};

struct SampleFilter {
  std::optional<ReviewStatus> status;
  std::optional<Provenance> provenance;
};

struct ReviewUpdate {
  std::string sample_id;
  std::uint64_t expected_revision = 0;
  std::optional<std::string> context;
  std::optional<std::string> question;
  std::optional<std::vector<PiiSpan>> spans;
  std::optional<ReviewStatus> status;
};

// Body of PUT /samples/{id}: {"expected_revision", "context"?, "question"?,
// "spans"?, "status"?}. Throws Error(kParse) or Error(kValidation).
ReviewUpdate ReviewUpdateFromJson(std::string sample_id, const nlohmann::json& j);

class ReviewStore {
 public:
  using Snapshot = std::shared_ptr<const std::vector<Sample>>;

  // Loads and validates the dataset. The audit log defaults to
  // "<dataset>.audit.jsonl".
  explicit ReviewStore(std::filesystem::path dataset,
                       std::optional<std::filesystem::path> audit_log = {});

  // Id order.
  std::vector<SampleSummary> List(const SampleFilter& filter) const;
  // Throws Error(kNotFound).
  Sample Get(std::string_view id) const;
  DatasetStats Stats() const;
  Snapshot snapshot() const;

  // Returns the new revision. Throws Error(kNotFound | kRevisionConflict |
  // kValidation | kInvalidInput). Updates to different samples validate in
  // parallel; only the file rewrite is serialized.
  std::uint64_t Update(const ReviewUpdate& update, std::string_view annotator);

  const std::filesystem::path& dataset_path() const { return path_; }
  const std::filesystem::path& audit_path() const { return audit_.path(); }

 private:
  std::filesystem::path path_;
  LineLog audit_;
  mutable std::mutex snapshot_mu_;
  Snapshot snapshot_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::unique_ptr<std::mutex>> sample_mu_;
  std::mutex commit_mu_;
};

// Routes:
//   GET /samples?status=&provenance=   summaries
//   GET /samples/{id}                  full record
//   PUT /samples/{id}                  ReviewUpdate body; X-Annotator header
//   GET /stats                         per-type statistics
//   GET /                              static files from `ui_dir`
// Errors come back as {"error": <code name>, "message": ...} with 400, 404,
// 409 or 422.
class ReviewServer {
 public:
  ReviewServer(ReviewStore& store, std::optional<std::filesystem::path> ui_dir);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds (port 0 picks a free one), starts serving on a background thread
  // and returns the bound port. Throws Error(kIo) when binding fails.
  int Start(const std::string& host, int port);
  // Blocks until Stop() is called from elsewhere.
  void Wait();
  void Stop();
  int port() const { return port_; }

 private:
  ReviewStore& store_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex join_mu_;
  int port_ = 0;
};

}  // namespace relpii
