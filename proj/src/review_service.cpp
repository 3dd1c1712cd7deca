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


#include "review_service.hpp"

#include <algorithm>
#include <map>

#include "error.hpp"
#include "httplib.h"

namespace relpii {

using nlohmann::json;

namespace {

std::filesystem::path DefaultAuditPath(const std::filesystem::path& dataset) {
  auto p = dataset;
  p += ".audit.jsonl";
  return p;
}

json SpansToJson(const std::vector<PiiSpan>& spans) {
  json a = json::array();
  for (const auto& s : spans) a.push_back(SpanToJson(s));
  return a;
}

}  // namespace

ReviewUpdate ReviewUpdateFromJson(std::string sample_id, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "update body is not an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "expected_revision" && key != "context" && key != "question" &&
        key != "spans" && key != "status") {
      throw Error(ErrorCode::kParse, "unknown field \"" + key + "\" in update");
    }
  }
  ReviewUpdate u;
  u.sample_id = std::move(sample_id);
  auto rev = j.find("expected_revision");
  if (rev == j.end() || !rev->is_number_integer() || rev->get<long long>() < 0) {
    throw Error(ErrorCode::kParse,
                "expected_revision must be a non-negative integer");
  }
  u.expected_revision = rev->get<std::uint64_t>();
  auto str = [&](const char* name) -> std::optional<std::string> {
    auto it = j.find(name);
    if (it == j.end()) return std::nullopt;
    if (!it->is_string()) {
      throw Error(ErrorCode::kParse, std::string(name) + " must be a string");
    }
    return it->get<std::string>();
  };
  u.context = str("context");
  u.question = str("question");
  if (auto st = str("status")) {
    u.status = ReviewStatusFromName(*st);
    if (!u.status) throw Error(ErrorCode::kValidation, "unknown status \"" + *st + "\"");
  }
  if (auto it = j.find("spans"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::kParse, "spans must be an array");
    std::vector<PiiSpan> spans;
    for (std::size_t i = 0; i < it->size(); ++i) {
      spans.push_back(SpanFromJson((*it)[i], "span " + std::to_string(i)));
    }
    u.spans = std::move(spans);
  }
  return u;
}

ReviewStore::ReviewStore(std::filesystem::path dataset,
                         std::optional<std::filesystem::path> audit_log)
    : path_(std::move(dataset)),
      audit_(audit_log ? *audit_log : DefaultAuditPath(path_)) {
  auto samples = LoadDataset(path_);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    index_.emplace(samples[i].id, i);
    sample_mu_.push_back(std::make_unique<std::mutex>());
  }
  snapshot_ = std::make_shared<const std::vector<Sample>>(std::move(samples));
}

ReviewStore::Snapshot ReviewStore::snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return snapshot_;
}

std::vector<SampleSummary> ReviewStore::List(const SampleFilter& filter) const {
  const auto snap = snapshot();
  std::vector<SampleSummary> out;
  for (const auto& s : *snap) {
    if (filter.status && s.status != *filter.status) continue;
    if (filter.provenance && s.provenance != *filter.provenance) continue;
    out.push_back({s.id, s.status, s.provenance, s.revision, s.spans.size()});
  }
  std::sort(out.begin(), out.end(),
            [](const SampleSummary& a, const SampleSummary& b) { return a.id < b.id; });
  return out;
}

Sample ReviewStore::Get(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCode::kNotFound, "no sample with id " + std::string(id));
  }
  return (*snapshot())[it->second];
}

DatasetStats ReviewStore::Stats() const { return ComputeStats(*snapshot()); }

std::uint64_t ReviewStore::Update(const ReviewUpdate& u, std::string_view annotator) {
  auto it = index_.find(u.sample_id);
  if (it == index_.end()) {
    throw Error(ErrorCode::kNotFound, "no sample with id " + u.sample_id);
  }
  if (!u.context && !u.question && !u.spans && !u.status) {
    throw Error(ErrorCode::kInvalidInput, "update changes nothing");
  }
  const std::size_t pos = it->second;
  std::lock_guard sample_lock(*sample_mu_[pos]);

  // Only this sample's lock holder changes this entry, so the snapshot taken
  // here stays current for it.
  const Sample before = (*snapshot())[pos];
  if (before.revision != u.expected_revision) {
    throw Error(ErrorCode::kRevisionConflict,
                "sample " + u.sample_id + " is at revision " +
                    std::to_string(before.revision) + ", update expected " +
                    std::to_string(u.expected_revision));
  }
  Sample after = before;
  json changes = json::object();
  if (u.context) {
    after.context = *u.context;
    changes["context"] = {{"old", before.context}, {"new", after.context}};
  }
  if (u.question) {
    after.question = *u.question;
    changes["question"] = {{"old", before.question}, {"new", after.question}};
  }
  if (u.spans) {
    after.spans = *u.spans;
    changes["spans"] = {{"old", SpansToJson(before.spans)},
                        {"new", SpansToJson(after.spans)}};
  }
  if (u.status) {
    after.status = *u.status;
    changes["status"] = {{"old", ReviewStatusName(before.status)},
                         {"new", ReviewStatusName(after.status)}};
  }
  after.revision = before.revision + 1;
  const auto report = ValidateSample(after);
  if (!report.ok()) {
    std::string msg = "sample " + after.id + ":";
    for (const auto& v : report.violations) msg += " " + v + ";";
    msg.pop_back();
    throw Error(ErrorCode::kValidation, msg);
  }

  std::lock_guard commit_lock(commit_mu_);
  auto next = std::make_shared<std::vector<Sample>>(*snapshot());
  (*next)[pos] = after;
  SaveDataset(path_, *next);
  audit_.Append(json{{"timestamp", UtcTimestamp()},
                     {"annotator", std::string(annotator)},
                     {"sample_id", after.id},
                     {"old_revision", before.revision},
                     {"new_revision", after.revision},
                     {"changes", changes}}
                    .dump());
  {
    std::lock_guard lock(snapshot_mu_);
    snapshot_ = std::move(next);
  }
  return after.revision;
}

namespace {

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownSampleId: return 404;
    case ErrorCode::kRevisionConflict: return 409;
    case ErrorCode::kValidation: return 422;
    case ErrorCode::kParse:
    case ErrorCode::kInvalidInput: return 400;
    default: return 500;
  }
}

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, ErrorCode code, const std::string& message) {
  SendJson(res, HttpStatusFor(code),
           {{"error", std::string(ErrorCodeName(code))}, {"message", message}});
}

template <typename Fn>
auto Guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      SendError(res, e.code(), e.what());
    } catch (const json::exception& e) {
      SendError(res, ErrorCode::kParse, e.what());
    } catch (const std::exception& e) {
      SendError(res, ErrorCode::kInternal, e.what());
    }
  };
}

constexpr const char* kFallbackIndex = R"HTML(<!doctype html>
<html><head><meta charset="utf-8"><title>relpii review</title></head>
<body><h1>relpii review service</h1>
<p>No UI directory configured. API: GET /samples, GET /samples/{id},
PUT /samples/{id}, GET /stats.</p></body></html>
)HTML";

}  // namespace

ReviewServer::ReviewServer(ReviewStore& store,
                           std::optional<std::filesystem::path> ui_dir)
    : store_(store), server_(std::make_unique<httplib::Server>()) {
  auto& svr = *server_;
  svr.Get("/samples", Guarded([this](const httplib::Request& req,
                                     httplib::Response& res) {
    SampleFilter filter;
    if (req.has_param("status") && !req.get_param_value("status").empty()) {
      const auto v = req.get_param_value("status");
      filter.status = ReviewStatusFromName(v);
      if (!filter.status) throw Error(ErrorCode::kInvalidInput, "unknown status " + v);
    }
    if (req.has_param("provenance") && !req.get_param_value("provenance").empty()) {
      const auto v = req.get_param_value("provenance");
      filter.provenance = ProvenanceFromName(v);
      if (!filter.provenance) {
        throw Error(ErrorCode::kInvalidInput, "unknown provenance " + v);
      }
    }
    json out = json::array();
    for (const auto& s : store_.List(filter)) {
      out.push_back({{"id", s.id},
                     {"status", ReviewStatusName(s.status)},
                     {"provenance", ProvenanceName(s.provenance)},
                     {"revision", s.revision},
                     {"span_count", s.span_count}});
    }
    SendJson(res, 200, out);
  }));
  svr.Get(R"(/samples/([^/]+))", Guarded([this](const httplib::Request& req,
                                                httplib::Response& res) {
    SendJson(res, 200, SampleToJson(store_.Get(req.matches[1].str())));
  }));
  svr.Put(R"(/samples/([^/]+))", Guarded([this](const httplib::Request& req,
                                                httplib::Response& res) {
    const auto body = json::parse(req.body);
    auto update = ReviewUpdateFromJson(req.matches[1].str(), body);
    std::string annotator = req.get_header_value("X-Annotator");
    if (annotator.empty()) annotator = "anonymous";
    const auto rev = store_.Update(update, annotator);
    SendJson(res, 200, {{"id", update.sample_id}, {"revision", rev}});
  }));
  svr.Get("/stats", Guarded([this](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200, StatsToJson(store_.Stats()));
  }));
  if (ui_dir && svr.set_mount_point("/", ui_dir->string())) return;
  svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(kFallbackIndex, "text/html");
  });
}

ReviewServer::~ReviewServer() { Stop(); }

int ReviewServer::Start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void ReviewServer::Wait() {
  std::lock_guard lock(join_mu_);
  if (thread_.joinable()) thread_.join();
}

void ReviewServer::Stop() {
  if (server_) server_->stop();
  Wait();
}

}  // namespace relpii
