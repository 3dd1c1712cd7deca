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

#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace relpii {

// "2026-01-31T12:00:00Z".
std::string UtcTimestamp();

std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temp file, fsyncs it, then renames over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content);

// Splits on '\n', dropping a trailing '\r' per line. Keeps empty lines so
// callers can report correct line numbers.
std::vector<std::string_view> SplitLines(std::string_view content);

// Append-only line log, fsynced per record. Thread-safe.
class LineLog {
 public:
  explicit LineLog(std::filesystem::path path);
  LineLog(const LineLog&) = delete;
  LineLog& operator=(const LineLog&) = delete;
  ~LineLog();

  void Append(std::string_view line);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex mu_;
};

}  // namespace relpii
