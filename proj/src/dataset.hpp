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

// Dataset record format, validation, span localization and statistics.
//
// One JSON object per line:
//   {"id", "context", "question",
//    "spans": [{"text", "start", "end", "type", "relevance"}],
//    "provenance", "status", "revision"}
// Offsets are code point indices into `context`.

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "types.hpp"

namespace relpii {

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Lists every violated invariant; never stops at the first one.
ValidationReport ValidateSample(const Sample& sample);

// Per-sample checks plus id uniqueness across the list.
ValidationReport ValidateDataset(const std::vector<Sample>& samples);

nlohmann::json SpanToJson(const PiiSpan& span);
nlohmann::json SampleToJson(const Sample& sample);

// Field-level decoding. Throws Error(kParse) for malformed shape and
// Error(kValidation) for out-of-domain values (relevance 2, unknown type).
// Type labels pass through the alias table.
Sample SampleFromJson(const nlohmann::json& j);
// `who` prefixes error messages.
PiiSpan SpanFromJson(const nlohmann::json& j, const std::string& who);

// Throws Error(kParse) with the 1-based line number, or Error(kValidation)
// naming the sample id and the violated invariant.
std::vector<Sample> LoadDataset(const std::filesystem::path& path);
std::vector<Sample> ParseDataset(std::string_view content);

// Written atomically (temp file + rename).
void SaveDataset(const std::filesystem::path& path,
                 const std::vector<Sample>& samples);
std::string SerializeDataset(const std::vector<Sample>& samples);

// Leftmost exact occurrence of `needle` in `context` that intersects none of
// `consumed`. Offsets are code points.
std::optional<CharRange> FindSpan(std::string_view context,
                                  std::string_view needle,
                                  const std::vector<CharRange>& consumed);

// As FindSpan, but throws Error(kNotFound).
CharRange LocateSpan(std::string_view context, std::string_view needle,
                     const std::vector<CharRange>& consumed);

struct TypeStats {
  std::size_t total = 0;
  std::size_t high = 0;
  // Absent when total == 0.
  std::optional<double> high_proportion;
  std::optional<double> low_proportion;
};

struct DatasetStats {
  std::array<TypeStats, kPiiTypeCount> per_type{};

  const TypeStats& of(PiiType t) const {
    return per_type[static_cast<std::size_t>(t)];
  }
};

DatasetStats ComputeStats(const std::vector<Sample>& samples);

// Aligned table: PII Type | Total Count | High Prop | Low Prop.
std::string FormatStatsTable(const DatasetStats& stats);
nlohmann::json StatsToJson(const DatasetStats& stats);

}  // namespace relpii
