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

#include "dataset.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "error.hpp"
#include "io.hpp"
#include "utf8.hpp"

namespace relpii {

using nlohmann::json;

ValidationReport ValidateSample(const Sample& sample) {
  ValidationReport report;
  auto add = [&](const std::string& msg) { report.violations.push_back(msg); };

  if (sample.id.empty()) add("id is empty");

  const CodePointIndex index(sample.context);
  const std::size_t length = index.size();
  for (std::size_t i = 0; i < sample.spans.size(); ++i) {
    const auto& span = sample.spans[i];
    const std::string where = "span " + std::to_string(i) + " (\"" +
                              span.text + "\")";
    if (span.text.empty()) add(where + ": text is empty");
    if (span.start >= span.end) {
      add(where + ": start " + std::to_string(span.start) +
          " is not before end " + std::to_string(span.end));
    } else if (span.end > length) {
      add(where + ": end " + std::to_string(span.end) +
          " exceeds context length " + std::to_string(length));
    } else {
      auto slice = index.Slice(sample.context, span.start, span.end);
      if (slice != span.text) {
        add(where + ": text/offset mismatch, context[" +
            std::to_string(span.start) + ".." + std::to_string(span.end) +
            "] reads \"" + std::string(slice) + "\"");
      }
    }
    if (i > 0) {
      const auto& prev = sample.spans[i - 1];
      if (span.start < prev.start) {
        add(where + ": spans not sorted by start");
      }
    }
  }
  // Pairwise so that unsorted input still reports every overlap.
  for (std::size_t i = 0; i < sample.spans.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.spans.size(); ++j) {
      CharRange a{sample.spans[i].start, sample.spans[i].end};
      CharRange b{sample.spans[j].start, sample.spans[j].end};
      if (a.Intersects(b)) {
        add("overlap between span " + std::to_string(i) + " (" +
            std::to_string(a.start) + "," + std::to_string(a.end) +
            ") and span " + std::to_string(j) + " (" +
            std::to_string(b.start) + "," + std::to_string(b.end) + ")");
      }
    }
  }
  return report;
}

ValidationReport ValidateDataset(const std::vector<Sample>& samples) {
  ValidationReport report;
  std::unordered_set<std::string> seen;
  for (const auto& s : samples) {
    for (const auto& v : ValidateSample(s).violations) {
      report.violations.push_back("sample " + s.id + ": " + v);
    }
    if (!seen.insert(s.id).second) {
      report.violations.push_back("sample " + s.id + ": duplicate id");
    }
  }
  return report;
}

json SpanToJson(const PiiSpan& span) {
  return json{{"text", span.text},
              {"start", span.start},
              {"end", span.end},
              {"type", std::string(PiiTypeName(span.type))},
              {"relevance", static_cast<int>(span.relevance)}};
}

json SampleToJson(const Sample& sample) {
  json spans = json::array();
  for (const auto& s : sample.spans) spans.push_back(SpanToJson(s));
  // Field order follows the record definition.
  json j = json::object();
  j["id"] = sample.id;
  j["context"] = sample.context;
  j["question"] = sample.question;
  j["spans"] = std::move(spans);
  j["provenance"] = std::string(ProvenanceName(sample.provenance));
  j["status"] = std::string(ReviewStatusName(sample.status));
  j["revision"] = sample.revision;
  return j;
}

namespace {

const json& Field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw Error(ErrorCode::kParse, std::string("missing field \"") + name + "\"");
  }
  return *it;
}

std::string StringField(const json& j, const char* name) {
  const auto& v = Field(j, name);
  if (!v.is_string()) {
    throw Error(ErrorCode::kParse,
                std::string("field \"") + name + "\" is not a string");
  }
  return v.get<std::string>();
}

std::size_t OffsetField(const json& j, const char* name) {
  const auto& v = Field(j, name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorCode::kParse, std::string("field \"") + name +
                                       "\" is not a non-negative integer");
  }
  return v.get<std::size_t>();
}

// Accepts 0/1 as numbers or numeric strings; any other value is a domain
// violation rather than a shape error.
Relevance RelevanceField(const json& v, const std::string& who) {
  long long value = -1;
  if (v.is_number_integer()) {
    value = v.get<long long>();
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "0") value = 0;
    else if (s == "1") value = 1;
    else {
      throw Error(ErrorCode::kValidation,
                  who + ": relevance \"" + s + "\" not in {0, 1}");
    }
  } else {
    throw Error(ErrorCode::kParse, who + ": relevance is not a number");
  }
  if (value != 0 && value != 1) {
    throw Error(ErrorCode::kValidation,
                who + ": relevance " + std::to_string(value) + " not in {0, 1}");
  }
  return value == 1 ? Relevance::kHigh : Relevance::kLow;
}

}  // namespace

PiiSpan SpanFromJson(const json& sj, const std::string& who) {
  if (!sj.is_object()) throw Error(ErrorCode::kParse, who + " is not an object");
  PiiSpan span;
  span.text = StringField(sj, "text");
  span.start = OffsetField(sj, "start");
  span.end = OffsetField(sj, "end");
  const auto label = StringField(sj, "type");
  auto type = PiiTypeFromLabel(label);
  if (!type) {
    throw Error(ErrorCode::kValidation, who + ": unknown PII type \"" + label + "\"");
  }
  span.type = *type;
  span.relevance = RelevanceField(Field(sj, "relevance"), who);
  return span;
}

Sample SampleFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "record is not an object");
  Sample s;
  s.id = StringField(j, "id");
  const std::string who = "sample " + s.id;
  s.context = StringField(j, "context");
  s.question = StringField(j, "question");
  const auto& spans = Field(j, "spans");
  if (!spans.is_array()) throw Error(ErrorCode::kParse, "spans is not an array");
  for (std::size_t i = 0; i < spans.size(); ++i) {
    s.spans.push_back(SpanFromJson(spans[i], who + " span " + std::to_string(i)));
  }
  if (auto it = j.find("provenance"); it != j.end()) {
    auto p = it->is_string() ? ProvenanceFromName(it->get<std::string>())
                             : std::nullopt;
    if (!p) throw Error(ErrorCode::kValidation, who + ": bad provenance");
    s.provenance = *p;
  }
  if (auto it = j.find("status"); it != j.end()) {
    auto st = it->is_string() ? ReviewStatusFromName(it->get<std::string>())
                              : std::nullopt;
    if (!st) throw Error(ErrorCode::kValidation, who + ": bad status");
    s.status = *st;
  }
  if (auto it = j.find("revision"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      throw Error(ErrorCode::kValidation,
                  who + ": revision must be a non-negative integer");
    }
    s.revision = it->get<std::uint64_t>();
  }
  return s;
}

std::vector<Sample> ParseDataset(std::string_view content) {
  std::vector<Sample> samples;
  std::unordered_set<std::string> ids;
  const auto lines = SplitLines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = lines[n];
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(n + 1);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    Sample s;
    try {
      s = SampleFromJson(j);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    auto report = ValidateSample(s);
    if (!report.ok()) {
      std::string msg = where + ": sample " + s.id + ": ";
      for (std::size_t i = 0; i < report.violations.size(); ++i) {
        if (i) msg += "; ";
        msg += report.violations[i];
      }
      throw Error(ErrorCode::kValidation, msg);
    }
    if (!ids.insert(s.id).second) {
      throw Error(ErrorCode::kValidation,
                  where + ": sample " + s.id + ": duplicate id");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<Sample> LoadDataset(const std::filesystem::path& path) {
  try {
    return ParseDataset(ReadFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string SerializeDataset(const std::vector<Sample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += SampleToJson(s).dump();
    out += '\n';
  }
  return out;
}

void SaveDataset(const std::filesystem::path& path,
                 const std::vector<Sample>& samples) {
  WriteFileAtomic(path, SerializeDataset(samples));
}

std::optional<CharRange> FindSpan(std::string_view context,
                                  std::string_view needle,
                                  const std::vector<CharRange>& consumed) {
  if (needle.empty()) return std::nullopt;
  const CodePointIndex index(context);
  std::size_t pos = context.find(needle);
  while (pos != std::string_view::npos) {
    auto start = index.CodePointAt(pos);
    auto end = index.CodePointAt(pos + needle.size());
    if (start && end) {
      CharRange candidate{*start, *end};
      bool free = true;
      for (const auto& r : consumed) {
        if (candidate.Intersects(r)) {
          free = false;
          break;
        }
      }
      if (free) return candidate;
    }
    pos = context.find(needle, pos + 1);
  }
  return std::nullopt;
}

CharRange LocateSpan(std::string_view context, std::string_view needle,
                     const std::vector<CharRange>& consumed) {
  if (needle.empty()) throw Error(ErrorCode::kInvalidInput, "empty needle");
  auto found = FindSpan(context, needle, consumed);
  if (!found) {
    throw Error(ErrorCode::kNotFound,
                "\"" + std::string(needle) + "\" not found in context");
  }
  return *found;
}

DatasetStats ComputeStats(const std::vector<Sample>& samples) {
  DatasetStats stats;
  for (const auto& s : samples) {
    for (const auto& span : s.spans) {
      auto& t = stats.per_type[static_cast<std::size_t>(span.type)];
      ++t.total;
      if (span.relevance == Relevance::kHigh) ++t.high;
    }
  }
  for (auto& t : stats.per_type) {
    if (t.total == 0) continue;
    const double high = static_cast<double>(t.high) / static_cast<double>(t.total);
    const double low =
        static_cast<double>(t.total - t.high) / static_cast<double>(t.total);
    t.high_proportion = high;
    t.low_proportion = low;
  }
  return stats;
}

std::string FormatStatsTable(const DatasetStats& stats) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-20s %11s %9s %9s\n", "PII Type",
                "Total Count", "High Prop", "Low Prop");
  out << line;
  for (auto type : kAllPiiTypes) {
    const auto& t = stats.of(type);
    const std::string name(PiiTypeName(type));
    if (t.total == 0) {
      std::snprintf(line, sizeof line, "%-20s %11zu %9s %9s\n", name.c_str(),
                    t.total, "--", "--");
    } else {
      std::snprintf(line, sizeof line, "%-20s %11zu %9.2f %9.2f\n",
                    name.c_str(), t.total, *t.high_proportion,
                    *t.low_proportion);
    }
    out << line;
  }
  return out.str();
}

json StatsToJson(const DatasetStats& stats) {
  json rows = json::object();
  for (auto type : kAllPiiTypes) {
    const auto& t = stats.of(type);
    json row = {{"total_count", t.total}, {"high_count", t.high}};
    row["high_proportion"] = t.high_proportion ? json(*t.high_proportion) : json();
    row["low_proportion"] = t.low_proportion ? json(*t.low_proportion) : json();
    rows[std::string(PiiTypeName(type))] = std::move(row);
  }
  return json{{"per_type", std::move(rows)}};
}

}  // namespace relpii
