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

#include "detector.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "dataset.hpp"
#include "error.hpp"
#include "io.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "text.hpp"
#include "utf8.hpp"

namespace relpii {

using ordered_json = nlohmann::ordered_json;

namespace {

// End of the balanced object starting at `open`, or npos.
std::size_t ScanObject(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<Relevance> ParseRelevance(const ordered_json& v) {
  if (v.is_number_integer()) {
    auto n = v.get<long long>();
    if (n == 0) return Relevance::kLow;
    if (n == 1) return Relevance::kHigh;
    return std::nullopt;
  }
  if (v.is_number_float()) {
    auto d = v.get<double>();
    if (d == 0.0) return Relevance::kLow;
    if (d == 1.0) return Relevance::kHigh;
    return std::nullopt;
  }
  if (v.is_string()) {
    const auto s = AsciiLower(Trim(v.get<std::string>()));
    if (s == "0" || s == "low") return Relevance::kLow;
    if (s == "1" || s == "high") return Relevance::kHigh;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> FindBalancedObject(
    std::string_view raw) {
  std::size_t open = raw.find('{');
  while (open != std::string_view::npos) {
    const std::size_t close = ScanObject(raw, open);
    if (close != std::string_view::npos) {
      auto parsed = ordered_json::parse(raw.substr(open, close - open), nullptr,
                                        /*allow_exceptions=*/false);
      if (!parsed.is_discarded() && parsed.is_object()) {
        return std::make_pair(open, close);
      }
    }
    open = raw.find('{', open + 1);
  }
  return std::nullopt;
}

DetectionResult ParseDetectionOutput(std::string_view raw) {
  DetectionResult result;
  result.raw_output = std::string(raw);
  auto range = FindBalancedObject(raw);
  if (!range) {
    throw ParseError("no JSON object in detector output", result.raw_output);
  }
  const auto obj =
      ordered_json::parse(raw.substr(range->first, range->second - range->first));
  for (const auto& [key, value] : obj.items()) {
    if (Trim(key).empty() || !value.is_object() || !value.contains("type") ||
        !value.contains("relevance") || !value["type"].is_string()) {
      ++result.dropped_malformed;
      continue;
    }
    auto type = PiiTypeFromLabel(value["type"].get<std::string>());
    if (!type) {
      ++result.dropped_unknown_type;
      continue;
    }
    auto relevance = ParseRelevance(value["relevance"]);
    if (!relevance) {
      ++result.dropped_malformed;
      continue;
    }
    result.entries.push_back({key, *type, *relevance});
  }
  return result;
}

std::string SerializeDetectionEntries(
    const std::vector<DetectionEntry>& entries) {
  ordered_json obj = ordered_json::object();
  for (const auto& e : entries) {
    obj[e.text] = ordered_json{{"type", std::string(PiiTypeName(e.type))},
                               {"relevance", std::to_string(static_cast<int>(e.relevance))}};
  }
  return obj.dump();
}

std::string RenderDetectionPrompt(const PromptCatalog& prompts,
                                  std::string_view context,
                                  std::string_view question,
                                  InstructionVariant variant) {
  const auto& instruction =
      prompts.Get(variant == InstructionVariant::kPretrained
                      ? prompt_names::kDetectPretrained
                      : prompt_names::kDetectFinetuned);
  return prompts.Get(prompt_names::kDetectShared)
      .Render({{"instruction", instruction.Render({})},
               {"text", std::string(context)},
               {"question", std::string(question)}});
}

DetectionResult DetectLlm(Gateway& gateway, const PromptCatalog& prompts,
                          std::string_view context, std::string_view question,
                          const LlmParams& params, InstructionVariant variant) {
  const auto raw = gateway.Complete(
      RenderDetectionPrompt(prompts, context, question, variant), params);
  DetectionResult result = ParseDetectionOutput(raw);
  auto absent = [&](const DetectionEntry& e) {
    return context.find(e.text) == std::string_view::npos;
  };
  const auto before = result.entries.size();
  result.entries.erase(
      std::remove_if(result.entries.begin(), result.entries.end(), absent),
      result.entries.end());
  result.dropped_absent = before - result.entries.size();
  return result;
}

// --- rule baseline ----------------------------------------------------------

namespace {

struct Rule {
  PiiType type;
  std::regex pattern;
  int group;  // capture group holding the PII text
};

const std::vector<Rule>& Rules() {
  static const std::vector<Rule> rules = [] {
    constexpr auto flags = std::regex::ECMAScript | std::regex::optimize;
    constexpr auto icase = flags | std::regex::icase;
    const std::string month =
        "(?:January|February|March|April|June|July|August|September|October|"
        "November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Sept|Oct|Nov|Dec)";
    std::vector<Rule> r;
    // Structured identifiers: emails, SSN/phone shapes, letter-digit codes.
    r.push_back({PiiType::kCode,
                 std::regex(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+)", flags), 0});
    r.push_back({PiiType::kCode, std::regex(R"(\b\d{3}-\d{2}-\d{4}\b)", flags), 0});
    r.push_back({PiiType::kCode,
                 std::regex(R"((?:\+\d{1,2}\s?)?\(?\b\d{3}\)?[-. ]\d{3}[-. ]\d{4}\b)", flags), 0});
    r.push_back({PiiType::kCode,
                 std::regex(R"(\b[A-Z]{1,4}[-_]?\d{3,}(?:[-_][A-Z0-9]+)*\b)", flags), 0});
    r.push_back({PiiType::kCode,
                 std::regex(R"(\b(?=[A-Z0-9]*[A-Z])(?=[A-Z0-9]*\d)[A-Z0-9]{2,4}[- ][A-Z0-9]{3,4}\b)", flags), 0});
    // Dates and times.
    r.push_back({PiiType::kDatetime,
                 std::regex(R"(\b\d{4}-\d{2}-\d{2}\b|\b\d{1,2}/\d{1,2}/\d{2,4}\b)", flags), 0});
    r.push_back({PiiType::kDatetime,
                 std::regex("\\b" + month +
                                R"(\.?\s+\d{1,2}(?:st|nd|rd|th)?(?:,?\s+\d{4})?\b)", flags), 0});
    r.push_back({PiiType::kDatetime,
                 std::regex("\\b(?:" + month + "|May)" + R"(\s+\d{4}\b)", flags), 0});
    r.push_back({PiiType::kDatetime,
                 std::regex(R"(\b\d{1,2}(?:st|nd|rd|th)?\s+(?:of\s+)?)" + month +
                                R"((?:\s+\d{4})?\b)", flags), 0});
    r.push_back({PiiType::kDatetime,
                 std::regex(R"(\b\d{1,2}:\d{2}(?:\s?[ap]\.?m\.?)?|\b\d{1,2}\s?[ap]\.?m\b\.?)", icase), 0});
    // Ages.
    r.push_back({PiiType::kAge,
                 std::regex(R"(\b\d{1,3}[- ]years?[- ]old\b)", icase), 0});
    r.push_back({PiiType::kAge,
                 std::regex(R"(\baged?\s+(\d{1,3})\b)", icase), 1});
    r.push_back({PiiType::kAge,
                 std::regex(R"re(\b(?:I'm|I am|I’m)\s+(\d{1,3})\b(?!\s*(?:%|percent|dollars|\$|k\b|years? (?:ago|of))))re", flags), 1});
    // Names: two adjacent capitalized words.
    r.push_back({PiiType::kName,
                 std::regex(R"(\b[A-Z][a-z]+(?:\s[A-Z]\.)?\s[A-Z][a-z]+\b)", flags), 0});
    return r;
  }();
  return rules;
}

// Capitalized words that begin sentences or name calendar items rather than
// people.
bool IsNameStopword(std::string_view w) {
  static const std::set<std::string_view> stop = {
      "I",        "The",      "My",      "A",       "An",       "In",
      "On",       "At",       "And",     "But",     "So",       "It",
      "This",     "That",     "We",      "He",      "She",      "They",
      "You",      "Our",      "His",     "Her",     "Their",    "When",
      "What",     "How",      "Why",     "Where",   "Who",      "Which",
      "If",       "As",       "After",   "Before",  "During",   "Since",
      "Monday",   "Tuesday",  "Wednesday", "Thursday", "Friday", "Saturday",
      "Sunday",   "January",  "February", "March",  "April",    "May",
      "June",     "July",     "August",  "September", "October", "November",
      "December", "Honestly", "Also",    "Being",   "Living",   "Working",
      "Dr",       "Mr",       "Mrs",     "Ms",      "University", "College",
      "School",   "Hospital", "Street",  "Avenue",  "Lately",   "Today",
      "Yesterday", "Tomorrow", "Outside", "Besides", "Recently",
  };
  return stop.count(w) > 0;
}

bool PlausibleName(std::string_view text) {
  for (auto w : SplitWhitespace(text)) {
    if (w.size() == 2 && w[1] == '.') continue;  // middle initial
    if (IsNameStopword(w)) return false;
  }
  return true;
}

}  // namespace

DetectionResult DetectRules(std::string_view context) {
  struct Hit {
    std::size_t begin;  // bytes
    std::size_t end;
    PiiType type;
    std::size_t rank;
  };
  const std::string text(context);
  std::vector<Hit> hits;
  const auto& rules = Rules();
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const auto& rule = rules[r];
    for (auto it = std::sregex_iterator(text.begin(), text.end(), rule.pattern);
         it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      if (!m[rule.group].matched || m.length(rule.group) == 0) continue;
      const auto begin = static_cast<std::size_t>(m.position(rule.group));
      const auto end = begin + static_cast<std::size_t>(m.length(rule.group));
      if (rule.type == PiiType::kName &&
          !PlausibleName(std::string_view(text).substr(begin, end - begin))) {
        continue;
      }
      hits.push_back({begin, end, rule.type, r});
    }
  }
  // Earlier rules win overlaps; then longer, then leftmost.
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.end - a.begin != b.end - b.begin) return a.end - a.begin > b.end - b.begin;
    return a.begin < b.begin;
  });
  std::vector<Hit> kept;
  for (const auto& h : hits) {
    bool clash = false;
    for (const auto& k : kept) {
      if (h.begin < k.end && k.begin < h.end) {
        clash = true;
        break;
      }
    }
    if (!clash) kept.push_back(h);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Hit& a, const Hit& b) { return a.begin < b.begin; });

  DetectionResult result;
  std::set<std::string> seen;
  for (const auto& h : kept) {
    std::string span = text.substr(h.begin, h.end - h.begin);
    // Output is keyed by surface string, like model output.
    if (!seen.insert(span).second) continue;
    result.entries.push_back({std::move(span), h.type, Relevance::kLow});
  }
  result.raw_output = SerializeDetectionEntries(result.entries);
  return result;
}

Localization LocalizePredictions(std::string_view context,
                                 const std::vector<DetectionEntry>& entries) {
  Localization out;
  std::vector<CharRange> consumed;
  for (const auto& e : entries) {
    auto found = FindSpan(context, e.text, consumed);
    if (!found) {
      ++out.unlocalizable;
      continue;
    }
    consumed.push_back(*found);
    out.spans.push_back({e.text, found->start, found->end, e.type, e.relevance});
  }
  return out;
}

// --- predictions file -------------------------------------------------------

std::vector<PredictionRecord> ParsePredictions(std::string_view content) {
  std::vector<PredictionRecord> records;
  const auto lines = SplitLines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (Trim(lines[n]).empty()) continue;
    const std::string where = "line " + std::to_string(n + 1);
    try {
      auto j = nlohmann::json::parse(lines[n]);
      PredictionRecord rec;
      rec.sample_id = j.at("sample_id").get<std::string>();
      if (j.contains("raw_output") && j["raw_output"].is_string()) {
        rec.raw_output = j["raw_output"].get<std::string>();
      }
      if (j.contains("error") && j["error"].is_string()) {
        rec.error = j["error"].get<std::string>();
      }
      for (const auto& e : j.at("entries")) {
        auto type = PiiTypeFromLabel(e.at("type").get<std::string>());
        if (!type) continue;  // unknown labels are not predictions we can score
        auto rel = e.at("relevance");
        Relevance relevance;
        if (rel.is_number_integer() && (rel.get<int>() == 0 || rel.get<int>() == 1)) {
          relevance = rel.get<int>() == 1 ? Relevance::kHigh : Relevance::kLow;
        } else if (rel.is_string() &&
                   (rel.get<std::string>() == "0" || rel.get<std::string>() == "1")) {
          relevance = rel.get<std::string>() == "1" ? Relevance::kHigh : Relevance::kLow;
        } else {
          throw Error(ErrorCode::kValidation,
                      where + ": relevance not in {0, 1} for sample " + rec.sample_id);
        }
        rec.entries.push_back({e.at("text").get<std::string>(), *type, relevance});
      }
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return records;
}

std::vector<PredictionRecord> LoadPredictions(const std::filesystem::path& path) {
  try {
    return ParsePredictions(ReadFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string SerializePredictions(const std::vector<PredictionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["sample_id"] = r.sample_id;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : r.entries) {
      entries.push_back({{"text", e.text},
                         {"type", std::string(PiiTypeName(e.type))},
                         {"relevance", static_cast<int>(e.relevance)}});
    }
    j["entries"] = std::move(entries);
    j["raw_output"] = r.raw_output;
    if (r.error) j["error"] = *r.error;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void SavePredictions(const std::filesystem::path& path,
                     const std::vector<PredictionRecord>& records) {
  WriteFileAtomic(path, SerializePredictions(records));
}

std::vector<PredictionRecord> DetectDataset(Gateway* gateway,
                                            const PromptCatalog& prompts,
                                            const std::vector<Sample>& samples,
                                            const DetectionRunOptions& options,
                                            DetectionRunStats* stats) {
  if (!options.use_rules && !gateway) {
    throw Error(ErrorCode::kInvalidInput, "LLM detection needs a provider");
  }
  std::vector<PredictionRecord> records(samples.size());
  std::vector<DetectionResult> results(samples.size());
  std::vector<ErrorCode> failures(samples.size(), ErrorCode::kOk);
  ParallelFor(samples.size(), options.parallelism, [&](std::size_t i) {
    const auto& s = samples[i];
    auto& rec = records[i];
    rec.sample_id = s.id;
    try {
      results[i] = options.use_rules
                       ? DetectRules(s.context)
                       : DetectLlm(*gateway, prompts, s.context, s.question,
                                   options.params, options.variant);
      rec.entries = results[i].entries;
      rec.raw_output = results[i].raw_output;
    } catch (const ParseError& e) {
      failures[i] = ErrorCode::kParse;
      rec.raw_output = e.raw();
      rec.error = e.what();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAuth) throw;
      failures[i] = e.code();
      rec.error = e.what();
    }
  });
  if (stats) {
    *stats = DetectionRunStats{};
    stats->samples = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      stats->entries += records[i].entries.size();
      if (failures[i] == ErrorCode::kParse) ++stats->parse_errors;
      else if (failures[i] != ErrorCode::kOk) ++stats->provider_errors;
      stats->dropped_unknown_type += results[i].dropped_unknown_type;
      stats->dropped_malformed += results[i].dropped_malformed;
      stats->dropped_absent += results[i].dropped_absent;
    }
  }
  return records;
}

SamplePredictions PredictionsToSpans(const std::vector<Sample>& gold,
                                     const std::vector<PredictionRecord>& records,
                                     std::size_t* unlocalizable) {
  std::map<std::string_view, const Sample*> by_id;
  for (const auto& s : gold) by_id[s.id] = &s;
  SamplePredictions out;
  std::size_t missed = 0;
  for (const auto& rec : records) {
    auto it = by_id.find(rec.sample_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kUnknownSampleId,
                  "prediction for unknown sample id " + rec.sample_id);
    }
    auto& spans = out[rec.sample_id];
    if (rec.error) continue;
    auto loc = LocalizePredictions(it->second->context, rec.entries);
    missed += loc.unlocalizable;
    for (auto& sp : loc.spans) spans.push_back(std::move(sp));
  }
  if (unlocalizable) *unlocalizable = missed;
  return out;
}

}  // namespace relpii
