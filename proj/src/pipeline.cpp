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

#include "pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <set>

#include "dataset.hpp"
#include "text.hpp"
#include "utf8.hpp"

namespace relpii {
namespace {

namespace pn = prompt_names;

bool Excluded(PiiType t) { return t == PiiType::kName || t == PiiType::kCode; }

std::string TypeName(PiiType t) { return std::string(PiiTypeName(t)); }

// Drops "1.", "2)", "-", "*", "•" prefixes.
std::string_view StripListMarker(std::string_view line) {
  line = Trim(line);
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
    return Trim(line.substr(i + 1));
  }
  if (!line.empty() && (line[0] == '-' || line[0] == '*')) {
    return Trim(line.substr(1));
  }
  if (StartsWith(line, "\xE2\x80\xA2")) return Trim(line.substr(3));
  return line;
}

std::string CleanValue(std::string_view raw) {
  std::string_view v = StripWrappingQuotes(Trim(raw));
  // A model that answers with a full sentence usually ends it with a period.
  while (!v.empty() && v.back() == '.') v.remove_suffix(1);
  return std::string(Trim(v));
}

std::string PiiLabel(const PiiValue& v) {
  return TypeName(v.type) + " (" + v.value + ")";
}

}  // namespace

std::vector<TypePair> EnumerateTypePairs() {
  std::vector<TypePair> pairs;
  for (std::size_t i = 0; i < kAllPiiTypes.size(); ++i) {
    if (Excluded(kAllPiiTypes[i])) continue;
    for (std::size_t j = i + 1; j < kAllPiiTypes.size(); ++j) {
      if (Excluded(kAllPiiTypes[j])) continue;
      pairs.push_back({kAllPiiTypes[i], kAllPiiTypes[j]});
    }
  }
  return pairs;
}

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index)
    : state_(seed ^ (index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t SampleRng::Next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SampleRng::Below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = Next();
  } while (x >= limit);
  return x % bound;
}

std::string_view PiiTypeDescription(PiiType type) {
  switch (type) {
    case PiiType::kOccupation:
      return "Occupation is the person's job, profession, or role at work.";
    case PiiType::kHealth:
      return "Health is a physical or mental health condition, diagnosis, or "
             "treatment.";
    case PiiType::kDemographic:
      return "Demographic is nationality, ethnicity, race, or another "
             "population group the person belongs to.";
    case PiiType::kFinance:
      return "Finance is income, salary, debt, savings, rent, or another "
             "monetary detail.";
    case PiiType::kAge:
      return "Age is how old the person is.";
    case PiiType::kEducation:
      return "Education is a degree, diploma, school level, or field of "
             "study.";
    case PiiType::kLocation:
      return "Location is a city, region, country, or address where the "
             "person lives or stays.";
    case PiiType::kOrganization:
      return "Organization is a company, school, clinic, or other institution "
             "the person is connected to.";
    case PiiType::kRelationship:
      return "Relationship is a family member, partner, or other personal "
             "relationship.";
    case PiiType::kSexualOrientation:
      return "Sexual orientation is the person's sexual orientation.";
    case PiiType::kBelief:
      return "Belief is a religious, political, or philosophical conviction.";
    case PiiType::kName:
      return "Name is the person's own name or the name of someone close.";
    case PiiType::kCode:
      return "Code is a structured identifier such as an account number, ID, "
             "or license plate.";
    case PiiType::kDatetime:
      return "Datetime is a specific date, time, or period in the person's "
             "life.";
    case PiiType::kAppearance:
      return "Appearance is a physical characteristic such as height, hair, "
             "or a tattoo.";
  }
  return "";
}

std::vector<std::string> ParseListResponse(std::string_view text) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto item = StripWrappingQuotes(StripListMarker(text.substr(pos, nl - pos)));
    if (!item.empty()) items.emplace_back(item);
    pos = nl + 1;
  }
  return items;
}

std::size_t WordCount(std::string_view text) {
  return SplitWhitespace(text).size();
}

SynthPipeline::SynthPipeline(Gateway& gateway, const PromptCatalog& prompts,
                             PipelineConfig config)
    : gateway_(gateway), prompts_(prompts), config_(std::move(config)) {
  config_.params.Validate();
  if (config_.min_peripheral == 0 ||
      config_.min_peripheral > config_.max_peripheral) {
    throw Error(ErrorCode::kInvalidInput,
                "peripheral PII count range must satisfy 1 <= min <= max");
  }
}

std::string SynthPipeline::Ask(std::string_view template_name,
                               const PromptVars& vars) {
  return gateway_.Complete(prompts_.Get(template_name).Render(vars),
                           config_.params);
}

TopicTreeResult SynthPipeline::GenerateTopicTree(
    const std::vector<TypePair>& pairs) {
  struct PairOutput {
    std::vector<TopicTriplet> raw;
    std::size_t shortfall = 0;
  };
  std::vector<PairOutput> outputs(pairs.size());
  const std::string n_topics = std::to_string(config_.topics_per_pair);
  const std::string n_subtopics = std::to_string(config_.subtopics_per_topic);

  ParallelFor(pairs.size(), config_.parallelism, [&](std::size_t p) {
    const auto& pair = pairs[p];
    auto& out = outputs[p];
    const PromptVars base = {{"PII_type_1", TypeName(pair.first)},
                             {"PII_type_2", TypeName(pair.second)}};
    PromptVars topic_vars = base;
    topic_vars["n_topics"] = n_topics;
    auto topics = ParseListResponse(Ask(pn::kTopics, topic_vars));
    if (topics.size() > config_.topics_per_pair) {
      topics.resize(config_.topics_per_pair);
    }
    out.shortfall += (config_.topics_per_pair - topics.size()) *
                     config_.subtopics_per_topic;
    for (const auto& topic : topics) {
      PromptVars sub_vars = base;
      sub_vars["topic"] = topic;
      sub_vars["n_subtopics"] = n_subtopics;
      auto subtopics = ParseListResponse(Ask(pn::kSubtopics, sub_vars));
      if (subtopics.size() > config_.subtopics_per_topic) {
        subtopics.resize(config_.subtopics_per_topic);
      }
      out.shortfall += config_.subtopics_per_topic - subtopics.size();
      for (auto& sub : subtopics) {
        out.raw.push_back({pair, topic, std::move(sub)});
      }
    }
  });

  TopicTreeResult result;
  std::set<std::tuple<int, int, std::string>> seen;
  for (auto& out : outputs) {
    result.shortfall += out.shortfall;
    for (auto& t : out.raw) {
      ++result.raw_count;
      auto key = std::make_tuple(static_cast<int>(t.pair.first),
                                 static_cast<int>(t.pair.second),
                                 AsciiLower(Trim(t.subtopic)));
      if (seen.insert(std::move(key)).second) {
        result.triplets.push_back(std::move(t));
      } else {
        ++result.duplicates_removed;
      }
    }
  }
  return result;
}

std::string SynthPipeline::TopicPrefix(PiiType category,
                                       const TopicTriplet& triplet) const {
  return prompts_.Get(pn::kPiiPrefix)
      .Render({{"pii_category", TypeName(category)},
               {"topic", triplet.topic},
               {"subtopic", triplet.subtopic}});
}

std::string SynthPipeline::GeneratePiiValue(PiiType category,
                                            std::string_view context_prefix) {
  const PromptVars vars = {
      {"pii_category", TypeName(category)},
      {"pii_category_description", std::string(PiiTypeDescription(category))},
      {"context", std::string(context_prefix)}};
  std::string last;
  for (int attempt = 0; attempt < 2; ++attempt) {
    last = CleanValue(Ask(pn::kPiiValue, vars));
    const auto words = WordCount(last);
    if (words >= 1 && words <= 3) return last;
  }
  throw Error(ErrorCode::kFormat, "generated " + TypeName(category) +
                                      " value is not 1-3 words: \"" + last +
                                      "\"");
}

DraftSample SynthPipeline::ComposeContext(DraftSample draft) {
  if (draft.key_piis.size() != 2) {
    throw Error(ErrorCode::kInvalidInput, "a draft carries exactly two key PIIs");
  }
  const auto& t = draft.triplet;
  auto missing = [](const std::string& text, const std::vector<PiiValue>& vals)
      -> const PiiValue* {
    for (const auto& v : vals) {
      if (text.find(v.value) == std::string::npos) return &v;
    }
    return nullptr;
  };

  const PromptVars situation_vars = {
      {"topic", t.topic},
      {"subtopic", t.subtopic},
      {"pii_category", TypeName(draft.key_piis[0].type)},
      {"pii_category_value", draft.key_piis[0].value},
      {"supporting_pii_category", TypeName(draft.key_piis[1].type)},
      {"support_pii_category_val", draft.key_piis[1].value}};
  const PiiValue* dropped = nullptr;
  for (int attempt = 0; attempt < 2; ++attempt) {
    draft.situation = std::string(Trim(Ask(pn::kSituation, situation_vars)));
    dropped = missing(draft.situation, draft.key_piis);
    if (!dropped) break;
  }
  if (dropped) {
    throw Error(ErrorCode::kPiiDropped,
                "situation omits key PII \"" + dropped->value + "\"");
  }

  std::vector<std::string> lines;
  for (const auto& v : draft.peripheral_piis) {
    lines.push_back(TypeName(v.type) + ": " + v.value);
  }
  const PromptVars peripheral_vars = {{"topic", t.topic},
                                      {"subtopic", t.subtopic},
                                      {"low_relevance_piis", Join(lines, "\n")}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    draft.peripheral = std::string(Trim(Ask(pn::kPeripheral, peripheral_vars)));
    dropped = missing(draft.peripheral, draft.peripheral_piis);
    if (!dropped) break;
  }
  if (dropped) {
    throw Error(ErrorCode::kPiiDropped,
                "peripheral context omits PII \"" + dropped->value + "\"");
  }

  const auto sw = WordCount(draft.situation);
  if (sw < 20 || sw > 35) {
    draft.warnings.push_back("situation has " + std::to_string(sw) +
                             " words (expected 20-35)");
  }
  const auto pw = WordCount(draft.peripheral);
  if (pw < 20 || pw > 25) {
    draft.warnings.push_back("peripheral context has " + std::to_string(pw) +
                             " words (expected 20-25)");
  }
  return draft;
}

std::string SynthPipeline::GenerateQuestion(const DraftSample& draft) {
  auto checked = [](std::string s, const char* step) {
    auto q = std::string(StripWrappingQuotes(Trim(s)));
    if (q.empty()) {
      throw Error(ErrorCode::kEmptyQuestion,
                  std::string("empty question from ") + step + " step");
    }
    return q;
  };
  const auto general = checked(
      Ask(pn::kQuestionGeneral,
          {{"pii_category", TypeName(draft.key_piis.at(0).type)},
           {"supporting_pii_category", TypeName(draft.key_piis.at(1).type)},
           {"situation", draft.situation}}),
      "general");
  const auto personal = checked(
      Ask(pn::kQuestionPersonal, {{"intermediate_result", general}}),
      "personalize");
  return checked(
      Ask(pn::kQuestionRefine,
          {{"relevant_pii_type_and_value_1", PiiLabel(draft.key_piis[0])},
           {"relevant_pii_type_and_value_2", PiiLabel(draft.key_piis[1])},
           {"question", personal}}),
      "refine");
}

Sample SynthPipeline::ParaphraseAndReconcile(const DraftSample& draft,
                                             bool situation_first,
                                             std::string id) {
  const std::string joined = situation_first
                                 ? draft.situation + " " + draft.peripheral
                                 : draft.peripheral + " " + draft.situation;
  struct Pending {
    PiiValue pii;
    Relevance relevance;
  };
  std::vector<Pending> pending;
  std::vector<std::string> values;
  for (const auto& v : draft.key_piis) {
    pending.push_back({v, Relevance::kHigh});
    values.push_back(v.value);
  }
  for (const auto& v : draft.peripheral_piis) {
    pending.push_back({v, Relevance::kLow});
    values.push_back(v.value);
  }

  const std::string context = std::string(Trim(
      Ask(pn::kParaphrase, {{"context", joined}, {"piis", Join(values, ", ")}})));
  if (context.empty()) {
    throw Error(ErrorCode::kReconcile, "paraphrase returned empty text");
  }

  // Longest first, so a short value cannot claim a range inside a longer one.
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) {
                     return CodePointLength(a.pii.value) >
                            CodePointLength(b.pii.value);
                   });

  Sample sample;
  sample.id = std::move(id);
  sample.context = context;
  sample.question = draft.question;
  sample.provenance = Provenance::kSynthetic;
  sample.status = ReviewStatus::kRaw;
  std::vector<CharRange> consumed;
  const CodePointIndex index(context);
  for (const auto& p : pending) {
    std::string text = p.pii.value;
    auto found = FindSpan(context, text, consumed);
    if (!found) {
      retrieval_calls_.fetch_add(1);
      text = CleanValue(
          Ask(pn::kSpanRetrieval, {{"pii", p.pii.value}, {"context", context}}));
      if (!text.empty()) found = FindSpan(context, text, consumed);
      if (!found) {
        throw Error(ErrorCode::kReconcile,
                    "no span for \"" + p.pii.value + "\" (retrieved \"" + text +
                        "\")");
      }
    }
    consumed.push_back(*found);
    sample.spans.push_back(PiiSpan{std::string(index.Slice(context, found->start,
                                                           found->end)),
                                   found->start, found->end, p.pii.type,
                                   p.relevance});
  }
  std::sort(sample.spans.begin(), sample.spans.end(),
            [](const PiiSpan& a, const PiiSpan& b) { return a.start < b.start; });
  auto report = ValidateSample(sample);
  if (!report.ok()) {
    throw Error(ErrorCode::kReconcile,
                "reconciled sample invalid: " + Join(report.violations, "; "));
  }
  return sample;
}

Sample SynthPipeline::GenerateSample(const TopicTriplet& triplet,
                                     std::size_t index,
                                     std::vector<std::string>* warnings) {
  SampleRng rng(config_.seed, index);
  DraftSample draft;
  draft.triplet = triplet;

  std::vector<std::string> details;
  for (PiiType type : {triplet.pair.first, triplet.pair.second}) {
    auto value = GeneratePiiValue(type, TopicPrefix(type, triplet));
    details.push_back(TypeName(type) + ": " + value);
    draft.key_piis.push_back({type, std::move(value)});
  }

  std::vector<PiiType> pool;
  for (auto t : kAllPiiTypes) {
    if (t != triplet.pair.first && t != triplet.pair.second) pool.push_back(t);
  }
  const std::size_t span =
      config_.max_peripheral - config_.min_peripheral + 1;
  std::size_t count = config_.min_peripheral + rng.Below(span);
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t pick = i + rng.Below(pool.size() - i);
    std::swap(pool[i], pool[pick]);
    const PiiType type = pool[i];
    // Conditioned on the details generated so far.
    auto value = GeneratePiiValue(type, Join(details, "; "));
    details.push_back(TypeName(type) + ": " + value);
    draft.peripheral_piis.push_back({type, std::move(value)});
  }

  draft = ComposeContext(std::move(draft));
  draft.question = GenerateQuestion(draft);
  const bool situation_first = rng.Below(2) == 0;

  std::string id = config_.id_prefix + "-";
  const auto digits = std::to_string(index);
  if (digits.size() < 5) id.append(5 - digits.size(), '0');
  id += digits;

  if (warnings) {
    for (const auto& w : draft.warnings) warnings->push_back(id + ": " + w);
  }
  return ParaphraseAndReconcile(draft, situation_first, std::move(id));
}

GenerationResult SynthPipeline::Generate(
    const std::vector<TopicTriplet>& triplets) {
  std::vector<std::optional<Sample>> slots(triplets.size());
  std::vector<std::vector<std::string>> warnings(triplets.size());
  std::vector<std::optional<GenerationFailure>> failures(triplets.size());

  ParallelFor(triplets.size(), config_.parallelism, [&](std::size_t i) {
    try {
      slots[i] = GenerateSample(triplets[i], i, &warnings[i]);
    } catch (const Error& e) {
      failures[i] = GenerationFailure{i, e.code(), e.what()};
    }
  });

  GenerationResult result;
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    if (slots[i]) result.samples.push_back(std::move(*slots[i]));
    if (failures[i]) result.failures.push_back(std::move(*failures[i]));
    for (auto& w : warnings[i]) result.warnings.push_back(std::move(w));
  }
  result.retrieval_calls = retrieval_calls();
  return result;
}

}  // namespace relpii
