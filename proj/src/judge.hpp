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


// Downstream utility of relevance-aware masking. For each sample the
// question is answered twice, once over each masked context, and a judge
// that sees the original context compares the two answers. By default each
// pair is judged in both A/B orders and the two verdicts are combined.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gateway.hpp"
#include "json.hpp"
#include "metrics.hpp"
#include "prompt.hpp"
#include "redactor.hpp"
#include "types.hpp"

namespace relpii {

enum class Verdict { kA, kB, kEqual };
std::string_view VerdictName(Verdict v);

struct JudgeVerdict {
  Verdict outcome = Verdict::kEqual;
  bool order_swapped = false;
  std::string reasoning;  // raw judge output
};

// Last "<b>A</b>" / "<b>B</b>" / "<b>Equal</b>" marker in the text.
// Throws VerdictParseError (raw text retained) when there is none.
Verdict ParseVerdict(std::string_view raw);

// Throws Error(kInvalidInput) on an empty question before calling out.
std::string AnswerQuestion(Gateway& gateway, const PromptCatalog& prompts,
                           std::string_view context, std::string_view question,
                           const LlmParams& params);

// `context` is the unmasked original.
JudgeVerdict JudgePair(Gateway& gateway, const PromptCatalog& prompts,
                       std::string_view context, std::string_view question,
                       std::string_view answer_a, std::string_view answer_b,
                       const LlmParams& params, bool order_swapped = false);

// Outcome from the point of view of the candidate setting.
enum class PairOutcome { kWin, kLoss, kEqual };
std::string_view PairOutcomeName(PairOutcome o);

// `first` has the candidate answer as A; `second` (swapped run) has it as B.
// Without a second verdict the first one decides alone.
PairOutcome AggregateVerdicts(Verdict first, std::optional<Verdict> second);

struct UtilityConfig {
  LlmParams params;
  MaskStrategy candidate = MaskStrategy::kLowRelevanceOnly;
  MaskStrategy baseline = MaskStrategy::kFull;
  bool single_pass = false;
  std::size_t parallelism = 4;
};

struct SampleUtility {
  std::string sample_id;
  std::optional<PairOutcome> outcome;  // absent on error
  std::vector<JudgeVerdict> verdicts;
  std::string candidate_answer;
  std::string baseline_answer;
  std::optional<std::string> error;
};

struct UtilityReport {
  std::size_t n_pairs = 0;  // successfully judged samples
  std::size_t wins = 0;     // candidate preferred
  std::size_t losses = 0;   // baseline preferred
  std::size_t equals = 0;
  std::size_t errors = 0;
  // (wins + 0.5 * equals) / n_pairs; absent when n_pairs == 0.
  std::optional<double> preference_score;
  // wins / (wins + losses); absent when both are zero.
  std::optional<double> strict_score;
  std::vector<SampleUtility> samples;  // sorted by sample id
};

// Spans come from the samples unless `span_override` is given, in which case
// every sample id must have an entry. Per-sample failures are tallied and do
// not stop the run; Error(kAuth) does.
UtilityReport RunUtilityEval(Gateway& gateway, const PromptCatalog& prompts,
                             const std::vector<Sample>& samples,
                             const SamplePredictions* span_override,
                             const UtilityConfig& config);

nlohmann::json UtilityToJson(const UtilityReport& report,
                             const UtilityConfig& config);
std::string FormatUtilityTable(const UtilityReport& report);

}  // namespace relpii
