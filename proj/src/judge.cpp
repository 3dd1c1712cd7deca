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


#include "judge.hpp"

#include <algorithm>
#include <cstdio>

#include "error.hpp"
#include "parallel.hpp"
#include "text.hpp"

namespace relpii {

namespace pn = prompt_names;

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kA: return "A";
    case Verdict::kB: return "B";
    case Verdict::kEqual: return "Equal";
  }
  return "?";
}

std::string_view PairOutcomeName(PairOutcome o) {
  switch (o) {
    case PairOutcome::kWin: return "win";
    case PairOutcome::kLoss: return "loss";
    case PairOutcome::kEqual: return "equal";
  }
  return "?";
}

Verdict ParseVerdict(std::string_view raw) {
  const std::string lower = AsciiLower(raw);
  const std::pair<std::string_view, Verdict> markers[] = {
      {"<b>a</b>", Verdict::kA},
      {"<b>b</b>", Verdict::kB},
      {"<b>equal</b>", Verdict::kEqual}};
  std::optional<Verdict> found;
  std::size_t best = 0;
  for (const auto& [marker, v] : markers) {
    const auto pos = lower.rfind(marker);
    if (pos != std::string::npos && (!found || pos > best)) {
      found = v;
      best = pos;
    }
  }
  if (!found) {
    throw VerdictParseError("judge output has no verdict marker",
                            std::string(raw));
  }
  return *found;
}

std::string AnswerQuestion(Gateway& gateway, const PromptCatalog& prompts,
                           std::string_view context, std::string_view question,
                           const LlmParams& params) {
  if (Trim(question).empty()) {
    throw Error(ErrorCode::kInvalidInput, "question is empty");
  }
  const auto prompt = prompts.Get(pn::kAnswer).Render(
      {{"context", std::string(context)}, {"question", std::string(question)}});
  return std::string(Trim(gateway.Complete(prompt, params)));
}

JudgeVerdict JudgePair(Gateway& gateway, const PromptCatalog& prompts,
                       std::string_view context, std::string_view question,
                       std::string_view answer_a, std::string_view answer_b,
                       const LlmParams& params, bool order_swapped) {
  const auto prompt = prompts.Get(pn::kJudge).Render(
      {{"context", std::string(context)},
       {"question", std::string(question)},
       {"answer_A", std::string(answer_a)},
       {"answer_B", std::string(answer_b)}});
  JudgeVerdict v;
  v.reasoning = gateway.Complete(prompt, params);
  v.outcome = ParseVerdict(v.reasoning);
  v.order_swapped = order_swapped;
  return v;
}

PairOutcome AggregateVerdicts(Verdict first, std::optional<Verdict> second) {
  auto lean = [](Verdict v, bool candidate_is_a) {
    if (v == Verdict::kEqual) return 0;
    return (v == Verdict::kA) == candidate_is_a ? 1 : -1;
  };
  const int a = lean(first, true);
  if (!second) {
    return a > 0 ? PairOutcome::kWin : a < 0 ? PairOutcome::kLoss : PairOutcome::kEqual;
  }
  const int b = lean(*second, false);
  if (a > 0 && b > 0) return PairOutcome::kWin;
  if (a < 0 && b < 0) return PairOutcome::kLoss;
  return PairOutcome::kEqual;
}

UtilityReport RunUtilityEval(Gateway& gateway, const PromptCatalog& prompts,
                             const std::vector<Sample>& samples,
                             const SamplePredictions* span_override,
                             const UtilityConfig& config) {
  config.params.Validate();
  if (span_override) {
    for (const auto& s : samples) {
      if (!span_override->count(s.id)) {
        throw Error(ErrorCode::kInvalidInput, "no spans for sample " + s.id);
      }
    }
  }

  std::vector<SampleUtility> results(samples.size());
  ParallelFor(samples.size(), config.parallelism, [&](std::size_t i) {
    const auto& s = samples[i];
    auto& r = results[i];
    r.sample_id = s.id;
    const auto& spans = span_override ? span_override->at(s.id) : s.spans;
    try {
      const auto candidate_ctx = Redact(s.context, spans, config.candidate);
      const auto baseline_ctx = Redact(s.context, spans, config.baseline);
      r.candidate_answer =
          AnswerQuestion(gateway, prompts, candidate_ctx, s.question, config.params);
      r.baseline_answer =
          AnswerQuestion(gateway, prompts, baseline_ctx, s.question, config.params);
      r.verdicts.push_back(JudgePair(gateway, prompts, s.context, s.question,
                                     r.candidate_answer, r.baseline_answer,
                                     config.params, false));
      std::optional<Verdict> second;
      if (!config.single_pass) {
        r.verdicts.push_back(JudgePair(gateway, prompts, s.context, s.question,
                                       r.baseline_answer, r.candidate_answer,
                                       config.params, true));
        second = r.verdicts.back().outcome;
      }
      r.outcome = AggregateVerdicts(r.verdicts.front().outcome, second);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAuth) throw;
      r.error = e.what();
    }
  });

  std::sort(results.begin(), results.end(),
            [](const SampleUtility& a, const SampleUtility& b) {
              return a.sample_id < b.sample_id;
            });
  UtilityReport report;
  for (const auto& r : results) {
    if (!r.outcome) {
      ++report.errors;
      continue;
    }
    ++report.n_pairs;
    switch (*r.outcome) {
      case PairOutcome::kWin: ++report.wins; break;
      case PairOutcome::kLoss: ++report.losses; break;
      case PairOutcome::kEqual: ++report.equals; break;
    }
  }
  if (report.n_pairs > 0) {
    report.preference_score =
        (static_cast<double>(report.wins) + 0.5 * static_cast<double>(report.equals)) /
        static_cast<double>(report.n_pairs);
  }
  if (report.wins + report.losses > 0) {
    report.strict_score = static_cast<double>(report.wins) /
                          static_cast<double>(report.wins + report.losses);
  }
  report.samples = std::move(results);
  return report;
}

nlohmann::json UtilityToJson(const UtilityReport& r, const UtilityConfig& config) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json();
  };
  nlohmann::json log = nlohmann::json::array();
  for (const auto& s : r.samples) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : s.verdicts) {
      verdicts.push_back({{"outcome", std::string(VerdictName(v.outcome))},
                          {"order_swapped", v.order_swapped},
                          {"reasoning", v.reasoning}});
    }
    nlohmann::json entry = {
        {"sample_id", s.sample_id},
        {"outcome", s.outcome ? nlohmann::json(std::string(PairOutcomeName(*s.outcome)))
                              : nlohmann::json()},
        {"verdicts", verdicts},
        {"candidate_answer", s.candidate_answer},
        {"baseline_answer", s.baseline_answer}};
    if (s.error) entry["error"] = *s.error;
    log.push_back(std::move(entry));
  }
  return {{"candidate", std::string(MaskStrategyName(config.candidate))},
          {"baseline", std::string(MaskStrategyName(config.baseline))},
          {"single_pass", config.single_pass},
          {"n_pairs", r.n_pairs},
          {"wins", r.wins},
          {"losses", r.losses},
          {"equals", r.equals},
          {"errors", r.errors},
          {"preference_score", opt(r.preference_score)},
          {"strict_score", opt(r.strict_score)},
          {"samples", log}};
}

std::string FormatUtilityTable(const UtilityReport& r) {
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string("--");
    char b[16];
    std::snprintf(b, sizeof b, "%.4f", *v);
    return std::string(b);
  };
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%-8s %6s %6s %6s %6s %11s %8s\n%-8zu %6zu %6zu %6zu %6zu %11s %8s\n",
                "Pairs", "Wins", "Losses", "Equal", "Errors", "Preference",
                "Strict", r.n_pairs, r.wins, r.losses, r.equals, r.errors,
                opt(r.preference_score).c_str(), opt(r.strict_score).c_str());
  return buf;
}

}  // namespace relpii
