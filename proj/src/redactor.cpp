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


#include "redactor.hpp"

#include <algorithm>

#include "error.hpp"
#include "utf8.hpp"

namespace relpii {

std::string_view MaskStrategyName(MaskStrategy s) {
  return s == MaskStrategy::kFull ? "full" : "low_relevance_only";
}

std::optional<MaskStrategy> MaskStrategyFromName(std::string_view name) {
  if (name == "full") return MaskStrategy::kFull;
  if (name == "low_relevance_only" || name == "low-relevance" ||
      name == "low_relevance") {
    return MaskStrategy::kLowRelevanceOnly;
  }
  return std::nullopt;
}

RedactionPlan PlanRedaction(const std::vector<PiiSpan>& spans,
                            MaskStrategy strategy) {
  std::vector<const PiiSpan*> picked;
  for (const auto& s : spans) {
    if (s.length() == 0) continue;
    if (strategy == MaskStrategy::kLowRelevanceOnly &&
        s.relevance != Relevance::kLow) {
      continue;
    }
    picked.push_back(&s);
  }
  std::stable_sort(picked.begin(), picked.end(),
                   [](const PiiSpan* a, const PiiSpan* b) {
                     if (a->start != b->start) return a->start < b->start;
                     return a->end < b->end;
                   });

  RedactionPlan plan;
  std::size_t i = 0;
  while (i < picked.size()) {
    std::size_t end = picked[i]->end;
    const PiiSpan* dominant = picked[i];
    std::size_t j = i + 1;
    // Group everything that overlaps the running union.
    for (; j < picked.size() && picked[j]->start < end; ++j) {
      end = std::max(end, picked[j]->end);
      if (picked[j]->length() > dominant->length()) dominant = picked[j];
    }
    plan.merged += j - i - 1;
    plan.replacements.push_back(Replacement{picked[i]->start, end, dominant->type,
                                            PlaceholderFor(dominant->type)});
    i = j;
  }
  return plan;
}

std::string ApplyRedaction(std::string_view context, const RedactionPlan& plan) {
  const CodePointIndex index(context);
  std::size_t prev_end = 0;
  for (const auto& r : plan.replacements) {
    if (r.start >= r.end || r.end > index.size() || r.start < prev_end) {
      throw Error(ErrorCode::kRangeOutOfBounds,
                  "replacement [" + std::to_string(r.start) + ", " +
                      std::to_string(r.end) + ") invalid for context of " +
                      std::to_string(index.size()) + " code points");
    }
    prev_end = r.end;
  }
  std::string out(context);
  for (auto it = plan.replacements.rbegin(); it != plan.replacements.rend(); ++it) {
    const auto b = index.ByteOf(it->start);
    out.replace(b, index.ByteOf(it->end) - b, it->placeholder);
  }
  return out;
}

std::string Redact(std::string_view context, const std::vector<PiiSpan>& spans,
                   MaskStrategy strategy) {
  return ApplyRedaction(context, PlanRedaction(spans, strategy));
}

nlohmann::json PlanToJson(std::string_view sample_id, MaskStrategy strategy,
                          const RedactionPlan& plan) {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& r : plan.replacements) {
    reps.push_back({{"start", r.start},
                    {"end", r.end},
                    {"type", std::string(PiiTypeName(r.type))},
                    {"placeholder", r.placeholder}});
  }
  return {{"sample_id", std::string(sample_id)},
          {"strategy", std::string(MaskStrategyName(strategy))},
          {"replacements", reps},
          {"merged", plan.merged}};
}

}  // namespace relpii
