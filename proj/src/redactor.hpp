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


// Placeholder masking of annotated spans. Selected spans are replaced by
// "[TYPE]" markers; overlapping selections collapse into one replacement
// typed after the longest member.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "types.hpp"

namespace relpii {

enum class MaskStrategy { kFull, kLowRelevanceOnly };

std::string_view MaskStrategyName(MaskStrategy s);
// "full", "low_relevance_only" or "low-relevance".
std::optional<MaskStrategy> MaskStrategyFromName(std::string_view name);

struct Replacement {
  std::size_t start = 0;  // code points, [start, end)
  std::size_t end = 0;
  PiiType type = PiiType::kOccupation;
  std::string placeholder;
  bool operator==(const Replacement&) const = default;
};

struct RedactionPlan {
  std::vector<Replacement> replacements;  // sorted, disjoint
  std::size_t merged = 0;                 // spans absorbed by overlap merging
};

RedactionPlan PlanRedaction(const std::vector<PiiSpan>& spans,
                            MaskStrategy strategy);

// Throws Error(kRangeOutOfBounds) when a range is empty, unsorted,
// overlapping or past the end of `context`.
std::string ApplyRedaction(std::string_view context, const RedactionPlan& plan);

std::string Redact(std::string_view context, const std::vector<PiiSpan>& spans,
                   MaskStrategy strategy);

nlohmann::json PlanToJson(std::string_view sample_id, MaskStrategy strategy,
                          const RedactionPlan& plan);

}  // namespace relpii
