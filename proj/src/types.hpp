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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relpii {

// The fifteen PII categories. Enumerator order is the canonical taxonomy
// order used for pair canonicalization and report rows.
enum class PiiType : std::uint8_t {
  kOccupation,
  kHealth,
  kDemographic,
  kFinance,
  kAge,
  kEducation,
  kLocation,
  kOrganization,
  kRelationship,
  kSexualOrientation,
  kBelief,
  kName,
  kCode,
  kDatetime,
  kAppearance,
};

inline constexpr std::size_t kPiiTypeCount = 15;

inline constexpr std::array<PiiType, kPiiTypeCount> kAllPiiTypes = {
    PiiType::kOccupation,   PiiType::kHealth,       PiiType::kDemographic,
    PiiType::kFinance,      PiiType::kAge,          PiiType::kEducation,
    PiiType::kLocation,     PiiType::kOrganization, PiiType::kRelationship,
    PiiType::kSexualOrientation, PiiType::kBelief,  PiiType::kName,
    PiiType::kCode,         PiiType::kDatetime,     PiiType::kAppearance,
};

// Lower-case label as used in records and prompts ("sexual orientation").
std::string_view PiiTypeName(PiiType type);

// Exact taxonomy label only.
std::optional<PiiType> PiiTypeFromName(std::string_view name);

// Taxonomy label or an entry of the alias table (family, nationality,
// medical condition). Case-insensitive, surrounding whitespace ignored.
std::optional<PiiType> PiiTypeFromLabel(std::string_view label);

// "[SEXUAL_ORIENTATION]" etc.
std::string PlaceholderFor(PiiType type);

enum class Relevance : std::uint8_t { kLow = 0, kHigh = 1 };

enum class Provenance : std::uint8_t { kSynthetic, kReddit, kOther };
enum class ReviewStatus : std::uint8_t { kRaw, kValidated };

std::string_view ProvenanceName(Provenance p);
std::optional<Provenance> ProvenanceFromName(std::string_view name);
std::string_view ReviewStatusName(ReviewStatus s);
std::optional<ReviewStatus> ReviewStatusFromName(std::string_view name);

// Offsets count Unicode scalar values; [start, end).
struct PiiSpan {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  PiiType type = PiiType::kOccupation;
  Relevance relevance = Relevance::kLow;

  std::size_t length() const { return end > start ? end - start : 0; }
  bool operator==(const PiiSpan&) const = default;
};

struct Sample {
  std::string id;
  std::string context;
  std::string question;
  std::vector<PiiSpan> spans;
  Provenance provenance = Provenance::kSynthetic;
  ReviewStatus status = ReviewStatus::kRaw;
  std::uint64_t revision = 0;

  bool operator==(const Sample&) const = default;
};

// Half-open range of code point offsets.
struct CharRange {
  std::size_t start = 0;
  std::size_t end = 0;

  bool Intersects(const CharRange& other) const {
    return start < other.end && other.start < end;
  }
  bool operator==(const CharRange&) const = default;
};

// Localized spans per sample id.
using SamplePredictions = std::map<std::string, std::vector<PiiSpan>>;

}  // namespace relpii
