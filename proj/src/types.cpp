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

#include "types.hpp"

#include <algorithm>
#include <cctype>

#include "error.hpp"

namespace relpii {
namespace {

constexpr std::array<std::string_view, kPiiTypeCount> kTypeNames = {
    "occupation", "health",       "demographic",  "finance",
    "age",        "education",    "location",     "organization",
    "relationship", "sexual orientation", "belief", "name",
    "code",       "datetime",     "appearance",
};

struct Alias {
  std::string_view label;
  PiiType type;
};

constexpr std::array<Alias, 3> kAliases = {{
    {"family", PiiType::kRelationship},
    {"nationality", PiiType::kDemographic},
    {"medical condition", PiiType::kHealth},
}};

std::string Normalize(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  // "sexual_orientation" shows up in model output now and then.
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

}  // namespace

std::string_view PiiTypeName(PiiType type) {
  return kTypeNames[static_cast<std::size_t>(type)];
}

std::optional<PiiType> PiiTypeFromName(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return kAllPiiTypes[i];
  }
  return std::nullopt;
}

std::optional<PiiType> PiiTypeFromLabel(std::string_view label) {
  const std::string norm = Normalize(label);
  if (auto t = PiiTypeFromName(norm)) return t;
  for (const auto& alias : kAliases) {
    if (alias.label == norm) return alias.type;
  }
  return std::nullopt;
}

std::string PlaceholderFor(PiiType type) {
  std::string out = "[";
  for (char c : PiiTypeName(type)) {
    out.push_back(c == ' ' ? '_'
                           : static_cast<char>(std::toupper(
                                 static_cast<unsigned char>(c))));
  }
  out.push_back(']');
  return out;
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kSynthetic:
      return "synthetic";
    case Provenance::kReddit:
      return "reddit";
    case Provenance::kOther:
      return "other";
  }
  return "other";
}

std::optional<Provenance> ProvenanceFromName(std::string_view name) {
  if (name == "synthetic") return Provenance::kSynthetic;
  if (name == "reddit") return Provenance::kReddit;
  if (name == "other") return Provenance::kOther;
  return std::nullopt;
}

std::string_view ReviewStatusName(ReviewStatus s) {
  return s == ReviewStatus::kValidated ? "validated" : "raw";
}

std::optional<ReviewStatus> ReviewStatusFromName(std::string_view name) {
  if (name == "raw") return ReviewStatus::kRaw;
  if (name == "validated") return ReviewStatus::kValidated;
  return std::nullopt;
}

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInternal: return "InternalError";
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kMissingVar: return "MissingVar";
    case ErrorCode::kUnknownVar: return "UnknownVar";
    case ErrorCode::kProvider: return "ProviderError";
    case ErrorCode::kAuth: return "AuthError";
    case ErrorCode::kTimeout: return "TimeoutError";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kPiiDropped: return "PiiDropped";
    case ErrorCode::kEmptyQuestion: return "EmptyQuestion";
    case ErrorCode::kReconcile: return "ReconcileFailure";
    case ErrorCode::kRangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::kVerdictParse: return "VerdictParseError";
    case ErrorCode::kRevisionConflict: return "RevisionConflict";
    case ErrorCode::kUnknownSampleId: return "UnknownSampleId";
    case ErrorCode::kInvalidInput: return "InvalidInput";
  }
  return "InternalError";
}

}  // namespace relpii
