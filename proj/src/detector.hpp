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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gateway.hpp"
#include "prompt.hpp"
#include "types.hpp"

namespace relpii {

enum class InstructionVariant { kPretrained, kFinetuned };

struct DetectionEntry {
  std::string text;
  PiiType type = PiiType::kOccupation;
  Relevance relevance = Relevance::kLow;
  bool operator==(const DetectionEntry&) const = default;
};

struct DetectionResult {
  std::vector<DetectionEntry> entries;  // model output order
  std::string raw_output;
  std::size_t dropped_unknown_type = 0;
  std::size_t dropped_malformed = 0;
  std::size_t dropped_absent = 0;  // text not present in the context
};

// Byte range [first, second) of the first balanced {...} in `raw` that parses
// as a JSON object. Braces inside JSON strings are skipped while scanning.
std::optional<std::pair<std::size_t, std::size_t>> FindBalancedObject(
    std::string_view raw);

// Maps {"<span text>": {"type": ..., "relevance": ...}, ...} to entries.
// Relevance accepts 0/1 as numbers or strings; types go through the alias
// table and unknown ones are dropped and counted. Throws ParseError (raw text
// retained) when there is no balanced object.
DetectionResult ParseDetectionOutput(std::string_view raw);

// Inverse of ParseDetectionOutput for well-formed entry lists.
std::string SerializeDetectionEntries(const std::vector<DetectionEntry>& entries);

std::string RenderDetectionPrompt(const PromptCatalog& prompts,
                                  std::string_view context,
                                  std::string_view question,
                                  InstructionVariant variant);

// Prompt, complete, parse; entries whose text is absent from `context` are
// dropped. Throws Error(kProvider...) or ParseError.
DetectionResult DetectLlm(Gateway& gateway, const PromptCatalog& prompts,
                          std::string_view context, std::string_view question,
                          const LlmParams& params, InstructionVariant variant);

// Pattern baseline: code, datetime, age and capitalized-name patterns. Every
// entry has relevance 0; the question is never consulted.
DetectionResult DetectRules(std::string_view context);

struct Localization {
  std::vector<PiiSpan> spans;  // entry order
  std::size_t unlocalizable = 0;
};

// Leftmost-unconsumed exact placement with one consumed set per context.
Localization LocalizePredictions(std::string_view context,
                                 const std::vector<DetectionEntry>& entries);

// Predictions file: one {sample_id, entries: [{text, type, relevance}],
// raw_output} per line.
struct PredictionRecord {
  std::string sample_id;
  std::vector<DetectionEntry> entries;
  std::string raw_output;
  std::optional<std::string> error;  // set when detection failed
};

std::vector<PredictionRecord> LoadPredictions(const std::filesystem::path& path);
std::vector<PredictionRecord> ParsePredictions(std::string_view content);
void SavePredictions(const std::filesystem::path& path,
                     const std::vector<PredictionRecord>& records);
std::string SerializePredictions(const std::vector<PredictionRecord>& records);

struct DetectionRunOptions {
  bool use_rules = false;
  InstructionVariant variant = InstructionVariant::kFinetuned;
  LlmParams params;
  std::size_t parallelism = 4;
};

struct DetectionRunStats {
  std::size_t samples = 0;
  std::size_t entries = 0;
  std::size_t parse_errors = 0;
  std::size_t provider_errors = 0;
  std::size_t dropped_unknown_type = 0;
  std::size_t dropped_malformed = 0;
  std::size_t dropped_absent = 0;
};

// One record per sample, in sample order. Parse and provider failures are
// recorded on the sample's record; Error(kAuth) aborts the run. `gateway`
// may be null with use_rules.
std::vector<PredictionRecord> DetectDataset(Gateway* gateway,
                                            const PromptCatalog& prompts,
                                            const std::vector<Sample>& samples,
                                            const DetectionRunOptions& options,
                                            DetectionRunStats* stats = nullptr);

// Localizes every record against its gold sample. Records with an error
// contribute no spans. Throws Error(kUnknownSampleId).
SamplePredictions PredictionsToSpans(const std::vector<Sample>& gold,
                                     const std::vector<PredictionRecord>& records,
                                     std::size_t* unlocalizable = nullptr);

}  // namespace relpii
