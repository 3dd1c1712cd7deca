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

// Synthetic dataset generation.
//
//   1. Type pairs (taxonomy minus name/code) -> topics -> subtopics, giving
//      deduplicated (pair, topic, subtopic) triplets.
//   2. Per triplet: key PII values for the pair (high relevance) and 2-4
//      peripheral values (low relevance); a situation sentence carrying the
//      key values and a peripheral sentence carrying the rest; a question
//      written from the situation, then stripped of key-PII cues.
//   3. The two sentences are joined in random order, paraphrased, and every
//      value is re-localized in the paraphrase (exact match first, model
//      span retrieval as fallback).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gateway.hpp"
#include "parallel.hpp"
#include "prompt.hpp"
#include "types.hpp"

namespace relpii {

// Unordered pair, stored in taxonomy order (first < second).
struct TypePair {
  PiiType first;
  PiiType second;
  bool operator==(const TypePair&) const = default;
};

struct TopicTriplet {
  TypePair pair;
  std::string topic;
  std::string subtopic;
};

struct PiiValue {
  PiiType type;
  std::string value;
};

struct DraftSample {
  TopicTriplet triplet;
  std::vector<PiiValue> key_piis;         // relevance 1
  std::vector<PiiValue> peripheral_piis;  // relevance 0
  std::string situation;
  std::string peripheral;
  std::string question;
  std::vector<std::string> warnings;
};

// All 78 pairs over the taxonomy minus {name, code}, lexicographic in
// taxonomy order.
std::vector<TypePair> EnumerateTypePairs();

struct TopicTreeResult {
  std::vector<TopicTriplet> triplets;  // deduplicated
  std::size_t raw_count = 0;           // before dedup
  std::size_t duplicates_removed = 0;
  std::size_t shortfall = 0;           // items missing from short lists
};

struct PipelineConfig {
  LlmParams params;
  std::size_t topics_per_pair = 10;
  std::size_t subtopics_per_topic = 20;
  std::size_t min_peripheral = 2;
  std::size_t max_peripheral = 4;
  std::uint64_t seed = 0;
  std::size_t parallelism = 4;
  std::string id_prefix = "syn";
};

struct GenerationFailure {
  std::size_t triplet_index;
  ErrorCode code;
  std::string message;
};

struct GenerationResult {
  std::vector<Sample> samples;  // triplet order
  std::vector<GenerationFailure> failures;
  std::vector<std::string> warnings;
  std::size_t retrieval_calls = 0;
};

// Deterministic per-sample random stream (splitmix64).
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index);
  std::uint64_t Next();
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Short description of a category, used in value-generation prompts.
std::string_view PiiTypeDescription(PiiType type);

// One item per non-empty line; list markers ("1.", "-", "*") and wrapping
// quotes removed.
std::vector<std::string> ParseListResponse(std::string_view text);

std::size_t WordCount(std::string_view text);

class SynthPipeline {
 public:
  SynthPipeline(Gateway& gateway, const PromptCatalog& prompts,
                PipelineConfig config);

  TopicTreeResult GenerateTopicTree(const std::vector<TypePair>& pairs);

  // `context_prefix` is partial context or the topic phrase. Re-prompts once
  // when the value is empty or longer than three words, then throws
  // Error(kFormat).
  std::string GeneratePiiValue(PiiType category, std::string_view context_prefix);

  // "It should be the <type> of the person that faces issues with ...".
  std::string TopicPrefix(PiiType category, const TopicTriplet& triplet) const;

  // Fills situation and peripheral. One regeneration per part when a value
  // is missing, then Error(kPiiDropped). Word-count bounds are warnings.
  DraftSample ComposeContext(DraftSample draft);

  // General question, personalized, then stripped of key-PII cues.
  // Throws Error(kEmptyQuestion).
  std::string GenerateQuestion(const DraftSample& draft);

  // Throws Error(kReconcile) when a value cannot be found even after span
  // retrieval, or when the resulting spans overlap.
  Sample ParaphraseAndReconcile(const DraftSample& draft, bool situation_first,
                                std::string id);

  // Runs stages 2 and 3 for one triplet. Soft-check warnings are appended
  // to `warnings` when given.
  Sample GenerateSample(const TopicTriplet& triplet, std::size_t index,
                        std::vector<std::string>* warnings = nullptr);

  // Bounded-parallel generation; output order is triplet order.
  GenerationResult Generate(const std::vector<TopicTriplet>& triplets);

  std::size_t retrieval_calls() const { return retrieval_calls_.load(); }

 private:
  std::string Ask(std::string_view template_name, const PromptVars& vars);

  Gateway& gateway_;
  const PromptCatalog& prompts_;
  PipelineConfig config_;
  std::atomic<std::size_t> retrieval_calls_{0};
};

}  // namespace relpii
