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

// Span, type and relevance scoring of detector output against gold spans.
//
// Span similarity is a hybrid score: when the gold span is a single
// whitespace token, character-overlap F1 of the two offset ranges; otherwise
// token-multiset F1 of the normalized token lists. Predictions are paired
// with gold spans greedily by descending score, and a pair counts as a match
// when its score reaches MatchConfig::match_threshold. Type and relevance
// accuracy are computed over matched pairs only.
//
// Coverage is the mean, over gold spans, of the best score any prediction in
// the same sample achieves (no threshold): a soft recall.

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "types.hpp"

namespace relpii {

struct MatchConfig {
  double match_threshold = 0.5;
  bool casefold = true;
  bool strip_punctuation_edges = true;

  // Throws Error(kInvalidInput) unless 0 < threshold <= 1.
  void Validate() const;
};

std::vector<std::string> NormalizedTokens(std::string_view text,
                                          const MatchConfig& config);

// In [0, 1]. Both spans must index the same context.
double HybridSpanScore(const PiiSpan& gold, const PiiSpan& pred,
                       const MatchConfig& config);

struct SpanMatch {
  std::size_t gold;
  std::size_t pred;
  double score;
};

struct Matching {
  std::vector<SpanMatch> matches;
  std::vector<std::size_t> unmatched_gold;
  std::vector<std::size_t> unmatched_pred;
};

// Greedy one-to-one selection over a gold x pred score matrix: descending
// score, ties by smaller gold start then smaller pred start; pairs below
// `threshold` are never taken.
Matching MatchScores(const std::vector<std::vector<double>>& scores,
                     const std::vector<std::size_t>& gold_starts,
                     const std::vector<std::size_t>& pred_starts,
                     double threshold);

Matching MatchSpans(const std::vector<PiiSpan>& gold,
                    const std::vector<PiiSpan>& pred, const MatchConfig& config);

struct Accuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::optional<double> value() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct MetricsReport {
  double span_precision = 0;
  double span_recall = 0;
  double span_f1 = 0;
  double coverage = 0;
  double type_accuracy = 0;
  double relevance_accuracy = 0;
  std::optional<double> relevance_accuracy_low;   // gold relevance 0
  std::optional<double> relevance_accuracy_high;  // gold relevance 1
  // Type accuracy conditioned on gold type; only types with matches.
  std::map<PiiType, Accuracy> per_type;

  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t matched = 0;
  std::size_t gold_spans = 0;
  std::size_t predicted_spans = 0;
  std::size_t samples = 0;
};

// Gold samples with no predictions entry count as having no predictions.
// Throws Error(kUnknownSampleId) for prediction ids not in gold.
MetricsReport ComputeMetrics(const std::vector<Sample>& gold,
                             const SamplePredictions& predictions,
                             const MatchConfig& config);

// Columns: Span P / R / F1 / Cov. | Type Acc. | Relevance Acc. / Low / High,
// followed by the per-type breakdown.
std::string FormatMetricsTable(const MetricsReport& report,
                               std::string_view label);

nlohmann::json MetricsToJson(const MetricsReport& report);

}  // namespace relpii
