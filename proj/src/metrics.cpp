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

#include "metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "error.hpp"
#include "text.hpp"

namespace relpii {
namespace {

// Multi-byte punctuation commonly glued to words: curly quotes, dashes,
// ellipsis.
constexpr std::string_view kWidePunct[] = {
    "\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x9C", "\xE2\x80\x9D",
    "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\xA6"};

std::string_view StripEdgePunctuation(std::string_view tok) {
  bool changed = true;
  while (changed && !tok.empty()) {
    changed = false;
    if (std::ispunct(static_cast<unsigned char>(tok.front()))) {
      tok.remove_prefix(1);
      changed = true;
      continue;
    }
    if (std::ispunct(static_cast<unsigned char>(tok.back()))) {
      tok.remove_suffix(1);
      changed = true;
      continue;
    }
    for (auto p : kWidePunct) {
      if (tok.size() >= p.size() && tok.substr(0, p.size()) == p) {
        tok.remove_prefix(p.size());
        changed = true;
        break;
      }
      if (tok.size() >= p.size() && tok.substr(tok.size() - p.size()) == p) {
        tok.remove_suffix(p.size());
        changed = true;
        break;
      }
    }
  }
  return tok;
}

std::optional<double> Ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void MatchConfig::Validate() const {
  if (!(match_threshold > 0.0 && match_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "match threshold must be in (0, 1]");
  }
}

std::vector<std::string> NormalizedTokens(std::string_view text,
                                          const MatchConfig& config) {
  std::vector<std::string> out;
  for (auto tok : SplitWhitespace(text)) {
    if (config.strip_punctuation_edges) tok = StripEdgePunctuation(tok);
    if (tok.empty()) continue;
    out.push_back(config.casefold ? AsciiLower(tok) : std::string(tok));
  }
  return out;
}

double HybridSpanScore(const PiiSpan& gold, const PiiSpan& pred,
                       const MatchConfig& config) {
  if (SplitWhitespace(gold.text).size() <= 1) {
    const std::size_t lo = std::max(gold.start, pred.start);
    const std::size_t hi = std::min(gold.end, pred.end);
    const std::size_t overlap = hi > lo ? hi - lo : 0;
    const std::size_t total = gold.length() + pred.length();
    if (overlap == 0 || total == 0) return 0.0;
    // Harmonic mean of overlap/|pred| and overlap/|gold|.
    return 2.0 * static_cast<double>(overlap) / static_cast<double>(total);
  }
  auto g = NormalizedTokens(gold.text, config);
  auto p = NormalizedTokens(pred.text, config);
  if (g.empty() && p.empty()) {
    return AsciiLower(Trim(gold.text)) == AsciiLower(Trim(pred.text)) ? 1.0 : 0.0;
  }
  std::unordered_map<std::string, long> counts;
  for (const auto& t : g) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(g.size() + p.size());
}

Matching MatchScores(const std::vector<std::vector<double>>& scores,
                     const std::vector<std::size_t>& gold_starts,
                     const std::vector<std::size_t>& pred_starts,
                     double threshold) {
  const std::size_t ng = gold_starts.size();
  const std::size_t np = pred_starts.size();
  std::vector<SpanMatch> candidates;
  candidates.reserve(ng * np);
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t p = 0; p < np; ++p) {
      if (scores[g][p] >= threshold) candidates.push_back({g, p, scores[g][p]});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const SpanMatch& a, const SpanMatch& b) {
              if (a.score != b.score) return a.score > b.score;
              if (gold_starts[a.gold] != gold_starts[b.gold]) {
                return gold_starts[a.gold] < gold_starts[b.gold];
              }
              if (pred_starts[a.pred] != pred_starts[b.pred]) {
                return pred_starts[a.pred] < pred_starts[b.pred];
              }
              if (a.gold != b.gold) return a.gold < b.gold;
              return a.pred < b.pred;
            });
  Matching m;
  std::vector<bool> gold_used(ng, false), pred_used(np, false);
  for (const auto& c : candidates) {
    if (gold_used[c.gold] || pred_used[c.pred]) continue;
    gold_used[c.gold] = pred_used[c.pred] = true;
    m.matches.push_back(c);
  }
  for (std::size_t g = 0; g < ng; ++g) {
    if (!gold_used[g]) m.unmatched_gold.push_back(g);
  }
  for (std::size_t p = 0; p < np; ++p) {
    if (!pred_used[p]) m.unmatched_pred.push_back(p);
  }
  return m;
}

Matching MatchSpans(const std::vector<PiiSpan>& gold,
                    const std::vector<PiiSpan>& pred, const MatchConfig& config) {
  std::vector<std::vector<double>> scores(gold.size(),
                                          std::vector<double>(pred.size()));
  std::vector<std::size_t> gs, ps;
  for (const auto& g : gold) gs.push_back(g.start);
  for (const auto& p : pred) ps.push_back(p.start);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t j = 0; j < pred.size(); ++j) {
      scores[i][j] = HybridSpanScore(gold[i], pred[j], config);
    }
  }
  return MatchScores(scores, gs, ps, config.match_threshold);
}

MetricsReport ComputeMetrics(const std::vector<Sample>& gold,
                             const SamplePredictions& predictions,
                             const MatchConfig& config) {
  config.Validate();
  std::map<std::string_view, const Sample*> by_id;
  for (const auto& s : gold) by_id[s.id] = &s;
  for (const auto& [id, spans] : predictions) {
    if (!by_id.count(id)) {
      throw Error(ErrorCode::kUnknownSampleId,
                  "prediction for unknown sample id " + id);
    }
  }

  MetricsReport r;
  Accuracy type_acc, rel_acc, rel_low, rel_high;
  double coverage_sum = 0.0;
  static const std::vector<PiiSpan> kNone;
  // Deterministic fold in sample-id order.
  for (const auto& [id, sample] : by_id) {
    auto it = predictions.find(std::string(id));
    const auto& pred = it == predictions.end() ? kNone : it->second;
    const auto& g = sample->spans;
    ++r.samples;
    r.gold_spans += g.size();
    r.predicted_spans += pred.size();

    for (const auto& gs : g) {
      double best = 0.0;
      for (const auto& ps : pred) best = std::max(best, HybridSpanScore(gs, ps, config));
      coverage_sum += best;
    }

    const Matching m = MatchSpans(g, pred, config);
    r.tp += m.matches.size();
    r.fn += m.unmatched_gold.size();
    r.fp += m.unmatched_pred.size();
    for (const auto& match : m.matches) {
      const auto& gs = g[match.gold];
      const auto& ps = pred[match.pred];
      const bool type_ok = gs.type == ps.type;
      const bool rel_ok = gs.relevance == ps.relevance;
      ++type_acc.total;
      type_acc.correct += type_ok;
      ++rel_acc.total;
      rel_acc.correct += rel_ok;
      auto& split = gs.relevance == Relevance::kHigh ? rel_high : rel_low;
      ++split.total;
      split.correct += rel_ok;
      auto& per = r.per_type[gs.type];
      ++per.total;
      per.correct += type_ok;
    }
  }
  r.matched = r.tp;

  const bool nothing = r.gold_spans == 0 && r.predicted_spans == 0;
  r.span_precision = nothing ? 1.0 : Ratio(r.tp, r.tp + r.fp).value_or(0.0);
  r.span_recall = nothing ? 1.0 : Ratio(r.tp, r.tp + r.fn).value_or(0.0);
  const double pr = r.span_precision + r.span_recall;
  r.span_f1 = pr == 0.0 ? 0.0 : 2.0 * r.span_precision * r.span_recall / pr;
  if (r.gold_spans == 0) {
    r.coverage = r.predicted_spans == 0 ? 1.0 : 0.0;
  } else {
    r.coverage = coverage_sum / static_cast<double>(r.gold_spans);
  }
  r.type_accuracy = nothing ? 1.0 : type_acc.value().value_or(0.0);
  r.relevance_accuracy = nothing ? 1.0 : rel_acc.value().value_or(0.0);
  r.relevance_accuracy_low = rel_low.value();
  r.relevance_accuracy_high = rel_high.value();
  return r;
}

std::string FormatMetricsTable(const MetricsReport& r, std::string_view label) {
  std::ostringstream out;
  char buf[256];
  auto opt = [](const std::optional<double>& v) {
    char b[16];
    if (!v) return std::string("--");
    std::snprintf(b, sizeof b, "%.4f", *v);
    return std::string(b);
  };
  std::snprintf(buf, sizeof buf, "%-20s | %-31s | %-6s | %-26s\n", "", "Span",
                "Type", "Relevance");
  out << buf;
  std::snprintf(buf, sizeof buf,
                "%-20s | %-6s  %-6s  %-6s  %-6s  | %-6s | %-6s  %-8s  %-9s\n",
                "Model", "P", "R", "F1", "Cov.", "Acc.", "Acc.", "Low Acc.",
                "High Acc.");
  out << buf;
  std::snprintf(buf, sizeof buf,
                "%-20.20s | %.4f  %.4f  %.4f  %.4f  | %.4f | %.4f  %-8s  %-9s\n",
                std::string(label).c_str(), r.span_precision, r.span_recall,
                r.span_f1, r.coverage, r.type_accuracy, r.relevance_accuracy,
                opt(r.relevance_accuracy_low).c_str(),
                opt(r.relevance_accuracy_high).c_str());
  out << buf;
  std::snprintf(buf, sizeof buf,
                "\ncounts: tp=%zu fp=%zu fn=%zu matched=%zu gold=%zu pred=%zu "
                "samples=%zu\n",
                r.tp, r.fp, r.fn, r.matched, r.gold_spans, r.predicted_spans,
                r.samples);
  out << buf;
  out << "\nType accuracy by PII type\n";
  std::snprintf(buf, sizeof buf, "%-20s %9s %8s\n", "Type", "Accuracy", "Matched");
  out << buf;
  for (auto type : kAllPiiTypes) {
    auto it = r.per_type.find(type);
    const std::string name(PiiTypeName(type));
    if (it == r.per_type.end()) {
      std::snprintf(buf, sizeof buf, "%-20s %9s %8d\n", name.c_str(), "-", 0);
    } else {
      std::snprintf(buf, sizeof buf, "%-20s %9.4f %8zu\n", name.c_str(),
                    *it->second.value(), it->second.total);
    }
    out << buf;
  }
  return out.str();
}

nlohmann::json MetricsToJson(const MetricsReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json();
  };
  nlohmann::json per_type = nlohmann::json::object();
  for (const auto& [type, acc] : r.per_type) {
    per_type[std::string(PiiTypeName(type))] = {
        {"type_accuracy", opt(acc.value())},
        {"correct", acc.correct},
        {"matched", acc.total}};
  }
  return {
      {"span_precision", r.span_precision},
      {"span_recall", r.span_recall},
      {"span_f1", r.span_f1},
      {"coverage", r.coverage},
      {"type_accuracy", r.type_accuracy},
      {"relevance_accuracy", r.relevance_accuracy},
      {"relevance_accuracy_low", opt(r.relevance_accuracy_low)},
      {"relevance_accuracy_high", opt(r.relevance_accuracy_high)},
      {"per_type", per_type},
      {"counts",
       {{"tp", r.tp},
        {"fp", r.fp},
        {"fn", r.fn},
        {"matched", r.matched},
        {"gold_spans", r.gold_spans},
        {"predicted_spans", r.predicted_spans},
        {"samples", r.samples}}},
  };
}

}  // namespace relpii
