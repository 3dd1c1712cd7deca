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


// Reference implementations used to cross-check the library. Written from
// the scoring definitions directly and kept free of library helpers.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "types.hpp"

namespace relpii_test {

inline std::vector<std::string> OracleWords(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string OracleNormalize(std::string w) {
  static const std::vector<std::string> wide = {
      "‘", "’", "“", "”", "–", "—", "…"};
  for (;;) {
    if (w.empty()) break;
    const auto f = static_cast<unsigned char>(w.front());
    const auto b = static_cast<unsigned char>(w.back());
    if (f < 128 && std::ispunct(f)) {
      w.erase(0, 1);
      continue;
    }
    if (b < 128 && std::ispunct(b)) {
      w.pop_back();
      continue;
    }
    bool cut = false;
    for (const auto& p : wide) {
      if (w.rfind(p, 0) == 0) {
        w.erase(0, p.size());
        cut = true;
        break;
      }
      if (w.size() >= p.size() && w.compare(w.size() - p.size(), p.size(), p) == 0) {
        w.erase(w.size() - p.size());
        cut = true;
        break;
      }
    }
    if (!cut) break;
  }
  for (auto& c : w) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return w;
}

// Character-overlap F1 for single-token gold, token-multiset F1 otherwise.
inline double OracleScore(const relpii::PiiSpan& g, const relpii::PiiSpan& p) {
  if (OracleWords(g.text).size() <= 1) {
    long overlap = 0;
    for (std::size_t i = g.start; i < g.end; ++i) {
      if (i >= p.start && i < p.end) ++overlap;
    }
    if (overlap == 0) return 0.0;
    return 2.0 * overlap / double((g.end - g.start) + (p.end - p.start));
  }
  std::map<std::string, int> gc, pc;
  int ng = 0, np = 0;
  for (const auto& w : OracleWords(g.text)) {
    auto n = OracleNormalize(w);
    if (!n.empty()) ++gc[n], ++ng;
  }
  for (const auto& w : OracleWords(p.text)) {
    auto n = OracleNormalize(w);
    if (!n.empty()) ++pc[n], ++np;
  }
  if (ng + np == 0) return -1.0;  // undefined, caller skips
  int common = 0;
  for (const auto& [k, v] : gc) {
    auto it = pc.find(k);
    if (it != pc.end()) common += std::min(v, it->second);
  }
  return 2.0 * common / double(ng + np);
}

// Maximum number of disjoint pairs with score >= threshold, by exhaustive
// search over pred assignments.
inline int OracleMaxMatching(const std::vector<std::vector<double>>& s,
                             double threshold) {
  const int ng = static_cast<int>(s.size());
  const int np = ng ? static_cast<int>(s[0].size()) : 0;
  int best = 0;
  std::vector<bool> used(np, false);
  auto rec = [&](auto&& self, int g, int count) -> void {
    if (g == ng) {
      best = std::max(best, count);
      return;
    }
    self(self, g + 1, count);
    for (int p = 0; p < np; ++p) {
      if (!used[p] && s[g][p] >= threshold) {
        used[p] = true;
        self(self, g + 1, count + 1);
        used[p] = false;
      }
    }
  };
  rec(rec, 0, 0);
  return best;
}

struct RandomInstance {
  std::string context;
  std::vector<relpii::PiiSpan> gold;
  std::vector<relpii::PiiSpan> pred;
};

// A context of words from a small vocabulary (so repeats are common), up to
// five non-overlapping gold spans, and up to five predictions that are gold
// copies, word-aligned ranges or arbitrary character ranges. With
// `exactish`, predictions are only gold copies or distractor words, so
// scores tend to be 0 or 1.
inline RandomInstance MakeRandomInstance(std::mt19937_64& rng, bool exactish) {
  static const std::vector<std::string> vocab = {
      "back",  "pain",   "Back",  "nurse,", "“nurse”", "34",
      "Paris", "paris.", "my",    "wife",   "AB-123",  "night",
      "shift", "(shift)", "café", "—night"};
  static const std::vector<std::string> distract = {"zzz", "qqq", "xxx"};
  RandomInstance inst;
  const int nwords = 6 + static_cast<int>(rng() % 10);
  std::vector<std::pair<std::size_t, std::size_t>> word_cp;  // code points
  std::size_t cp = 0;
  auto cplen = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
  };
  for (int i = 0; i < nwords; ++i) {
    const auto& w = vocab[rng() % vocab.size()];
    if (i) inst.context += ' ', ++cp;
    word_cp.push_back({cp, cp + cplen(w)});
    inst.context += w;
    cp += cplen(w);
  }
  const std::size_t dstart = cp + 1;
  inst.context += " zzz qqq xxx";
  auto slice = [&](std::size_t s, std::size_t e) {
    std::string out;
    std::size_t i = 0;
    for (std::size_t b = 0; b < inst.context.size();) {
      unsigned char c = inst.context[b];
      std::size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
      if (i >= s && i < e) out += inst.context.substr(b, len);
      b += len;
      ++i;
    }
    return out;
  };
  auto span = [&](std::size_t s, std::size_t e) {
    return relpii::PiiSpan{slice(s, e), s, e,
                           relpii::kAllPiiTypes[rng() % relpii::kPiiTypeCount],
                           rng() % 2 ? relpii::Relevance::kHigh : relpii::Relevance::kLow};
  };
  // Gold: walk the words, occasionally open a 1-3 word span.
  for (int i = 0; i < nwords && inst.gold.size() < 5;) {
    if (rng() % 3 == 0) {
      const int len = 1 + static_cast<int>(rng() % 3);
      const int last = std::min(nwords - 1, i + len - 1);
      inst.gold.push_back(span(word_cp[i].first, word_cp[last].second));
      i = last + 1;
    } else {
      ++i;
    }
  }
  const int npred = static_cast<int>(rng() % 6);
  for (int k = 0; k < npred; ++k) {
    const int kind = static_cast<int>(rng() % (exactish ? 2 : 4));
    if (kind == 0 && !inst.gold.empty()) {
      auto g = inst.gold[rng() % inst.gold.size()];
      inst.pred.push_back(span(g.start, g.end));
    } else if (kind == 1 || (kind == 0 && inst.gold.empty())) {
      const std::size_t d = rng() % distract.size();
      inst.pred.push_back(span(dstart + 4 * d, dstart + 4 * d + 3));
    } else if (kind == 2) {
      const int a = static_cast<int>(rng() % nwords);
      const int b = std::min(nwords - 1, a + static_cast<int>(rng() % 3));
      inst.pred.push_back(span(word_cp[a].first, word_cp[b].second));
    } else {
      const std::size_t a = rng() % cp;
      const std::size_t b = std::min(cp, a + 1 + rng() % 12);
      inst.pred.push_back(span(a, b));
    }
  }
  return inst;
}

inline std::string OracleTrim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\n\r") - b + 1);
}

inline std::size_t OracleCodePoints(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

// Context with every masked code-point range replaced by a \x01 separator.
inline std::string OracleRemainder(const std::string& context,
                                   const std::vector<relpii::PiiSpan>& masked) {
  std::string out;
  std::size_t i = 0;
  bool in_gap = false;
  for (std::size_t b = 0; b < context.size();) {
    unsigned char c = context[b];
    std::size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    bool hidden = false;
    for (const auto& m : masked) hidden |= i >= m.start && i < m.end;
    if (hidden) {
      if (!in_gap) out += '\x01';
      in_gap = true;
    } else {
      out += context.substr(b, len);
      in_gap = false;
    }
    b += len;
    ++i;
  }
  return out;
}

// Full masking leaks nothing: a masked text (>= 3 code points trimmed) may
// appear in the output only if it also appears in the unmasked remainder.
// Returns the offending text or "".
inline std::string FullMaskLeak(const std::string& context,
                                const std::vector<relpii::PiiSpan>& spans,
                                const std::string& output) {
  const auto rest = OracleRemainder(context, spans);
  for (const auto& s : spans) {
    const auto t = OracleTrim(s.text);
    if (OracleCodePoints(t) < 3) continue;
    if (output.find(t) != std::string::npos && rest.find(t) == std::string::npos) {
      return t;
    }
  }
  return "";
}

// Low-relevance masking keeps every relevance-1 text verbatim. Returns the
// missing text or "".
inline std::string LowMaskLoss(const std::vector<relpii::PiiSpan>& spans,
                               const std::string& output) {
  for (const auto& s : spans) {
    if (s.relevance == relpii::Relevance::kHigh &&
        output.find(s.text) == std::string::npos) {
      return s.text;
    }
  }
  return "";
}

}  // namespace relpii_test
