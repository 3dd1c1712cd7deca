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

#include "synthetic_responder.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>

#include "detector.hpp"
#include "io.hpp"
#include "text.hpp"

namespace relpii {
namespace {

constexpr std::string_view kTopicAdj[] = {
    "Rising", "Hidden", "Everyday", "Shared", "Sudden",
    "Long-term", "Local", "Private", "Growing", "Modern"};
constexpr std::string_view kTopicNoun[] = {
    "Costs", "Routines", "Decisions", "Plans", "Setbacks",
    "Habits", "Changes", "Choices", "Worries", "Goals"};
constexpr std::string_view kSubWord[] = {
    "basics", "planning", "deadlines", "paperwork", "budgeting",
    "scheduling", "conflicts", "support", "limits", "options",
    "records", "priorities", "advice", "rules", "strategies",
    "tradeoffs", "expectations", "boundaries", "checklists", "questions",
    "timelines", "risks", "benefits", "resources", "feedback"};

const std::array<std::vector<std::string_view>, kPiiTypeCount> kPools = {{
    {"warehouse supervisor", "preschool teacher", "night nurse",
     "software tester", "bus driver", "line cook"},
    {"chronic back pain", "type 2 diabetes", "seasonal asthma", "migraines",
     "high blood pressure", "insomnia"},
    {"Brazilian", "first-generation immigrant", "Korean American", "Nigerian",
     "Polish", "Filipino"},
    {"$36,500 annually", "$1,200 in savings", "$18,000 in debt",
     "$52,000 salary", "$700 monthly rent", "$4,300 overdraft"},
    {"34", "22 years old", "58", "19 years old", "67", "41"},
    {"Associate's Degree", "high school diploma", "Master's degree", "GED",
     "bachelor's in nursing", "trade certificate"},
    {"Springfield", "Austin", "Leeds", "rural Ohio", "Toronto", "Brisbane"},
    {"Richardson Ltd", "Northwind Logistics", "Mercy Hospital",
     "Greenfield Bank", "Acme Foods", "Lakeside Church"},
    {"two children", "my husband", "a younger sister", "my grandmother",
     "my fiance", "three stepsons"},
    {"heterosexual", "bisexual", "pansexual", "asexual", "gay", "lesbian"},
    {"Buddhist", "Catholic", "atheist", "Muslim", "Hindu", "agnostic"},
    {"Maria Lopez", "James Carter", "Priya Nair", "Tom Becker", "Aisha Bello",
     "Daniel Kim"},
    {"AB-12345", "ZX-90817", "QT-55102", "KR-30063", "MV-77210", "HN-60412"},
    {"March 2021", "last Tuesday", "July 2022", "since 2018", "this spring",
     "October 2019"},
    {"red hair", "a tattoo sleeve", "6 feet tall", "thick glasses",
     "a shaved head", "freckles"},
}};

std::uint64_t Hash(std::string_view s) {
  std::uint64_t h = 0;
  const auto fp = PromptFingerprint(s);
  std::from_chars(fp.data(), fp.data() + fp.size(), h, 16);
  return h;
}

// Text between `open` and `close` (or the end); empty when `open` is absent.
std::string_view Between(std::string_view s, std::string_view open,
                         std::string_view close) {
  const auto a = s.find(open);
  if (a == std::string_view::npos) return {};
  s.remove_prefix(a + open.size());
  const auto b = close.empty() ? std::string_view::npos : s.find(close);
  return b == std::string_view::npos ? s : s.substr(0, b);
}

std::size_t LeadingNumber(std::string_view s, std::size_t fallback) {
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  return ec == std::errc() && n > 0 ? n : fallback;
}

std::string Topics(std::string_view prompt) {
  const auto n = LeadingNumber(Between(prompt, "Generate ", " topics"), 20);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    out += std::to_string(i + 1) + ". ";
    out += kTopicAdj[i % 10];
    out += ' ';
    out += kTopicNoun[(i / 10 + i) % 10];
    out += '\n';
  }
  return out;
}

std::string Subtopics(std::string_view prompt) {
  const auto n = LeadingNumber(Between(prompt, "Generate ", " subtopics"), 10);
  const auto topic = AsciiLower(Between(prompt, "related to the topic ", ".\n"));
  std::string out;
  constexpr std::size_t kWords = std::size(kSubWord);
  for (std::size_t i = 0; i < n; ++i) {
    out += "- " + topic + " " + std::string(kSubWord[i % kWords]);
    if (i >= kWords) out += " " + std::to_string(i / kWords + 1);
    out += '\n';
  }
  return out;
}

std::string Value(std::string_view prompt) {
  const auto label = Between(prompt, "Generate ", " (private detail)");
  const auto type = PiiTypeFromLabel(label);
  if (!type) return "unknown";
  const auto& pool = kPools[static_cast<std::size_t>(*type)];
  return std::string(pool[Hash(prompt) % pool.size()]);
}

std::string Situation(std::string_view prompt) {
  const auto topic = Trim(Between(prompt, "Topic: ", "\n"));
  const auto subtopic = Trim(Between(prompt, "Subtopic: ", "\n"));
  const auto first = Between(prompt, "PII: ", "\n");
  const auto second = Between(Between(prompt, "PII: ", "\n\n"), "\n", "");
  auto value = [](std::string_view line) {
    const auto dash = line.find(" - ");
    return dash == std::string_view::npos ? std::string(Trim(line))
                                          : std::string(Trim(line.substr(dash + 3)));
  };
  return "I have been struggling with " + AsciiLower(subtopic) +
         " as part of " + AsciiLower(topic) + " for months now, and being " +
         value(first) + " with " + value(second) +
         " makes it harder, so I feel anxious every single evening.";
}

std::string Peripheral(std::string_view prompt) {
  const auto block = Between(prompt, "exactly as written:\n", "\n\n");
  std::vector<std::string> parts;
  for (auto line : SplitLines(block)) {
    const auto colon = line.find(": ");
    if (colon == std::string_view::npos) continue;
    parts.push_back("my " + std::string(line.substr(0, colon)) + " is " +
                    std::string(line.substr(colon + 2)));
  }
  return "On a different note, I can share that " + Join(parts, ", ") +
         ", and I enjoy quiet walks on weekends.";
}

std::string QuestionGeneral(std::string_view prompt) {
  const auto situation = Between(prompt, "Situation: ", "");
  const auto subject = Between(situation, "struggling with ", " as part of ");
  if (subject.empty()) return "What is a good way to handle this kind of problem?";
  return "What should someone do when dealing with " + std::string(subject) + "?";
}

std::string QuestionPersonal(std::string_view prompt) {
  std::string q(Trim(Between(prompt, "Question: ", "")));
  const std::string_view from = "What should someone do";
  if (StartsWith(q, from)) q = "What should I do" + q.substr(from.size());
  return q;
}

std::string Paraphrase(std::string_view prompt) {
  std::string text(Trim(Between(prompt, "Text: ", "\n\nDo not change")));
  if (text.rfind("On a ", 0) == 0) text[0] = 'o';
  return "To be honest, " + text;
}

std::string SpanRetrieval(std::string_view prompt) {
  const std::string_view pii =
      Between(prompt, "most similar to ", ".\n\nText: ");
  const std::string_view context =
      Between(prompt, "\n\nText: ", "\n\nOutput only the span");
  if (context.find(pii) != std::string_view::npos) return std::string(pii);
  const auto want = SplitWhitespace(pii);
  const auto toks = SplitWhitespace(context);
  if (want.empty() || toks.empty()) return std::string(pii);
  std::vector<std::string> wanted;
  for (auto w : want) wanted.push_back(AsciiLower(w));
  const std::size_t width = std::min(want.size(), toks.size());
  std::size_t best = 0, best_hits = 0;
  for (std::size_t i = 0; i + width <= toks.size(); ++i) {
    std::size_t hits = 0;
    for (std::size_t k = 0; k < width; ++k) {
      if (std::find(wanted.begin(), wanted.end(), AsciiLower(toks[i + k])) !=
          wanted.end()) {
        ++hits;
      }
    }
    if (hits > best_hits) {
      best_hits = hits;
      best = i;
    }
  }
  const char* begin = toks[best].data();
  const char* end = toks[best + width - 1].data() + toks[best + width - 1].size();
  return std::string(begin, end);
}

std::string Detection(std::string_view prompt) {
  const auto text = Between(prompt, "### Input:\nText: ", "\nQuestion: ");
  return SerializeDetectionEntries(DetectRules(text).entries);
}

std::string Answer(std::string_view prompt) {
  const auto context = Between(prompt, "Context: ", ".\n\nQuestion: ");
  const auto words = SplitWhitespace(context);
  std::vector<std::string> head;
  for (std::size_t i = 0; i < words.size() && i < 24; ++i) {
    head.emplace_back(words[i]);
  }
  return "Going by what you describe (" + Join(head, " ") +
         "), the first step is to write down what is getting in the way. "
         "Then talk to someone who handles this every day. "
         "Check back after a few weeks to see what changed.";
}

std::size_t CountPlaceholders(std::string_view s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '['));
}

std::string Judge(std::string_view prompt) {
  const auto a = Between(prompt, "\n\nAnswer A: ", "\n\nAnswer B: ");
  const auto b = Between(prompt, "\n\nAnswer B: ", "\n\nFirst, think");
  const auto pa = CountPlaceholders(a), pb = CountPlaceholders(b);
  std::string verdict = "Equal";
  if (pa != pb) {
    verdict = pa < pb ? "A" : "B";
  } else if (a.size() != b.size()) {
    verdict = a.size() > b.size() ? "A" : "B";
  }
  return "The answer with fewer masked details and more specifics is "
         "preferred.\n<b>" + verdict + "</b>";
}

}  // namespace

const std::vector<std::string_view>& SyntheticValuePool(PiiType type) {
  return kPools[static_cast<std::size_t>(type)];
}

MockProvider::Responder MakeSyntheticResponder() {
  return [](std::string_view prompt) -> std::optional<std::string> {
    if (StartsWith(prompt, "Generate ") &&
        prompt.find(" topics that would require") != std::string_view::npos) {
      return Topics(prompt);
    }
    if (StartsWith(prompt, "Generate ") &&
        prompt.find(" subtopics related to") != std::string_view::npos) {
      return Subtopics(prompt);
    }
    if (StartsWith(prompt, "Generate ") &&
        prompt.find(" (private detail)") != std::string_view::npos) {
      return Value(prompt);
    }
    if (StartsWith(prompt, "Topic: ")) return Situation(prompt);
    if (StartsWith(prompt, "Generate some facts about the person")) {
      return Peripheral(prompt);
    }
    if (StartsWith(prompt, "You are given a short description of a situation")) {
      return QuestionGeneral(prompt);
    }
    if (StartsWith(prompt, "Make the provided question sound more personal")) {
      return QuestionPersonal(prompt);
    }
    if (StartsWith(prompt, "You are given the question.")) {
      return std::string(Trim(Between(prompt, "\nQuestion: ", "\n\nOutput only")));
    }
    if (StartsWith(prompt, "Rewrite this text so it sounds coherent")) {
      return Paraphrase(prompt);
    }
    if (StartsWith(prompt, "Find a span in the text")) return SpanRetrieval(prompt);
    if (StartsWith(prompt, "Below is an instruction")) return Detection(prompt);
    if (StartsWith(prompt, "Answer the question by taking into account")) {
      return Answer(prompt);
    }
    if (StartsWith(prompt, "You are an expert evaluator")) return Judge(prompt);
    return std::nullopt;
  };
}

}  // namespace relpii
