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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace relpii {

using PromptVars = std::map<std::string, std::string, std::less<>>;

// A prompt body with `{name}` slots.
//
//   {name}          required slot
//   {name=default}  optional slot, `default` used when the var is absent
//   {{ and }}       literal braces
//
// Slot names are identifiers ([A-Za-z_][A-Za-z0-9_]*). Any other brace
// sequence (JSON in an example, say) is literal text.
class PromptTemplate {
 public:
  PromptTemplate(std::string name, std::string body);

  const std::string& name() const { return name_; }
  const std::string& body() const { return body_; }
  const std::set<std::string, std::less<>>& required_vars() const {
    return required_;
  }
  const std::map<std::string, std::string, std::less<>>& optional_vars() const {
    return optional_;
  }

  // Substitutes every slot verbatim. Values are not rescanned.
  // Throws Error(kMissingVar) / Error(kUnknownVar) naming the placeholder.
  std::string Render(const PromptVars& vars) const;

 private:
  struct Segment {
    bool is_slot = false;
    std::string text;  // literal text, or the slot name
  };

  std::string name_;
  std::string body_;
  std::vector<Segment> segments_;
  std::set<std::string, std::less<>> required_;
  std::map<std::string, std::string, std::less<>> optional_;
};

inline std::string RenderPrompt(const PromptTemplate& t, const PromptVars& v) {
  return t.Render(v);
}

// Template names used by the pipeline, detector and judge.
namespace prompt_names {
inline constexpr std::string_view kTopics = "topics";
inline constexpr std::string_view kSubtopics = "subtopics";
inline constexpr std::string_view kSituation = "situation";
inline constexpr std::string_view kPeripheral = "peripheral";
inline constexpr std::string_view kQuestionGeneral = "question_general";
inline constexpr std::string_view kQuestionPersonal = "question_personal";
inline constexpr std::string_view kQuestionRefine = "question_refine";
inline constexpr std::string_view kParaphrase = "paraphrase";
inline constexpr std::string_view kSpanRetrieval = "span_retrieval";
inline constexpr std::string_view kPiiValue = "pii_value";
inline constexpr std::string_view kPiiPrefix = "pii_prefix";
inline constexpr std::string_view kDetectShared = "detect_shared";
inline constexpr std::string_view kDetectPretrained = "detect_pretrained";
inline constexpr std::string_view kDetectFinetuned = "detect_finetuned";
inline constexpr std::string_view kAnswer = "qa_answer";
inline constexpr std::string_view kJudge = "judge";
}  // namespace prompt_names

// Named templates. Starts from the built-in bodies; a catalog directory can
// override any of them with `<name>.txt` (one trailing newline is dropped).
class PromptCatalog {
 public:
  static PromptCatalog Builtin();
  static PromptCatalog FromDirectory(const std::filesystem::path& dir);

  // Throws Error(kNotFound).
  const PromptTemplate& Get(std::string_view name) const;
  std::vector<std::string> Names() const;

  void Set(PromptTemplate t);

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

// Built-in body for `name`, or empty when unknown.
std::string_view BuiltinPromptBody(std::string_view name);

}  // namespace relpii
