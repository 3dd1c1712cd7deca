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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "error.hpp"
#include "prompt.hpp"
#include "test_support.hpp"

using namespace relpii;

namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

}  // namespace

TEST_CASE("render substitutes slots verbatim") {
  PromptTemplate t("t", "Hello {name}, you are {age} years old.");
  CHECK(t.Render({{"name", "Ana"}, {"age", "34"}}) ==
        "Hello Ana, you are 34 years old.");
  // Values are not rescanned.
  CHECK(t.Render({{"name", "{age}"}, {"age", "1"}}) ==
        "Hello {age}, you are 1 years old.");
}

TEST_CASE("missing and unknown variables") {
  PromptTemplate t("t", "Hello {name}");
  try {
    t.Render({});
    FAIL("expected MissingVar");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingVar);
    CHECK(std::string(e.what()).find("name") != std::string::npos);
  }
  CHECK(CodeOf([&] { t.Render({{"name", "x"}, {"extra", "y"}}); }) ==
        ErrorCode::kUnknownVar);
}

TEST_CASE("defaults, escaped braces and literal JSON") {
  PromptTemplate t("t", "{greet=Hi} {{x}} {\"a\": 1} {who}");
  CHECK(t.required_vars().count("who") == 1);
  CHECK(t.optional_vars().at("greet") == "Hi");
  CHECK(t.Render({{"who", "you"}}) == "Hi {x} {\"a\": 1} you");
  CHECK(t.Render({{"who", "you"}, {"greet", "Yo"}}) == "Yo {x} {\"a\": 1} you");
}

TEST_CASE("catalog covers every template name and matches the shipped files") {
  auto builtin = PromptCatalog::Builtin();
  const std::vector<std::string_view> names = {
      prompt_names::kTopics,          prompt_names::kSubtopics,
      prompt_names::kSituation,       prompt_names::kPeripheral,
      prompt_names::kQuestionGeneral, prompt_names::kQuestionPersonal,
      prompt_names::kQuestionRefine,  prompt_names::kParaphrase,
      prompt_names::kSpanRetrieval,   prompt_names::kPiiValue,
      prompt_names::kPiiPrefix,       prompt_names::kDetectShared,
      prompt_names::kDetectPretrained, prompt_names::kDetectFinetuned,
      prompt_names::kAnswer,          prompt_names::kJudge};
  CHECK(builtin.Names().size() == names.size());
  auto from_dir = PromptCatalog::FromDirectory(RELPII_PROMPT_DIR);
  for (auto n : names) {
    CAPTURE(n);
    CHECK_FALSE(BuiltinPromptBody(n).empty());
    CHECK(builtin.Get(n).body() == from_dir.Get(n).body());
  }
  CHECK(CodeOf([&] { builtin.Get("nope"); }) == ErrorCode::kNotFound);
}

TEST_CASE("directory overrides replace single templates") {
  relpii_test::TempDir dir;
  relpii_test::Spit(dir / "judge.txt", "custom {x}\n");
  auto c = PromptCatalog::FromDirectory(dir.path());
  CHECK(c.Get("judge").body() == "custom {x}");
  CHECK(c.Get("topics").body() == PromptCatalog::Builtin().Get("topics").body());
}
