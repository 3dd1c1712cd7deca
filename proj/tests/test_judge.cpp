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

#include <cmath>

#include "dataset.hpp"
#include "error.hpp"
#include "judge.hpp"
#include "stubs.hpp"
#include "test_support.hpp"

using namespace relpii;
using relpii_test::Fixture;

namespace {

struct Rig {
  explicit Rig(MockProvider::Responder r) {
    mock = std::make_shared<MockProvider>(true);
    mock->SetResponder(std::move(r));
    Gateway::Options o;
    o.sleep = [](std::chrono::milliseconds) {};
    gateway = std::make_unique<Gateway>(mock, o);
  }
  UtilityReport Run(const std::vector<Sample>& samples, UtilityConfig cfg = {},
                    const SamplePredictions* preds = nullptr) {
    return RunUtilityEval(*gateway, prompts, samples, preds, cfg);
  }
  std::shared_ptr<MockProvider> mock;
  std::unique_ptr<Gateway> gateway;
  PromptCatalog prompts = PromptCatalog::Builtin();
};

}  // namespace

TEST_CASE("verdict parsing") {
  CHECK(ParseVerdict("thinking... <b>A</b>") == Verdict::kA);
  CHECK(ParseVerdict("<b>A</b> at first, but finally <b>B</b>") == Verdict::kB);
  CHECK(ParseVerdict("so: <B>equal</B>") == Verdict::kEqual);
  try {
    ParseVerdict("I prefer the first one.");
    FAIL("expected VerdictParseError");
  } catch (const VerdictParseError& e) {
    CHECK(e.raw() == "I prefer the first one.");
  }
}

TEST_CASE("aggregation of two passes") {
  using V = Verdict;
  CHECK(AggregateVerdicts(V::kA, V::kB) == PairOutcome::kWin);
  CHECK(AggregateVerdicts(V::kB, V::kA) == PairOutcome::kLoss);
  CHECK(AggregateVerdicts(V::kA, V::kA) == PairOutcome::kEqual);
  CHECK(AggregateVerdicts(V::kB, V::kB) == PairOutcome::kEqual);
  CHECK(AggregateVerdicts(V::kEqual, V::kB) == PairOutcome::kEqual);
  CHECK(AggregateVerdicts(V::kEqual, V::kEqual) == PairOutcome::kEqual);
  CHECK(AggregateVerdicts(V::kA, std::nullopt) == PairOutcome::kWin);
  CHECK(AggregateVerdicts(V::kB, std::nullopt) == PairOutcome::kLoss);
}

TEST_CASE("empty question is rejected before calling out") {
  Rig rig(relpii_test::AlwaysA());
  try {
    AnswerQuestion(*rig.gateway, rig.prompts, "ctx", "  ", {});
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidInput);
  }
  CHECK(rig.mock->call_count() == 0);
}

TEST_CASE("always-A judge with swap scores exactly one half") {
  auto samples = LoadDataset(Fixture("labeled_fixture.jsonl"));
  Rig rig(relpii_test::AlwaysA());
  auto r = rig.Run(samples);
  CHECK(r.n_pairs == samples.size());
  CHECK(r.equals == samples.size());
  CHECK(r.preference_score == 0.5);
  CHECK_FALSE(r.strict_score.has_value());
}

TEST_CASE("single pass exposes position bias") {
  auto samples = LoadDataset(Fixture("labeled_fixture.jsonl"));
  Rig rig(relpii_test::AlwaysA());
  UtilityConfig cfg;
  cfg.single_pass = true;
  auto r = rig.Run(samples, cfg);
  CHECK(r.preference_score == 1.0);
  CHECK(r.strict_score == 1.0);
}

TEST_CASE("swap relabeling maps p to 1 - p") {
  auto samples = LoadDataset(Fixture("labeled_fixture.jsonl"));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CAPTURE(seed);
    Rig rig(relpii_test::RandomJudge(seed));
    UtilityConfig fwd;
    UtilityConfig rev;
    rev.candidate = fwd.baseline;
    rev.baseline = fwd.candidate;
    auto a = rig.Run(samples, fwd);
    auto b = rig.Run(samples, rev);
    REQUIRE(a.preference_score);
    REQUIRE(b.preference_score);
    CHECK(*a.preference_score + *b.preference_score == 1.0);
    CHECK(a.wins == b.losses);
  }
}

TEST_CASE("judge sees the unmasked context, answers see masked ones") {
  auto s = LoadDataset(Fixture("warehouse.jsonl"));
  Rig rig(relpii_test::AlwaysA());
  rig.Run(s);
  int judge = 0, answers = 0;
  for (const auto& p : rig.mock->prompts()) {
    if (relpii_test::IsJudgePrompt(p)) {
      ++judge;
      CHECK(p.find(s[0].context) != std::string::npos);
    } else if (relpii_test::IsAnswerPrompt(p)) {
      ++answers;
      CHECK(p.find("[LOCATION]") != std::string::npos);
      CHECK(p.find("Springfield") == std::string::npos);
    }
  }
  CHECK(judge == 2);
  CHECK(answers == 2);
}

TEST_CASE("per-sample failures are tallied, auth aborts") {
  auto samples = LoadDataset(Fixture("labeled_fixture.jsonl"));
  samples.resize(5);
  const std::string bad = samples[3].context;
  Rig rig([bad, inner = relpii_test::AlwaysA()](std::string_view p)
              -> std::optional<std::string> {
    if (relpii_test::IsJudgePrompt(p) && p.find(bad) != std::string_view::npos) {
      return "no marker here";
    }
    return inner(p);
  });
  auto r = rig.Run(samples);
  CHECK(r.errors == 1);
  CHECK(r.n_pairs == 4);
  REQUIRE(r.samples.size() == 5);
  CHECK(std::is_sorted(r.samples.begin(), r.samples.end(),
                       [](const auto& x, const auto& y) { return x.sample_id < y.sample_id; }));
  auto j = UtilityToJson(r, {});
  CHECK(j["errors"] == 1);
  CHECK(FormatUtilityTable(r).find("Preference") != std::string::npos);

  rig.mock->FailNext(1000, ErrorCode::kAuth);
  CHECK_THROWS_AS(rig.Run(samples), Error);
}

TEST_CASE("span override must cover every sample") {
  auto samples = LoadDataset(Fixture("labeled_fixture.jsonl"));
  samples.resize(3);
  Rig rig(relpii_test::AlwaysA());
  SamplePredictions preds = {{samples[0].id, {}}};
  try {
    rig.Run(samples, {}, &preds);
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidInput);
  }
  for (const auto& s : samples) preds[s.id] = {};
  CHECK(rig.Run(samples, {}, &preds).n_pairs == 3);
}

TEST_CASE("no judged pairs leaves the scores undefined") {
  Rig rig(relpii_test::AlwaysA());
  auto r = rig.Run({});
  CHECK(r.n_pairs == 0);
  CHECK_FALSE(r.preference_score.has_value());
}
