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

#include <cstdio>
#include <thread>

#include "gateway.hpp"
#include "io.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace relpii;
using namespace std::chrono_literals;

namespace {

std::string FnvOracle(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Gateway::Options Quiet(std::vector<std::chrono::milliseconds>* slept = nullptr) {
  Gateway::Options o;
  o.sleep = [slept](std::chrono::milliseconds d) {
    if (slept) slept->push_back(d);
  };
  return o;
}

}  // namespace

TEST_CASE("fingerprint is FNV-1a 64") {
  for (std::string_view s : {"", "a", "hello world", "caf\xC3\xA9"}) {
    CHECK(PromptFingerprint(s) == FnvOracle(s));
  }
  CHECK(PromptFingerprint("") == "cbf29ce484222325");
}

TEST_CASE("params validation") {
  LlmParams p;
  CHECK_NOTHROW(p.Validate());
  p.top_p = 0;
  CHECK_THROWS_AS(p.Validate(), Error);
  p = {};
  p.temperature = -1;
  CHECK_THROWS_AS(p.Validate(), Error);
  p = {};
  p.max_retries = -1;
  CHECK_THROWS_AS(p.Validate(), Error);
}

TEST_CASE("mock lookup order") {
  auto mock = std::make_shared<MockProvider>(true);
  mock->AddFixture("p1", "fixture");
  mock->SetResponder([](std::string_view p) -> std::optional<std::string> {
    if (p == "p2") return "responder";
    return std::nullopt;
  });
  Gateway g(mock, Quiet());
  LlmParams params;
  CHECK(g.Complete("p1", params) == "fixture");
  CHECK(g.Complete("p2", params) == "responder");
  try {
    g.Complete("p3", params);
    FAIL("strict mock should fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kProvider);
    CHECK(std::string(e.what()).find(PromptFingerprint("p3")) != std::string::npos);
  }
  mock->FailNext(1, ErrorCode::kAuth);
  CHECK_THROWS(g.Complete("p1", params));
  CHECK(g.Complete("p1", params) == "fixture");

  auto lenient = std::make_shared<MockProvider>(false);
  Gateway g2(lenient, Quiet());
  CHECK_FALSE(g2.Complete("anything", params).empty());
}

TEST_CASE("mock fixtures file by prompt or fingerprint") {
  relpii_test::TempDir dir;
  relpii_test::Spit(dir / "fx.jsonl",
                    nlohmann::json({{"prompt", "a"}, {"response", "A"}}).dump() + "\n" +
                        nlohmann::json({{"fingerprint", PromptFingerprint("b")},
                                        {"response", "B"}})
                            .dump() +
                        "\n");
  auto mock = std::make_shared<MockProvider>();
  mock->LoadFixtures(dir / "fx.jsonl");
  Gateway g(mock, Quiet());
  CHECK(g.Complete("a", {}) == "A");
  CHECK(g.Complete("b", {}) == "B");
}

TEST_CASE("two transient failures then success: two retries, growing backoff") {
  relpii_test::TempDir dir;
  auto mock = std::make_shared<MockProvider>();
  mock->AddFixture("p", "ok");
  mock->FailNext(2);
  std::vector<std::chrono::milliseconds> slept;
  auto opts = Quiet(&slept);
  opts.run_log = dir / "run.jsonl";
  Gateway g(mock, opts);
  CHECK(g.Complete("p", {}) == "ok");
  CHECK(g.retries() == 2);
  REQUIRE(slept.size() == 2);
  CHECK(slept[0].count() >= 800);
  CHECK(slept[0].count() <= 1200);
  CHECK(slept[1].count() >= 1600);
  CHECK(slept[1].count() <= 2400);

  const auto log = relpii_test::Slurp(dir / "run.jsonl");
  auto lines = SplitLines(log);
  REQUIRE(lines.size() == 1);
  auto rec = nlohmann::json::parse(lines[0]);
  CHECK(rec["retries"] == 2);
  CHECK(rec["status"] == "ok");
  CHECK(rec["prompt_fingerprint"] == PromptFingerprint("p"));
  for (auto key : {"timestamp", "model", "latency_ms"}) CHECK(rec.contains(key));
  // The prompt itself is never logged.
  CHECK(lines[0].find("\"p\"") == std::string::npos);
}

TEST_CASE("retries are bounded by max_retries") {
  auto mock = std::make_shared<MockProvider>();
  mock->AddFixture("p", "ok");
  mock->FailNext(10);
  std::vector<std::chrono::milliseconds> slept;
  Gateway g(mock, Quiet(&slept));
  LlmParams params;
  params.max_retries = 3;
  try {
    g.Complete("p", params);
    FAIL("expected ProviderError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kProvider);
  }
  CHECK(slept.size() == 3);
  CHECK(mock->call_count() == 4);
}

TEST_CASE("auth failures are not retried") {
  auto mock = std::make_shared<MockProvider>();
  mock->AddFixture("p", "ok");
  mock->FailNext(1, ErrorCode::kAuth);
  std::vector<std::chrono::milliseconds> slept;
  Gateway g(mock, Quiet(&slept));
  try {
    g.Complete("p", {});
    FAIL("expected AuthError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAuth);
  }
  CHECK(slept.empty());
}

TEST_CASE("timeouts are retried and surface as Timeout when exhausted") {
  auto mock = std::make_shared<MockProvider>();
  mock->AddFixture("p", "ok");
  mock->FailNext(1, ErrorCode::kTimeout);
  Gateway g(mock, Quiet());
  CHECK(g.Complete("p", {}) == "ok");
  mock->FailNext(5, ErrorCode::kTimeout);
  LlmParams params;
  params.max_retries = 1;
  try {
    g.Complete("p", params);
    FAIL("expected Timeout");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTimeout);
  }
}

namespace {

class SlowProvider : public Provider {
 public:
  Completion Send(const std::string&, const LlmParams&) override {
    int now = ++active_;
    int prev = peak_.load();
    while (now > prev && !peak_.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(5ms);
    --active_;
    return {"x", 3, 1};
  }
  std::string Describe() const override { return "slow"; }
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
};

}  // namespace

TEST_CASE("in-flight requests never exceed the bound") {
  auto slow = std::make_shared<SlowProvider>();
  Gateway g(slow, Quiet());
  std::vector<std::thread> threads;
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&] {
      for (int k = 0; k < 4; ++k) g.Complete("p", {});
    });
  }
  for (auto& t : threads) t.join();
  CHECK(slow->peak_.load() <= 4);
  CHECK(slow->peak_.load() >= 2);
  CHECK(g.calls() == 64);
}
