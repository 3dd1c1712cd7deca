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

#include <cstring>
#include <string>
#include <thread>

#include "json.hpp"
#include "relpii/relpii.h"
#include "test_support.hpp"

using relpii_test::Fixture;
using relpii_test::TempDir;

namespace {

std::string Take(char* s) {
  std::string out = s ? s : "";
  relpii_string_free(s);
  return out;
}

relpii_dataset* Load(const std::string& name) {
  relpii_dataset* ds = nullptr;
  REQUIRE(relpii_dataset_load(Fixture(name).c_str(), &ds) == RELPII_OK);
  return ds;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(relpii_status_name(RELPII_OK)) == "Ok");
  CHECK(std::string(relpii_status_name(RELPII_ERR_REVISION_CONFLICT)) == "RevisionConflict");
  CHECK(std::strlen(relpii_version()) > 0);
}

TEST_CASE("dataset load, stats, round trip") {
  auto* ds = Load("labeled_fixture.jsonl");
  CHECK(relpii_dataset_size(ds) == 50);
  char* json = nullptr;
  char* table = nullptr;
  REQUIRE(relpii_dataset_stats(ds, &json, &table) == RELPII_OK);
  auto stats = nlohmann::json::parse(Take(json));
  auto ref = nlohmann::json::parse(relpii_test::Slurp(Fixture("labeled_fixture_stats.json")));
  for (auto& [type, row] : ref.items()) {
    CHECK(stats["per_type"][type]["total_count"] == row["total"]);
  }
  CHECK(Take(table).find("PII Type") != std::string::npos);

  char* jsonl = nullptr;
  REQUIRE(relpii_dataset_to_jsonl(ds, &jsonl) == RELPII_OK);
  relpii_dataset* back = nullptr;
  REQUIRE(relpii_dataset_parse(jsonl, &back) == RELPII_OK);
  relpii_string_free(jsonl);
  CHECK(relpii_dataset_size(back) == 50);
  relpii_dataset_free(back);
  relpii_dataset_free(ds);
}

TEST_CASE("errors come back as codes with a message") {
  relpii_dataset* ds = nullptr;
  CHECK(relpii_dataset_load("/nonexistent/x.jsonl", &ds) == RELPII_ERR_IO);
  CHECK(ds == nullptr);
  CHECK(std::strlen(relpii_last_error()) > 0);
  CHECK(relpii_dataset_parse("{bad", &ds) == RELPII_ERR_PARSE);
  CHECK(relpii_dataset_parse(
            R"({"id":"a","context":"x","question":"q","spans":[{"text":"y","start":0,"end":1,"type":"age","relevance":0}]})",
            &ds) == RELPII_ERR_VALIDATION);
  CHECK(relpii_dataset_load(nullptr, &ds) == RELPII_ERR_USAGE);

  relpii_provider* p = nullptr;
  CHECK(relpii_provider_open_mock(R"({"strict": true, "colour": 1})", &p) == RELPII_ERR_USAGE);
  CHECK(std::string(relpii_last_error()).find("colour") != std::string::npos);
  CHECK(relpii_provider_open_mock("not json", &p) == RELPII_ERR_USAGE);
}

TEST_CASE("generate, detect, evaluate, redact, judge end to end") {
  TempDir dir;
  relpii_provider* p = nullptr;
  REQUIRE(relpii_provider_open_mock(R"({"synthetic": true})", &p) == RELPII_OK);

  relpii_dataset* gen = nullptr;
  char* report = nullptr;
  REQUIRE(relpii_generate(p,
                          R"({"seed": 7, "topics_per_pair": 1, "subtopics_per_topic": 2,
                              "max_triplets": 6, "pairs": [["occupation", "health"], ["age", "finance"]]})",
                          &gen, &report) == RELPII_OK);
  auto rep = nlohmann::json::parse(Take(report));
  CHECK(rep["samples"] == 4);
  CHECK(rep["raw_triplets"] == 4);
  CHECK(relpii_dataset_size(gen) == 4);

  const auto preds = (dir / "preds.jsonl").string();
  REQUIRE(relpii_detect(p, gen, "{}", preds.c_str(), &report) == RELPII_OK);
  CHECK(nlohmann::json::parse(Take(report))["parse_errors"] == 0);

  char* table = nullptr;
  REQUIRE(relpii_evaluate(gen, preds.c_str(), R"({"label": "mock"})", &report, &table) == RELPII_OK);
  auto ev = nlohmann::json::parse(Take(report));
  CHECK(ev["span_recall"].get<double>() >= 0.0);
  CHECK(Take(table).find("mock") != std::string::npos);

  relpii_dataset* masked = nullptr;
  char* plan = nullptr;
  REQUIRE(relpii_redact(gen, nullptr, "full", &masked, &plan) == RELPII_OK);
  CHECK(Take(plan).find("\"replacements\"") != std::string::npos);
  char* mj = nullptr;
  relpii_dataset_to_jsonl(masked, &mj);
  CHECK(Take(mj).find("[OCCUPATION]") != std::string::npos);
  relpii_dataset_free(masked);
  CHECK(relpii_redact(gen, nullptr, "sideways", &masked, nullptr) == RELPII_ERR_USAGE);

  REQUIRE(relpii_judge(p, gen, nullptr, "{}", &report, &table) == RELPII_OK);
  auto jr = nlohmann::json::parse(Take(report));
  CHECK(jr["n_pairs"] == 4);
  relpii_string_free(table);

  relpii_dataset_free(gen);
  relpii_provider_free(p);
}

TEST_CASE("rules engine needs no provider; llm engine does") {
  TempDir dir;
  auto* ds = Load("labeled_fixture.jsonl");
  const auto preds = (dir / "rules.jsonl").string();
  CHECK(relpii_detect(nullptr, ds, R"({"engine": "rules"})", preds.c_str(), nullptr) == RELPII_OK);
  CHECK(relpii_detect(nullptr, ds, R"({"engine": "llm"})", preds.c_str(), nullptr) == RELPII_ERR_USAGE);
  relpii_dataset_free(ds);
}

TEST_CASE("strict mock without fixtures surfaces provider errors per sample") {
  TempDir dir;
  relpii_provider* p = nullptr;
  REQUIRE(relpii_provider_open_mock(R"({"strict": true})", &p) == RELPII_OK);
  auto* ds = Load("warehouse.jsonl");
  char* report = nullptr;
  const auto preds = (dir / "p.jsonl").string();
  REQUIRE(relpii_detect(p, ds, R"({"max_retries": 0})", preds.c_str(), &report) == RELPII_OK);
  CHECK(nlohmann::json::parse(Take(report))["provider_errors"] == 1);
  relpii_dataset_free(ds);
  relpii_provider_free(p);
}

TEST_CASE("server start, serve and stop") {
  TempDir dir;
  const auto path = dir / "d.jsonl";
  relpii_test::Spit(path, relpii_test::Slurp(Fixture("review_fixture.jsonl")));
  relpii_server* srv = nullptr;
  REQUIRE(relpii_server_start(path.c_str(), R"({"port": 0})", &srv) == RELPII_OK);
  CHECK(relpii_server_port(srv) > 0);
  std::thread waiter([srv] { relpii_server_wait(srv); });
  relpii_server_stop(srv);
  waiter.join();
  relpii_server_free(srv);
}

TEST_CASE("atomic file write") {
  TempDir dir;
  const auto path = (dir / "o.txt").string();
  CHECK(relpii_write_file(path.c_str(), "hello") == RELPII_OK);
  CHECK(relpii_test::Slurp(path) == "hello");
  CHECK(relpii_write_file("/nonexistent-dir/o.txt", "x") == RELPII_ERR_IO);
}
