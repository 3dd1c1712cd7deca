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


// relpii command line. Every subcommand is a thin wrapper over the C API.

#include <signal.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "relpii/relpii.h"

namespace {

using nlohmann::json;

// Status-carrying failure; main() turns it into the exit code.
struct CliError {
  relpii_status status;
  std::string message;
};

void Check(relpii_status st) {
  if (st != RELPII_OK) throw CliError{st, relpii_last_error()};
}

// Owns a string returned by the library.
class LibString {
 public:
  LibString() = default;
  ~LibString() { relpii_string_free(p_); }
  LibString(const LibString&) = delete;
  LibString& operator=(const LibString&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

struct Dataset {
  relpii_dataset* p = nullptr;
  Dataset() = default;
  explicit Dataset(const std::string& path) { Check(relpii_dataset_load(path.c_str(), &p)); }
  ~Dataset() { relpii_dataset_free(p); }
  Dataset(const Dataset&) = delete;
  Dataset& operator=(const Dataset&) = delete;
};

struct Provider {
  relpii_provider* p = nullptr;
  ~Provider() { relpii_provider_free(p); }
};

void WriteOut(const std::string& path, const std::string& content) {
  Check(relpii_write_file(path.c_str(), content.c_str()));
}

struct Common {
  std::string provider = "mock";
  std::string endpoint;
  std::string api_key_env = "RELPII_API_KEY";
  std::string fixtures;
  bool mock_lenient = false;
  std::uint64_t seed = 0;
  int parallelism = 4;
  int max_in_flight = 4;
  std::string model;
  double temperature = 1.0;
  double top_p = 1.0;
  int max_retries = 3;
  long long timeout_ms = 60000;
  std::string run_log;
  std::string prompts_dir;
};

json ModelOptions(const Common& c) {
  json o = {{"seed", c.seed},
            {"parallelism", c.parallelism},
            {"max_in_flight", c.max_in_flight},
            {"temperature", c.temperature},
            {"top_p", c.top_p},
            {"max_retries", c.max_retries},
            {"timeout_ms", c.timeout_ms}};
  if (!c.model.empty()) o["model"] = c.model;
  if (!c.run_log.empty()) o["run_log"] = c.run_log;
  if (!c.prompts_dir.empty()) o["prompts_dir"] = c.prompts_dir;
  return o;
}

void OpenProvider(const Common& c, Provider& out) {
  if (c.provider == "mock") {
    json o = {{"strict", !c.mock_lenient}, {"synthetic", true}};
    if (!c.fixtures.empty()) o["fixtures"] = c.fixtures;
    Check(relpii_provider_open_mock(o.dump().c_str(), &out.p));
  } else if (c.endpoint.empty()) {
    Check(relpii_provider_open_env(&out.p));
  } else {
    const char* key = std::getenv(c.api_key_env.c_str());
    Check(relpii_provider_open_http(c.endpoint.c_str(), key, &out.p));
  }
}

void AddModelFlags(CLI::App& app, Common& c) {
  app.add_option("--provider", c.provider, "Model backend")
      ->check(CLI::IsMember({"mock", "http"}))
      ->capture_default_str();
  app.add_option("--endpoint", c.endpoint,
                 "Chat endpoint base URL (default: $RELPII_ENDPOINT)");
  app.add_option("--api-key-env", c.api_key_env,
                 "Environment variable holding the API key")
      ->capture_default_str();
  app.add_option("--fixtures", c.fixtures, "Mock fixtures (JSONL)");
  app.add_flag("--mock-lenient", c.mock_lenient,
               "Mock answers unknown prompts with a placeholder");
  app.add_option("--model", c.model, "Model name (default: $RELPII_MODEL or built-in)");
  app.add_option("--temperature", c.temperature)->capture_default_str();
  app.add_option("--top-p", c.top_p)->capture_default_str();
  app.add_option("--max-retries", c.max_retries)->capture_default_str();
  app.add_option("--timeout-ms", c.timeout_ms)->capture_default_str();
  app.add_option("--max-in-flight", c.max_in_flight, "Concurrent model calls")
      ->capture_default_str();
  app.add_option("--run-log", c.run_log, "Append one JSON line per model call");
  app.add_option("--prompts-dir", c.prompts_dir, "Override prompt templates");
}

std::optional<const char*> Opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s.c_str();
}

int RunAnnotate(const std::string& dataset, const json& options) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  relpii_server* server = nullptr;
  Check(relpii_server_start(dataset.c_str(), options.dump().c_str(), &server));
  std::fprintf(stderr, "review service listening on http://%s:%d/\n",
               options.value("host", std::string("127.0.0.1")).c_str(),
               relpii_server_port(server));
  int sig = 0;
  sigwait(&set, &sig);
  std::fprintf(stderr, "signal %d, shutting down\n", sig);
  relpii_server_stop(server);
  relpii_server_free(server);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relevance-aware PII toolkit: generate, detect, evaluate, redact, judge"};
  app.set_config("--config", "", "TOML/INI file; command-line flags take precedence");
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--parallelism", common.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Do not echo the effective configuration");

  // generate
  auto* gen = app.add_subcommand("generate", "Synthesize a labeled dataset");
  AddModelFlags(*gen, common);
  std::string gen_out, gen_report;
  std::size_t topics = 10, subtopics = 20, max_triplets = 0, min_per = 2, max_per = 4;
  std::string id_prefix = "syn";
  gen->add_option("-o,--out", gen_out, "Output dataset (JSONL)")->required();
  gen->add_option("--report", gen_report, "Write the generation report (JSON)");
  gen->add_option("--topics-per-pair", topics)->capture_default_str();
  gen->add_option("--subtopics-per-topic", subtopics)->capture_default_str();
  gen->add_option("--max-triplets", max_triplets, "Keep the first N triplets (0 = all)")
      ->capture_default_str();
  gen->add_option("--min-peripheral", min_per)->capture_default_str();
  gen->add_option("--max-peripheral", max_per)->capture_default_str();
  gen->add_option("--id-prefix", id_prefix)->capture_default_str();

  // detect
  auto* det = app.add_subcommand("detect", "Detect PII spans with type and relevance");
  AddModelFlags(*det, common);
  std::string det_in, det_out, det_report, engine = "llm", variant = "finetuned";
  det->add_option("-d,--dataset", det_in)->required()->check(CLI::ExistingFile);
  det->add_option("-o,--out", det_out, "Predictions file (JSONL)")->required();
  det->add_option("--report", det_report, "Write detection counts (JSON)");
  det->add_option("--engine", engine)->check(CLI::IsMember({"llm", "rules"}))->capture_default_str();
  det->add_option("--variant", variant, "Instruction variant")
      ->check(CLI::IsMember({"finetuned", "pretrained"}))
      ->capture_default_str();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score predictions against gold spans");
  std::string ev_gold, ev_pred, ev_report, label = "detector";
  double threshold = 0.5;
  ev->add_option("-g,--gold", ev_gold)->required()->check(CLI::ExistingFile);
  ev->add_option("-p,--pred,--predictions", ev_pred)->required()->check(CLI::ExistingFile);
  ev->add_option("--report", ev_report, "Write the metrics (JSON)");
  ev->add_option("--threshold", threshold, "Span match threshold")->capture_default_str();
  ev->add_option("--label", label, "Row label in the table")->capture_default_str();

  // redact
  auto* red = app.add_subcommand("redact", "Mask PII with type placeholders");
  std::string red_in, red_pred, red_out, red_log, strategy = "full";
  red->add_option("-d,--dataset", red_in)->required()->check(CLI::ExistingFile);
  red->add_option("-p,--predictions", red_pred, "Mask predicted spans instead of gold")
      ->check(CLI::ExistingFile);
  red->add_option("-o,--out", red_out)->required();
  red->add_option("--plan-log", red_log, "Replacement plans (JSONL); default <out>.plan.jsonl");
  red->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"full", "low-relevance"}))
      ->capture_default_str();

  // judge
  auto* jd = app.add_subcommand("judge", "Pairwise utility of low-relevance vs full masking");
  AddModelFlags(*jd, common);
  std::string jd_in, jd_pred, jd_report;
  bool single_pass = false, swap_settings = false;
  jd->add_option("-d,--dataset", jd_in)->required()->check(CLI::ExistingFile);
  jd->add_option("-p,--predictions", jd_pred, "Use predicted spans instead of gold")
      ->check(CLI::ExistingFile);
  jd->add_option("--report", jd_report, "Write the utility report (JSON)");
  jd->add_flag("--single-pass", single_pass, "Judge each pair once, without the swapped order");
  jd->add_flag("--swap-settings", swap_settings, "Score full masking against low-relevance");

  // stats
  auto* st = app.add_subcommand("stats", "Per-type counts and relevance proportions");
  std::string st_in, st_json;
  st->add_option("-d,--dataset", st_in)->required()->check(CLI::ExistingFile);
  st->add_option("--json", st_json, "Also write the statistics as JSON");

  // annotate
  auto* an = app.add_subcommand("annotate", "Serve the review API and annotation UI");
  std::string an_in, host = "127.0.0.1", ui_dir, audit_log;
  int port = 8080;
  an->add_option("-d,--dataset", an_in)->required()->check(CLI::ExistingFile);
  an->add_option("--host", host)->capture_default_str();
  an->add_option("--port", port, "0 picks a free port")->capture_default_str();
  an->add_option("--ui-dir", ui_dir, "Static UI files served at /");
  an->add_option("--audit-log", audit_log, "Default <dataset>.audit.jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : RELPII_ERR_USAGE;
  }

  if (!quiet) {
    std::cerr << "# effective configuration\n" << app.config_to_str(true, false) << std::flush;
  }

  try {
    if (*gen) {
      Provider provider;
      OpenProvider(common, provider);
      json o = ModelOptions(common);
      o["topics_per_pair"] = topics;
      o["subtopics_per_topic"] = subtopics;
      o["max_triplets"] = max_triplets;
      o["min_peripheral"] = min_per;
      o["max_peripheral"] = max_per;
      o["id_prefix"] = id_prefix;
      Dataset out;
      LibString report;
      Check(relpii_generate(provider.p, o.dump().c_str(), &out.p, report.out()));
      Check(relpii_dataset_save(out.p, gen_out.c_str()));
      if (!gen_report.empty()) WriteOut(gen_report, report.str() + "\n");
      const auto r = json::parse(report.str());
      std::printf("generated %zu samples from %zu triplets (%zu raw, %zu duplicates), "
                  "%zu failures, %zu warnings\n",
                  relpii_dataset_size(out.p), r["triplets"].get<std::size_t>(),
                  r["raw_triplets"].get<std::size_t>(),
                  r["duplicates_removed"].get<std::size_t>(), r["failures"].size(),
                  r["warnings"].size());
    } else if (*det) {
      Dataset ds(det_in);
      Provider provider;
      if (engine == "llm") OpenProvider(common, provider);
      json o = ModelOptions(common);
      o["engine"] = engine;
      o["variant"] = variant;
      LibString report;
      Check(relpii_detect(provider.p, ds.p, o.dump().c_str(), det_out.c_str(), report.out()));
      if (!det_report.empty()) WriteOut(det_report, report.str() + "\n");
      std::printf("%s\n", report.str().c_str());
    } else if (*ev) {
      Dataset gold(ev_gold);
      json o = {{"threshold", threshold}, {"label", label}};
      LibString report, table;
      Check(relpii_evaluate(gold.p, ev_pred.c_str(), o.dump().c_str(), report.out(),
                            table.out()));
      if (!ev_report.empty()) WriteOut(ev_report, report.str() + "\n");
      std::printf("%s", table.str().c_str());
    } else if (*red) {
      Dataset ds(red_in);
      Dataset out;
      LibString log;
      Check(relpii_redact(ds.p, Opt(red_pred).value_or(nullptr), strategy.c_str(), &out.p,
                          log.out()));
      Check(relpii_dataset_save(out.p, red_out.c_str()));
      WriteOut(red_log.empty() ? red_out + ".plan.jsonl" : red_log, log.str());
      std::printf("redacted %zu samples (%s)\n", relpii_dataset_size(out.p),
                  strategy.c_str());
    } else if (*jd) {
      Dataset ds(jd_in);
      Provider provider;
      OpenProvider(common, provider);
      json o = ModelOptions(common);
      o["single_pass"] = single_pass;
      o["swap_settings"] = swap_settings;
      LibString report, table;
      Check(relpii_judge(provider.p, ds.p, Opt(jd_pred).value_or(nullptr), o.dump().c_str(),
                         report.out(), table.out()));
      if (!jd_report.empty()) WriteOut(jd_report, report.str() + "\n");
      std::printf("%s", table.str().c_str());
    } else if (*st) {
      Dataset ds(st_in);
      LibString j, table;
      Check(relpii_dataset_stats(ds.p, j.out(), table.out()));
      if (!st_json.empty()) WriteOut(st_json, j.str() + "\n");
      std::printf("%s", table.str().c_str());
    } else if (*an) {
      json o = {{"host", host}, {"port", port}};
      if (!ui_dir.empty()) o["ui_dir"] = ui_dir;
      if (!audit_log.empty()) o["audit_log"] = audit_log;
      return RunAnnotate(an_in, o);
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s: %s\n", relpii_status_name(e.status), e.message.c_str());
    return static_cast<int>(e.status);
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: InternalError: %s\n", e.what());
    return RELPII_ERR_INTERNAL;
  }
  return 0;
}
