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


#include "relpii/relpii.h"

#include <cstdlib>
#include <cstring>
#include <initializer_list>
#include <memory>
#include <new>
#include <set>
#include <string>

#include "dataset.hpp"
#include "detector.hpp"
#include "error.hpp"
#include "gateway.hpp"
#include "io.hpp"
#include "judge.hpp"
#include "json.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "prompt.hpp"
#include "redactor.hpp"
#include "review_service.hpp"
#include "synthetic_responder.hpp"

using nlohmann::json;
using relpii::Error;
using relpii::ErrorCode;

struct relpii_dataset {
  std::vector<relpii::Sample> samples;
};

struct relpii_provider {
  std::shared_ptr<relpii::Provider> impl;
};

struct relpii_server {
  std::unique_ptr<relpii::ReviewStore> store;
  std::unique_ptr<relpii::ReviewServer> server;
};

#define RELPII_SAME(c, e) \
  static_assert(static_cast<int>(ErrorCode::c) == e, #e " out of sync")
RELPII_SAME(kOk, RELPII_OK);
RELPII_SAME(kInternal, RELPII_ERR_INTERNAL);
RELPII_SAME(kUsage, RELPII_ERR_USAGE);
RELPII_SAME(kIo, RELPII_ERR_IO);
RELPII_SAME(kParse, RELPII_ERR_PARSE);
RELPII_SAME(kValidation, RELPII_ERR_VALIDATION);
RELPII_SAME(kNotFound, RELPII_ERR_NOT_FOUND);
RELPII_SAME(kMissingVar, RELPII_ERR_MISSING_VAR);
RELPII_SAME(kUnknownVar, RELPII_ERR_UNKNOWN_VAR);
RELPII_SAME(kProvider, RELPII_ERR_PROVIDER);
RELPII_SAME(kAuth, RELPII_ERR_AUTH);
RELPII_SAME(kTimeout, RELPII_ERR_TIMEOUT);
RELPII_SAME(kFormat, RELPII_ERR_FORMAT);
RELPII_SAME(kPiiDropped, RELPII_ERR_PII_DROPPED);
RELPII_SAME(kEmptyQuestion, RELPII_ERR_EMPTY_QUESTION);
RELPII_SAME(kReconcile, RELPII_ERR_RECONCILE);
RELPII_SAME(kRangeOutOfBounds, RELPII_ERR_RANGE_OUT_OF_BOUNDS);
RELPII_SAME(kVerdictParse, RELPII_ERR_VERDICT_PARSE);
RELPII_SAME(kRevisionConflict, RELPII_ERR_REVISION_CONFLICT);
RELPII_SAME(kUnknownSampleId, RELPII_ERR_UNKNOWN_SAMPLE_ID);
RELPII_SAME(kInvalidInput, RELPII_ERR_INVALID_INPUT);
#undef RELPII_SAME

namespace {

thread_local std::string g_last_error;

relpii_status Fail(ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<relpii_status>(code);
}

template <typename Fn>
relpii_status Guard(Fn&& fn) {
  try {
    fn();
    return RELPII_OK;
  } catch (const Error& e) {
    return Fail(e.code(), e.what());
  } catch (const json::exception& e) {
    return Fail(ErrorCode::kParse, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ErrorCode::kInternal, e.what());
  } catch (...) {
    return Fail(ErrorCode::kInternal, "unknown exception");
  }
}

void Require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kUsage, std::string(what) + " is NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void Emit(char** out, const std::string& s) {
  if (out) *out = CopyString(s);
}

constexpr std::initializer_list<const char*> kModelKeys = {
    "model", "temperature", "top_p", "max_retries", "timeout_ms",
    "max_in_flight", "initial_backoff_ms", "run_log", "prompts_dir",
    "parallelism", "seed"};

// Parsed options object with a closed key set.
class Options {
 public:
  Options(const char* text, std::initializer_list<std::initializer_list<const char*>> key_sets) {
    if (text && *text) {
      try {
        j_ = json::parse(text);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kUsage, std::string("options are not JSON: ") + e.what());
      }
    } else {
      j_ = json::object();
    }
    if (!j_.is_object()) throw Error(ErrorCode::kUsage, "options must be a JSON object");
    std::set<std::string> allowed;
    for (const auto& set : key_sets) {
      for (const char* k : set) allowed.insert(k);
    }
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.count(key)) throw Error(ErrorCode::kUsage, "unknown option \"" + key + "\"");
    }
  }

  bool Has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

  template <typename T>
  T Get(const char* key, T fallback) const {
    if (!Has(key)) return fallback;
    try {
      return j_[key].get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kUsage, std::string("option \"") + key + "\" has the wrong type");
    }
  }

  const json& raw(const char* key) const { return j_.at(key); }

 private:
  json j_;
};

relpii::LlmParams ParamsFrom(const Options& o) {
  relpii::LlmParams p;
  if (auto env = relpii::ModelFromEnvironment()) p.model_name = *env;
  p.model_name = o.Get<std::string>("model", p.model_name);
  p.temperature = o.Get<double>("temperature", p.temperature);
  p.top_p = o.Get<double>("top_p", p.top_p);
  p.max_retries = o.Get<int>("max_retries", p.max_retries);
  p.timeout = std::chrono::milliseconds(o.Get<long long>("timeout_ms", p.timeout.count()));
  try {
    p.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kUsage, e.what());
  }
  return p;
}

std::unique_ptr<relpii::Gateway> GatewayFrom(relpii_provider* provider,
                                             const Options& o) {
  Require(provider, "provider");
  relpii::Gateway::Options g;
  const auto in_flight = o.Get<long long>("max_in_flight", 4);
  if (in_flight < 1) throw Error(ErrorCode::kUsage, "max_in_flight must be >= 1");
  g.max_in_flight = static_cast<std::size_t>(in_flight);
  g.initial_backoff = std::chrono::milliseconds(o.Get<long long>("initial_backoff_ms", 1000));
  if (o.Has("run_log")) g.run_log = o.Get<std::string>("run_log", "");
  g.jitter_seed = o.Get<std::uint64_t>("seed", g.jitter_seed);
  return std::make_unique<relpii::Gateway>(provider->impl, std::move(g));
}

relpii::PromptCatalog CatalogFrom(const Options& o) {
  if (o.Has("prompts_dir")) {
    return relpii::PromptCatalog::FromDirectory(o.Get<std::string>("prompts_dir", ""));
  }
  return relpii::PromptCatalog::Builtin();
}

std::size_t ParallelismFrom(const Options& o) {
  const auto n = o.Get<long long>("parallelism", 4);
  if (n < 1) throw Error(ErrorCode::kUsage, "parallelism must be >= 1");
  return static_cast<std::size_t>(n);
}

relpii::SamplePredictions SpansFromFile(const std::vector<relpii::Sample>& gold,
                                        const char* path,
                                        std::size_t* unlocalizable) {
  return relpii::PredictionsToSpans(gold, relpii::LoadPredictions(path),
                                    unlocalizable);
}

relpii::PiiType TypeFromJson(const json& v) {
  auto t = v.is_string() ? relpii::PiiTypeFromLabel(v.get<std::string>()) : std::nullopt;
  if (!t) throw Error(ErrorCode::kUsage, "bad PII type in \"pairs\": " + v.dump());
  return *t;
}

}  // namespace

extern "C" {

RELPII_API const char* relpii_version(void) { return "0.1.0"; }

RELPII_API const char* relpii_last_error(void) { return g_last_error.c_str(); }

RELPII_API const char* relpii_status_name(relpii_status status) {
  if (status < RELPII_OK || status > RELPII_ERR_INVALID_INPUT) return "InternalError";
  return relpii::ErrorCodeName(static_cast<ErrorCode>(status)).data();
}

RELPII_API void relpii_string_free(char* s) { std::free(s); }

RELPII_API relpii_status relpii_write_file(const char* path, const char* content) {
  return Guard([&] {
    Require(path, "path");
    Require(content, "content");
    relpii::WriteFileAtomic(path, content);
  });
}

RELPII_API relpii_status relpii_dataset_load(const char* path, relpii_dataset** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    auto ds = std::make_unique<relpii_dataset>();
    ds->samples = relpii::LoadDataset(path);
    *out = ds.release();
  });
}

RELPII_API relpii_status relpii_dataset_parse(const char* jsonl, relpii_dataset** out) {
  return Guard([&] {
    Require(jsonl, "jsonl");
    Require(out, "out");
    auto ds = std::make_unique<relpii_dataset>();
    ds->samples = relpii::ParseDataset(jsonl);
    *out = ds.release();
  });
}

RELPII_API relpii_status relpii_dataset_save(const relpii_dataset* ds, const char* path) {
  return Guard([&] {
    Require(ds, "dataset");
    Require(path, "path");
    relpii::SaveDataset(path, ds->samples);
  });
}

RELPII_API relpii_status relpii_dataset_to_jsonl(const relpii_dataset* ds, char** out) {
  return Guard([&] {
    Require(ds, "dataset");
    Require(out, "out");
    *out = CopyString(relpii::SerializeDataset(ds->samples));
  });
}

RELPII_API size_t relpii_dataset_size(const relpii_dataset* ds) {
  return ds ? ds->samples.size() : 0;
}

RELPII_API relpii_status relpii_dataset_stats(const relpii_dataset* ds, char** json_out,
                                              char** table_out) {
  return Guard([&] {
    Require(ds, "dataset");
    const auto stats = relpii::ComputeStats(ds->samples);
    std::string j = relpii::StatsToJson(stats).dump(2);
    std::string table = relpii::FormatStatsTable(stats);
    Emit(json_out, j);
    try {
      Emit(table_out, table);
    } catch (...) {
      if (json_out) std::free(*json_out);
      throw;
    }
  });
}

RELPII_API void relpii_dataset_free(relpii_dataset* ds) { delete ds; }

RELPII_API relpii_status relpii_provider_open_mock(const char* options_json,
                                                   relpii_provider** out) {
  return Guard([&] {
    Require(out, "out");
    Options o(options_json, {{"strict", "fixtures", "synthetic"}});
    auto mock = std::make_shared<relpii::MockProvider>(o.Get<bool>("strict", true));
    if (o.Has("fixtures")) mock->LoadFixtures(o.Get<std::string>("fixtures", ""));
    if (o.Get<bool>("synthetic", false)) mock->SetResponder(relpii::MakeSyntheticResponder());
    *out = new relpii_provider{std::move(mock)};
  });
}

RELPII_API relpii_status relpii_provider_open_http(const char* endpoint,
                                                   const char* api_key,
                                                   relpii_provider** out) {
  return Guard([&] {
    Require(endpoint, "endpoint");
    Require(out, "out");
    *out = new relpii_provider{
        std::make_shared<relpii::HttpProvider>(endpoint, api_key ? api_key : "")};
  });
}

RELPII_API relpii_status relpii_provider_open_env(relpii_provider** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new relpii_provider{relpii::HttpProviderFromEnvironment()};
  });
}

RELPII_API void relpii_provider_free(relpii_provider* p) { delete p; }

RELPII_API relpii_status relpii_generate(relpii_provider* provider,
                                         const char* options_json,
                                         relpii_dataset** out, char** report_json) {
  return Guard([&] {
    Require(out, "out");
    Options o(options_json,
              {kModelKeys,
               {"topics_per_pair", "subtopics_per_topic", "max_triplets",
                "min_peripheral", "max_peripheral", "id_prefix", "pairs"}});
    auto gateway = GatewayFrom(provider, o);
    const auto prompts = CatalogFrom(o);
    relpii::PipelineConfig config;
    config.params = ParamsFrom(o);
    config.topics_per_pair = o.Get<std::size_t>("topics_per_pair", config.topics_per_pair);
    config.subtopics_per_topic =
        o.Get<std::size_t>("subtopics_per_topic", config.subtopics_per_topic);
    config.min_peripheral = o.Get<std::size_t>("min_peripheral", config.min_peripheral);
    config.max_peripheral = o.Get<std::size_t>("max_peripheral", config.max_peripheral);
    config.seed = o.Get<std::uint64_t>("seed", config.seed);
    config.parallelism = ParallelismFrom(o);
    config.id_prefix = o.Get<std::string>("id_prefix", config.id_prefix);

    std::vector<relpii::TypePair> pairs;
    if (o.Has("pairs")) {
      const auto& arr = o.raw("pairs");
      if (!arr.is_array()) throw Error(ErrorCode::kUsage, "\"pairs\" must be a list");
      for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2) {
          throw Error(ErrorCode::kUsage, "each pair must be a two-element list");
        }
        auto a = TypeFromJson(p[0]), b = TypeFromJson(p[1]);
        if (a == b) throw Error(ErrorCode::kUsage, "a pair needs two distinct types");
        if (b < a) std::swap(a, b);
        pairs.push_back({a, b});
      }
    } else {
      pairs = relpii::EnumerateTypePairs();
    }

    relpii::SynthPipeline pipeline(*gateway, prompts, config);
    auto tree = pipeline.GenerateTopicTree(pairs);
    const auto max_triplets = o.Get<std::size_t>("max_triplets", 0);
    if (max_triplets > 0 && tree.triplets.size() > max_triplets) {
      tree.triplets.resize(max_triplets);
    }
    auto result = pipeline.Generate(tree.triplets);

    json failures = json::array();
    for (const auto& f : result.failures) {
      failures.push_back({{"triplet_index", f.triplet_index},
                          {"error", std::string(relpii::ErrorCodeName(f.code))},
                          {"message", f.message}});
    }
    json report = {{"pairs", pairs.size()},
                   {"raw_triplets", tree.raw_count},
                   {"duplicates_removed", tree.duplicates_removed},
                   {"shortfall", tree.shortfall},
                   {"triplets", tree.triplets.size()},
                   {"samples", result.samples.size()},
                   {"failures", failures},
                   {"warnings", result.warnings},
                   {"retrieval_calls", result.retrieval_calls},
                   {"model_calls", gateway->calls()},
                   {"retries", gateway->retries()}};
    auto ds = std::make_unique<relpii_dataset>();
    ds->samples = std::move(result.samples);
    Emit(report_json, report.dump(2));
    *out = ds.release();
  });
}

RELPII_API relpii_status relpii_detect(relpii_provider* provider, const relpii_dataset* ds,
                                       const char* options_json,
                                       const char* predictions_path, char** report_json) {
  return Guard([&] {
    Require(ds, "dataset");
    Require(predictions_path, "predictions_path");
    Options o(options_json, {kModelKeys, {"engine", "variant"}});
    relpii::DetectionRunOptions run;
    const auto engine = o.Get<std::string>("engine", "llm");
    if (engine != "llm" && engine != "rules") {
      throw Error(ErrorCode::kUsage, "engine must be llm or rules");
    }
    run.use_rules = engine == "rules";
    const auto variant = o.Get<std::string>("variant", "finetuned");
    if (variant == "pretrained") {
      run.variant = relpii::InstructionVariant::kPretrained;
    } else if (variant != "finetuned") {
      throw Error(ErrorCode::kUsage, "variant must be finetuned or pretrained");
    }
    run.params = ParamsFrom(o);
    run.parallelism = ParallelismFrom(o);
    const auto prompts = CatalogFrom(o);
    std::unique_ptr<relpii::Gateway> gateway;
    if (!run.use_rules) gateway = GatewayFrom(provider, o);

    relpii::DetectionRunStats stats;
    const auto records =
        relpii::DetectDataset(gateway.get(), prompts, ds->samples, run, &stats);
    relpii::SavePredictions(predictions_path, records);
    Emit(report_json, json{{"engine", engine},
                           {"samples", stats.samples},
                           {"entries", stats.entries},
                           {"parse_errors", stats.parse_errors},
                           {"provider_errors", stats.provider_errors},
                           {"dropped_unknown_type", stats.dropped_unknown_type},
                           {"dropped_malformed", stats.dropped_malformed},
                           {"dropped_absent", stats.dropped_absent}}
                          .dump(2));
  });
}

RELPII_API relpii_status relpii_evaluate(const relpii_dataset* gold,
                                         const char* predictions_path,
                                         const char* options_json, char** report_json,
                                         char** table_out) {
  return Guard([&] {
    Require(gold, "gold dataset");
    Require(predictions_path, "predictions_path");
    Options o(options_json, {{"threshold", "casefold", "strip_punctuation", "label"}});
    relpii::MatchConfig config;
    config.match_threshold = o.Get<double>("threshold", config.match_threshold);
    config.casefold = o.Get<bool>("casefold", config.casefold);
    config.strip_punctuation_edges =
        o.Get<bool>("strip_punctuation", config.strip_punctuation_edges);
    config.Validate();
    std::size_t unlocalizable = 0;
    const auto preds = SpansFromFile(gold->samples, predictions_path, &unlocalizable);
    const auto report = relpii::ComputeMetrics(gold->samples, preds, config);
    auto j = relpii::MetricsToJson(report);
    j["unlocalizable"] = unlocalizable;
    j["threshold"] = config.match_threshold;
    std::string table = relpii::FormatMetricsTable(
        report, o.Get<std::string>("label", "detector"));
    table += "\nunlocalizable predictions: " + std::to_string(unlocalizable) + "\n";
    Emit(report_json, j.dump(2));
    try {
      Emit(table_out, table);
    } catch (...) {
      if (report_json) std::free(*report_json);
      throw;
    }
  });
}

RELPII_API relpii_status relpii_redact(const relpii_dataset* ds, const char* predictions_path,
                                       const char* strategy, relpii_dataset** out,
                                       char** plan_log_jsonl) {
  return Guard([&] {
    Require(ds, "dataset");
    Require(strategy, "strategy");
    Require(out, "out");
    const auto s = relpii::MaskStrategyFromName(strategy);
    if (!s) {
      throw Error(ErrorCode::kUsage,
                  std::string("unknown strategy \"") + strategy + "\"");
    }
    std::optional<relpii::SamplePredictions> preds;
    if (predictions_path) preds = SpansFromFile(ds->samples, predictions_path, nullptr);
    auto result = std::make_unique<relpii_dataset>();
    std::string log;
    for (const auto& sample : ds->samples) {
      const auto* spans = &sample.spans;
      static const std::vector<relpii::PiiSpan> kNone;
      if (preds) {
        auto it = preds->find(sample.id);
        spans = it == preds->end() ? &kNone : &it->second;
      }
      const auto plan = relpii::PlanRedaction(*spans, *s);
      relpii::Sample masked = sample;
      masked.context = relpii::ApplyRedaction(sample.context, plan);
      masked.spans.clear();
      result->samples.push_back(std::move(masked));
      log += relpii::PlanToJson(sample.id, *s, plan).dump() + "\n";
    }
    Emit(plan_log_jsonl, log);
    *out = result.release();
  });
}

RELPII_API relpii_status relpii_judge(relpii_provider* provider, const relpii_dataset* ds,
                                      const char* predictions_path,
                                      const char* options_json, char** report_json,
                                      char** table_out) {
  return Guard([&] {
    Require(ds, "dataset");
    Options o(options_json, {kModelKeys, {"single_pass", "swap_settings"}});
    auto gateway = GatewayFrom(provider, o);
    const auto prompts = CatalogFrom(o);
    relpii::UtilityConfig config;
    config.params = ParamsFrom(o);
    config.parallelism = ParallelismFrom(o);
    config.single_pass = o.Get<bool>("single_pass", false);
    if (o.Get<bool>("swap_settings", false)) {
      std::swap(config.candidate, config.baseline);
    }
    std::optional<relpii::SamplePredictions> preds;
    if (predictions_path) preds = SpansFromFile(ds->samples, predictions_path, nullptr);
    const auto report = relpii::RunUtilityEval(*gateway, prompts, ds->samples,
                                               preds ? &*preds : nullptr, config);
    std::string j = relpii::UtilityToJson(report, config).dump(2);
    std::string table = relpii::FormatUtilityTable(report);
    Emit(report_json, j);
    try {
      Emit(table_out, table);
    } catch (...) {
      if (report_json) std::free(*report_json);
      throw;
    }
  });
}

RELPII_API relpii_status relpii_server_start(const char* dataset_path,
                                             const char* options_json,
                                             relpii_server** out) {
  return Guard([&] {
    Require(dataset_path, "dataset_path");
    Require(out, "out");
    Options o(options_json, {{"host", "port", "ui_dir", "audit_log"}});
    auto server = std::make_unique<relpii_server>();
    std::optional<std::filesystem::path> audit;
    if (o.Has("audit_log")) audit = o.Get<std::string>("audit_log", "");
    server->store = std::make_unique<relpii::ReviewStore>(dataset_path, audit);
    std::optional<std::filesystem::path> ui;
    if (o.Has("ui_dir")) ui = o.Get<std::string>("ui_dir", "");
    server->server = std::make_unique<relpii::ReviewServer>(*server->store, ui);
    const int port = o.Get<int>("port", 0);
    if (port < 0 || port > 65535) throw Error(ErrorCode::kUsage, "port out of range");
    server->server->Start(o.Get<std::string>("host", "127.0.0.1"), port);
    *out = server.release();
  });
}

RELPII_API int relpii_server_port(const relpii_server* server) {
  return server && server->server ? server->server->port() : -1;
}

RELPII_API void relpii_server_wait(relpii_server* server) {
  if (server && server->server) server->server->Wait();
}

RELPII_API void relpii_server_stop(relpii_server* server) {
  if (server && server->server) server->server->Stop();
}

RELPII_API void relpii_server_free(relpii_server* server) {
  if (!server) return;
  if (server->server) server->server->Stop();
  delete server;
}

}  // extern "C"
