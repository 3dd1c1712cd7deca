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


/* C interface to the relpii library.
 *
 * Objects are opaque handles released with the matching *_free call.
 * Functions return a relpii_status; on failure relpii_last_error() holds a
 * message for the calling thread until its next failing call. Strings
 * returned through char** outputs are owned by the caller and released with
 * relpii_string_free().
 *
 * Options are JSON objects passed as strings; NULL or "" means defaults.
 * Unknown keys are rejected with RELPII_ERR_USAGE.
 */

#ifndef RELPII_RELPII_H_
#define RELPII_RELPII_H_

#include <stddef.h>

#if defined(RELPII_BUILDING_LIBRARY)
#define RELPII_API __attribute__((visibility("default")))
#else
#define RELPII_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum relpii_status {
  RELPII_OK = 0,
  RELPII_ERR_INTERNAL = 1,
  RELPII_ERR_USAGE = 2,
  RELPII_ERR_IO = 3,
  RELPII_ERR_PARSE = 4,
  RELPII_ERR_VALIDATION = 5,
  RELPII_ERR_NOT_FOUND = 6,
  RELPII_ERR_MISSING_VAR = 7,
  RELPII_ERR_UNKNOWN_VAR = 8,
  RELPII_ERR_PROVIDER = 9,
  RELPII_ERR_AUTH = 10,
  RELPII_ERR_TIMEOUT = 11,
  RELPII_ERR_FORMAT = 12,
  RELPII_ERR_PII_DROPPED = 13,
  RELPII_ERR_EMPTY_QUESTION = 14,
  RELPII_ERR_RECONCILE = 15,
  RELPII_ERR_RANGE_OUT_OF_BOUNDS = 16,
  RELPII_ERR_VERDICT_PARSE = 17,
  RELPII_ERR_REVISION_CONFLICT = 18,
  RELPII_ERR_UNKNOWN_SAMPLE_ID = 19,
  RELPII_ERR_INVALID_INPUT = 20
} relpii_status;

typedef struct relpii_dataset relpii_dataset;
typedef struct relpii_provider relpii_provider;
typedef struct relpii_server relpii_server;

RELPII_API const char* relpii_version(void);
RELPII_API const char* relpii_last_error(void);
/* "ValidationError", "RevisionConflict", ... */
RELPII_API const char* relpii_status_name(relpii_status status);
RELPII_API void relpii_string_free(char* s);

/* Writes `content` to a sibling temp file, syncs it and renames it over
 * `path`. */
RELPII_API relpii_status relpii_write_file(const char* path, const char* content);

/* ---- datasets (JSONL, one sample per line) ---- */

RELPII_API relpii_status relpii_dataset_load(const char* path,
                                             relpii_dataset** out);
RELPII_API relpii_status relpii_dataset_parse(const char* jsonl,
                                              relpii_dataset** out);
/* Atomic: written to a temp file and renamed. */
RELPII_API relpii_status relpii_dataset_save(const relpii_dataset* ds,
                                             const char* path);
RELPII_API relpii_status relpii_dataset_to_jsonl(const relpii_dataset* ds,
                                                 char** out);
RELPII_API size_t relpii_dataset_size(const relpii_dataset* ds);
/* Per-type totals and relevance proportions; either output may be NULL. */
RELPII_API relpii_status relpii_dataset_stats(const relpii_dataset* ds,
                                              char** json_out,
                                              char** table_out);
RELPII_API void relpii_dataset_free(relpii_dataset* ds);

/* ---- model providers ---- */

/* {"strict": true, "fixtures": "<jsonl path>", "synthetic": true}
 * "synthetic" installs the built-in offline responder. */
RELPII_API relpii_status relpii_provider_open_mock(const char* options_json,
                                                   relpii_provider** out);
/* OpenAI-compatible endpoint; api_key may be NULL. */
RELPII_API relpii_status relpii_provider_open_http(const char* endpoint,
                                                   const char* api_key,
                                                   relpii_provider** out);
/* RELPII_ENDPOINT, RELPII_API_KEY. */
RELPII_API relpii_status relpii_provider_open_env(relpii_provider** out);
RELPII_API void relpii_provider_free(relpii_provider* p);

/* Options shared by model-backed operations:
 *   "model", "temperature", "top_p", "max_retries", "timeout_ms",
 *   "max_in_flight", "initial_backoff_ms", "run_log", "prompts_dir",
 *   "parallelism", "seed"
 */

/* Topic tree, then one sample per triplet. Extra options:
 *   "topics_per_pair" (10), "subtopics_per_topic" (20), "max_triplets"
 *   (0 = all), "min_peripheral" (2), "max_peripheral" (4), "id_prefix",
 *   "pairs" (list of ["type", "type"]; default all 78).
 * report_json (may be NULL) receives counts, failures and warnings. */
RELPII_API relpii_status relpii_generate(relpii_provider* provider,
                                         const char* options_json,
                                         relpii_dataset** out,
                                         char** report_json);

/* Writes a predictions file (JSONL). provider may be NULL with
 * {"engine": "rules"}. Extra options: "engine" ("llm" | "rules"),
 * "variant" ("finetuned" | "pretrained"). */
RELPII_API relpii_status relpii_detect(relpii_provider* provider,
                                       const relpii_dataset* ds,
                                       const char* options_json,
                                       const char* predictions_path,
                                       char** report_json);

/* Options: "threshold" (0.5), "casefold", "strip_punctuation", "label". */
RELPII_API relpii_status relpii_evaluate(const relpii_dataset* gold,
                                         const char* predictions_path,
                                         const char* options_json,
                                         char** report_json,
                                         char** table_out);

/* strategy: "full" | "low-relevance". Spans come from predictions_path
 * when given, else from the dataset. The result has masked contexts and
 * no spans; plan_log_jsonl (may be NULL) gets one plan per sample. */
RELPII_API relpii_status relpii_redact(const relpii_dataset* ds,
                                       const char* predictions_path,
                                       const char* strategy,
                                       relpii_dataset** out,
                                       char** plan_log_jsonl);

/* Extra options: "single_pass" (false), "swap_settings" (false). */
RELPII_API relpii_status relpii_judge(relpii_provider* provider,
                                      const relpii_dataset* ds,
                                      const char* predictions_path,
                                      const char* options_json,
                                      char** report_json, char** table_out);

/* ---- review service ---- */

/* Options: "host" ("127.0.0.1"), "port" (0 = any free port), "ui_dir",
 * "audit_log". Returns once the server accepts connections. */
RELPII_API relpii_status relpii_server_start(const char* dataset_path,
                                             const char* options_json,
                                             relpii_server** out);
RELPII_API int relpii_server_port(const relpii_server* server);
/* Blocks until relpii_server_stop is called from another thread. */
RELPII_API void relpii_server_wait(relpii_server* server);
RELPII_API void relpii_server_stop(relpii_server* server);
RELPII_API void relpii_server_free(relpii_server* server);

#ifdef __cplusplus
}
#endif

#endif /* RELPII_RELPII_H_ */
