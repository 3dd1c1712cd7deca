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

#include "gateway.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace relpii {

using nlohmann::json;

void LlmParams::Validate() const {
  if (!(temperature >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "temperature must be >= 0");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "top_p must be in (0, 1]");
  }
  if (max_retries < 0) {
    throw Error(ErrorCode::kInvalidInput, "max_retries must be >= 0");
  }
}

std::string PromptFingerprint(std::string_view prompt) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : prompt) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- HttpProvider -----------------------------------------------------------

HttpProvider::HttpProvider(std::string endpoint, std::string api_key)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)) {
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
  auto scheme = endpoint_.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kInvalidInput,
                "endpoint must be an http(s) URL: " + endpoint_);
  }
  auto path = endpoint_.find('/', scheme + 3);
  scheme_host_port_ = endpoint_.substr(0, path);
  base_path_ = path == std::string::npos ? "" : endpoint_.substr(path);
}

Completion HttpProvider::Send(const std::string& prompt,
                              const LlmParams& params) {
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(params.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
                         params.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  json body = {
      {"model", params.model_name},
      {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
  };
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(base_path_ + "/chat/completions", headers, body.dump(),
                         "application/json");
  if (!res) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const bool timed_out = elapsed >= params.timeout * 9 / 10;
    const std::string what = httplib::to_string(res.error());
    if (timed_out) {
      throw ProviderFailure(ErrorCode::kTimeout, "request timed out: " + what,
                            true);
    }
    throw ProviderFailure(ErrorCode::kProvider, "transport error: " + what, true);
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    throw ProviderFailure(ErrorCode::kAuth,
                          "authentication failed (HTTP " + std::to_string(status) +
                              ")",
                          false);
  }
  if (status == 408) {
    throw ProviderFailure(ErrorCode::kTimeout, "provider timeout (HTTP 408)", true);
  }
  if (status == 429 || status >= 500) {
    throw ProviderFailure(ErrorCode::kProvider,
                          "provider unavailable (HTTP " + std::to_string(status) +
                              ")",
                          true);
  }
  if (status != 200) {
    throw ProviderFailure(ErrorCode::kProvider,
                          "provider rejected request (HTTP " +
                              std::to_string(status) + "): " + res->body,
                          false);
  }
  try {
    auto j = json::parse(res->body);
    Completion c;
    c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (auto u = j.find("usage"); u != j.end() && u->is_object()) {
      if (u->contains("prompt_tokens")) c.prompt_tokens = (*u)["prompt_tokens"].get<std::int64_t>();
      if (u->contains("completion_tokens")) c.completion_tokens = (*u)["completion_tokens"].get<std::int64_t>();
    }
    return c;
  } catch (const json::exception& e) {
    throw ProviderFailure(ErrorCode::kProvider,
                          std::string("malformed provider response: ") + e.what(),
                          false);
  }
}

std::unique_ptr<HttpProvider> HttpProviderFromEnvironment() {
  const char* endpoint = std::getenv("RELPII_ENDPOINT");
  if (!endpoint || !*endpoint) {
    throw Error(ErrorCode::kInvalidInput,
                "RELPII_ENDPOINT is not set (or use the mock provider)");
  }
  const char* key = std::getenv("RELPII_API_KEY");
  return std::make_unique<HttpProvider>(endpoint, key ? key : "");
}

std::optional<std::string> ModelFromEnvironment() {
  const char* model = std::getenv("RELPII_MODEL");
  if (!model || !*model) return std::nullopt;
  return std::string(model);
}

// --- MockProvider -----------------------------------------------------------

void MockProvider::AddFixture(std::string_view prompt, std::string response) {
  AddFixtureByFingerprint(PromptFingerprint(prompt), std::move(response));
}

void MockProvider::AddFixtureByFingerprint(std::string fingerprint,
                                           std::string response) {
  std::lock_guard lock(mu_);
  fixtures_[std::move(fingerprint)] = std::move(response);
}

void MockProvider::LoadFixtures(const std::filesystem::path& path) {
  const auto content = ReadFile(path);
  std::size_t n = 0;
  for (auto line : SplitLines(content)) {
    ++n;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      auto j = json::parse(line);
      auto response = j.at("response").get<std::string>();
      if (j.contains("fingerprint")) {
        AddFixtureByFingerprint(j["fingerprint"].get<std::string>(),
                                std::move(response));
      } else {
        AddFixture(j.at("prompt").get<std::string>(), std::move(response));
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + " line " +
                                         std::to_string(n) + ": " + e.what());
    }
  }
}

void MockProvider::SetResponder(Responder responder) {
  std::lock_guard lock(mu_);
  responder_ = std::move(responder);
}

void MockProvider::FailNext(int count, ErrorCode code) {
  std::lock_guard lock(mu_);
  for (int i = 0; i < count; ++i) failures_.push_back(code);
}

Completion MockProvider::Send(const std::string& prompt, const LlmParams&) {
  const auto fp = PromptFingerprint(prompt);
  Responder responder;
  {
    std::lock_guard lock(mu_);
    prompts_.push_back(prompt);
    if (!failures_.empty()) {
      const auto code = failures_.front();
      failures_.pop_front();
      throw ProviderFailure(code, "scripted mock failure",
                            code != ErrorCode::kAuth);
    }
    if (auto it = fixtures_.find(fp); it != fixtures_.end()) {
      return Completion{it->second, std::nullopt, std::nullopt};
    }
    responder = responder_;
  }
  if (responder) {
    if (auto r = responder(prompt)) return Completion{*r, std::nullopt, std::nullopt};
  }
  if (strict_) {
    throw ProviderFailure(ErrorCode::kProvider,
                          "mock has no response for prompt fingerprint " + fp,
                          false);
  }
  return Completion{"[mock response " + fp + "]", std::nullopt, std::nullopt};
}

std::vector<std::string> MockProvider::prompts() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

std::size_t MockProvider::call_count() const {
  std::lock_guard lock(mu_);
  return prompts_.size();
}

// --- Gateway ----------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<Provider> provider)
    : Gateway(std::move(provider), Options{}) {}

Gateway::Gateway(std::shared_ptr<Provider> provider, Options options)
    : provider_(std::move(provider)),
      options_(std::move(options)),
      in_flight_(static_cast<std::ptrdiff_t>(
          options_.max_in_flight == 0 ? 1 : options_.max_in_flight)),
      rng_(options_.jitter_seed) {
  if (!provider_) throw Error(ErrorCode::kInvalidInput, "no provider");
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
  }
  if (options_.run_log) log_ = std::make_unique<LineLog>(*options_.run_log);
}

std::chrono::milliseconds Gateway::Backoff(int attempt) {
  double base = static_cast<double>(options_.initial_backoff.count()) *
                std::pow(options_.backoff_factor, attempt);
  double u;
  {
    std::lock_guard lock(rng_mu_);
    u = std::uniform_real_distribution<double>(-1.0, 1.0)(rng_);
  }
  return std::chrono::milliseconds(
      static_cast<std::int64_t>(std::llround(base * (1.0 + options_.jitter * u))));
}

std::string Gateway::Complete(std::string_view prompt, const LlmParams& params) {
  params.Validate();
  const std::string text(prompt);
  const std::string fp = PromptFingerprint(text);

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  const auto started = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - started)
        .count();
  };
  calls_.fetch_add(1);
  int retries = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      Completion c = provider_->Send(text, params);
      Log(fp, params, elapsed_ms(), retries, &c, "ok");
      return std::move(c.text);
    } catch (const ProviderFailure& f) {
      if (!f.transient() || attempt >= params.max_retries) {
        Log(fp, params, elapsed_ms(), retries, nullptr, ErrorCodeName(f.code()));
        if (f.code() == ErrorCode::kAuth || f.code() == ErrorCode::kTimeout) {
          throw Error(f.code(), f.what());
        }
        throw Error(ErrorCode::kProvider,
                    std::string(f.what()) +
                        (f.transient() ? " (after " + std::to_string(retries) +
                                             " retries)"
                                       : ""));
      }
      ++retries;
      retries_.fetch_add(1);
      options_.sleep(Backoff(attempt));
    }
  }
}

void Gateway::Log(std::string_view fingerprint, const LlmParams& params,
                  std::int64_t latency_ms, int retries,
                  const Completion* completion, std::string_view status) {
  if (!log_) return;
  json rec = {{"timestamp", UtcTimestamp()},
              {"prompt_fingerprint", fingerprint},
              {"model", params.model_name},
              {"latency_ms", latency_ms},
              {"retries", retries},
              {"status", status}};
  if (completion && completion->prompt_tokens) {
    rec["prompt_tokens"] = *completion->prompt_tokens;
  }
  if (completion && completion->completion_tokens) {
    rec["completion_tokens"] = *completion->completion_tokens;
  }
  log_->Append(rec.dump());
}

}  // namespace relpii
