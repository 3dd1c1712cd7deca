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

// Text-completion providers and the retrying, rate-bounded gateway in front
// of them. A provider takes one prompt (sent as a single user message) and
// returns one text output.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "io.hpp"

namespace relpii {

struct LlmParams {
  std::string model_name = "gpt-5-chat-latest";
  double temperature = 1.0;
  double top_p = 1.0;
  int max_retries = 3;
  std::chrono::milliseconds timeout{60000};

  // temperature >= 0, 0 < top_p <= 1, max_retries >= 0.
  void Validate() const;
};

// Hex FNV-1a 64 of the prompt bytes. Stable across runs and platforms.
std::string PromptFingerprint(std::string_view prompt);

struct Completion {
  std::string text;
  std::optional<std::int64_t> prompt_tokens;
  std::optional<std::int64_t> completion_tokens;
};

// Thrown by providers. Transient failures are retried by the gateway.
class ProviderFailure : public Error {
 public:
  ProviderFailure(ErrorCode code, const std::string& message, bool transient)
      : Error(code, message), transient_(transient) {}
  bool transient() const noexcept { return transient_; }

 private:
  bool transient_;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual Completion Send(const std::string& prompt, const LlmParams& params) = 0;
  virtual std::string Describe() const = 0;
};

// OpenAI-compatible chat endpoint: POST {endpoint}/chat/completions.
class HttpProvider : public Provider {
 public:
  HttpProvider(std::string endpoint, std::string api_key);
  Completion Send(const std::string& prompt, const LlmParams& params) override;
  std::string Describe() const override { return "http:" + endpoint_; }

 private:
  std::string endpoint_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string base_path_;
};

// Environment: RELPII_ENDPOINT (required), RELPII_API_KEY, RELPII_MODEL.
std::unique_ptr<HttpProvider> HttpProviderFromEnvironment();
std::optional<std::string> ModelFromEnvironment();

// Deterministic offline provider.
//
// Lookup order per call: scripted failures, fixture map (fingerprint ->
// response), responder callback, then either a ProviderError naming the
// fingerprint (strict) or a placeholder answer (lenient).
class MockProvider : public Provider {
 public:
  using Responder = std::function<std::optional<std::string>(std::string_view)>;

  explicit MockProvider(bool strict = true) : strict_(strict) {}

  void AddFixture(std::string_view prompt, std::string response);
  void AddFixtureByFingerprint(std::string fingerprint, std::string response);
  // JSONL of {"prompt" | "fingerprint", "response"}.
  void LoadFixtures(const std::filesystem::path& path);
  void SetResponder(Responder responder);

  // The next `count` calls fail with `code` (transient unless kAuth).
  void FailNext(int count, ErrorCode code = ErrorCode::kProvider);

  Completion Send(const std::string& prompt, const LlmParams& params) override;
  std::string Describe() const override { return "mock"; }

  std::vector<std::string> prompts() const;
  std::size_t call_count() const;

 private:
  bool strict_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> fixtures_;
  Responder responder_;
  std::deque<ErrorCode> failures_;
  std::vector<std::string> prompts_;
};

class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  struct Options {
    std::size_t max_in_flight = 4;
    std::optional<std::filesystem::path> run_log;
    std::chrono::milliseconds initial_backoff{1000};
    double backoff_factor = 2.0;
    double jitter = 0.2;
    std::uint64_t jitter_seed = 0x5eed;
    // Defaults to std::this_thread::sleep_for.
    Sleeper sleep;
  };

  explicit Gateway(std::shared_ptr<Provider> provider);
  Gateway(std::shared_ptr<Provider> provider, Options options);

  // Single text output, retried with exponential backoff on transient
  // failures. Throws Error(kProvider | kAuth | kTimeout).
  std::string Complete(std::string_view prompt, const LlmParams& params);

  Provider& provider() { return *provider_; }
  std::uint64_t calls() const { return calls_.load(); }
  std::uint64_t retries() const { return retries_.load(); }

 private:
  std::chrono::milliseconds Backoff(int attempt);
  void Log(std::string_view fingerprint, const LlmParams& params,
           std::int64_t latency_ms, int retries, const Completion* completion,
           std::string_view status);

  std::shared_ptr<Provider> provider_;
  Options options_;
  std::counting_semaphore<> in_flight_;
  std::unique_ptr<LineLog> log_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> retries_{0};
};

}  // namespace relpii
