// Copyright 2026 The taskdv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Chat-model backends. All implementations are safe to call from several
// threads at once.

#ifndef TASKDV_BACKEND_H_
#define TASKDV_BACKEND_H_

#include <atomic>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace taskdv {

struct DecodingParams {
  double temperature = 0.0;
  int max_tokens = 2048;

  friend bool operator==(const DecodingParams&, const DecodingParams&) = default;
};

struct ModelRequest {
  std::string method;
  std::string prompt;
  // Routing hints for transcript lookup; not sent to live models.
  std::string task;
  std::string subject;
  DecodingParams decoding;

  std::string TranscriptKey() const {
    return subject.empty() ? task : task + "." + subject;
  }
};

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct ModelResponse {
  std::string text;
  TokenUsage usage;
};

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual ModelResponse Complete(const ModelRequest& request) = 0;
  virtual std::string model_id() const = 0;
};

// Replays scripted responses from `<root>/<method>/<file>.json`, trying
// `<task>.<subject>`, then `<task>`, then `default`. A file holds
// {"responses": [{"when": "substring", "payload": {...}} | {"text": "raw"}]};
// the first entry whose `when` occurs in the prompt (or has no `when`) wins.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::filesystem::path root);

  ModelResponse Complete(const ModelRequest& request) override;
  std::string model_id() const override { return "mock"; }
  uint64_t calls() const { return calls_; }

 private:
  const nlohmann::json* Load(const std::filesystem::path& file);

  std::filesystem::path root_;
  std::atomic<uint64_t> calls_{0};
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<nlohmann::json>> files_;
};

struct HttpBackendOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o-mini";
  std::string token_env = "OPENAI_API_KEY";
  int timeout_seconds = 120;
  int max_retries = 3;
};

// OpenAI-compatible chat completions over HTTP(S).
class HttpBackend : public Backend {
 public:
  // Throws BackendError when the token variable is unset.
  explicit HttpBackend(HttpBackendOptions options);

  ModelResponse Complete(const ModelRequest& request) override;
  std::string model_id() const override { return options_.model; }

 private:
  HttpBackendOptions options_;
  std::string token_;
};

// Memoizes another backend by sha256(method, prompt, model, decoding). With
// a directory, entries persist across runs as `<dir>/<key>.json`. Concurrent
// identical requests share one underlying call.
class CachingBackend : public Backend {
 public:
  CachingBackend(Backend& inner, std::filesystem::path dir = {});

  ModelResponse Complete(const ModelRequest& request) override;
  std::string model_id() const override { return inner_.model_id(); }

  uint64_t inner_calls() const { return inner_calls_; }
  uint64_t hits() const { return hits_; }
  std::string CacheKey(const ModelRequest& request) const;

 private:
  Backend& inner_;
  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::string, std::shared_future<ModelResponse>> entries_;
  std::atomic<uint64_t> inner_calls_{0};
  std::atomic<uint64_t> hits_{0};
};

}  // namespace taskdv

#endif  // TASKDV_BACKEND_H_
