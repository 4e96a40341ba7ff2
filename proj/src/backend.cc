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

#include "taskdv/backend.h"

#include <fstream>

#include "taskdv/tabular.h"
#include "taskdv/text.h"

namespace taskdv {

MockBackend::MockBackend(std::filesystem::path root) : root_(std::move(root)) {}

const nlohmann::json* MockBackend::Load(const std::filesystem::path& file) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string key = file.string();
  auto it = files_.find(key);
  if (it != files_.end()) return it->second.get();
  std::unique_ptr<nlohmann::json> parsed;
  if (std::filesystem::exists(file)) {
    try {
      parsed = std::make_unique<nlohmann::json>(nlohmann::json::parse(ReadFile(file)));
    } catch (const nlohmann::json::exception& e) {
      throw BackendError("bad transcript " + key + ": " + e.what());
    }
  }
  return files_.emplace(key, std::move(parsed)).first->second.get();
}

ModelResponse MockBackend::Complete(const ModelRequest& request) {
  ++calls_;
  std::filesystem::path dir = root_ / request.method;
  std::vector<std::string> candidates;
  if (!request.subject.empty()) candidates.push_back(request.TranscriptKey());
  if (!request.task.empty()) candidates.push_back(request.task);
  candidates.push_back("default");
  for (const std::string& name : candidates) {
    const nlohmann::json* doc = Load(dir / (name + ".json"));
    if (doc == nullptr) continue;
    for (const auto& entry : doc->at("responses")) {
      if (entry.contains("when") &&
          request.prompt.find(entry["when"].get<std::string>()) == std::string::npos) {
        continue;
      }
      ModelResponse r;
      r.text = entry.contains("payload") ? entry["payload"].dump()
                                         : entry.at("text").get<std::string>();
      r.usage.prompt_tokens = static_cast<int>(request.prompt.size() / 4);
      r.usage.completion_tokens = static_cast<int>(r.text.size() / 4);
      return r;
    }
  }
  throw BackendError("no scripted response for " + request.method + "/" +
                     request.TranscriptKey());
}

CachingBackend::CachingBackend(Backend& inner, std::filesystem::path dir)
    : inner_(inner), dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string CachingBackend::CacheKey(const ModelRequest& request) const {
  nlohmann::ordered_json j;
  j["method"] = request.method;
  j["prompt"] = request.prompt;
  j["model"] = inner_.model_id();
  j["temperature"] = request.decoding.temperature;
  j["max_tokens"] = request.decoding.max_tokens;
  return Sha256Hex(j.dump());
}

ModelResponse CachingBackend::Complete(const ModelRequest& request) {
  std::string key = CacheKey(request);
  std::promise<ModelResponse> promise;
  std::unique_lock<std::mutex> lock(mu_);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    ++hits_;
    std::shared_future<ModelResponse> pending = it->second;
    lock.unlock();
    return pending.get();
  }
  entries_.emplace(key, promise.get_future().share());
  lock.unlock();

  std::filesystem::path file = dir_.empty() ? std::filesystem::path()
                                            : dir_ / (key + ".json");
  try {
    ModelResponse r;
    bool loaded = false;
    if (!file.empty() && std::filesystem::exists(file)) {
      try {
        auto j = nlohmann::json::parse(ReadFile(file));
        r.text = j.at("text").get<std::string>();
        r.usage.prompt_tokens = j.value("prompt_tokens", 0);
        r.usage.completion_tokens = j.value("completion_tokens", 0);
        loaded = true;
        ++hits_;
      } catch (const std::exception&) {
        loaded = false;
      }
    }
    if (!loaded) {
      ++inner_calls_;
      r = inner_.Complete(request);
      if (!file.empty()) {
        nlohmann::ordered_json j;
        j["method"] = request.method;
        j["text"] = r.text;
        j["prompt_tokens"] = r.usage.prompt_tokens;
        j["completion_tokens"] = r.usage.completion_tokens;
        std::filesystem::path tmp = file;
        tmp += ".tmp";
        WriteFile(tmp, j.dump());
        std::filesystem::rename(tmp, file);
      }
    }
    promise.set_value(r);
    return r;
  } catch (...) {
    promise.set_exception(std::current_exception());
    lock.lock();
    entries_.erase(key);
    throw;
  }
}

}  // namespace taskdv
