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

// Task-aware test generation: column discovery, dataflow spans, assumption
// summaries, constraint generation and sample pre-check, plus the profile-only
// baseline suggester.

#ifndef TASKDV_PIPELINE_H_
#define TASKDV_PIPELINE_H_

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "taskdv/backend.h"
#include "taskdv/dsl.h"
#include "taskdv/evaluate.h"
#include "taskdv/graph.h"
#include "taskdv/profile.h"
#include "taskdv/prompts.h"

namespace taskdv {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerationContext {
  std::string task_id;
  std::string task_file;  // recorded on code spans
  std::string source;     // assertion-stripped task code
  DataProfile profile;
  std::vector<std::string> columns;
  AssumptionGraph graph;
};

struct PipelineOptions {
  size_t parallelism = 4;
  int max_reasks = 2;
  DecodingParams decoding;
  dsl::EvalOptions eval;
  ProfileOptions profile;
};

struct GenerationStats {
  size_t generated = 0;       // distinct parsed candidates
  size_t discarded = 0;       // rejected by pre-check
  size_t non_executable = 0;  // unparseable, or pre-check error
  std::map<std::string, size_t> discard_reasons;
  size_t model_calls = 0;
  size_t failed_nodes = 0;
};

struct GenerationResult {
  dsl::DataUnitTest test;
  AssumptionGraph graph;
  std::vector<std::string> accessed;
  std::vector<ColumnNode> joint;
  GenerationStats stats;
};

// Collects warnings from concurrent workers.
class WarningLog {
 public:
  void Add(std::string message);
  std::vector<std::string> Take();

 private:
  std::mutex mu_;
  std::vector<std::string> items_;
};

class Generator {
 public:
  Generator(Backend& backend, PromptSet prompts, PipelineOptions options = {});

  std::vector<std::string> DiscoverColumnAccess(const GenerationContext& ctx);
  std::vector<ColumnNode> DiscoverJointColumnAccess(const GenerationContext& ctx,
                                                    const std::vector<std::string>& accessed);
  std::vector<CodeSpan> ColumnDataflow(const GenerationContext& ctx, const std::string& column);
  std::vector<CodeSpan> MultiColumnDataflow(const GenerationContext& ctx,
                                            const ColumnNode& columns);
  // Asks for the node's assumptions over the annotated code and links each
  // into ctx.graph with id `<node key>#<k>`. A node without spans yields [].
  std::vector<std::pair<Assumption, std::vector<CodeSpan>>> SummarizeAndLink(
      GenerationContext& ctx, const ColumnNode& node, const std::vector<CodeSpan>& node_spans,
      const std::string& annotated);
  // Unparseable texts are counted in `*unparseable` and logged.
  std::vector<dsl::Constraint> GenerateColumnConstraints(const GenerationContext& ctx,
                                                         const std::string& column,
                                                         size_t* unparseable = nullptr);
  std::vector<dsl::Constraint> GenerateMultiColumnConstraints(const GenerationContext& ctx,
                                                              const ColumnNode& columns,
                                                              size_t* unparseable = nullptr);

  GenerationResult GenerateUnitTest(const std::string& task_id, const std::string& task_file,
                                    const std::string& source, const Dataset& sample);

  const PromptSet& prompts() const { return prompts_; }
  WarningLog& warnings() { return warnings_; }
  size_t calls() const { return calls_; }

 private:
  // Renders, calls the backend, and validates the JSON reply, re-asking up to
  // max_reasks times. Throws GenerationError when every attempt is malformed.
  nlohmann::json Ask(std::string_view method, const Bindings& bindings,
                     const std::string& task, const std::string& subject,
                     const std::function<std::string(const nlohmann::json&)>& check);
  std::vector<CodeSpan> ParseSpans(const GenerationContext& ctx, const nlohmann::json& reply,
                                   std::string_view what);
  std::vector<dsl::Constraint> GenerateFor(const GenerationContext& ctx, const ColumnNode& node,
                                           size_t* unparseable);

  Backend& backend_;
  PromptSet prompts_;
  PipelineOptions options_;
  WarningLog warnings_;
  std::atomic<size_t> calls_{0};
};

// Source with right-aligned line numbers, as shown to models.
std::string NumberLines(std::string_view source);

// Extracts the outermost JSON object from a reply, tolerating code fences and
// surrounding prose. Throws nlohmann::json::exception when none parses.
nlohmann::json ExtractJson(std::string_view reply);

// Profile-only constraint heuristics.
dsl::DataUnitTest SuggestTaskAgnostic(const DataProfile& profile,
                                      const std::string& test_id = "task_agnostic");

nlohmann::ordered_json StatsToJson(const GenerationStats& s);

}  // namespace taskdv

#endif  // TASKDV_PIPELINE_H_
