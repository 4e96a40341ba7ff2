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

// End-to-end benchmark and optimization runs over a bench manifest.

#ifndef TASKDV_WORKFLOW_H_
#define TASKDV_WORKFLOW_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "taskdv/backend.h"
#include "taskdv/harness.h"
#include "taskdv/pipeline.h"
#include "taskdv/prompts.h"
#include "taskdv/sifta.h"

namespace taskdv {

struct LoadedDataset {
  const harness::BenchDataset* spec = nullptr;
  Dataset sample;
  std::map<std::string, Dataset> batches;
  std::map<std::string, std::string> stripped;  // task id -> assertion-free source
};

LoadedDataset LoadDataset(const harness::BenchDataset& spec);

using TaskBatch = std::pair<std::string, std::string>;

// Ground truth for each pair, runs spread over `parallelism` workers.
std::map<TaskBatch, harness::Label> LabelPairs(const LoadedDataset& ds,
                                               const std::vector<TaskBatch>& pairs,
                                               size_t parallelism);

// "all" is every task with every batch; other names come from
// ScenarioSpec::Pairs under the split seed.
std::vector<TaskBatch> ScenarioPairs(const harness::BenchDataset& spec,
                                     const std::string& scenario, uint64_t split_seed);

struct BenchOptions {
  std::string scenario = "all";
  uint64_t split_seed = 0;
  PromptSet prompts = PromptSet::Defaults();
  PipelineOptions pipeline;
};

struct DatasetBench {
  std::string name;
  std::vector<harness::Decision> system;
  std::vector<harness::Decision> baseline;
  std::map<std::string, dsl::DataUnitTest> tests;
  std::map<std::string, GenerationStats> stats;
  dsl::DataUnitTest baseline_test;
  std::vector<std::string> warnings;
};

struct BenchResult {
  std::string scenario;
  std::vector<DatasetBench> datasets;
  harness::Metrics system;
  harness::Metrics baseline;
};

BenchResult RunBench(const harness::BenchManifest& manifest, Backend& backend,
                     const BenchOptions& options);
nlohmann::ordered_json BenchMetricsJson(const BenchResult& r);
std::vector<harness::Decision> AllDecisions(const BenchResult& r);

struct OptimizeRun {
  harness::ScenarioSpec split;
  sifta::SiftaResult result;
};

// Optimizes on train tasks x observed batches, scoring on eval tasks x
// observed batches.
OptimizeRun OptimizeDataset(const harness::BenchDataset& spec, Backend& backend,
                            sifta::Proposer& proposer, const sifta::SiftaConfig& config,
                            const PromptSet& initial, const PipelineOptions& pipeline,
                            uint64_t split_seed);

}  // namespace taskdv

#endif  // TASKDV_WORKFLOW_H_
