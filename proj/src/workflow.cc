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

#include "taskdv/workflow.h"

#include <algorithm>

#include "taskdv/evaluate.h"
#include "taskdv/parallel.h"
#include "taskdv/profile.h"

namespace taskdv {

namespace {

std::vector<std::string> TaskIds(const harness::BenchDataset& spec) {
  std::vector<std::string> ids;
  for (const auto& t : spec.tasks) ids.push_back(t.artifact.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

const harness::BenchTask& FindTask(const harness::BenchDataset& spec, const std::string& id) {
  for (const auto& t : spec.tasks) {
    if (t.artifact.id == id) return t;
  }
  throw std::invalid_argument("unknown task " + id);
}

}  // namespace

LoadedDataset LoadDataset(const harness::BenchDataset& spec) {
  LoadedDataset ds;
  ds.spec = &spec;
  ds.sample = LoadTable(spec.sample);
  for (const auto& id : spec.batches) ds.batches.emplace(id, LoadTable(spec.BatchPath(id)));
  for (const auto& t : spec.tasks) {
    ds.stripped[t.artifact.id] =
        harness::StripAssertions(ReadFile(t.artifact.script_path)).stripped;
  }
  return ds;
}

std::map<TaskBatch, harness::Label> LabelPairs(const LoadedDataset& ds,
                                               const std::vector<TaskBatch>& pairs,
                                               size_t parallelism) {
  auto labels = ParallelMap<harness::Label>(pairs.size(), parallelism, [&](size_t i) {
    const auto& [task, batch] = pairs[i];
    return harness::LabelBatch(FindTask(*ds.spec, task).artifact, ds.batches.at(batch));
  });
  std::map<TaskBatch, harness::Label> out;
  for (size_t i = 0; i < pairs.size(); ++i) out[pairs[i]] = labels[i];
  return out;
}

std::vector<TaskBatch> ScenarioPairs(const harness::BenchDataset& spec,
                                     const std::string& scenario, uint64_t split_seed) {
  std::vector<std::string> batches = spec.batches;
  std::sort(batches.begin(), batches.end());
  if (scenario == "all") {
    std::vector<TaskBatch> out;
    for (const auto& t : TaskIds(spec)) {
      for (const auto& b : batches) out.emplace_back(t, b);
    }
    return out;
  }
  return harness::MakeScenarios(TaskIds(spec), batches, split_seed).Pairs(scenario);
}

BenchResult RunBench(const harness::BenchManifest& manifest, Backend& backend,
                     const BenchOptions& options) {
  BenchResult result;
  result.scenario = options.scenario;
  for (const auto& spec : manifest.datasets) {
    LoadedDataset ds = LoadDataset(spec);
    auto pairs = ScenarioPairs(spec, options.scenario, options.split_seed);
    auto labels = LabelPairs(ds, pairs, options.pipeline.parallelism);

    DatasetBench db;
    db.name = spec.name;
    std::vector<std::string> tasks;
    for (const auto& [t, b] : pairs) {
      if (std::find(tasks.begin(), tasks.end(), t) == tasks.end()) tasks.push_back(t);
    }
    for (const auto& task : tasks) {
      const auto& bt = FindTask(spec, task);
      Generator gen(backend, options.prompts, options.pipeline);
      try {
        GenerationResult g = gen.GenerateUnitTest(task, bt.file, ds.stripped.at(task), ds.sample);
        db.tests[task] = std::move(g.test);
        db.stats[task] = g.stats;
      } catch (const GenerationError& e) {
        db.warnings.push_back(task + ": generation failed: " + e.what());
        db.tests[task].id = task;
        db.tests[task].task_id = task;
      }
      for (auto& w : gen.warnings().Take()) db.warnings.push_back(std::move(w));
    }
    ProfileOptions popts = options.pipeline.profile;
    db.baseline_test = SuggestTaskAgnostic(ProfileData(ds.sample, popts), spec.name + ".baseline");

    std::map<std::string, bool> baseline_reject;
    for (const auto& [task, batch] : pairs) {
      const Dataset& data = ds.batches.at(batch);
      harness::Label label = labels.at({task, batch});
      bool reject =
          dsl::EvaluateTest(db.tests.at(task), data, batch, options.pipeline.eval).rejected();
      db.system.push_back({task, batch, reject, label});
      auto it = baseline_reject.find(batch);
      if (it == baseline_reject.end()) {
        bool r = dsl::EvaluateTest(db.baseline_test, data, batch, options.pipeline.eval).rejected();
        it = baseline_reject.emplace(batch, r).first;
      }
      db.baseline.push_back({task, batch, it->second, label});
    }
    result.datasets.push_back(std::move(db));
  }
  std::vector<harness::Decision> sys, base;
  for (const auto& d : result.datasets) {
    sys.insert(sys.end(), d.system.begin(), d.system.end());
    base.insert(base.end(), d.baseline.begin(), d.baseline.end());
  }
  result.system = harness::Evaluate(sys);
  result.baseline = harness::Evaluate(base);
  return result;
}

nlohmann::ordered_json BenchMetricsJson(const BenchResult& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["overall"] = {{"task_aware", harness::MetricsToJson(r.system)},
                  {"task_agnostic", harness::MetricsToJson(r.baseline)}};
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& d : r.datasets) {
    per[d.name] = {{"task_aware", harness::MetricsToJson(harness::Evaluate(d.system))},
                   {"task_agnostic", harness::MetricsToJson(harness::Evaluate(d.baseline))}};
  }
  j["datasets"] = per;
  return j;
}

std::vector<harness::Decision> AllDecisions(const BenchResult& r) {
  std::vector<harness::Decision> out;
  for (const auto& d : r.datasets) out.insert(out.end(), d.system.begin(), d.system.end());
  return out;
}

OptimizeRun OptimizeDataset(const harness::BenchDataset& spec, Backend& backend,
                            sifta::Proposer& proposer, const sifta::SiftaConfig& config,
                            const PromptSet& initial, const PipelineOptions& pipeline,
                            uint64_t split_seed) {
  LoadedDataset ds = LoadDataset(spec);
  OptimizeRun run;
  std::vector<std::string> batches = spec.batches;
  std::sort(batches.begin(), batches.end());
  run.split = harness::MakeScenarios(TaskIds(spec), batches, split_seed);

  auto train_pairs = run.split.Pairs("optimize_train");
  auto eval_pairs = run.split.Pairs("optimize_eval");
  std::vector<TaskBatch> all = train_pairs;
  all.insert(all.end(), eval_pairs.begin(), eval_pairs.end());
  auto labels = LabelPairs(ds, all, pipeline.parallelism);

  sifta::ObservationSet obs;
  auto outcome = [&](const TaskBatch& p) {
    return labels.at(p) == harness::Label::kSafe ? 1 : 0;
  };
  for (const auto& p : train_pairs) obs.train.push_back({p.first, p.second, outcome(p)});
  for (const auto& p : eval_pairs) obs.eval.push_back({p.first, p.second, outcome(p)});

  std::map<std::string, sifta::TaskInput> inputs;
  for (const auto& t : spec.tasks) {
    inputs[t.artifact.id] = {t.file, ds.stripped.at(t.artifact.id), ds.sample};
  }
  sifta::PipelineTestProvider provider(backend, std::move(inputs), pipeline);
  sifta::Scorer scorer(provider, ds.batches, pipeline.eval);
  run.result = sifta::Optimize(config, obs, initial, scorer, proposer);
  return run;
}

}  // namespace taskdv
