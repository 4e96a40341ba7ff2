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

// taskdv command line.
//
// Exit codes: 0 success (validate: pass), 1 validate rejected, 2 validate
// finished with constraint errors only, 64 configuration or usage error,
// 70 runtime failure. Failures print {"error": ..., "message": ...} on
// stderr.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "toml.hpp"
#include "taskdv/backend.h"
#include "taskdv/errorgen.h"
#include "taskdv/evaluate.h"
#include "taskdv/harness.h"
#include "taskdv/pipeline.h"
#include "taskdv/profile.h"
#include "taskdv/prompts.h"
#include "taskdv/sifta.h"
#include "taskdv/tabular.h"
#include "taskdv/workflow.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace taskdv::cli {
namespace {

constexpr int kExitUsage = 64;
constexpr int kExitSoftware = 70;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string cache_dir;
  std::string mock_dir;
  HttpBackendOptions http;
  bool http_set = false;
  size_t parallelism = 4;
  uint64_t seed = 0;
  size_t histogram_threshold = kDefaultHistogramThreshold;
  int task_timeout = 60;
  int max_reasks = 2;
  sifta::SiftaConfig sifta;
};

// Flags; unset ones fall back to environment, then config file.
struct Flags {
  std::string config;
  std::optional<std::string> mock, cache, base_url, model, token_env;
  std::optional<size_t> parallelism, histogram_threshold;
  std::optional<uint64_t> seed;
  std::optional<int> timeout;
  std::optional<int> n_round, b_eval, n_train, n_fb, n_eval, patience;
};

template <typename T>
void FromToml(const toml::table& t, std::string_view section, std::string_view key, T& out,
              bool* touched = nullptr) {
  auto node = section.empty() ? t[key] : t[section][key];
  if (!node) return;
  if constexpr (std::is_same_v<T, std::string>) {
    auto v = node.template value<std::string>();
    if (!v) throw UsageError("config key " + std::string(key) + " must be a string");
    out = *v;
  } else {
    auto v = node.template value<int64_t>();
    if (!v || *v < 0) {
      throw UsageError("config key " + std::string(key) + " must be a non-negative integer");
    }
    out = static_cast<T>(*v);
  }
  if (touched != nullptr) *touched = true;
}

template <typename T>
void FromEnv(const char* name, T& out, bool* touched = nullptr) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return;
  if constexpr (std::is_same_v<T, std::string>) {
    out = v;
  } else {
    try {
      long long n = std::stoll(v);
      if (n < 0) throw std::invalid_argument("negative");
      out = static_cast<T>(n);
    } catch (const std::exception&) {
      throw UsageError(std::string(name) + " must be a non-negative integer");
    }
  }
  if (touched != nullptr) *touched = true;
}

template <typename T, typename U>
void FromFlag(const std::optional<U>& flag, T& out, bool* touched = nullptr) {
  if (!flag) return;
  out = static_cast<T>(*flag);
  if (touched != nullptr) *touched = true;
}

RunConfig ResolveConfig(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    toml::table t;
    try {
      t = toml::parse_file(f.config);
    } catch (const toml::parse_error& e) {
      throw UsageError("cannot parse " + f.config + ": " + std::string(e.description()));
    }
    FromToml(t, "paths", "cache", c.cache_dir);
    FromToml(t, "backend", "mock", c.mock_dir);
    FromToml(t, "backend", "base_url", c.http.base_url, &c.http_set);
    FromToml(t, "backend", "model", c.http.model, &c.http_set);
    FromToml(t, "backend", "token_env", c.http.token_env, &c.http_set);
    FromToml(t, "backend", "max_reasks", c.max_reasks);
    FromToml(t, "", "parallelism", c.parallelism);
    FromToml(t, "", "seed", c.seed);
    FromToml(t, "profile", "histogram_threshold", c.histogram_threshold);
    FromToml(t, "harness", "timeout", c.task_timeout);
    FromToml(t, "sifta", "n_round", c.sifta.n_round);
    FromToml(t, "sifta", "b_eval", c.sifta.b_eval);
    FromToml(t, "sifta", "n_train", c.sifta.n_train);
    FromToml(t, "sifta", "n_fb", c.sifta.n_fb);
    FromToml(t, "sifta", "n_eval", c.sifta.n_eval);
    FromToml(t, "sifta", "early_stop_patience", c.sifta.early_stop_patience);
  }
  FromEnv("TASKDV_CACHE", c.cache_dir);
  FromEnv("TASKDV_MOCK", c.mock_dir);
  FromEnv("TASKDV_BASE_URL", c.http.base_url, &c.http_set);
  FromEnv("TASKDV_MODEL", c.http.model, &c.http_set);
  FromEnv("TASKDV_TOKEN_ENV", c.http.token_env, &c.http_set);
  FromEnv("TASKDV_PARALLELISM", c.parallelism);
  FromEnv("TASKDV_SEED", c.seed);

  FromFlag(f.cache, c.cache_dir);
  FromFlag(f.mock, c.mock_dir);
  FromFlag(f.base_url, c.http.base_url, &c.http_set);
  FromFlag(f.model, c.http.model, &c.http_set);
  FromFlag(f.token_env, c.http.token_env, &c.http_set);
  FromFlag(f.parallelism, c.parallelism);
  FromFlag(f.seed, c.seed);
  FromFlag(f.histogram_threshold, c.histogram_threshold);
  FromFlag(f.timeout, c.task_timeout);
  FromFlag(f.n_round, c.sifta.n_round);
  FromFlag(f.b_eval, c.sifta.b_eval);
  FromFlag(f.n_train, c.sifta.n_train);
  FromFlag(f.n_fb, c.sifta.n_fb);
  FromFlag(f.n_eval, c.sifta.n_eval);
  FromFlag(f.patience, c.sifta.early_stop_patience);

  if (!c.mock_dir.empty() && c.http_set) {
    throw UsageError("a mock backend and live backend settings cannot be combined");
  }
  if (c.parallelism == 0) throw UsageError("parallelism must be positive");
  if (c.task_timeout <= 0) throw UsageError("timeout must be positive");
  c.sifta.seed = c.seed;
  try {
    c.sifta.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

// Owns the configured backend stack: mock or HTTP, behind a cache.
class BackendStack {
 public:
  explicit BackendStack(const RunConfig& c) {
    if (!c.mock_dir.empty()) {
      if (!fs::is_directory(c.mock_dir)) {
        throw UsageError("mock transcript directory not found: " + c.mock_dir);
      }
      inner_ = std::make_unique<MockBackend>(c.mock_dir);
    } else {
      try {
        inner_ = std::make_unique<HttpBackend>(c.http);
      } catch (const BackendError& e) {
        throw UsageError(e.what());
      }
    }
    cache_ = std::make_unique<CachingBackend>(*inner_, c.cache_dir);
  }
  Backend& get() { return *cache_; }

 private:
  std::unique_ptr<Backend> inner_;
  std::unique_ptr<CachingBackend> cache_;
};

PipelineOptions PipelineFrom(const RunConfig& c) {
  PipelineOptions p;
  p.parallelism = c.parallelism;
  p.max_reasks = c.max_reasks;
  p.profile.histogram_threshold = c.histogram_threshold;
  return p;
}

PromptSet LoadPrompts(const std::string& path) {
  if (path.empty()) return PromptSet::Defaults();
  try {
    return PromptSetFromJson(nlohmann::json::parse(ReadFile(path)));
  } catch (const std::exception& e) {
    throw UsageError("cannot load prompt set " + path + ": " + e.what());
  }
}

void RequireFile(const std::string& path, std::string_view what) {
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " not found: " + path);
}

void WriteJson(const fs::path& p, const ordered_json& j) { WriteFile(p, j.dump(2) + "\n"); }

void WriteWarnings(const fs::path& dir, const std::vector<std::string>& warnings) {
  if (warnings.empty()) return;
  std::string text;
  for (const auto& w : warnings) text += w + "\n";
  WriteFile(dir / "warnings.txt", text);
}

harness::TaskArtifact Artifact(const std::string& id, const std::string& script, int timeout) {
  harness::TaskArtifact t;
  t.id = id;
  t.script_path = script;
  t.timeout_seconds = timeout;
  return t;
}

int Run(int argc, char** argv) {
  CLI::App app{"Task-aware data validation: profile data, generate data unit tests from "
               "downstream task code, validate batches, inject errors, label and benchmark."};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "TOML run configuration")->check(CLI::ExistingFile);
  app.add_option("--mock", f.mock, "Replay scripted model responses from this directory");
  app.add_option("--cache", f.cache, "Persist model responses in this directory");
  app.add_option("--base-url", f.base_url, "OpenAI-compatible endpoint");
  app.add_option("--model", f.model, "Model name for the live backend");
  app.add_option("--token-env", f.token_env, "Environment variable holding the API token");
  app.add_option("--parallelism", f.parallelism, "Concurrent model calls and task runs");
  app.add_option("--seed", f.seed, "Seed for sampling and splits");

  std::string data, out, task_file, task_id, sample, prompts, test, batch, errors, script;
  std::string manifest, dataset, scenario = "all", name = "optimized", cases_dir;
  std::vector<std::string> batches;

  auto* profile = app.add_subcommand("profile", "Profile a CSV table");
  profile->add_option("--data", data, "Input CSV")->required();
  profile->add_option("--out", out, "Output directory (profile.json); stdout when omitted");
  profile->add_option("--histogram-threshold", f.histogram_threshold,
                      "Maximum distinct values for a histogram");

  auto* generate = app.add_subcommand("generate", "Generate a data unit test for a task");
  generate->add_option("--task-file", task_file, "Task script")->required();
  generate->add_option("--task-id", task_id, "Task id (default: script stem)");
  generate->add_option("--sample", sample, "Sample CSV")->required();
  generate->add_option("--prompts", prompts, "Prompt set JSON (default: built-in)");
  generate->add_option("--out", out, "Output directory")->required();

  auto* suggest = app.add_subcommand("suggest", "Suggest a task-agnostic test from a profile");
  suggest->add_option("--data", data, "Sample CSV")->required();
  suggest->add_option("--out", out, "Output directory")->required();

  auto* validate = app.add_subcommand("validate", "Evaluate a test on a batch");
  validate->add_option("--test", test, "Test JSON")->required();
  validate->add_option("--batch", batch, "Batch CSV")->required();
  validate->add_option("--out", out, "Output directory (report.json)");

  auto* inject = app.add_subcommand("inject", "Corrupt a table with an error configuration");
  inject->add_option("--data", data, "Clean CSV")->required();
  inject->add_option("--errors", errors, "Error configuration JSON")->required();
  inject->add_option("--out", out, "Output directory for <id>.csv and <id>.meta.json")
      ->required();

  auto* label = app.add_subcommand("label", "Label batches by running a task");
  label->add_option("--script", script, "Task script")->required();
  label->add_option("--task-id", task_id, "Task id (default: script stem)");
  label->add_option("--batch", batches, "Batch CSV (repeatable)")->required();
  label->add_option("--timeout", f.timeout, "Seconds per run");
  label->add_option("--out", out, "Output directory (labels.csv)")->required();

  auto* verify = app.add_subcommand("verify", "Check a task's assertion blocks on its sample");
  verify->add_option("--script", script, "Task script")->required();
  verify->add_option("--sample", sample, "Sample CSV")->required();
  verify->add_option("--timeout", f.timeout, "Seconds per run");

  auto* optimize = app.add_subcommand("optimize", "Adapt the prompt set on observed outcomes");
  optimize->add_option("--manifest", manifest, "bench.json")->required();
  optimize->add_option("--dataset", dataset, "Dataset name (default: first)");
  optimize->add_option("--prompts", prompts, "Initial prompt set JSON");
  optimize->add_option("--name", name, "Name of the optimized prompt set");
  optimize->add_option("--rounds", f.n_round, "Rounds");
  optimize->add_option("--budget", f.b_eval, "Evaluation budget");
  optimize->add_option("--n-train", f.n_train, "Training units per proposal");
  optimize->add_option("--n-fb", f.n_fb, "Feedback constraints per column");
  optimize->add_option("--n-eval", f.n_eval, "Evaluation units per round");
  optimize->add_option("--patience", f.patience, "Stop after this many non-improving proposals");
  optimize->add_option("--out", out, "Output directory")->required();

  auto* bench = app.add_subcommand("bench", "Run the end-to-end benchmark");
  bench->add_option("--manifest", manifest, "bench.json")->required();
  bench->add_option("--scenario", scenario,
                    "all, new_data, new_tasks or new_data_new_tasks")
      ->check(CLI::IsMember({"all", "new_data", "new_tasks", "new_data_new_tasks"}));
  bench->add_option("--prompts", prompts, "Prompt set JSON");
  bench->add_option("--out", out, "Output directory")->required();

  auto* dump = app.add_subcommand("prompts", "Write the built-in prompt set");
  dump->add_option("--out", out, "Output directory (prompts/default.json)")->required();

  auto* cases = app.add_subcommand("cases", "Run the constraint-discovery case benchmark");
  cases->add_option("--dir", cases_dir, "Directory of case directories")->required();
  cases->add_option("--prompts", prompts, "Prompt set JSON");
  cases->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg = ResolveConfig(f);
  PipelineOptions popts = PipelineFrom(cfg);

  if (profile->parsed()) {
    RequireFile(data, "data");
    ordered_json j = ProfileToJson(ProfileData(LoadTable(data), popts.profile));
    if (out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      WriteJson(fs::path(out) / "profile.json", j);
    }
    return 0;
  }

  if (generate->parsed()) {
    RequireFile(task_file, "task file");
    RequireFile(sample, "sample");
    PromptSet ps = LoadPrompts(prompts);
    BackendStack backend(cfg);
    if (task_id.empty()) task_id = fs::path(task_file).stem().string();
    std::string source = harness::StripAssertions(ReadFile(task_file)).stripped;
    Generator gen(backend.get(), ps, popts);
    GenerationResult r = gen.GenerateUnitTest(task_id, fs::path(task_file).filename().string(),
                                              source, LoadTable(sample));
    fs::path dir(out);
    WriteJson(dir / "test.json", dsl::TestToJson(r.test));
    WriteJson(dir / "graph.json", GraphToJson(r.graph));
    WriteJson(dir / "stats.json", StatsToJson(r.stats));
    WriteWarnings(dir, gen.warnings().Take());
    std::cout << r.test.constraints.size() << " constraints written to "
              << (dir / "test.json").string() << "\n";
    return 0;
  }

  if (suggest->parsed()) {
    RequireFile(data, "data");
    auto t = SuggestTaskAgnostic(ProfileData(LoadTable(data), popts.profile));
    WriteJson(fs::path(out) / "test.json", dsl::TestToJson(t));
    return 0;
  }

  if (validate->parsed()) {
    RequireFile(test, "test");
    RequireFile(batch, "batch");
    dsl::DataUnitTest t;
    try {
      t = dsl::TestFromJson(nlohmann::json::parse(ReadFile(test)));
    } catch (const std::exception& e) {
      throw UsageError("cannot load test " + test + ": " + e.what());
    }
    dsl::TestReport r = dsl::EvaluateTest(t, LoadTable(batch), fs::path(batch).stem().string(),
                                          popts.eval);
    ordered_json j = dsl::ReportToJson(r);
    if (!out.empty()) WriteJson(fs::path(out) / "report.json", j);
    std::cout << j.dump(2) << "\n";
    if (r.rejected()) return 1;
    for (const auto& o : r.outcomes) {
      if (o.status == dsl::Status::kError) return 2;
    }
    return 0;
  }

  if (inject->parsed()) {
    RequireFile(data, "data");
    RequireFile(errors, "error configuration");
    ErrorConfig ec;
    try {
      ec = ErrorConfigFromJson(nlohmann::json::parse(ReadFile(errors)));
    } catch (const std::exception& e) {
      throw UsageError("cannot load error configuration " + errors + ": " + e.what());
    }
    Dataset clean = LoadTable(data);
    auto problems = ValidateConfig(ec, SchemaOf(clean));
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    if (!problems.empty()) throw UsageError("invalid error configuration: " + msg);
    Batch b;
    b.id = ec.id;
    b.data = ApplyConfig(clean, ec);
    b.provenance = ErrorConfigToJson(ec).dump();
    WriteBatch(b, out);
    return 0;
  }

  if (label->parsed()) {
    RequireFile(script, "script");
    if (task_id.empty()) task_id = fs::path(script).stem().string();
    auto task = Artifact(task_id, script, cfg.task_timeout);
    std::string csv = "task_id,batch_id,label\n";
    for (const auto& b : batches) {
      RequireFile(b, "batch");
      auto l = harness::LabelBatch(task, LoadTable(b));
      csv += task_id + "," + fs::path(b).stem().string() + "," +
             std::string(harness::LabelName(l)) + "\n";
    }
    WriteFile(fs::path(out) / "labels.csv", csv);
    std::cout << csv;
    return 0;
  }

  if (verify->parsed()) {
    RequireFile(script, "script");
    RequireFile(sample, "sample");
    auto task = Artifact(fs::path(script).stem().string(), script, cfg.task_timeout);
    auto defects = harness::VerifyTask(task, LoadTable(sample));
    ordered_json j = {{"task", task.id}, {"ok", defects.empty()}, {"defects", defects}};
    std::cout << j.dump(2) << "\n";
    return defects.empty() ? 0 : 1;
  }

  if (optimize->parsed()) {
    RequireFile(manifest, "manifest");
    auto m = harness::LoadManifest(manifest);
    const harness::BenchDataset* ds = m.datasets.empty() ? nullptr : &m.datasets.front();
    if (!dataset.empty()) {
      ds = nullptr;
      for (const auto& d : m.datasets) {
        if (d.name == dataset) ds = &d;
      }
    }
    if (ds == nullptr) throw UsageError("dataset not found in manifest");
    PromptSet initial = LoadPrompts(prompts);
    BackendStack backend(cfg);
    sifta::ModelProposer proposer(backend.get(), cfg.max_reasks);
    auto run = OptimizeDataset(*ds, backend.get(), proposer, cfg.sifta, initial, popts, cfg.seed);
    PromptSet best = run.result.best;
    best.name = name;
    fs::path dir(out);
    WriteJson(dir / "prompts" / (name + ".json"), PromptSetToJson(best));
    WriteFile(dir / "sifta_log.jsonl", sifta::ProposalLog(run.result));
    ordered_json summary;
    summary["dataset"] = ds->name;
    summary["split"] = harness::ScenarioToJson(run.split);
    summary["rounds"] = ordered_json::array();
    for (const auto& r : run.result.rounds) summary["rounds"].push_back(sifta::RoundToJson(r));
    summary["charged"] = run.result.charged;
    summary["stopped_early"] = run.result.stopped_early;
    summary["best_eval_score"] = run.result.best_eval_score;
    summary["changed_templates"] = ordered_json::array();
    for (const auto& [k, v] : best.templates) {
      if (initial.templates.at(k) != v) summary["changed_templates"].push_back(k);
    }
    WriteJson(dir / "summary.json", summary);
    std::cout << summary.dump(2) << "\n";
    return 0;
  }

  if (bench->parsed()) {
    RequireFile(manifest, "manifest");
    auto m = harness::LoadManifest(manifest);
    BackendStack backend(cfg);
    BenchOptions bo;
    bo.scenario = scenario;
    bo.split_seed = cfg.seed;
    bo.prompts = LoadPrompts(prompts);
    bo.pipeline = popts;
    BenchResult r = RunBench(m, backend.get(), bo);
    fs::path dir(out);
    WriteFile(dir / "decisions.csv", harness::DecisionsCsv(AllDecisions(r)));
    std::vector<harness::Decision> base;
    std::vector<std::string> warnings;
    for (const auto& d : r.datasets) {
      base.insert(base.end(), d.baseline.begin(), d.baseline.end());
      for (const auto& [id, t] : d.tests) WriteJson(dir / "tests" / (id + ".json"), dsl::TestToJson(t));
      WriteJson(dir / "tests" / (d.baseline_test.id + ".json"), dsl::TestToJson(d.baseline_test));
      warnings.insert(warnings.end(), d.warnings.begin(), d.warnings.end());
    }
    WriteFile(dir / "baseline_decisions.csv", harness::DecisionsCsv(base));
    ordered_json metrics = BenchMetricsJson(r);
    WriteJson(dir / "metrics.json", metrics);
    WriteWarnings(dir, warnings);
    std::cout << metrics["overall"].dump(2) << "\n";
    return 0;
  }

  if (dump->parsed()) {
    WriteJson(fs::path(out) / "prompts" / "default.json", PromptSetToJson(PromptSet::Defaults()));
    return 0;
  }

  if (cases->parsed()) {
    if (!fs::is_directory(cases_dir)) throw UsageError("case directory not found: " + cases_dir);
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(cases_dir)) {
      if (e.is_directory() && fs::exists(e.path() / "case.json")) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    PromptSet ps = LoadPrompts(prompts);
    BackendStack backend(cfg);
    std::map<std::string, std::vector<harness::Decision>> decisions;
    std::vector<std::string> warnings;
    for (const auto& d : dirs) {
      harness::CaseFixture fx = harness::LoadCase(d);
      auto task_aware = [&](const harness::CaseFixture& c) {
        Generator gen(backend.get(), ps, popts);
        std::string source = harness::StripAssertions(c.code).stripped;
        dsl::DataUnitTest t;
        try {
          t = gen.GenerateUnitTest(c.id, "task.py", source, c.sample).test;
        } catch (const GenerationError& e) {
          warnings.push_back(c.id + ": " + e.what());
        }
        for (auto& w : gen.warnings().Take()) warnings.push_back(std::move(w));
        return t;
      };
      auto agnostic = [&](const harness::CaseFixture& c) {
        return SuggestTaskAgnostic(ProfileData(c.sample, popts.profile), c.id + ".baseline");
      };
      for (auto& [sys, fn] : std::vector<std::pair<std::string, harness::TestSystem>>{
               {"task_aware", task_aware},
               {"task_agnostic", agnostic},
               {"ground_truth", harness::GroundTruthTest}}) {
        auto res = harness::EvalCase(fx, fn);
        for (auto& dec : res.decisions()) decisions[sys].push_back(std::move(dec));
      }
    }
    fs::path dir(out);
    ordered_json metrics = ordered_json::object();
    for (const auto& [sys, decs] : decisions) {
      WriteFile(dir / (sys + "_decisions.csv"), harness::DecisionsCsv(decs));
      metrics[sys] = harness::MetricsToJson(harness::Evaluate(decs));
    }
    WriteJson(dir / "metrics.json", metrics);
    WriteWarnings(dir, warnings);
    std::cout << metrics.dump(2) << "\n";
    return 0;
  }
  return 0;
}

void ReportError(std::string_view kind, std::string_view message) {
  ordered_json j = {{"error", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace
}  // namespace taskdv::cli

int main(int argc, char** argv) {
  using namespace taskdv;
  try {
    return cli::Run(argc, argv);
  } catch (const cli::UsageError& e) {
    cli::ReportError("usage", e.what());
    return cli::kExitUsage;
  } catch (const harness::FormatError& e) {
    cli::ReportError("format", e.what());
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    cli::ReportError("runtime", e.what());
    return cli::kExitSoftware;
  }
}
