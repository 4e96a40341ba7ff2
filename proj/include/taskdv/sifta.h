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

// Prompt-set optimization driven by failure precision.
//
// For a task's test and a column A, the column prediction on a batch is the
// conjunction of the outcomes of the constraints targeting A (errors
// skipped). Column failure precision (CFPr) is P(task failed | prediction
// failed) over observed batches and is undefined when the prediction never
// fails. Constraint failure precision (FPr) is the same ratio for a single
// constraint, defined as 0 when it never fails.

#ifndef TASKDV_SIFTA_H_
#define TASKDV_SIFTA_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskdv/backend.h"
#include "taskdv/evaluate.h"
#include "taskdv/graph.h"
#include "taskdv/pipeline.h"
#include "taskdv/prompts.h"

namespace taskdv::sifta {

struct Observation {
  std::string task_id;
  std::string batch_id;
  int outcome = 1;  // 1 task succeeded, 0 task failed
};

struct ObservationSet {
  std::vector<Observation> train;
  std::vector<Observation> eval;

  // Throws std::invalid_argument on duplicate pairs or train/eval overlap.
  void Validate() const;
};

struct TaskColumnUnit {
  std::string task_id;
  std::string column;

  friend auto operator<=>(const TaskColumnUnit&, const TaskColumnUnit&) = default;
};

// One evaluated batch for a task.
struct BatchEvidence {
  std::string batch_id;
  dsl::TestReport report;
  int outcome = 1;
};

// Constraints whose target columns include `column`.
std::vector<const dsl::Constraint*> ConstraintsOn(const dsl::DataUnitTest& test,
                                                  const std::string& column);

// 1 when every non-error outcome of the column's constraints passes (also
// when the column has no constraints), else 0.
int ColumnPrediction(const dsl::DataUnitTest& test, const std::string& column,
                     const dsl::TestReport& report);

std::optional<double> ComputeCfpr(const dsl::DataUnitTest& test, const std::string& column,
                                  const std::vector<BatchEvidence>& batches);
double ComputeFpr(const std::string& constraint_id, const std::vector<BatchEvidence>& batches);

struct ConstraintScore {
  std::string column;
  std::string constraint_id;
  double fpr = 0;
  size_t failures = 0;
};

// Per column, the n_fb failing constraints (failures > 0) with the lowest
// FPr; ties broken by constraint id ascending.
std::map<std::string, std::vector<ConstraintScore>> SelectBottomK(
    const std::vector<ConstraintScore>& scores, size_t n_fb);

// Arithmetic mean where absent values count as 0. Throws std::domain_error
// on empty input.
double MeanWithAbsentAsZero(const std::vector<std::optional<double>>& values);

struct GeneratedTest {
  dsl::DataUnitTest test;
  AssumptionGraph graph;
  std::string source;
  std::string task_file;
  std::vector<std::string> accessed;
};

// Supplies a task's test under a prompt set.
class TestProvider {
 public:
  virtual ~TestProvider() = default;
  virtual GeneratedTest Generate(const std::string& task_id, const PromptSet& prompts) = 0;
};

struct TaskInput {
  std::string task_file;
  std::string source;  // assertion-stripped
  Dataset sample;
};

// Runs the generation pipeline, memoized per (prompt set, task).
class PipelineTestProvider : public TestProvider {
 public:
  PipelineTestProvider(Backend& backend, std::map<std::string, TaskInput> tasks,
                       PipelineOptions options = {});
  GeneratedTest Generate(const std::string& task_id, const PromptSet& prompts) override;

 private:
  Backend& backend_;
  std::map<std::string, TaskInput> tasks_;
  PipelineOptions options_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<GeneratedTest>> memo_;
};

// Scores prompt sets against observed batches; memoizes test reports.
class Scorer {
 public:
  Scorer(TestProvider& provider, const std::map<std::string, Dataset>& batches,
         dsl::EvalOptions eval = {});

  const GeneratedTest& Test(const std::string& task_id, const PromptSet& prompts);
  std::vector<BatchEvidence> Evidence(const std::string& task_id, const PromptSet& prompts,
                                      const std::vector<Observation>& obs);
  std::optional<double> Cfpr(const TaskColumnUnit& unit, const PromptSet& prompts,
                             const std::vector<Observation>& obs);
  // Throws std::domain_error for empty units.
  double MeanCfpr(const PromptSet& prompts, const std::vector<TaskColumnUnit>& units,
                  const std::vector<Observation>& obs);
  // Units with at least one constraint failure on an observed batch, ordered
  // by (task, column).
  std::vector<TaskColumnUnit> Condense(const std::vector<Observation>& train,
                                       const PromptSet& prompts);
  // Every (task, accessed column) pair for tasks in `obs`.
  std::vector<TaskColumnUnit> AllUnits(const std::vector<Observation>& obs,
                                       const PromptSet& prompts);
  std::vector<ConstraintScore> ConstraintScores(const TaskColumnUnit& unit,
                                                const PromptSet& prompts,
                                                const std::vector<Observation>& obs);

 private:
  TestProvider& provider_;
  const std::map<std::string, Dataset>& batches_;
  dsl::EvalOptions eval_;
  std::map<std::string, GeneratedTest> tests_;
  std::map<std::string, dsl::TestReport> reports_;
};

struct UnitFeedback {
  TaskColumnUnit unit;
  std::optional<double> cfpr;
  std::vector<ConstraintScore> low_fpr;
};

// Readable feedback: per unit CFPr, then each low-FPr constraint with its
// text, linked assumptions, and the code lines of their spans.
std::string BuildFeedback(const std::vector<UnitFeedback>& units,
                          const std::map<std::string, const GeneratedTest*>& tests);

class Proposer {
 public:
  virtual ~Proposer() = default;
  // nullopt when no valid proposal could be obtained.
  virtual std::optional<PromptSet> Propose(const PromptSet& current,
                                           const std::string& feedback) = 0;
};

// Asks a model with the proposer_instruction template. The reply is
// {"prompts": {name: text}}; absent names keep their template, while null,
// empty, unknown names, or placeholder misuse reject the proposal. Requests
// are routed as task "proposal", subject "<n>" (1-based call count).
class ModelProposer : public Proposer {
 public:
  ModelProposer(Backend& backend, int max_reasks = 2, DecodingParams decoding = {});
  std::optional<PromptSet> Propose(const PromptSet& current,
                                   const std::string& feedback) override;
  size_t proposals() const { return count_; }

 private:
  Backend& backend_;
  int max_reasks_;
  DecodingParams decoding_;
  size_t count_ = 0;
};

// Applies a proposer reply to `current`. Returns the problem, or "" on
// success with `*out` filled.
std::string ApplyProposal(const PromptSet& current, const nlohmann::json& reply,
                          PromptSet* out);

struct SiftaConfig {
  int n_round = 3;
  int b_eval = 15;
  int n_train = 3;
  int n_fb = 2;
  int n_eval = 10;
  int early_stop_patience = 20;
  uint64_t seed = 0;

  // Throws std::invalid_argument unless every field is positive (seed aside).
  void Validate() const;
};

struct ProposalRecord {
  int round = 0;
  int proposal = 0;
  int budget_remaining = 0;
  int round_budget_remaining = 0;
  double train_score = 0;
  std::optional<double> candidate_train_score;
  bool accepted = false;
  std::optional<double> eval_score;
  bool improved = false;
  std::string note;
};

struct RoundRecord {
  int round = 0;
  int budget = 0;  // b_t at round start
  size_t train_units = 0;
  size_t eval_units = 0;
  double start_eval_score = 0;
  double end_eval_score = 0;
};

struct SiftaResult {
  PromptSet best;
  double best_eval_score = 0;
  int charged = 0;
  bool stopped_early = false;
  std::vector<RoundRecord> rounds;
  std::vector<ProposalRecord> proposals;
};

SiftaResult Optimize(const SiftaConfig& config, const ObservationSet& observations,
                     const PromptSet& initial, Scorer& scorer, Proposer& proposer);

nlohmann::ordered_json ProposalToJson(const ProposalRecord& r);
nlohmann::ordered_json RoundToJson(const RoundRecord& r);
// One JSON object per line.
std::string ProposalLog(const SiftaResult& r);

}  // namespace taskdv::sifta

#endif  // TASKDV_SIFTA_H_
