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

// Task execution harness: assertion blocks, sandboxed script runs, labels,
// decision metrics, scenario splits and benchmark manifests.

#ifndef TASKDV_HARNESS_H_
#define TASKDV_HARNESS_H_

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "taskdv/dsl.h"
#include "taskdv/tabular.h"

namespace taskdv::harness {

inline constexpr std::string_view kAssertionStart = "# ASSERTION_START";
inline constexpr std::string_view kAssertionEnd = "# ASSERTION_END";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing interpreter, unwritable temp dir and similar host problems.
class EnvironmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AssertionBlock {
  int index = 0;       // 1-based
  int start_line = 0;  // START sentinel, 1-based line in the source
  int end_line = 0;    // END sentinel
  std::string text;    // sentinel and body lines, byte-exact
  size_t insert_at = 0;  // number of stripped lines preceding the block
};

struct StripResult {
  std::string stripped;
  std::vector<AssertionBlock> blocks;
};

// A sentinel is a line whose trimmed content equals the marker. Throws
// FormatError naming the line for unpaired or nested sentinels.
StripResult StripAssertions(std::string_view source);
std::string ReinsertAssertions(std::string_view stripped,
                               const std::vector<AssertionBlock>& blocks);
// Throws std::out_of_range for an index outside [1, block count].
std::string EnableSingleBlock(std::string_view source, int index);

struct TaskArtifact {
  std::string id;
  std::filesystem::path script_path;
  // "{script}" and "{batch}" are substituted.
  std::vector<std::string> interpreter = {"python3", "{script}", "{batch}"};
  int timeout_seconds = 60;
};

enum class RunMode { kAllAssertions, kStripped, kSingle };

struct RunOutcome {
  int exit_status = 0;  // 128 + signal when killed
  bool timed_out = false;
  std::optional<int> failed_block;
  std::string stdout_text;
  std::string stderr_text;

  bool ok() const { return exit_status == 0 && !timed_out; }
};

// Runs `source` under the task's interpreter in a fresh temp dir holding only
// the script and `batch.csv`. `blocks` locate failing lines.
RunOutcome RunSource(const TaskArtifact& task, const std::string& source, const Dataset& batch,
                     const std::vector<AssertionBlock>& blocks);
RunOutcome RunTask(const TaskArtifact& task, const Dataset& batch, RunMode mode,
                   int block = 0);

// 1-based script line of the innermost traceback frame in `script_name`.
std::optional<int> FailingLine(std::string_view stderr_text, std::string_view script_name);

enum class Label { kSafe, kErroneous };
std::string_view LabelName(Label l);
Label LabelFromName(std::string_view name);

Label LabelOf(const RunOutcome& r);
Label LabelBatch(const TaskArtifact& task, const Dataset& batch);

// Empty when every mode exits cleanly on the sample.
std::vector<std::string> VerifyTask(const TaskArtifact& task, const Dataset& sample);

struct Decision {
  std::string task_id;
  std::string batch_id;
  bool reject = false;
  Label label = Label::kSafe;
};

struct Counts {
  size_t passed_safe = 0;
  size_t false_alarm = 0;
  size_t rejected_erroneous = 0;
  size_t missed = 0;

  friend bool operator==(const Counts&, const Counts&) = default;
};

struct ClassScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct Metrics {
  Counts counts;
  ClassScores erroneous;  // positive class: reject / erroneous
  ClassScores safe;       // positive class: pass / safe
};

Metrics MetricsFromCounts(const Counts& c);
Metrics Evaluate(const std::vector<Decision>& decisions);
nlohmann::ordered_json MetricsToJson(const Metrics& m);

// task_id,batch_id,predicted,label with predicted in {pass, reject}.
std::string DecisionsCsv(const std::vector<Decision>& decisions);

// Splits n into parts proportional to `ratio` by largest remainder; ties go
// to the earlier part.
std::vector<size_t> LargestRemainder(size_t n, const std::vector<size_t>& ratio);

struct ScenarioSpec {
  std::vector<std::string> train_tasks, eval_tasks, test_tasks;
  std::vector<std::string> obs_batches, new_batches;

  // "new_data", "new_tasks", "new_data_new_tasks", plus "optimize_train"
  // and "optimize_eval". Throws std::invalid_argument otherwise.
  std::vector<std::pair<std::string, std::string>> Pairs(std::string_view scenario) const;
};

// Tasks split 3:3:4, batches 1:1, after a seeded shuffle; each part sorted.
ScenarioSpec MakeScenarios(std::vector<std::string> tasks, std::vector<std::string> batches,
                           uint64_t seed);
nlohmann::ordered_json ScenarioToJson(const ScenarioSpec& s);

struct CaseFixture {
  std::string id;
  Dataset sample;
  std::string code;
  Dataset data_to_pass;
  Dataset data_to_reject;
  std::string ground_truth;
  std::string hidden_assumption;
};

// Reads case.json plus sample.csv, pass.csv, reject.csv and task.py.
CaseFixture LoadCase(const std::filesystem::path& dir);

struct CaseResult {
  std::string id;
  bool pass_rejected = false;
  bool reject_rejected = false;
  // Decisions against the case's own labels.
  std::vector<Decision> decisions() const;
};

using TestSystem = std::function<dsl::DataUnitTest(const CaseFixture&)>;
CaseResult EvalCase(const CaseFixture& fixture, const TestSystem& system);
// The fixture's ground-truth constraint as a one-constraint test.
dsl::DataUnitTest GroundTruthTest(const CaseFixture& fixture);

struct BenchTask {
  TaskArtifact artifact;
  std::string file;  // path relative to the dataset directory
};

struct BenchDataset {
  std::string name;
  std::filesystem::path dir;
  std::filesystem::path sample;
  std::vector<std::string> batches;
  std::vector<BenchTask> tasks;
  std::vector<std::string> error_configs;

  std::filesystem::path BatchPath(const std::string& id) const;
  std::filesystem::path ErrorConfigPath(const std::string& id) const;
};

struct BenchManifest {
  std::filesystem::path root;
  std::vector<BenchDataset> datasets;
};

// bench.json: {"datasets": [{"name", "dir", "sample", "batches": [ids],
// "tasks": [{"id", "script", "interpreter"?, "timeout"?}],
// "error_configs": [ids]}]}. Paths are relative to the manifest.
BenchManifest LoadManifest(const std::filesystem::path& path);

}  // namespace taskdv::harness

#endif  // TASKDV_HARNESS_H_
