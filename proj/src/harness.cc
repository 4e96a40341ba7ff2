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

#include "taskdv/harness.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <numeric>
#include <regex>
#include <set>
#include <thread>

#include "taskdv/evaluate.h"
#include "taskdv/prng.h"
#include "taskdv/text.h"

extern char** environ;

namespace taskdv::harness {

namespace fs = std::filesystem;

namespace {

bool IsSentinel(std::string_view line, std::string_view marker) {
  return Trim(SplitTerminator(line).first) == marker;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "taskdv-run-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) {
      throw EnvironmentError(std::string("mkdtemp failed: ") + std::strerror(errno));
    }
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string Substitute(std::string arg, const std::string& script, const std::string& batch) {
  for (auto [key, value] : {std::pair<std::string_view, const std::string&>{"{script}", script},
                            {"{batch}", batch}}) {
    size_t pos;
    while ((pos = arg.find(key)) != std::string::npos) arg.replace(pos, key.size(), value);
  }
  return arg;
}

std::string ReadIfExists(const fs::path& p) {
  std::error_code ec;
  if (!fs::exists(p, ec)) return "";
  return ReadFile(p);
}

ClassScores Scores(size_t tp, size_t fp, size_t fn) {
  ClassScores s;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.f1 = s.precision + s.recall == 0
             ? 0.0
             : 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

nlohmann::ordered_json ScoresToJson(const ClassScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

StripResult StripAssertions(std::string_view source) {
  StripResult r;
  auto lines = SplitLinesKeepEnds(source);
  size_t stripped_lines = 0;
  std::optional<AssertionBlock> open;
  for (size_t i = 0; i < lines.size(); ++i) {
    int line_no = static_cast<int>(i + 1);
    const std::string& line = lines[i];
    if (IsSentinel(line, kAssertionStart)) {
      if (open) {
        throw FormatError("nested " + std::string(kAssertionStart) + " at line " +
                          std::to_string(line_no) + " inside block opened at line " +
                          std::to_string(open->start_line));
      }
      open.emplace();
      open->index = static_cast<int>(r.blocks.size()) + 1;
      open->start_line = line_no;
      open->insert_at = stripped_lines;
      open->text = line;
    } else if (IsSentinel(line, kAssertionEnd)) {
      if (!open) {
        throw FormatError("unpaired " + std::string(kAssertionEnd) + " at line " +
                          std::to_string(line_no));
      }
      open->end_line = line_no;
      open->text += line;
      r.blocks.push_back(std::move(*open));
      open.reset();
    } else if (open) {
      open->text += line;
    } else {
      r.stripped += line;
      ++stripped_lines;
    }
  }
  if (open) {
    throw FormatError("unterminated block opened at line " + std::to_string(open->start_line));
  }
  return r;
}

std::string ReinsertAssertions(std::string_view stripped,
                               const std::vector<AssertionBlock>& blocks) {
  auto lines = SplitLinesKeepEnds(stripped);
  std::string out;
  size_t next = 0;
  for (const auto& b : blocks) {
    if (b.insert_at < next || b.insert_at > lines.size()) {
      throw std::invalid_argument("block " + std::to_string(b.index) +
                                  " does not fit the stripped source");
    }
    for (; next < b.insert_at; ++next) out += lines[next];
    out += b.text;
  }
  for (; next < lines.size(); ++next) out += lines[next];
  return out;
}

std::string EnableSingleBlock(std::string_view source, int index) {
  StripResult s = StripAssertions(source);
  if (index < 1 || static_cast<size_t>(index) > s.blocks.size()) {
    throw std::out_of_range("assertion block " + std::to_string(index) + " out of range [1, " +
                            std::to_string(s.blocks.size()) + "]");
  }
  return ReinsertAssertions(s.stripped, {s.blocks[index - 1]});
}

std::optional<int> FailingLine(std::string_view stderr_text, std::string_view script_name) {
  static const std::regex frame(R"re(File "([^"]*)", line (\d+))re");
  std::optional<int> line;
  std::string text(stderr_text);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), frame);
       it != std::sregex_iterator(); ++it) {
    if (fs::path((*it)[1].str()).filename() == script_name) line = std::stoi((*it)[2].str());
  }
  return line;
}

RunOutcome RunSource(const TaskArtifact& task, const std::string& source, const Dataset& batch,
                     const std::vector<AssertionBlock>& blocks) {
  if (task.interpreter.empty()) throw EnvironmentError("task " + task.id + " has no interpreter");
  TempDir dir;
  std::string script_name =
      task.script_path.empty() ? "task.py" : task.script_path.filename().string();
  fs::path script = dir.path() / script_name;
  fs::path batch_path = dir.path() / "batch.csv";
  WriteFile(script, source);
  SaveTable(batch, batch_path);
  fs::path out_path = dir.path() / ".stdout";
  fs::path err_path = dir.path() / ".stderr";

  std::vector<std::string> args;
  for (const auto& a : task.interpreter) {
    args.push_back(Substitute(a, script.string(), batch_path.string()));
  }
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  std::vector<std::string> env_store;
  for (char** e = environ; *e != nullptr; ++e) {
    std::string_view kv(*e);
    if (kv.starts_with("PYTHONHASHSEED=") || kv.starts_with("PYTHONDONTWRITEBYTECODE=")) continue;
    env_store.emplace_back(kv);
  }
  env_store.emplace_back("PYTHONHASHSEED=0");
  env_store.emplace_back("PYTHONDONTWRITEBYTECODE=1");
  std::vector<char*> envp;
  for (auto& e : env_store) envp.push_back(e.data());
  envp.push_back(nullptr);

  int status_pipe[2];
  if (pipe2(status_pipe, O_CLOEXEC) != 0) {
    throw EnvironmentError(std::string("pipe failed: ") + std::strerror(errno));
  }
  std::string dir_str = dir.path().string();
  std::string out_str = out_path.string();
  std::string err_str = err_path.string();

  pid_t pid = fork();
  if (pid < 0) {
    close(status_pipe[0]);
    close(status_pipe[1]);
    throw EnvironmentError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    setpgid(0, 0);
    int in = open("/dev/null", O_RDONLY);
    int out = open(out_str.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    int err = open(err_str.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (in < 0 || out < 0 || err < 0 || chdir(dir_str.c_str()) != 0 || dup2(in, 0) < 0 ||
        dup2(out, 1) < 0 || dup2(err, 2) < 0) {
      int e = errno;
      (void)!write(status_pipe[1], &e, sizeof e);
      _exit(127);
    }
    execvpe(argv[0], argv.data(), envp.data());
    int e = errno;
    (void)!write(status_pipe[1], &e, sizeof e);
    _exit(127);
  }
  close(status_pipe[1]);
  int child_errno = 0;
  ssize_t n;
  do {
    n = read(status_pipe[0], &child_errno, sizeof child_errno);
  } while (n < 0 && errno == EINTR);
  close(status_pipe[0]);
  if (n == sizeof child_errno) {
    int ignored;
    waitpid(pid, &ignored, 0);
    throw EnvironmentError("cannot execute '" + args[0] + "': " + std::strerror(child_errno));
  }

  RunOutcome r;
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(task.timeout_seconds);
  int status = 0;
  while (true) {
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) throw EnvironmentError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      r.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (WIFEXITED(status)) {
    r.exit_status = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    r.exit_status = 128 + WTERMSIG(status);
  }
  r.stdout_text = ReadIfExists(out_path);
  r.stderr_text = ReadIfExists(err_path);
  if (!r.ok() && !r.timed_out) {
    if (auto line = FailingLine(r.stderr_text, script_name)) {
      for (const auto& b : blocks) {
        if (*line >= b.start_line && *line <= b.end_line) r.failed_block = b.index;
      }
    }
  }
  return r;
}

RunOutcome RunTask(const TaskArtifact& task, const Dataset& batch, RunMode mode, int block) {
  std::string original = ReadFile(task.script_path);
  StripResult s = StripAssertions(original);
  switch (mode) {
    case RunMode::kAllAssertions:
      return RunSource(task, original, batch, s.blocks);
    case RunMode::kStripped:
      return RunSource(task, s.stripped, batch, {});
    case RunMode::kSingle: {
      std::string src = EnableSingleBlock(original, block);
      auto blocks = StripAssertions(src).blocks;
      for (auto& b : blocks) b.index = block;
      return RunSource(task, src, batch, blocks);
    }
  }
  throw std::invalid_argument("unknown run mode");
}

std::string_view LabelName(Label l) { return l == Label::kSafe ? "safe" : "erroneous"; }

Label LabelFromName(std::string_view name) {
  if (name == "safe") return Label::kSafe;
  if (name == "erroneous") return Label::kErroneous;
  throw std::invalid_argument("unknown label '" + std::string(name) + "'");
}

Label LabelOf(const RunOutcome& r) { return r.ok() ? Label::kSafe : Label::kErroneous; }

Label LabelBatch(const TaskArtifact& task, const Dataset& batch) {
  return LabelOf(RunTask(task, batch, RunMode::kAllAssertions));
}

std::vector<std::string> VerifyTask(const TaskArtifact& task, const Dataset& sample) {
  std::vector<std::string> defects;
  auto check = [&](const std::string& mode, const RunOutcome& r) {
    if (r.ok()) return;
    std::string why = r.timed_out ? "timed out" : "exit " + std::to_string(r.exit_status);
    std::string tail(Trim(r.stderr_text));
    if (tail.size() > 400) tail = tail.substr(tail.size() - 400);
    defects.push_back(task.id + " mode " + mode + ": " + why + (tail.empty() ? "" : ": " + tail));
  };
  std::string original = ReadFile(task.script_path);
  size_t blocks = StripAssertions(original).blocks.size();
  check("a", RunTask(task, sample, RunMode::kAllAssertions));
  check("b", RunTask(task, sample, RunMode::kStripped));
  for (size_t i = 1; i <= blocks; ++i) {
    check("c" + std::to_string(i), RunTask(task, sample, RunMode::kSingle, static_cast<int>(i)));
  }
  return defects;
}

Metrics MetricsFromCounts(const Counts& c) {
  Metrics m;
  m.counts = c;
  m.erroneous = Scores(c.rejected_erroneous, c.false_alarm, c.missed);
  m.safe = Scores(c.passed_safe, c.missed, c.false_alarm);
  return m;
}

Metrics Evaluate(const std::vector<Decision>& decisions) {
  Counts c;
  for (const auto& d : decisions) {
    if (d.label == Label::kErroneous) {
      ++(d.reject ? c.rejected_erroneous : c.missed);
    } else {
      ++(d.reject ? c.false_alarm : c.passed_safe);
    }
  }
  return MetricsFromCounts(c);
}

nlohmann::ordered_json MetricsToJson(const Metrics& m) {
  nlohmann::ordered_json j;
  j["decisions"] = m.counts.passed_safe + m.counts.false_alarm + m.counts.rejected_erroneous +
                   m.counts.missed;
  j["passed_safe"] = m.counts.passed_safe;
  j["false_alarm"] = m.counts.false_alarm;
  j["rejected_erroneous"] = m.counts.rejected_erroneous;
  j["missed"] = m.counts.missed;
  j["erroneous_class"] = ScoresToJson(m.erroneous);
  j["safe_class"] = ScoresToJson(m.safe);
  return j;
}

std::string DecisionsCsv(const std::vector<Decision>& decisions) {
  std::string out = "task_id,batch_id,predicted,label\n";
  for (const auto& d : decisions) {
    out += d.task_id + "," + d.batch_id + "," + (d.reject ? "reject" : "pass") + "," +
           std::string(LabelName(d.label)) + "\n";
  }
  return out;
}

std::vector<size_t> LargestRemainder(size_t n, const std::vector<size_t>& ratio) {
  size_t total = std::accumulate(ratio.begin(), ratio.end(), size_t{0});
  if (total == 0) throw std::invalid_argument("ratio must have a positive sum");
  std::vector<size_t> out(ratio.size());
  std::vector<std::pair<size_t, size_t>> rem;  // (remainder numerator, part)
  size_t assigned = 0;
  for (size_t i = 0; i < ratio.size(); ++i) {
    out[i] = n * ratio[i] / total;
    assigned += out[i];
    rem.emplace_back(n * ratio[i] % total, i);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t k = 0; assigned < n; ++k, ++assigned) ++out[rem[k].second];
  return out;
}

std::vector<std::pair<std::string, std::string>> ScenarioSpec::Pairs(
    std::string_view scenario) const {
  std::vector<std::string> tasks;
  const std::vector<std::string>* batches = nullptr;
  if (scenario == "new_data") {
    tasks = train_tasks;
    tasks.insert(tasks.end(), eval_tasks.begin(), eval_tasks.end());
    batches = &new_batches;
  } else if (scenario == "new_tasks") {
    tasks = test_tasks;
    batches = &obs_batches;
  } else if (scenario == "new_data_new_tasks") {
    tasks = test_tasks;
    batches = &new_batches;
  } else if (scenario == "optimize_train") {
    tasks = train_tasks;
    batches = &obs_batches;
  } else if (scenario == "optimize_eval") {
    tasks = eval_tasks;
    batches = &obs_batches;
  } else {
    throw std::invalid_argument("unknown scenario '" + std::string(scenario) + "'");
  }
  std::sort(tasks.begin(), tasks.end());
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : tasks) {
    for (const auto& b : *batches) out.emplace_back(t, b);
  }
  return out;
}

ScenarioSpec MakeScenarios(std::vector<std::string> tasks, std::vector<std::string> batches,
                           uint64_t seed) {
  for (auto* v : {&tasks, &batches}) {
    std::sort(v->begin(), v->end());
    if (std::adjacent_find(v->begin(), v->end()) != v->end()) {
      throw std::invalid_argument("duplicate id in scenario input");
    }
  }
  SplitMix64 rng(seed);
  rng.Shuffle(tasks);
  rng.Shuffle(batches);
  auto ts = LargestRemainder(tasks.size(), {3, 3, 4});
  auto bs = LargestRemainder(batches.size(), {1, 1});
  auto take = [](const std::vector<std::string>& v, size_t from, size_t n) {
    std::vector<std::string> part(v.begin() + from, v.begin() + from + n);
    std::sort(part.begin(), part.end());
    return part;
  };
  ScenarioSpec s;
  s.train_tasks = take(tasks, 0, ts[0]);
  s.eval_tasks = take(tasks, ts[0], ts[1]);
  s.test_tasks = take(tasks, ts[0] + ts[1], ts[2]);
  s.obs_batches = take(batches, 0, bs[0]);
  s.new_batches = take(batches, bs[0], bs[1]);
  return s;
}

nlohmann::ordered_json ScenarioToJson(const ScenarioSpec& s) {
  return {{"train_tasks", s.train_tasks}, {"eval_tasks", s.eval_tasks},
          {"test_tasks", s.test_tasks},   {"obs_batches", s.obs_batches},
          {"new_batches", s.new_batches}};
}

CaseFixture LoadCase(const fs::path& dir) {
  auto meta = nlohmann::json::parse(ReadFile(dir / "case.json"));
  CaseFixture c;
  c.id = meta.value("id", dir.filename().string());
  c.ground_truth = meta.at("ground_truth").get<std::string>();
  c.hidden_assumption = meta.value("hidden_assumption", "");
  c.sample = LoadTable(dir / "sample.csv");
  c.data_to_pass = LoadTable(dir / "pass.csv");
  c.data_to_reject = LoadTable(dir / "reject.csv");
  c.code = ReadFile(dir / "task.py");
  return c;
}

std::vector<Decision> CaseResult::decisions() const {
  return {{id, "data_to_pass", pass_rejected, Label::kSafe},
          {id, "data_to_reject", reject_rejected, Label::kErroneous}};
}

CaseResult EvalCase(const CaseFixture& fixture, const TestSystem& system) {
  dsl::DataUnitTest test = system(fixture);
  CaseResult r;
  r.id = fixture.id;
  r.pass_rejected = dsl::EvaluateTest(test, fixture.data_to_pass, "data_to_pass").rejected();
  r.reject_rejected = dsl::EvaluateTest(test, fixture.data_to_reject, "data_to_reject").rejected();
  return r;
}

dsl::DataUnitTest GroundTruthTest(const CaseFixture& fixture) {
  dsl::DataUnitTest t;
  t.id = fixture.id + ".ground_truth";
  t.task_id = fixture.id;
  dsl::Constraint c = dsl::ParseConstraint(fixture.ground_truth);
  c.id = "g1";
  t.constraints.push_back(std::move(c));
  return t;
}

fs::path BenchDataset::BatchPath(const std::string& id) const {
  return dir / "batches" / (id + ".csv");
}

fs::path BenchDataset::ErrorConfigPath(const std::string& id) const {
  return dir / "errors" / (id + ".json");
}

BenchManifest LoadManifest(const fs::path& path) {
  auto j = nlohmann::json::parse(ReadFile(path));
  BenchManifest m;
  m.root = path.parent_path();
  std::set<std::string> names;
  for (const auto& d : j.at("datasets")) {
    BenchDataset ds;
    ds.name = d.at("name").get<std::string>();
    if (!names.insert(ds.name).second) {
      throw std::invalid_argument("duplicate dataset '" + ds.name + "'");
    }
    ds.dir = m.root / d.value("dir", ds.name);
    ds.sample = ds.dir / d.value("sample", "sample.csv");
    ds.batches = d.value("batches", std::vector<std::string>{});
    ds.error_configs = d.value("error_configs", std::vector<std::string>{});
    std::set<std::string> task_ids;
    for (const auto& t : d.at("tasks")) {
      BenchTask bt;
      bt.artifact.id = t.at("id").get<std::string>();
      if (!task_ids.insert(bt.artifact.id).second) {
        throw std::invalid_argument("duplicate task '" + bt.artifact.id + "'");
      }
      bt.file = t.at("script").get<std::string>();
      bt.artifact.script_path = ds.dir / bt.file;
      if (t.contains("interpreter")) {
        bt.artifact.interpreter = t["interpreter"].get<std::vector<std::string>>();
      }
      bt.artifact.timeout_seconds = t.value("timeout", bt.artifact.timeout_seconds);
      ds.tasks.push_back(std::move(bt));
    }
    m.datasets.push_back(std::move(ds));
  }
  return m;
}

}  // namespace taskdv::harness
