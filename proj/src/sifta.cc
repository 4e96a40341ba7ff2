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

#include "taskdv/sifta.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "taskdv/prng.h"
#include "taskdv/text.h"

namespace taskdv::sifta {

namespace {

using dsl::Status;

std::string PromptDigest(const PromptSet& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : p.templates) j[k] = v;
  return Sha256Hex(j.dump());
}

bool Targets(const dsl::Constraint& c, const std::string& column) {
  return std::find(c.columns.begin(), c.columns.end(), column) != c.columns.end();
}

std::vector<TaskColumnUnit> Sample(const std::vector<TaskColumnUnit>& units, int n,
                                   SplitMix64& rng) {
  size_t k = std::min(units.size(), static_cast<size_t>(n));
  std::vector<TaskColumnUnit> out;
  for (size_t i : rng.SampleIndices(units.size(), k)) out.push_back(units[i]);
  return out;
}

std::vector<std::string> TasksOf(const std::vector<Observation>& obs) {
  std::set<std::string> s;
  for (const auto& o : obs) s.insert(o.task_id);
  return {s.begin(), s.end()};
}

}  // namespace

void ObservationSet::Validate() const {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto* part : {&train, &eval}) {
    for (const auto& o : *part) {
      if (o.outcome != 0 && o.outcome != 1) {
        throw std::invalid_argument("outcome must be 0 or 1 for " + o.task_id + "/" +
                                    o.batch_id);
      }
      if (!seen.emplace(o.task_id, o.batch_id).second) {
        throw std::invalid_argument("duplicate observation " + o.task_id + "/" + o.batch_id);
      }
    }
  }
}

std::vector<const dsl::Constraint*> ConstraintsOn(const dsl::DataUnitTest& test,
                                                  const std::string& column) {
  std::vector<const dsl::Constraint*> out;
  for (const auto& c : test.constraints) {
    if (Targets(c, column)) out.push_back(&c);
  }
  return out;
}

int ColumnPrediction(const dsl::DataUnitTest& test, const std::string& column,
                     const dsl::TestReport& report) {
  for (const dsl::Constraint* c : ConstraintsOn(test, column)) {
    const dsl::ConstraintOutcome* o = report.find(c->id);
    if (o != nullptr && o->status == Status::kFail) return 0;
  }
  return 1;
}

std::optional<double> ComputeCfpr(const dsl::DataUnitTest& test, const std::string& column,
                                  const std::vector<BatchEvidence>& batches) {
  size_t den = 0, num = 0;
  for (const auto& b : batches) {
    if (ColumnPrediction(test, column, b.report) != 0) continue;
    ++den;
    if (b.outcome == 0) ++num;
  }
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

double ComputeFpr(const std::string& constraint_id, const std::vector<BatchEvidence>& batches) {
  size_t den = 0, num = 0;
  for (const auto& b : batches) {
    const dsl::ConstraintOutcome* o = b.report.find(constraint_id);
    if (o == nullptr || o->status != Status::kFail) continue;
    ++den;
    if (b.outcome == 0) ++num;
  }
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::map<std::string, std::vector<ConstraintScore>> SelectBottomK(
    const std::vector<ConstraintScore>& scores, size_t n_fb) {
  if (n_fb == 0) throw std::invalid_argument("n_fb must be positive");
  std::map<std::string, std::vector<ConstraintScore>> out;
  for (const auto& s : scores) {
    if (s.failures > 0) out[s.column].push_back(s);
  }
  for (auto& [col, list] : out) {
    std::sort(list.begin(), list.end(), [](const ConstraintScore& a, const ConstraintScore& b) {
      if (a.fpr != b.fpr) return a.fpr < b.fpr;
      return a.constraint_id < b.constraint_id;
    });
    if (list.size() > n_fb) list.resize(n_fb);
  }
  return out;
}

double MeanWithAbsentAsZero(const std::vector<std::optional<double>>& values) {
  if (values.empty()) throw std::domain_error("mean over no units");
  double sum = 0;
  for (const auto& v : values) sum += v.value_or(0.0);
  return sum / static_cast<double>(values.size());
}

PipelineTestProvider::PipelineTestProvider(Backend& backend,
                                           std::map<std::string, TaskInput> tasks,
                                           PipelineOptions options)
    : backend_(backend), tasks_(std::move(tasks)), options_(std::move(options)) {}

GeneratedTest PipelineTestProvider::Generate(const std::string& task_id,
                                             const PromptSet& prompts) {
  std::string key = PromptDigest(prompts) + "/" + task_id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;
  }
  auto t = tasks_.find(task_id);
  if (t == tasks_.end()) throw std::invalid_argument("unknown task " + task_id);
  Generator gen(backend_, prompts, options_);
  GenerationResult r = gen.GenerateUnitTest(task_id, t->second.task_file, t->second.source,
                                            t->second.sample);
  auto out = std::make_shared<GeneratedTest>();
  out->test = std::move(r.test);
  out->graph = std::move(r.graph);
  out->source = t->second.source;
  out->task_file = t->second.task_file;
  out->accessed = std::move(r.accessed);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, out);
  return *out;
}

Scorer::Scorer(TestProvider& provider, const std::map<std::string, Dataset>& batches,
               dsl::EvalOptions eval)
    : provider_(provider), batches_(batches), eval_(eval) {}

const GeneratedTest& Scorer::Test(const std::string& task_id, const PromptSet& prompts) {
  std::string key = PromptDigest(prompts) + "/" + task_id;
  auto it = tests_.find(key);
  if (it == tests_.end()) it = tests_.emplace(key, provider_.Generate(task_id, prompts)).first;
  return it->second;
}

std::vector<BatchEvidence> Scorer::Evidence(const std::string& task_id, const PromptSet& prompts,
                                            const std::vector<Observation>& obs) {
  const GeneratedTest& gt = Test(task_id, prompts);
  std::string digest = PromptDigest(prompts);
  std::vector<BatchEvidence> out;
  for (const auto& o : obs) {
    if (o.task_id != task_id) continue;
    std::string key = digest + "/" + task_id + "/" + o.batch_id;
    auto it = reports_.find(key);
    if (it == reports_.end()) {
      auto b = batches_.find(o.batch_id);
      if (b == batches_.end()) throw std::invalid_argument("unknown batch " + o.batch_id);
      it = reports_.emplace(key, dsl::EvaluateTest(gt.test, b->second, o.batch_id, eval_)).first;
    }
    out.push_back({o.batch_id, it->second, o.outcome});
  }
  return out;
}

std::optional<double> Scorer::Cfpr(const TaskColumnUnit& unit, const PromptSet& prompts,
                                   const std::vector<Observation>& obs) {
  auto ev = Evidence(unit.task_id, prompts, obs);
  return ComputeCfpr(Test(unit.task_id, prompts).test, unit.column, ev);
}

double Scorer::MeanCfpr(const PromptSet& prompts, const std::vector<TaskColumnUnit>& units,
                        const std::vector<Observation>& obs) {
  std::vector<std::optional<double>> values;
  for (const auto& u : units) values.push_back(Cfpr(u, prompts, obs));
  return MeanWithAbsentAsZero(values);
}

std::vector<TaskColumnUnit> Scorer::Condense(const std::vector<Observation>& train,
                                             const PromptSet& prompts) {
  std::vector<TaskColumnUnit> out;
  for (const std::string& task : TasksOf(train)) {
    const GeneratedTest& gt = Test(task, prompts);
    auto ev = Evidence(task, prompts, train);
    std::vector<std::string> cols = gt.accessed;
    std::sort(cols.begin(), cols.end());
    for (const std::string& col : cols) {
      bool failed = false;
      for (const dsl::Constraint* c : ConstraintsOn(gt.test, col)) {
        for (const auto& b : ev) {
          const dsl::ConstraintOutcome* o = b.report.find(c->id);
          if (o != nullptr && o->status == Status::kFail) failed = true;
        }
      }
      if (failed) out.push_back({task, col});
    }
  }
  return out;
}

std::vector<TaskColumnUnit> Scorer::AllUnits(const std::vector<Observation>& obs,
                                             const PromptSet& prompts) {
  std::vector<TaskColumnUnit> out;
  for (const std::string& task : TasksOf(obs)) {
    std::vector<std::string> cols = Test(task, prompts).accessed;
    std::sort(cols.begin(), cols.end());
    for (const std::string& col : cols) out.push_back({task, col});
  }
  return out;
}

std::vector<ConstraintScore> Scorer::ConstraintScores(const TaskColumnUnit& unit,
                                                      const PromptSet& prompts,
                                                      const std::vector<Observation>& obs) {
  const GeneratedTest& gt = Test(unit.task_id, prompts);
  auto ev = Evidence(unit.task_id, prompts, obs);
  std::vector<ConstraintScore> out;
  for (const dsl::Constraint* c : ConstraintsOn(gt.test, unit.column)) {
    ConstraintScore s;
    s.column = unit.column;
    s.constraint_id = c->id;
    s.fpr = ComputeFpr(c->id, ev);
    for (const auto& b : ev) {
      const dsl::ConstraintOutcome* o = b.report.find(c->id);
      if (o != nullptr && o->status == Status::kFail) ++s.failures;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string BuildFeedback(const std::vector<UnitFeedback>& units,
                          const std::map<std::string, const GeneratedTest*>& tests) {
  std::ostringstream os;
  for (const auto& u : units) {
    os << "Task " << u.unit.task_id << ", column " << u.unit.column << ": column failure precision "
       << (u.cfpr ? FormatReal(*u.cfpr) : std::string("n/a (never failed)")) << "\n";
    auto t = tests.find(u.unit.task_id);
    if (t == tests.end() || t->second == nullptr) continue;
    const GeneratedTest& gt = *t->second;
    auto lines = SplitLinesKeepEnds(gt.source);
    for (const auto& s : u.low_fpr) {
      const dsl::Constraint* c = gt.test.find(s.constraint_id);
      if (c == nullptr) continue;
      os << "  Constraint " << s.constraint_id << " failed on " << s.failures
         << " batch(es), failure precision " << FormatReal(s.fpr) << ":\n"
         << "    " << dsl::RenderConstraint(*c) << "\n";
      BacktraceResult bt = Backtrace(gt.graph, gt.test, s.constraint_id);
      for (const auto& a : bt.assumptions) {
        os << "    Assumption " << a.id << ": " << a.text << "\n";
      }
      for (const auto& span : bt.spans) {
        os << "    Code " << span.file << " lines " << span.start_line << "-" << span.end_line
           << ":\n";
        for (int ln = span.start_line; ln <= span.end_line; ++ln) {
          if (ln < 1 || static_cast<size_t>(ln) > lines.size()) continue;
          auto [body, term] = SplitTerminator(lines[ln - 1]);
          os << "      " << ln << "| " << body << "\n";
        }
      }
    }
  }
  return os.str();
}

std::string ApplyProposal(const PromptSet& current, const nlohmann::json& reply,
                          PromptSet* out) {
  if (!reply.is_object() || !reply.contains("prompts") || !reply["prompts"].is_object()) {
    return "reply must be an object with a \"prompts\" object";
  }
  PromptSet next = current;
  for (const auto& [name, v] : reply["prompts"].items()) {
    if (std::find(kPromptNames.begin(), kPromptNames.end(), name) == kPromptNames.end()) {
      return "unknown template '" + name + "'";
    }
    if (v.is_null() || (v.is_string() && Trim(v.get<std::string>()).empty())) {
      return "template '" + name + "' was dropped";
    }
    if (!v.is_string()) return "template '" + name + "' must be a string";
    next.templates[name] = v.get<std::string>();
  }
  auto problems = next.Problems();
  if (!problems.empty()) return Join(problems, "; ");
  *out = std::move(next);
  return "";
}

ModelProposer::ModelProposer(Backend& backend, int max_reasks, DecodingParams decoding)
    : backend_(backend), max_reasks_(max_reasks), decoding_(decoding) {}

std::optional<PromptSet> ModelProposer::Propose(const PromptSet& current,
                                                const std::string& feedback) {
  ++count_;
  nlohmann::ordered_json templates = PromptSetToJson(current)["templates"];
  std::string prompt = RenderTemplate(current.at(kProposerInstruction),
                                      {{"prompts", templates.dump(2)}, {"feedback", feedback}});
  std::string base = prompt;
  for (int attempt = 0; attempt <= max_reasks_; ++attempt) {
    ModelRequest req;
    req.method = std::string(kProposerInstruction);
    req.prompt = prompt;
    req.task = "proposal";
    req.subject = std::to_string(count_);
    req.decoding = decoding_;
    std::string problem;
    try {
      ModelResponse r = backend_.Complete(req);
      PromptSet next;
      problem = ApplyProposal(current, ExtractJson(r.text), &next);
      if (problem.empty()) {
        next.name = current.name;
        return next;
      }
    } catch (const nlohmann::json::exception& e) {
      problem = std::string("no JSON object in reply: ") + e.what();
    }
    prompt = base + "\n\nYour previous reply could not be used: " + problem;
  }
  return std::nullopt;
}

void SiftaConfig::Validate() const {
  if (n_round <= 0 || b_eval <= 0 || n_train <= 0 || n_fb <= 0 || n_eval <= 0 ||
      early_stop_patience <= 0) {
    throw std::invalid_argument(
        "n_round, b_eval, n_train, n_fb, n_eval and early_stop_patience must be positive");
  }
}

SiftaResult Optimize(const SiftaConfig& config, const ObservationSet& observations,
                     const PromptSet& initial, Scorer& scorer, Proposer& proposer) {
  config.Validate();
  observations.Validate();
  SiftaResult result;
  result.best = initial;
  PromptSet pi = initial;
  int b_remain = config.b_eval;
  int stale = 0;
  int proposal_no = 0;

  for (int t = 1; t <= config.n_round && !result.stopped_early; ++t) {
    SplitMix64 rng(config.seed + static_cast<uint64_t>(t));
    RoundRecord round;
    round.round = t;
    auto train_cond = scorer.Condense(observations.train, pi);
    auto eval_units = scorer.AllUnits(observations.eval, pi);
    round.train_units = train_cond.size();
    int b_t = b_remain / (config.n_round - t + 1);
    round.budget = b_t;
    if (eval_units.empty()) {
      result.rounds.push_back(round);
      continue;
    }
    auto eval_sample = Sample(eval_units, config.n_eval, rng);
    round.eval_units = eval_sample.size();
    double eval_score = scorer.MeanCfpr(pi, eval_sample, observations.eval);
    round.start_eval_score = eval_score;
    std::vector<std::pair<PromptSet, double>> candidates = {{pi, eval_score}};
    double best_in_round = eval_score;

    while (b_t > 0 && !train_cond.empty()) {
      if (stale >= config.early_stop_patience) {
        result.stopped_early = true;
        break;
      }
      auto train_sample = Sample(train_cond, config.n_train, rng);
      double train_score = scorer.MeanCfpr(pi, train_sample, observations.train);

      std::vector<UnitFeedback> fb;
      std::map<std::string, const GeneratedTest*> tests;
      for (const auto& u : train_sample) {
        UnitFeedback f;
        f.unit = u;
        f.cfpr = scorer.Cfpr(u, pi, observations.train);
        auto low = SelectBottomK(scorer.ConstraintScores(u, pi, observations.train),
                                 static_cast<size_t>(config.n_fb));
        if (auto it = low.find(u.column); it != low.end()) f.low_fpr = it->second;
        tests[u.task_id] = &scorer.Test(u.task_id, pi);
        fb.push_back(std::move(f));
      }
      std::optional<PromptSet> next = proposer.Propose(pi, BuildFeedback(fb, tests));

      ProposalRecord rec;
      rec.round = t;
      rec.proposal = ++proposal_no;
      rec.train_score = train_score;
      if (!next) {
        rec.note = "malformed proposal";
      } else {
        try {
          double cand_train = scorer.MeanCfpr(*next, train_sample, observations.train);
          rec.candidate_train_score = cand_train;
          if (cand_train >= train_score) {
            double cand_eval = scorer.MeanCfpr(*next, eval_sample, observations.eval);
            rec.accepted = true;
            rec.eval_score = cand_eval;
            rec.improved = cand_eval > best_in_round;
            best_in_round = std::max(best_in_round, cand_eval);
            candidates.emplace_back(*next, cand_eval);
            --b_t;
            --b_remain;
            ++result.charged;
          } else {
            rec.note = "train score decreased";
          }
        } catch (const std::exception& e) {
          rec.note = std::string("candidate could not be scored: ") + e.what();
        }
      }
      rec.budget_remaining = b_remain;
      rec.round_budget_remaining = b_t;
      stale = rec.improved ? 0 : stale + 1;
      result.proposals.push_back(std::move(rec));
    }

    // Earliest candidate wins ties, so the round's starting set is kept
    // unless something scored strictly higher.
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
      if (candidates[i].second > candidates[best].second) best = i;
    }
    pi = candidates[best].first;
    round.end_eval_score = candidates[best].second;
    result.rounds.push_back(round);
    result.best = pi;
    result.best_eval_score = candidates[best].second;
  }
  return result;
}

nlohmann::ordered_json ProposalToJson(const ProposalRecord& r) {
  nlohmann::ordered_json j;
  j["round"] = r.round;
  j["proposal"] = r.proposal;
  j["budget_remaining"] = r.budget_remaining;
  j["round_budget_remaining"] = r.round_budget_remaining;
  j["train_score"] = r.train_score;
  j["candidate_train_score"] =
      r.candidate_train_score ? nlohmann::ordered_json(*r.candidate_train_score) : nullptr;
  j["accepted"] = r.accepted;
  j["eval_score"] = r.eval_score ? nlohmann::ordered_json(*r.eval_score) : nullptr;
  j["improved"] = r.improved;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

nlohmann::ordered_json RoundToJson(const RoundRecord& r) {
  nlohmann::ordered_json j;
  j["round"] = r.round;
  j["budget"] = r.budget;
  j["train_units"] = r.train_units;
  j["eval_units"] = r.eval_units;
  j["start_eval_score"] = r.start_eval_score;
  j["end_eval_score"] = r.end_eval_score;
  return j;
}

std::string ProposalLog(const SiftaResult& r) {
  std::string out;
  for (const auto& p : r.proposals) out += ProposalToJson(p).dump() + "\n";
  return out;
}

}  // namespace taskdv::sifta
