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


#include <gtest/gtest.h>

#include "support/oracles.h"
#include "support/scripted.h"
#include "taskdv/backend.h"
#include "taskdv/sifta.h"

namespace taskdv::sifta {
namespace {

using dsl::Status;
using testing::MakeLoopFixture;
using testing::ScriptedProposer;
using testing::ScriptedProvider;
using testing::VersionOf;
using testing::WithVersion;

// One task, constraints c1..cn on the given columns, and per-batch statuses.
struct Grid {
  dsl::DataUnitTest test;
  std::vector<BatchEvidence> batches;
};

Grid MakeGrid(const std::vector<std::string>& columns,
              const std::vector<std::vector<Status>>& per_batch, const std::vector<int>& outcomes) {
  Grid g;
  for (size_t i = 0; i < columns.size(); ++i) {
    auto c = dsl::ParseConstraint("isComplete(\"" + columns[i] + "\")");
    c.id = "c" + std::to_string(i + 1);
    g.test.constraints.push_back(c);
  }
  for (size_t b = 0; b < per_batch.size(); ++b) {
    BatchEvidence e;
    e.batch_id = "D" + std::to_string(b + 1);
    e.outcome = outcomes[b];
    for (size_t i = 0; i < per_batch[b].size(); ++i) {
      e.report.outcomes.push_back({"c" + std::to_string(i + 1), per_batch[b][i], {}, "", ""});
    }
    g.batches.push_back(e);
  }
  return g;
}

TEST(ColumnPrediction, Conjunction) {
  auto p = [](std::vector<Status> s) {
    auto g = MakeGrid(std::vector<std::string>(s.size(), "x"), {s}, {1});
    return ColumnPrediction(g.test, "x", g.batches[0].report);
  };
  EXPECT_EQ(p({Status::kPass, Status::kPass}), 1);
  EXPECT_EQ(p({Status::kPass, Status::kFail}), 0);
  EXPECT_EQ(p({Status::kError, Status::kPass}), 1);
  EXPECT_EQ(p({Status::kError, Status::kFail}), 0);
  auto g = MakeGrid({"x"}, {{Status::kFail}}, {1});
  EXPECT_EQ(ColumnPrediction(g.test, "other", g.batches[0].report), 1);
}

TEST(Cfpr, Examples) {
  const auto P = Status::kPass, F = Status::kFail;
  auto half = MakeGrid({"x"}, {{F}, {P}, {F}}, {0, 1, 1});
  EXPECT_EQ(ComputeCfpr(half.test, "x", half.batches), 0.5);
  auto never = MakeGrid({"x"}, {{P}, {P}}, {0, 0});
  EXPECT_FALSE(ComputeCfpr(never.test, "x", never.batches));
  auto single = MakeGrid({"x"}, {{F}}, {0});
  EXPECT_EQ(ComputeCfpr(single.test, "x", single.batches), 1.0);
}

TEST(Fpr, Examples) {
  const auto P = Status::kPass, F = Status::kFail;
  auto alarm = MakeGrid({"x"}, {{P}, {F}}, {1, 1});
  EXPECT_EQ(ComputeFpr("c1", alarm.batches), 0.0);
  auto never = MakeGrid({"x"}, {{P}, {P}}, {0, 0});
  EXPECT_EQ(ComputeFpr("c1", never.batches), 0.0);
  auto exact = MakeGrid({"x"}, {{F}, {F}}, {0, 0});
  EXPECT_EQ(ComputeFpr("c1", exact.batches), 1.0);
}

TEST(Cfpr, MatchesOracleOnEnumeratedGrids) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    size_t k = 1 + rng() % 5, nb = 1 + rng() % 6;
    std::vector<std::vector<Status>> per_batch(nb, std::vector<Status>(k));
    std::vector<int> outcomes(nb);
    for (size_t b = 0; b < nb; ++b) {
      outcomes[b] = static_cast<int>(rng() % 2);
      for (auto& s : per_batch[b]) s = static_cast<Status>(rng() % 3);
    }
    auto g = MakeGrid(std::vector<std::string>(k, "x"), per_batch, outcomes);
    auto want = testing::RefCfpr(per_batch, outcomes);
    EXPECT_EQ(ComputeCfpr(g.test, "x", g.batches), want);
    for (size_t i = 0; i < k; ++i) {
      std::vector<Status> col;
      for (size_t b = 0; b < nb; ++b) col.push_back(per_batch[b][i]);
      EXPECT_EQ(ComputeFpr("c" + std::to_string(i + 1), g.batches), testing::RefFpr(col, outcomes));
    }
  }
}

TEST(SelectBottomK, Rules) {
  std::vector<ConstraintScore> s = {{"x", "c3", 1.0, 1}, {"x", "c2", 0.5, 2}, {"x", "c1", 0.0, 1},
                                    {"y", "c4", 0.0, 1}, {"y", "c9", 0.0, 3}, {"y", "c5", 0.0, 0}};
  auto picked = SelectBottomK(s, 2);
  ASSERT_EQ(picked.at("x").size(), 2u);
  EXPECT_EQ(picked.at("x")[0].constraint_id, "c1");
  EXPECT_EQ(picked.at("x")[1].constraint_id, "c2");
  // c5 never failed, so it is not a candidate; c4 and c9 tie at 0.
  ASSERT_EQ(picked.at("y").size(), 2u);
  EXPECT_EQ(picked.at("y")[0].constraint_id, "c4");
  EXPECT_EQ(picked.at("y")[1].constraint_id, "c9");
  auto few = SelectBottomK({{"z", "c1", 0.3, 1}}, 5);
  EXPECT_EQ(few.at("z").size(), 1u);
}

TEST(MeanCfpr, AbsentCountsAsZero) {
  EXPECT_EQ(MeanWithAbsentAsZero({1.0, 0.5}), 0.75);
  EXPECT_EQ(MeanWithAbsentAsZero({std::nullopt}), 0.0);
  EXPECT_EQ(MeanWithAbsentAsZero({1.0, 1.0, 1.0}), 1.0);
  EXPECT_EQ(MeanWithAbsentAsZero({1.0, std::nullopt}), 0.5);
}

TEST(Scorer, MeanCfprAndCondense) {
  auto fx = MakeLoopFixture();
  ScriptedProvider provider(fx.table);
  Scorer scorer(provider, fx.batches);
  PromptSet v0 = WithVersion(PromptSet::Defaults(), "v0");
  EXPECT_THROW(scorer.MeanCfpr(v0, {}, fx.observations.train), std::domain_error);

  auto units = scorer.Condense(fx.observations.train, v0);
  ASSERT_EQ(units.size(), 1u);
  EXPECT_EQ(units[0], (TaskColumnUnit{"a", "x"}));
  EXPECT_EQ(scorer.MeanCfpr(v0, units, fx.observations.train), 1.0);
  EXPECT_EQ(scorer.MeanCfpr(v0, {{"b", "x"}}, fx.observations.eval), 0.5);

  // Cached tests: asking again does not regenerate.
  size_t calls = provider.calls();
  scorer.MeanCfpr(v0, units, fx.observations.train);
  EXPECT_EQ(provider.calls(), calls);
}

TEST(Scorer, CondenseFindsEveryFailingColumn) {
  class TwoColumns : public TestProvider {
   public:
    GeneratedTest Generate(const std::string& task, const PromptSet&) override {
      GeneratedTest g;
      g.test.id = task;
      g.accessed = {"x", "y", "z"};
      const char* texts[] = {"hasMax(\"x\", <= 2)", "hasMax(\"y\", <= 2)", "isComplete(\"z\")"};
      for (int i = 0; i < 3; ++i) {
        auto c = dsl::ParseConstraint(texts[i]);
        c.id = "c" + std::to_string(i + 1);
        g.test.constraints.push_back(c);
      }
      return g;
    }
  } provider;
  std::map<std::string, Dataset> batches = {
      {"b1", ParseCsv("x,y,z\n1,1,1\n3,5,1\n")},
      {"b2", ParseCsv("x,y,z\n1,1,1\n")}};
  Scorer scorer(provider, batches);
  auto units = scorer.Condense({{"t", "b1", 0}, {"t", "b2", 1}}, PromptSet::Defaults());
  EXPECT_EQ(units, (std::vector<TaskColumnUnit>{{"t", "x"}, {"t", "y"}}));
  auto none = scorer.Condense({{"t", "b2", 1}}, PromptSet::Defaults());
  EXPECT_TRUE(none.empty());
  auto all = scorer.AllUnits({{"t", "b2", 1}}, PromptSet::Defaults());
  EXPECT_EQ(all.size(), 3u);
}

TEST(Feedback, ContainsConstraintsAssumptionsAndCode) {
  EXPECT_EQ(BuildFeedback({}, {}), "");
  GeneratedTest gt;
  gt.source = "import sys\nrev = load()\nz = rev / rev.std()\n";
  gt.graph.AddColumnNode({"revenue"});
  gt.graph.Link({"revenue"}, {"revenue#1", "revenue varies", AssumptionKind::kSingleColumn},
                {{"t.py", 2, 3}});
  auto c = dsl::ParseConstraint("hasStandardDeviation(\"revenue\", > 0)");
  c.id = "c1";
  c.assumption_ids = {"revenue#1"};
  gt.test.constraints.push_back(c);
  UnitFeedback u{{"t", "revenue"}, 0.25, {{"revenue", "c1", 0.25, 4}}};
  std::string fb = BuildFeedback({u}, {{"t", &gt}});
  EXPECT_NE(fb.find(dsl::RenderConstraint(c)), std::string::npos);
  EXPECT_NE(fb.find("revenue varies"), std::string::npos);
  EXPECT_NE(fb.find("rev = load()"), std::string::npos);
  EXPECT_NE(fb.find("z = rev / rev.std()"), std::string::npos);
  EXPECT_EQ(fb.find("import sys"), std::string::npos);
}

TEST(ApplyProposal, Contract) {
  PromptSet base = PromptSet::Defaults();
  PromptSet out;
  EXPECT_EQ(ApplyProposal(base, {{"prompts", nlohmann::json::object()}}, &out), "");
  EXPECT_EQ(out, base);
  std::string gen(kGenColumnConstraints);
  EXPECT_EQ(ApplyProposal(base, {{"prompts", {{gen, base.at(gen) + " Prefer ranges."}}}}, &out),
            "");
  for (auto name : kPromptNames) {
    if (name == kGenColumnConstraints) {
      EXPECT_NE(out.at(name), base.at(name));
    } else {
      EXPECT_EQ(out.at(name), base.at(name));
    }
  }
  PromptSet untouched;
  EXPECT_NE(ApplyProposal(base, {{"prompts", {{gen, ""}}}}, &untouched), "");
  EXPECT_NE(ApplyProposal(base, {{"prompts", {{gen, nullptr}}}}, &untouched), "");
  EXPECT_NE(ApplyProposal(base, {{"prompts", {{"bogus", "x"}}}}, &untouched), "");
  EXPECT_NE(ApplyProposal(base, {{"text", "x"}}, &untouched), "");
  EXPECT_TRUE(untouched.templates.empty());
}

TEST(ModelProposer, UsesTranscript) {
  MockBackend mock(testing::FixturesDir() / "mock");
  ModelProposer proposer(mock);
  PromptSet base = PromptSet::Defaults();
  auto next = proposer.Propose(base, "feedback");
  ASSERT_TRUE(next);
  EXPECT_NE(next->at(kGenColumnConstraints), base.at(kGenColumnConstraints));
  EXPECT_EQ(next->at(kSummarizeLink), base.at(kSummarizeLink));
  EXPECT_EQ(proposer.proposals(), 1u);
}

TEST(SiftaConfig, Validation) {
  SiftaConfig ok;
  EXPECT_NO_THROW(ok.Validate());
  SiftaConfig bad;
  bad.n_train = 0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
}

TEST(ObservationSet, Validation) {
  ObservationSet dup{{{"a", "b1", 1}, {"a", "b1", 0}}, {}};
  EXPECT_THROW(dup.Validate(), std::invalid_argument);
  ObservationSet overlap{{{"a", "b1", 1}}, {{"a", "b1", 1}}};
  EXPECT_THROW(overlap.Validate(), std::invalid_argument);
  ObservationSet fine{{{"a", "b1", 1}}, {{"b", "b1", 1}}};
  EXPECT_NO_THROW(fine.Validate());
}

TEST(Optimize, FirstRoundBudget) {
  auto fx = MakeLoopFixture();
  ScriptedProvider provider(fx.table);
  Scorer scorer(provider, fx.batches);
  ScriptedProposer proposer({}, "v0");
  SiftaConfig cfg;
  auto r = Optimize(cfg, fx.observations, WithVersion(PromptSet::Defaults(), "v0"), scorer,
                    proposer);
  ASSERT_EQ(r.rounds.size(), 3u);
  EXPECT_EQ(r.rounds[0].budget, 5);
  EXPECT_EQ(r.charged, 15);
  EXPECT_EQ(VersionOf(r.best), "v0");
}

TEST(Optimize, ReturnsTheImprovingCandidate) {
  auto fx = MakeLoopFixture();
  ScriptedProvider provider(fx.table);
  Scorer scorer(provider, fx.batches);
  ScriptedProposer proposer({"v2"}, "v0");
  auto r = Optimize(SiftaConfig{}, fx.observations, WithVersion(PromptSet::Defaults(), "v0"),
                    scorer, proposer);
  EXPECT_EQ(VersionOf(r.best), "v2");
  EXPECT_EQ(r.best_eval_score, 1.0);
  for (const auto& round : r.rounds) EXPECT_GE(round.end_eval_score, round.start_eval_score);
  ASSERT_FALSE(proposer.feedback().empty());
  EXPECT_NE(proposer.feedback()[0].find("Task a, column x"), std::string::npos);
}

TEST(Optimize, EarlyStopAfterPatience) {
  auto fx = MakeLoopFixture();
  ScriptedProvider provider(fx.table);
  Scorer scorer(provider, fx.batches);
  ScriptedProposer proposer({}, "v0");
  SiftaConfig cfg;
  cfg.early_stop_patience = 3;
  auto r = Optimize(cfg, fx.observations, WithVersion(PromptSet::Defaults(), "v0"), scorer,
                    proposer);
  EXPECT_TRUE(r.stopped_early);
  EXPECT_EQ(r.proposals.size(), 3u);
  EXPECT_EQ(r.charged, 3);
}

TEST(Optimize, Reproducible) {
  auto run = [] {
    auto fx = MakeLoopFixture();
    ScriptedProvider provider(fx.table);
    Scorer scorer(provider, fx.batches);
    ScriptedProposer proposer({"v1", "v3", std::nullopt, "v2"}, "v0");
    return ProposalLog(Optimize(SiftaConfig{}, fx.observations,
                                WithVersion(PromptSet::Defaults(), "v0"), scorer, proposer));
  };
  std::string first = run();
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, run());
}

TEST(Optimize, BudgetNeverExceeded) {
  std::mt19937_64 rng(6);
  const std::vector<std::optional<std::string>> choices = {"v0", "v1", "v2", "v3", std::nullopt};
  for (int trial = 0; trial < 40; ++trial) {
    auto fx = MakeLoopFixture();
    ScriptedProvider provider(fx.table);
    Scorer scorer(provider, fx.batches);
    std::vector<std::optional<std::string>> script;
    for (int i = 0; i < 30; ++i) script.push_back(choices[rng() % choices.size()]);
    ScriptedProposer proposer(script, "v1");
    SiftaConfig cfg;
    cfg.b_eval = 1 + static_cast<int>(rng() % 20);
    cfg.n_round = 1 + static_cast<int>(rng() % 4);
    auto r = Optimize(cfg, fx.observations, WithVersion(PromptSet::Defaults(), "v0"), scorer,
                      proposer);
    EXPECT_LE(r.charged, cfg.b_eval);
    int remaining = cfg.b_eval;
    for (size_t t = 0; t < r.rounds.size(); ++t) {
      EXPECT_EQ(r.rounds[t].budget, remaining / (cfg.n_round - static_cast<int>(t)));
      int used = 0;
      for (const auto& p : r.proposals) {
        if (p.round == r.rounds[t].round && p.accepted) ++used;
      }
      remaining -= used;
    }
    for (const auto& p : r.proposals) {
      if (p.accepted) EXPECT_GE(*p.candidate_train_score, p.train_score);
    }
  }
}

}  // namespace
}  // namespace taskdv::sifta
