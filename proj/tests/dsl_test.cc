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

#include <random>

#include "support/oracles.h"
#include "taskdv/dsl.h"
#include "taskdv/evaluate.h"

namespace taskdv::dsl {
namespace {

TEST(Parse, Completeness) {
  Constraint c = ParseConstraint(R"(hasCompleteness("email", >= 0.99))");
  EXPECT_EQ(c.verb, Verb::kHasCompleteness);
  EXPECT_EQ(c.columns, std::vector<std::string>{"email"});
  ASSERT_TRUE(c.predicate);
  EXPECT_EQ(*c.predicate, Predicate::Make(Comparator::kGe, 0.99));
  EXPECT_FALSE(c.where);
}

TEST(Parse, WhereClause) {
  Constraint c = ParseConstraint(R"(hasCompleteness("colA", >= 0.99).where(colB > 10))");
  ASSERT_TRUE(c.where);
  EXPECT_EQ(*c.where, Expr::Compare("colB", CmpOp::kGt, Value::Integer(10)));
}

TEST(Parse, Satisfies) {
  Constraint c = ParseConstraint(
      R"(satisfies(status != "COMPLETED" or email is not null, "completed_has_email", >= 1.0))");
  EXPECT_EQ(c.verb, Verb::kSatisfies);
  EXPECT_EQ(c.columns, (std::vector<std::string>{"email", "status"}));
  EXPECT_EQ(c.name, "completed_has_email");
  EXPECT_EQ(*c.row_expr,
            Expr::Or(Expr::Compare("status", CmpOp::kNe, Value::Text("COMPLETED")),
                     Expr::IsNull("email", true)));
}

TEST(Parse, OtherVerbs) {
  Constraint q = ParseConstraint(R"(hasApproxQuantile("x", 0.5, between(1, 2)))");
  EXPECT_EQ(q.quantile, 0.5);
  EXPECT_EQ(*q.predicate, Predicate::Between(1, 2));
  Constraint in = ParseConstraint(R"(isContainedIn("loc", ["DE", "FR"]))");
  EXPECT_EQ(in.allowed, (std::vector<Value>{Value::Text("DE"), Value::Text("FR")}));
  EXPECT_FALSE(in.predicate);
  EXPECT_EQ(in.EffectivePredicate(), Predicate::Make(Comparator::kEq, 1.0));
  Constraint size = ParseConstraint("hasSize(in(3, 4))");
  EXPECT_TRUE(size.columns.empty());
  EXPECT_EQ(*size.predicate, Predicate::In({3, 4}));
  Constraint pat = ParseConstraint(R"(hasPattern("d", "\\d+", >= 0.9))");
  EXPECT_EQ(pat.pattern, "\\d+");
  Constraint quoted = ParseConstraint("isComplete(\"x\").where(`col 3` is null)");
  EXPECT_EQ(*quoted.where, Expr::IsNull("col 3"));
}

TEST(Parse, Errors) {
  auto kind_of = [](std::string_view text) {
    try {
      ParseConstraint(text);
    } catch (const DslError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "parsed: " << text;
    return DslError::Kind::kInvalid;
  };
  EXPECT_EQ(kind_of("hasFoo(\"x\")"), DslError::Kind::kUnknownVerb);
  EXPECT_EQ(kind_of("isComplete(\"x\", \"y\")"), DslError::Kind::kArity);
  EXPECT_EQ(kind_of("hasMin(\"x\")"), DslError::Kind::kArity);
  EXPECT_EQ(kind_of("hasMin(\"x\", >= )"), DslError::Kind::kSyntax);
  EXPECT_EQ(kind_of("hasMin(\"x\", between(3, 1))"), DslError::Kind::kInvalid);
  EXPECT_EQ(kind_of("hasPattern(\"x\", \"\\d\")"), DslError::Kind::kSyntax);
  EXPECT_EQ(kind_of("isComplete(\"x\") trailing"), DslError::Kind::kSyntax);
}

TEST(Parse, ErrorOffset) {
  try {
    ParseConstraint("hasMin(\"x\", >= ?)");
    FAIL();
  } catch (const DslError& e) {
    EXPECT_EQ(e.offset(), 15u);
  }
}

TEST(Render, RoundTripsExamples) {
  for (const char* text : {
           R"(hasCompleteness("email", >= 0.99))",
           R"(hasCompleteness("colA", >= 0.99).where(colB > 10))",
           R"(satisfies(status != "COMPLETED" or email is not null, "completed_has_email", >= 1.0))",
           R"(hasMin("x", between(-1.5, 2)))",
           R"(isContainedIn("c", [1, 2, 3], >= 0.5))",
           R"(hasApproxCountDistinct("c", <= 10).where(not (a == 1 and b < 2.5)))",
           R"(isUnique("k").where(`odd name` is not null))",
       }) {
    Constraint c = ParseConstraint(text);
    std::string r = RenderConstraint(c);
    EXPECT_TRUE(SameAst(ParseConstraint(r), c)) << text << " -> " << r;
    EXPECT_EQ(RenderConstraint(ParseConstraint(r)), r);
  }
}

TEST(Render, BetweenKeepsBounds) {
  Constraint c = ParseConstraint(R"(hasMean("x", between(0.1, 0.30000000000000004)))");
  Constraint back = ParseConstraint(RenderConstraint(c));
  EXPECT_EQ(back.predicate->value, 0.1);
  EXPECT_EQ(back.predicate->upper, 0.30000000000000004);
}

TEST(Render, RandomAstsRoundTrip) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 3000; ++i) {
    Dataset d = testing::RandomDataset(rng);
    Constraint c = testing::RandomConstraint(rng, d);
    std::string text = RenderConstraint(c);
    Constraint back;
    ASSERT_NO_THROW(back = ParseConstraint(text)) << text;
    EXPECT_TRUE(SameAst(back, c)) << text;
  }
}

TEST(Render, ExprPrecedence) {
  Expr e = Expr::And(Expr::Or(Expr::IsNull("a"), Expr::IsNull("b")), Expr::Not(Expr::IsNull("c")));
  std::string text = RenderExpr(e);
  EXPECT_EQ(ParseExpr(text), e) << text;
  Expr left = Expr::Or(Expr::Or(Expr::IsNull("a"), Expr::IsNull("b")), Expr::IsNull("c"));
  Expr right = Expr::Or(Expr::IsNull("a"), Expr::Or(Expr::IsNull("b"), Expr::IsNull("c")));
  EXPECT_EQ(ParseExpr(RenderExpr(left)), left);
  EXPECT_EQ(ParseExpr(RenderExpr(right)), right);
}

Dataset Emails(int present, int total) {
  std::vector<Value> v;
  for (int i = 0; i < total; ++i) {
    v.push_back(i < present ? Value::Text("u" + std::to_string(i) + "@x.org") : Value::Null());
  }
  return Dataset({ColumnVector("email", ValueKind::kText, v)});
}

TEST(Evaluate, CompletenessBoundary) {
  Constraint c = ParseConstraint(R"(hasCompleteness("email", >= 0.99))");
  auto ok = EvaluateConstraint(c, Emails(99, 100));
  EXPECT_EQ(ok.status, Status::kPass);
  EXPECT_EQ(*ok.measured, 0.99);
  auto bad = EvaluateConstraint(c, Emails(98, 100));
  EXPECT_EQ(bad.status, Status::kFail);
  EXPECT_EQ(*bad.measured, 0.98);
}

TEST(Evaluate, ZeroStddevFails) {
  std::vector<Value> v(20, Value::Real(12.5));
  Dataset d({ColumnVector("revenue", ValueKind::kReal, v)});
  auto o = EvaluateConstraint(ParseConstraint(R"(hasStandardDeviation("revenue", > 0.0))"), d);
  EXPECT_EQ(o.status, Status::kFail);
  EXPECT_EQ(*o.measured, 0.0);
}

TEST(Evaluate, ErrorKinds) {
  Dataset d = ParseCsv("n,t\n1,a\n2,b\n");
  auto schema = EvaluateConstraint(ParseConstraint(R"(isComplete("zz"))"), d);
  EXPECT_EQ(schema.status, Status::kError);
  EXPECT_EQ(schema.error, "schema");
  EXPECT_FALSE(schema.measured);
  auto type = EvaluateConstraint(ParseConstraint(R"(hasMean("t", > 0))"), d);
  EXPECT_EQ(type.error, "type");
  auto pattern = EvaluateConstraint(ParseConstraint(R"(hasPattern("t", "(("))"), d);
  EXPECT_EQ(pattern.error, "pattern");
  auto where_schema =
      EvaluateConstraint(ParseConstraint(R"(isComplete("n").where(q > 1))"), d);
  EXPECT_EQ(where_schema.error, "schema");
}

TEST(Evaluate, EmptyFilterIsVacuous) {
  Dataset d = ParseCsv("n\n1\n2\n");
  auto o = EvaluateConstraint(ParseConstraint(R"(hasMin("n", >= 5).where(n > 10))"), d);
  EXPECT_EQ(o.status, Status::kPass);
  EXPECT_FALSE(o.measured);
}

TEST(Evaluate, PatternIsAnchored) {
  Dataset d = ParseCsv("day\n2024-01-02\nx2024-01-02\n");
  auto o = EvaluateConstraint(
      ParseConstraint(R"(hasPattern("day", "\\d{4}-\\d{2}-\\d{2}", >= 0.5))"), d);
  EXPECT_EQ(*o.measured, 0.5);
}

TEST(Evaluate, SatisfiesCountsUnknownAsFalse) {
  Dataset d = ParseCsv("status,email\nCOMPLETED,a@b\nCOMPLETED,\nOPEN,\n,\n");
  auto o = EvaluateConstraint(
      ParseConstraint(R"(satisfies(status != "COMPLETED" or email is not null, "s"))"), d);
  // Row 4: status unknown and email null, so the expression is unknown.
  EXPECT_EQ(*o.measured, 0.5);
  EXPECT_EQ(o.status, Status::kFail);
}

TEST(Evaluate, AgreesWithReference) {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 3000; ++i) {
    Dataset d = testing::RandomDataset(rng);
    Constraint c = testing::RandomConstraint(rng, d);
    auto got = EvaluateConstraint(c, d);
    auto want = testing::ReferenceEvaluate(c, d);
    ASSERT_EQ(got.status, want.status) << RenderConstraint(c);
    ASSERT_EQ(got.measured.has_value(), want.measured.has_value()) << RenderConstraint(c);
    if (want.measured) ASSERT_EQ(*got.measured, *want.measured) << RenderConstraint(c);
    if (want.status == Status::kError) EXPECT_EQ(got.error, want.error);
  }
}

TEST(EvaluateTest, VerdictRule) {
  Dataset d = ParseCsv("n\n1\n2\n");
  DataUnitTest empty;
  EXPECT_FALSE(EvaluateTest(empty, d).rejected());

  const std::string pass = R"(hasMin("n", >= 0))";
  const std::string fail = R"(hasMax("n", <= 1))";
  const std::string error = R"(isComplete("missing"))";
  // Every combination of up to three statuses.
  std::vector<std::string> kinds = {pass, fail, error};
  for (int mask = 0; mask < 27; ++mask) {
    DataUnitTest t;
    bool any_fail = false;
    int m = mask;
    for (int i = 0; i < 3; ++i, m /= 3) {
      Constraint c = ParseConstraint(kinds[m % 3]);
      c.id = "c" + std::to_string(i);
      any_fail = any_fail || m % 3 == 1;
      t.constraints.push_back(c);
    }
    auto r = EvaluateTest(t, d);
    EXPECT_EQ(r.outcomes.size(), 3u);
    EXPECT_EQ(r.rejected(), any_fail) << mask;
  }
}

TEST(EvaluateTest, AddingConstraintsNeverUnrejects) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    Dataset d = testing::RandomDataset(rng);
    DataUnitTest t;
    bool rejected = false;
    for (int k = 0; k < 6; ++k) {
      Constraint c = testing::RandomConstraint(rng, d);
      c.id = "c" + std::to_string(k);
      t.constraints.push_back(c);
      bool now = EvaluateTest(t, d).rejected();
      EXPECT_TRUE(now || !rejected);
      rejected = now;
    }
  }
}

TEST(Precheck, Reasons) {
  Dataset d = ParseCsv("n\n1\n2\n");
  EXPECT_TRUE(PrecheckConstraint(ParseConstraint(R"(hasMin("n", >= 0))"), d).accepted);
  auto fails = PrecheckConstraint(ParseConstraint(R"(hasMin("n", >= 2))"), d);
  EXPECT_FALSE(fails.accepted);
  EXPECT_EQ(fails.reason, "fails_on_sample");
  auto schema = PrecheckConstraint(ParseConstraint(R"(isComplete("x"))"), d);
  EXPECT_FALSE(schema.accepted);
  EXPECT_EQ(schema.reason, "schema");
}

TEST(TestJson, RoundTrip) {
  DataUnitTest t;
  t.id = "t1";
  t.task_id = "task";
  Constraint c = ParseConstraint(R"(isComplete("email").where(status == "COMPLETED"))");
  c.id = "c1";
  c.assumption_ids = {"email#1"};
  t.constraints.push_back(c);
  DataUnitTest back = TestFromJson(TestToJson(t));
  EXPECT_EQ(back.id, "t1");
  EXPECT_EQ(back.task_id, "task");
  ASSERT_EQ(back.constraints.size(), 1u);
  EXPECT_EQ(back.constraints[0], c);
}

TEST(TestJson, DuplicateIdsRejected) {
  DataUnitTest t;
  Constraint c = ParseConstraint(R"(isComplete("a"))");
  c.id = "c1";
  t.constraints = {c, c};
  EXPECT_THROW(t.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace taskdv::dsl
