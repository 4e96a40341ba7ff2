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
#include <set>

#include "taskdv/dsl.h"
#include "taskdv/graph.h"
#include "taskdv/text.h"

namespace taskdv {
namespace {

const std::string kSource = "a = 1\nb = 2\nc = a + b\nprint(c)\n";

TEST(Annotate, EmptyMapIsIdentity) {
  EXPECT_EQ(AnnotateCode(kSource, {}), kSource);
}

TEST(Annotate, MarksExactlyCoveredLines) {
  std::string out = AnnotateCode(kSource, {{"email", {{"t.py", 3, 4}}}});
  EXPECT_EQ(out, "a = 1\nb = 2\nc = a + b # TASKDV_COL[email]\nprint(c) # TASKDV_COL[email]\n");
  EXPECT_EQ(StripAnnotations(out), kSource);
}

TEST(Annotate, OverlappingColumnsSortedByName) {
  std::string out =
      AnnotateCode(kSource, {{"zeta", {{"t.py", 2, 2}}}, {"alpha", {{"t.py", 1, 2}}}});
  EXPECT_NE(out.find("b = 2 # TASKDV_COL[alpha,zeta]\n"), std::string::npos);
  EXPECT_EQ(StripAnnotations(out), kSource);
}

TEST(Annotate, Errors) {
  EXPECT_THROW(AnnotateCode(kSource, {{"x", {{"t.py", 4, 5}}}}), std::out_of_range);
  EXPECT_THROW(AnnotateCode(kSource, {{"x", {{"t.py", 0, 1}}}}), std::out_of_range);
  EXPECT_THROW(AnnotateCode("x = 1 # TASKDV_COL[x]\n", {{"x", {{"t.py", 1, 1}}}}),
               std::invalid_argument);
}

TEST(Annotate, RandomSpanSetsRoundTrip) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> pieces = {"x = 1", "", "  y = \"ü\"", "# note", "z\r",
                                           "for r in rows:", "\tpass"};
  for (int trial = 0; trial < 500; ++trial) {
    int lines = 1 + static_cast<int>(rng() % 12);
    std::string src;
    for (int i = 0; i < lines; ++i) {
      src += pieces[rng() % pieces.size()];
      if (i + 1 < lines || rng() % 2) src += "\n";
    }
    lines = static_cast<int>(SplitLinesKeepEnds(src).size());
    ColumnSpans spans;
    for (int k = 0; lines > 0 && k < static_cast<int>(rng() % 4); ++k) {
      std::string col = "c" + std::to_string(rng() % 3);
      int a = 1 + static_cast<int>(rng() % lines);
      int b = a + static_cast<int>(rng() % (lines - a + 1));
      spans[col].push_back({"t.py", a, b});
    }
    std::string annotated = AnnotateCode(src, spans);
    ASSERT_EQ(StripAnnotations(annotated), src);
  }
}

Assumption A(std::string id, std::string text, AssumptionKind k = AssumptionKind::kSingleColumn) {
  return {std::move(id), std::move(text), k};
}

TEST(Graph, LinkIsIdempotent) {
  AssumptionGraph g;
  g.AddColumnNode({"email"});
  auto a = A("email#1", "COMPLETED rows must have email");
  g.Link({"email"}, a, {{"t.py", 3, 4}});
  EXPECT_EQ(g.edges().size(), 1u);
  AssumptionGraph before = g;
  g.Link({"email"}, a, {{"t.py", 3, 4}});
  EXPECT_EQ(g, before);
  g.CheckInvariants();
}

TEST(Graph, SetNodesAreCanonical) {
  AssumptionGraph g;
  g.AddColumnNode({"status", "email"});
  EXPECT_TRUE(g.HasColumnNode(CanonicalNode({"email", "status"})));
  g.Link(CanonicalNode({"status", "email"}),
         A("email+status#1", "completed implies email", AssumptionKind::kMultiColumn),
         {{"t.py", 1, 1}});
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0].column, (ColumnNode{"email", "status"}));
  EXPECT_EQ(NodeKey(g.edges()[0].column), "email+status");
}

TEST(Graph, LinkErrors) {
  AssumptionGraph g;
  g.AddColumnNode({"a"});
  EXPECT_THROW(g.Link({"b"}, A("x", "t"), {}), std::invalid_argument);
  EXPECT_THROW(g.Link({"a"}, A("x", ""), {}), std::invalid_argument);
  g.Link({"a"}, A("x", "t"), {});
  EXPECT_THROW(g.Link({"a"}, A("x", "different"), {}), std::invalid_argument);
}

TEST(Graph, SpansMergeAndDeduplicate) {
  AssumptionGraph g;
  g.AddColumnNode({"a"});
  g.AddColumnNode({"b"});
  auto as = A("shared", "t");
  g.Link({"a"}, as, {{"t.py", 5, 6}, {"t.py", 1, 2}});
  g.Link({"a"}, as, {{"t.py", 1, 2}, {"t.py", 9, 9}});
  g.Link({"b"}, as, {{"t.py", 5, 6}});
  EXPECT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.SpansOf("shared"),
            (std::vector<CodeSpan>{{"t.py", 1, 2}, {"t.py", 5, 6}, {"t.py", 9, 9}}));
}

TEST(Graph, JsonRoundTrip) {
  AssumptionGraph g;
  g.AddColumnNode({"a"});
  g.AddColumnNode({"a", "b"});
  g.AddColumnNode({"unlinked"});
  g.Link({"a"}, A("a#1", "positive"), {{"t.py", 2, 3}});
  g.Link({"a", "b"}, A("a+b#1", "a below b", AssumptionKind::kMultiColumn), {{"t.py", 4, 4}});
  AssumptionGraph back = GraphFromJson(GraphToJson(g));
  EXPECT_EQ(back, g);
  back.CheckInvariants();
}

dsl::DataUnitTest OneTest(std::vector<std::vector<std::string>> ids) {
  dsl::DataUnitTest t;
  for (size_t i = 0; i < ids.size(); ++i) {
    auto c = dsl::ParseConstraint("isComplete(\"a\")");
    c.id = "c" + std::to_string(i + 1);
    c.assumption_ids = ids[i];
    t.constraints.push_back(c);
  }
  return t;
}

TEST(Backtrace, Cases) {
  AssumptionGraph g;
  g.AddColumnNode({"a"});
  g.Link({"a"}, A("p", "first"), {{"t.py", 1, 2}, {"t.py", 4, 4}});
  g.Link({"a"}, A("q", "second"), {{"t.py", 4, 4}, {"t.py", 7, 8}});
  auto t = OneTest({{"p"}, {}, {"p", "q"}});

  auto one = Backtrace(g, t, "c1");
  ASSERT_EQ(one.assumptions.size(), 1u);
  EXPECT_EQ(one.assumptions[0].text, "first");
  EXPECT_EQ(one.spans.size(), 2u);

  auto none = Backtrace(g, t, "c2");
  EXPECT_TRUE(none.assumptions.empty());
  EXPECT_TRUE(none.spans.empty());

  auto both = Backtrace(g, t, "c3");
  EXPECT_EQ(both.assumptions.size(), 2u);
  std::set<CodeSpan> want = {{"t.py", 1, 2}, {"t.py", 4, 4}, {"t.py", 7, 8}};
  EXPECT_EQ(std::set<CodeSpan>(both.spans.begin(), both.spans.end()), want);
  EXPECT_EQ(both.spans.size(), want.size());

  EXPECT_THROW(Backtrace(g, t, "c9"), std::invalid_argument);
}

}  // namespace
}  // namespace taskdv
