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

// Constraint language AST, parser, and printer.
//
// Surface syntax (see docs/grammar.ebnf):
//
//   hasCompleteness("email", >= 0.99).where(revenue > 10)
//   satisfies(status != "COMPLETED" or email is not null, "name", >= 1.0)
//   isContainedIn("location", ["DE", "FR"])
//
// Predicates compare the measured metric against literals: `>= x`, `<= x`,
// `== x`, `> x`, `< x`, `!= x`, `between(lo, hi)`, `in(a, b, ...)`.

#ifndef TASKDV_DSL_H_
#define TASKDV_DSL_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "taskdv/tabular.h"

namespace taskdv::dsl {

enum class Comparator { kGe, kLe, kEq, kGt, kLt, kNe, kBetween, kIn };

struct Predicate {
  Comparator op = Comparator::kGe;
  double value = 0;  // threshold, or lower bound for between
  double upper = 0;  // between only
  std::vector<double> set;  // in only

  static Predicate Make(Comparator op, double value) { return {op, value, 0, {}}; }
  static Predicate Between(double lo, double hi) {
    return {Comparator::kBetween, lo, hi, {}};
  }
  static Predicate In(std::vector<double> values) {
    return {Comparator::kIn, 0, 0, std::move(values)};
  }

  bool Holds(double measured) const;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

enum class CmpOp { kEq, kNe, kLt, kLe, kGt, kGe };

// Row-scoped boolean expression with three-valued (Kleene) logic: comparisons
// against a null cell are unknown, and a row qualifies only when the whole
// expression is true.
struct Expr {
  enum class Kind { kCompare, kIsNull, kNot, kAnd, kOr };

  Kind kind = Kind::kCompare;
  std::string column;       // kCompare, kIsNull
  CmpOp op = CmpOp::kEq;    // kCompare
  Value literal;            // kCompare
  bool negated = false;     // kIsNull: `is not null`
  std::vector<Expr> children;  // kNot: 1, kAnd/kOr: 2

  static Expr Compare(std::string column, CmpOp op, Value literal);
  static Expr IsNull(std::string column, bool negated = false);
  static Expr Not(Expr e);
  static Expr And(Expr a, Expr b);
  static Expr Or(Expr a, Expr b);

  // Referenced column names, sorted and deduplicated.
  std::vector<std::string> Columns() const;

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class Verb {
  kHasCompleteness,
  kIsComplete,
  kIsUnique,
  kHasMin,
  kHasMax,
  kHasMean,
  kHasStandardDeviation,
  kHasApproxCountDistinct,
  kHasApproxQuantile,
  kIsContainedIn,
  kHasPattern,
  kHasSize,
  kSatisfies,
};

std::string_view VerbName(Verb v);
std::optional<Verb> VerbFromName(std::string_view name);

struct Constraint {
  std::string id;
  Verb verb = Verb::kHasCompleteness;
  // Target columns: one for most verbs, none for hasSize, the expression's
  // columns (sorted) for satisfies.
  std::vector<std::string> columns;
  // Absent for isComplete/isUnique, and when an optional predicate is left
  // at its default (== 1.0) for isContainedIn/hasPattern/satisfies.
  std::optional<Predicate> predicate;
  double quantile = 0;            // hasApproxQuantile
  std::vector<Value> allowed;     // isContainedIn
  std::string pattern;            // hasPattern
  std::optional<Expr> row_expr;   // satisfies
  std::string name;               // satisfies
  std::optional<Expr> where;
  std::vector<std::string> assumption_ids;

  // Predicate applied at evaluation, with defaults filled in.
  Predicate EffectivePredicate() const;
  // Every column the constraint reads, including the where clause.
  std::vector<std::string> ReferencedColumns() const;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Structural equality ignoring id and assumption provenance.
bool SameAst(const Constraint& a, const Constraint& b);

struct DataUnitTest {
  std::string id;
  std::string task_id;
  std::vector<Constraint> constraints;

  const Constraint* find(std::string_view constraint_id) const;
  // Throws std::invalid_argument on duplicate constraint ids.
  void Validate() const;
};

class DslError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kUnknownVerb, kArity, kInvalid };
  DslError(Kind kind, size_t offset, const std::string& message);
  Kind kind() const { return kind_; }
  size_t offset() const { return offset_; }

 private:
  Kind kind_;
  size_t offset_;
};

Constraint ParseConstraint(std::string_view text);
Expr ParseExpr(std::string_view text);
std::string RenderConstraint(const Constraint& c);
std::string RenderExpr(const Expr& e);
std::string RenderPredicate(const Predicate& p);
std::string RenderLiteral(const Value& v);

}  // namespace taskdv::dsl

#endif  // TASKDV_DSL_H_
