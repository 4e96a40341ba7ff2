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

#include "taskdv/evaluate.h"

#include <algorithm>
#include <regex>
#include <set>

#include "taskdv/profile.h"

namespace taskdv::dsl {

std::string_view StatusName(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kError: return "error";
  }
  return "error";
}

bool TestReport::rejected() const {
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [](const ConstraintOutcome& o) { return o.status == Status::kFail; });
}

const ConstraintOutcome* TestReport::find(std::string_view constraint_id) const {
  for (const ConstraintOutcome& o : outcomes) {
    if (o.constraint_id == constraint_id) return &o;
  }
  return nullptr;
}

namespace {

bool Compatible(const ColumnVector& col, const Value& literal) {
  if (col.null_count() == col.size()) return true;
  switch (literal.kind()) {
    case ValueKind::kInteger:
    case ValueKind::kReal:
      return col.is_numeric();
    case ValueKind::kText:
      return col.type() == ValueKind::kText;
    case ValueKind::kBoolean:
      return col.type() == ValueKind::kBoolean;
    case ValueKind::kNull:
      return false;
  }
  return false;
}

// Three-way comparison of a non-null cell with a compatible literal.
int Compare3(const Value& cell, const Value& lit) {
  if (cell.kind() == ValueKind::kInteger && lit.kind() == ValueKind::kInteger) {
    return cell.as_int() < lit.as_int() ? -1 : cell.as_int() > lit.as_int() ? 1 : 0;
  }
  if (cell.is_numeric()) {
    double a = cell.as_number(), b = lit.as_number();
    return a < b ? -1 : a > b ? 1 : 0;
  }
  if (cell.kind() == ValueKind::kBoolean) {
    return static_cast<int>(cell.as_bool()) - static_cast<int>(lit.as_bool());
  }
  int r = cell.as_text().compare(lit.as_text());
  return r < 0 ? -1 : r > 0 ? 1 : 0;
}

bool ApplyCmp(CmpOp op, int r) {
  switch (op) {
    case CmpOp::kEq: return r == 0;
    case CmpOp::kNe: return r != 0;
    case CmpOp::kLt: return r < 0;
    case CmpOp::kLe: return r <= 0;
    case CmpOp::kGt: return r > 0;
    case CmpOp::kGe: return r >= 0;
  }
  return false;
}

class TypeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void CheckExpr(const Expr& e, const Dataset& d) {
  switch (e.kind) {
    case Expr::Kind::kCompare: {
      const ColumnVector& col = d.column(e.column);
      if (!Compatible(col, e.literal)) {
        throw TypeMismatch("cannot compare " + std::string(KindName(col.type())) +
                           " column '" + e.column + "' with " +
                           std::string(KindName(e.literal.kind())) + " literal");
      }
      break;
    }
    case Expr::Kind::kIsNull:
      d.column(e.column);
      break;
    default:
      for (const Expr& c : e.children) CheckExpr(c, d);
  }
}

void EvalInto(const Expr& e, const Dataset& d, std::vector<Truth>* out) {
  const size_t n = d.row_count();
  switch (e.kind) {
    case Expr::Kind::kCompare: {
      const ColumnVector& col = d.column(e.column);
      out->resize(n);
      for (size_t r = 0; r < n; ++r) {
        if (col.is_null(r)) {
          (*out)[r] = Truth::kUnknown;
        } else {
          (*out)[r] = ApplyCmp(e.op, Compare3(col[r], e.literal)) ? Truth::kTrue
                                                                   : Truth::kFalse;
        }
      }
      return;
    }
    case Expr::Kind::kIsNull: {
      const ColumnVector& col = d.column(e.column);
      out->resize(n);
      for (size_t r = 0; r < n; ++r) {
        (*out)[r] = col.is_null(r) != e.negated ? Truth::kTrue : Truth::kFalse;
      }
      return;
    }
    case Expr::Kind::kNot: {
      EvalInto(e.children[0], d, out);
      for (Truth& t : *out) {
        if (t == Truth::kTrue) {
          t = Truth::kFalse;
        } else if (t == Truth::kFalse) {
          t = Truth::kTrue;
        }
      }
      return;
    }
    case Expr::Kind::kAnd:
    case Expr::Kind::kOr: {
      std::vector<Truth> rhs;
      EvalInto(e.children[0], d, out);
      EvalInto(e.children[1], d, &rhs);
      bool is_and = e.kind == Expr::Kind::kAnd;
      for (size_t r = 0; r < n; ++r) {
        Truth a = (*out)[r], b = rhs[r];
        (*out)[r] = is_and ? std::min(a, b) : std::max(a, b);
      }
      return;
    }
  }
}

ConstraintOutcome Error(const Constraint& c, std::string kind, std::string message) {
  ConstraintOutcome o;
  o.constraint_id = c.id;
  o.status = Status::kError;
  o.error = std::move(kind);
  o.message = std::move(message);
  return o;
}

bool IsNumericVerb(Verb v) {
  return v == Verb::kHasMin || v == Verb::kHasMax || v == Verb::kHasMean ||
         v == Verb::kHasStandardDeviation || v == Verb::kHasApproxQuantile;
}

}  // namespace

std::vector<Truth> EvalExpr(const Expr& e, const Dataset& d) {
  CheckExpr(e, d);
  std::vector<Truth> out;
  EvalInto(e, d, &out);
  return out;
}

std::vector<bool> FilterMask(const Expr& e, const Dataset& d) {
  std::vector<Truth> t = EvalExpr(e, d);
  std::vector<bool> mask(t.size());
  for (size_t r = 0; r < t.size(); ++r) mask[r] = t[r] == Truth::kTrue;
  return mask;
}

ConstraintOutcome EvaluateConstraint(const Constraint& c, const Dataset& d,
                                     const EvalOptions& opts) {
  for (const std::string& name : c.ReferencedColumns()) {
    if (!d.has_column(name)) return Error(c, "schema", "missing column '" + name + "'");
  }

  const ColumnVector* col = c.columns.empty() || c.verb == Verb::kSatisfies
                                ? nullptr
                                : &d.column(c.columns[0]);
  try {
    if (c.where) CheckExpr(*c.where, d);
    if (c.row_expr) CheckExpr(*c.row_expr, d);
  } catch (const TypeMismatch& e) {
    return Error(c, "type", e.what());
  }
  if (col != nullptr && IsNumericVerb(c.verb) && !col->is_numeric() &&
      col->null_count() != col->size()) {
    return Error(c, "type", std::string(VerbName(c.verb)) + " on " +
                                std::string(KindName(col->type())) + " column '" +
                                col->name() + "'");
  }
  if (c.verb == Verb::kHasPattern && col->type() != ValueKind::kText &&
      col->null_count() != col->size()) {
    return Error(c, "type", "hasPattern on " + std::string(KindName(col->type())) +
                                " column '" + col->name() + "'");
  }
  if (c.verb == Verb::kIsContainedIn) {
    for (const Value& v : c.allowed) {
      if (!Compatible(*col, v)) {
        return Error(c, "type", "value " + RenderLiteral(v) + " cannot occur in " +
                                    std::string(KindName(col->type())) + " column '" +
                                    col->name() + "'");
      }
    }
  }
  std::optional<std::regex> re;
  if (c.verb == Verb::kHasPattern) {
    try {
      re.emplace(c.pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      return Error(c, "pattern", "invalid pattern: " + std::string(e.what()));
    }
  }

  std::vector<size_t> rows;
  if (c.where) {
    std::vector<Truth> t;
    EvalInto(*c.where, d, &t);
    for (size_t r = 0; r < t.size(); ++r) {
      if (t[r] == Truth::kTrue) rows.push_back(r);
    }
  } else {
    rows.resize(d.row_count());
    for (size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  }

  ConstraintOutcome out;
  out.constraint_id = c.id;
  if (rows.empty()) {
    out.message = "no rows selected";
    return out;
  }
  auto ratio = [](size_t num, size_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  };
  std::vector<size_t> present;
  if (col != nullptr) {
    for (size_t r : rows) {
      if (!col->is_null(r)) present.push_back(r);
    }
  }

  std::optional<double> measured;
  switch (c.verb) {
    case Verb::kHasCompleteness:
    case Verb::kIsComplete:
      measured = ratio(present.size(), rows.size());
      break;
    case Verb::kIsUnique: {
      if (present.empty()) break;
      std::set<Value> seen;
      for (size_t r : present) seen.insert((*col)[r]);
      measured = ratio(seen.size(), present.size());
      break;
    }
    case Verb::kHasMin:
    case Verb::kHasMax:
    case Verb::kHasMean:
    case Verb::kHasStandardDeviation: {
      if (present.empty()) break;
      Moments m;
      for (size_t r : present) m.Add((*col)[r].as_number());
      measured = c.verb == Verb::kHasMin    ? m.min()
                 : c.verb == Verb::kHasMax  ? m.max()
                 : c.verb == Verb::kHasMean ? m.mean()
                                            : m.stddev();
      break;
    }
    case Verb::kHasApproxCountDistinct: {
      DistinctSketch hll(opts.hll_precision, opts.sketch_seed);
      for (size_t r : present) hll.Add((*col)[r]);
      measured = hll.Estimate();
      break;
    }
    case Verb::kHasApproxQuantile: {
      if (present.empty()) break;
      QuantileSketch kll(opts.kll_k, opts.sketch_seed);
      for (size_t r : present) kll.Add((*col)[r].as_number());
      measured = kll.Quantile(c.quantile);
      break;
    }
    case Verb::kIsContainedIn: {
      if (present.empty()) break;
      size_t inside = 0;
      for (size_t r : present) {
        const Value& v = (*col)[r];
        for (const Value& a : c.allowed) {
          if (Compare3(v, a) == 0) {
            ++inside;
            break;
          }
        }
      }
      measured = ratio(inside, present.size());
      break;
    }
    case Verb::kHasPattern: {
      if (present.empty()) break;
      size_t matched = 0;
      for (size_t r : present) {
        if (std::regex_match((*col)[r].as_text(), *re)) ++matched;
      }
      measured = ratio(matched, present.size());
      break;
    }
    case Verb::kHasSize:
      measured = static_cast<double>(rows.size());
      break;
    case Verb::kSatisfies: {
      std::vector<Truth> t;
      EvalInto(*c.row_expr, d, &t);
      size_t ok = 0;
      for (size_t r : rows) ok += t[r] == Truth::kTrue;
      measured = ratio(ok, rows.size());
      break;
    }
  }
  if (!measured) {
    out.message = "no non-null values";
    return out;
  }
  out.measured = measured;
  out.status = c.EffectivePredicate().Holds(*measured) ? Status::kPass : Status::kFail;
  return out;
}

TestReport EvaluateTest(const DataUnitTest& t, const Dataset& d,
                        const std::string& batch_id, const EvalOptions& opts) {
  TestReport report;
  report.test_id = t.id;
  report.batch_id = batch_id;
  report.outcomes.reserve(t.constraints.size());
  for (const Constraint& c : t.constraints) {
    report.outcomes.push_back(EvaluateConstraint(c, d, opts));
  }
  return report;
}

PrecheckResult PrecheckConstraint(const Constraint& c, const Dataset& sample,
                                  const EvalOptions& opts) {
  ConstraintOutcome o = EvaluateConstraint(c, sample, opts);
  if (o.status == Status::kError) return {false, o.error};
  if (o.status == Status::kFail) return {false, "fails_on_sample"};
  return {};
}

nlohmann::ordered_json TestToJson(const DataUnitTest& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["task_id"] = t.task_id;
  auto cs = nlohmann::ordered_json::array();
  for (const Constraint& c : t.constraints) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["text"] = RenderConstraint(c);
    e["assumption_ids"] = c.assumption_ids;
    cs.push_back(e);
  }
  j["constraints"] = cs;
  return j;
}

DataUnitTest TestFromJson(const nlohmann::json& j) {
  DataUnitTest t;
  t.id = j.at("id").get<std::string>();
  t.task_id = j.at("task_id").get<std::string>();
  for (const auto& e : j.at("constraints")) {
    Constraint c = ParseConstraint(e.at("text").get<std::string>());
    c.id = e.at("id").get<std::string>();
    if (e.contains("assumption_ids")) {
      c.assumption_ids = e["assumption_ids"].get<std::vector<std::string>>();
    }
    t.constraints.push_back(std::move(c));
  }
  t.Validate();
  return t;
}

nlohmann::ordered_json ReportToJson(const TestReport& r) {
  nlohmann::ordered_json j;
  j["test_id"] = r.test_id;
  j["batch_id"] = r.batch_id;
  j["verdict"] = r.rejected() ? "reject" : "pass";
  auto outs = nlohmann::ordered_json::array();
  for (const ConstraintOutcome& o : r.outcomes) {
    nlohmann::ordered_json e;
    e["constraint_id"] = o.constraint_id;
    e["status"] = std::string(StatusName(o.status));
    e["measured"] = o.measured ? nlohmann::ordered_json(*o.measured)
                               : nlohmann::ordered_json(nullptr);
    if (o.status == Status::kError) e["error"] = o.error;
    e["message"] = o.message;
    outs.push_back(e);
  }
  j["outcomes"] = outs;
  return j;
}

}  // namespace taskdv::dsl
