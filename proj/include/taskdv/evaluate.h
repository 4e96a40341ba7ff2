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

// Constraint evaluation over a Dataset.
//
// Checks run in a fixed order: missing columns (error "schema"), then kind
// mismatches (error "type"), then regex compilation (error "pattern"). Only
// then is the where clause applied; an empty filtered row set, or a verb
// whose statistic is undefined on the filtered values, passes with no
// measured value.

#ifndef TASKDV_EVALUATE_H_
#define TASKDV_EVALUATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskdv/dsl.h"
#include "taskdv/sketch.h"
#include "taskdv/tabular.h"

namespace taskdv::dsl {

enum class Status { kPass, kFail, kError };
std::string_view StatusName(Status s);

struct ConstraintOutcome {
  std::string constraint_id;
  Status status = Status::kPass;
  std::optional<double> measured;
  std::string error;  // "schema", "type" or "pattern" when status is kError
  std::string message;

  friend bool operator==(const ConstraintOutcome&, const ConstraintOutcome&) = default;
};

struct TestReport {
  std::string test_id;
  std::string batch_id;
  std::vector<ConstraintOutcome> outcomes;

  bool rejected() const;
  const ConstraintOutcome* find(std::string_view constraint_id) const;
};

struct EvalOptions {
  int hll_precision = 14;
  int kll_k = 1024;
  uint64_t sketch_seed = kDefaultSketchSeed;
};

enum class Truth : uint8_t { kFalse, kUnknown, kTrue };

// Row-wise Kleene evaluation. Throws SchemaError for a missing column and
// std::invalid_argument for a literal whose kind cannot be compared with the
// column.
std::vector<Truth> EvalExpr(const Expr& e, const Dataset& d);
// Rows where `e` is true.
std::vector<bool> FilterMask(const Expr& e, const Dataset& d);

ConstraintOutcome EvaluateConstraint(const Constraint& c, const Dataset& d,
                                     const EvalOptions& opts = {});
TestReport EvaluateTest(const DataUnitTest& t, const Dataset& d,
                        const std::string& batch_id = "",
                        const EvalOptions& opts = {});

struct PrecheckResult {
  bool accepted = true;
  std::string reason;  // schema, type, pattern, fails_on_sample
};
PrecheckResult PrecheckConstraint(const Constraint& c, const Dataset& sample,
                                  const EvalOptions& opts = {});

nlohmann::ordered_json TestToJson(const DataUnitTest& t);
// Throws DslError for unparseable constraint text, std::invalid_argument for
// structural problems.
DataUnitTest TestFromJson(const nlohmann::json& j);
nlohmann::ordered_json ReportToJson(const TestReport& r);

}  // namespace taskdv::dsl

#endif  // TASKDV_EVALUATE_H_
