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

// Seeded error injection for manufacturing corrupted batches.
//
// Operator i of a config draws from SplitMix64(SplitMix64(seed).At(i)).
// Row-selecting operators pick floor(row_fraction * n) distinct rows (a
// 1e-9 tolerance absorbs binary rounding such as 0.29 * 100), so corruption
// counts are exact.

#ifndef TASKDV_ERRORGEN_H_
#define TASKDV_ERRORGEN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "taskdv/tabular.h"

namespace taskdv {

enum class ErrorFamily { kStructural, kIntegrity, kNumerical, kTextual, kFormat };

struct OperatorInfo {
  std::string_view kind;
  ErrorFamily family;
};

// All 19 operator kinds in catalog order.
const std::vector<OperatorInfo>& ErrorCatalog();
std::string_view FamilyName(ErrorFamily f);

struct ErrorOperator {
  std::string kind;
  std::vector<std::string> columns;
  double row_fraction = 1.0;
  nlohmann::json params = nlohmann::json::object();
};

struct ErrorConfig {
  std::string id;
  uint64_t seed = 0;
  double max_column_fraction = 0.5;
  std::vector<ErrorOperator> operators;
};

struct ColumnSchema {
  std::string name;
  ValueKind kind;
};
std::vector<ColumnSchema> SchemaOf(const Dataset& d);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Static checks: known kinds and parameters, row_fraction in (0, 1], target
// columns present (tracking drops and renames in order), column kinds suited
// to the operator, and at most max_column_fraction of the original columns
// touched. Returns every problem found; empty means valid.
std::vector<std::string> ValidateConfig(const ErrorConfig& cfg,
                                        const std::vector<ColumnSchema>& schema);

// Throws ConfigError when validation fails.
Dataset ApplyConfig(const Dataset& d, const ErrorConfig& cfg);

// floor(fraction * n) with the tolerance described above.
size_t SelectedRowCount(double fraction, size_t n);

nlohmann::ordered_json ErrorConfigToJson(const ErrorConfig& cfg);
ErrorConfig ErrorConfigFromJson(const nlohmann::json& j);

}  // namespace taskdv

#endif  // TASKDV_ERRORGEN_H_
