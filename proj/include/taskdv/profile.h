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

#ifndef TASKDV_PROFILE_H_
#define TASKDV_PROFILE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "taskdv/sketch.h"
#include "taskdv/tabular.h"

namespace taskdv {

inline constexpr size_t kDefaultHistogramThreshold = 50;

struct ProfileOptions {
  size_t histogram_threshold = kDefaultHistogramThreshold;
  int hll_precision = 14;
  int kll_k = 1024;
  uint64_t sketch_seed = kDefaultSketchSeed;
  // Upper bound on threads used across columns; 1 runs inline.
  size_t parallelism = 1;
};

// Exact moments over a sequence of doubles, in input order:
//   mean   = (x_1 + ... + x_n) / n
//   stddev = sqrt(((x_1 - mean)^2 + ... + (x_n - mean)^2) / n)
// stddev is 0.0 when every value is equal.
class Moments {
 public:
  void Add(double x);
  size_t count() const { return values_.size(); }
  double min() const { return min_; }
  double max() const { return max_; }
  double mean() const;
  double stddev() const;

 private:
  std::vector<double> values_;
  double sum_ = 0;
  double min_ = 0;
  double max_ = 0;
};

struct ColumnProfile {
  std::string name;
  ValueKind inferred_type = ValueKind::kText;
  size_t row_count = 0;
  size_t non_null_count = 0;
  double completeness = 1.0;
  double approx_distinct = 0;
  // Present iff the exact distinct count is <= the threshold; sorted by value.
  std::optional<std::vector<std::pair<Value, uint64_t>>> histogram;
  std::optional<double> mean, stddev, min, max;
  std::vector<Value> sample_values;

  friend bool operator==(const ColumnProfile&, const ColumnProfile&) = default;
};

struct DataProfile {
  uint64_t sketch_seed = kDefaultSketchSeed;
  size_t histogram_threshold = kDefaultHistogramThreshold;
  size_t row_count = 0;
  std::vector<ColumnProfile> columns;

  const ColumnProfile* find(std::string_view name) const;
};

ColumnProfile ProfileColumn(const ColumnVector& col, const ProfileOptions& opts);
DataProfile ProfileData(const Dataset& d, const ProfileOptions& opts = {});

// Nulls are skipped. An empty column estimates 0.
double ApproxDistinct(const ColumnVector& col, int precision = 14,
                      uint64_t seed = kDefaultSketchSeed);
// Throws std::domain_error for non-numeric or all-null columns and q outside
// [0, 1].
double ApproxQuantile(const ColumnVector& col, double q, int k = 1024,
                      uint64_t seed = kDefaultSketchSeed);

nlohmann::ordered_json ValueToJson(const Value& v);
nlohmann::ordered_json ProfileToJson(const DataProfile& p);
// Compact textual rendering used inside model prompts.
std::string ProfileSummary(const DataProfile& p,
                           std::span<const std::string> only_columns = {});

}  // namespace taskdv

#endif  // TASKDV_PROFILE_H_
