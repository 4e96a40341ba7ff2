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

#include "taskdv/profile.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "taskdv/parallel.h"
#include "taskdv/text.h"

namespace taskdv {

void Moments::Add(double x) {
  if (values_.empty()) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  values_.push_back(x);
  sum_ += x;
}

double Moments::mean() const {
  if (values_.empty()) return 0;
  if (min_ == max_) return min_;
  return sum_ / static_cast<double>(values_.size());
}

double Moments::stddev() const {
  if (values_.empty() || min_ == max_) return 0;
  double mu = mean();
  double ss = 0;
  for (double x : values_) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(values_.size()));
}

const ColumnProfile* DataProfile::find(std::string_view name) const {
  for (const ColumnProfile& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ColumnProfile ProfileColumn(const ColumnVector& col, const ProfileOptions& opts) {
  ColumnProfile p;
  p.name = col.name();
  p.inferred_type = col.type();
  p.row_count = col.size();

  DistinctSketch hll(opts.hll_precision, opts.sketch_seed);
  Moments moments;
  std::map<Value, uint64_t> counts;
  bool histogram_ok = true;
  for (size_t r = 0; r < col.size(); ++r) {
    if (col.is_null(r)) continue;
    const Value& v = col[r];
    ++p.non_null_count;
    hll.Add(v);
    if (col.is_numeric()) moments.Add(v.as_number());
    if (histogram_ok) {
      auto it = counts.find(v);
      if (it != counts.end()) {
        ++it->second;
      } else {
        if (p.sample_values.size() < 5) p.sample_values.push_back(v);
        if (counts.size() >= opts.histogram_threshold) {
          histogram_ok = false;
          counts.clear();
        } else {
          counts.emplace(v, 1);
        }
      }
    } else if (p.sample_values.size() < 5 &&
               std::find(p.sample_values.begin(), p.sample_values.end(), v) ==
                   p.sample_values.end()) {
      p.sample_values.push_back(v);
    }
  }
  p.completeness = p.row_count == 0 ? 1.0
                                    : static_cast<double>(p.non_null_count) /
                                          static_cast<double>(p.row_count);
  p.approx_distinct = hll.Estimate();
  if (histogram_ok) p.histogram.emplace(counts.begin(), counts.end());
  if (col.is_numeric() && moments.count() > 0) {
    p.mean = moments.mean();
    p.stddev = moments.stddev();
    p.min = moments.min();
    p.max = moments.max();
  }
  return p;
}

DataProfile ProfileData(const Dataset& d, const ProfileOptions& opts) {
  DataProfile profile;
  profile.sketch_seed = opts.sketch_seed;
  profile.histogram_threshold = opts.histogram_threshold;
  profile.row_count = d.row_count();
  profile.columns = ParallelMap<ColumnProfile>(
      d.column_count(), opts.parallelism,
      [&](size_t i) { return ProfileColumn(d.column(i), opts); });
  return profile;
}

double ApproxDistinct(const ColumnVector& col, int precision, uint64_t seed) {
  DistinctSketch hll(precision, seed);
  for (const Value& v : col.values()) hll.Add(v);
  return hll.Estimate();
}

double ApproxQuantile(const ColumnVector& col, double q, int k, uint64_t seed) {
  if (!col.is_numeric()) {
    throw std::domain_error("quantile of non-numeric column '" + col.name() + "'");
  }
  QuantileSketch kll(k, seed);
  for (const Value& v : col.values()) {
    if (!v.is_null()) kll.Add(v.as_number());
  }
  if (kll.count() == 0) {
    throw std::domain_error("quantile of empty column '" + col.name() + "'");
  }
  return kll.Quantile(q);
}

nlohmann::ordered_json ValueToJson(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kNull:
      return nullptr;
    case ValueKind::kBoolean:
      return v.as_bool();
    case ValueKind::kInteger:
      return v.as_int();
    case ValueKind::kReal:
      return v.as_real();
    case ValueKind::kText:
      return v.as_text();
  }
  return nullptr;
}

nlohmann::ordered_json ProfileToJson(const DataProfile& p) {
  nlohmann::ordered_json out;
  out["sketch_seed"] = p.sketch_seed;
  out["histogram_threshold"] = p.histogram_threshold;
  out["row_count"] = p.row_count;
  auto cols = nlohmann::ordered_json::array();
  for (const ColumnProfile& c : p.columns) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["inferred_type"] = std::string(KindName(c.inferred_type));
    j["completeness"] = c.completeness;
    j["non_null_count"] = c.non_null_count;
    j["approx_distinct"] = c.approx_distinct;
    if (c.histogram) {
      nlohmann::ordered_json h = nlohmann::ordered_json::object();
      for (const auto& [v, n] : *c.histogram) h[v.ToString()] = n;
      j["histogram"] = h;
    } else {
      j["histogram"] = nullptr;
    }
    auto opt = [](const std::optional<double>& x) -> nlohmann::ordered_json {
      if (x) return *x;
      return nullptr;
    };
    j["mean"] = opt(c.mean);
    j["stddev"] = opt(c.stddev);
    j["min"] = opt(c.min);
    j["max"] = opt(c.max);
    auto samples = nlohmann::ordered_json::array();
    for (const Value& v : c.sample_values) samples.push_back(ValueToJson(v));
    j["sample_values"] = samples;
    cols.push_back(j);
  }
  out["columns"] = cols;
  return out;
}

std::string ProfileSummary(const DataProfile& p,
                           std::span<const std::string> only_columns) {
  std::ostringstream out;
  out << "rows: " << p.row_count << "\n";
  for (const ColumnProfile& c : p.columns) {
    if (!only_columns.empty() &&
        std::find(only_columns.begin(), only_columns.end(), c.name) ==
            only_columns.end()) {
      continue;
    }
    out << "- " << c.name << " (" << KindName(c.inferred_type)
        << "): completeness=" << FormatReal(c.completeness)
        << ", approx_distinct=" << static_cast<long long>(std::llround(c.approx_distinct));
    if (c.mean) {
      out << ", mean=" << FormatReal(*c.mean) << ", stddev=" << FormatReal(*c.stddev)
          << ", min=" << FormatReal(*c.min) << ", max=" << FormatReal(*c.max);
    }
    if (c.histogram) {
      out << ", histogram={";
      bool first = true;
      for (const auto& [v, n] : *c.histogram) {
        if (!first) out << ", ";
        first = false;
        out << v.ToString() << ": " << n;
      }
      out << "}";
    } else if (!c.sample_values.empty()) {
      out << ", samples=[";
      for (size_t i = 0; i < c.sample_values.size(); ++i) {
        if (i > 0) out << ", ";
        out << c.sample_values[i].ToString();
      }
      out << "]";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace taskdv
