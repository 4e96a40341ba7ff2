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

// Streaming sketches backing the approximate statistics: a HyperLogLog
// distinct counter and a KLL quantile sketch. Both are deterministic for a
// fixed seed.

#ifndef TASKDV_SKETCH_H_
#define TASKDV_SKETCH_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "taskdv/prng.h"
#include "taskdv/tabular.h"

namespace taskdv {

inline constexpr uint64_t kDefaultSketchSeed = 0x5EED5EED5EEDULL;

// MurmurHash64A over raw bytes.
uint64_t Hash64(std::string_view bytes, uint64_t seed);
// Hash of a non-null cell, tagged by kind so equal bytes of different kinds
// do not collide by construction. -0.0 hashes like 0.0.
uint64_t HashValue(const Value& v, uint64_t seed);

// HyperLogLog with 2^precision registers. Small cardinalities are tracked
// exactly as a set of 64-bit hashes until the set grows past a quarter of the
// register count; beyond that the sketch switches to dense registers and
// estimates with Ertl's improved raw estimator (no empirical bias tables).
class DistinctSketch {
 public:
  explicit DistinctSketch(int precision = 14, uint64_t seed = kDefaultSketchSeed);

  void Add(const Value& v);
  void AddHash(uint64_t h);
  // Throws std::invalid_argument when precision or seed differ.
  void Merge(const DistinctSketch& other);
  double Estimate() const;

  int precision() const { return precision_; }
  uint64_t seed() const { return seed_; }
  bool exact() const { return dense_.empty(); }
  // Relative standard error of the dense estimator, 1.04 / sqrt(2^p).
  double StandardError() const;

 private:
  void Densify();
  void AddDense(uint64_t h);

  int precision_;
  uint64_t seed_;
  size_t exact_limit_;
  std::unordered_set<uint64_t> exact_;
  std::vector<uint8_t> dense_;
};

// KLL quantile sketch over doubles. Level h holds items of weight 2^h; level
// capacities shrink geometrically (factor 2/3) below the top level. Compaction
// sorts a level and promotes every other item starting at a random offset.
class QuantileSketch {
 public:
  explicit QuantileSketch(int k = 1024, uint64_t seed = kDefaultSketchSeed);

  void Add(double x);
  void Merge(const QuantileSketch& other);

  // Smallest retained item whose cumulative weight reaches q * n. q = 0 and
  // q = 1 return the exact minimum and maximum. Throws std::domain_error on
  // an empty sketch or q outside [0, 1].
  double Quantile(double q) const;

  uint64_t count() const { return n_; }
  int k() const { return k_; }
  // Double-sided normalized rank error for this k (99% confidence fit).
  double NormalizedRankError() const;
  size_t retained() const;

 private:
  size_t Capacity(size_t level) const;
  void CompressIfNeeded();
  void Compact(size_t level);

  int k_;
  SplitMix64 rng_;
  uint64_t n_ = 0;
  double min_ = 0, max_ = 0;
  std::vector<std::vector<double>> levels_;
};

}  // namespace taskdv

#endif  // TASKDV_SKETCH_H_
