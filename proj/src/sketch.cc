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

#include "taskdv/sketch.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace taskdv {

uint64_t Hash64(std::string_view bytes, uint64_t seed) {
  constexpr uint64_t m = 0xc6a4a7935bd1e995ULL;
  constexpr int r = 47;
  const size_t len = bytes.size();
  uint64_t h = seed ^ (len * m);
  const unsigned char* data =
      reinterpret_cast<const unsigned char*>(bytes.data());
  const size_t blocks = len / 8;
  for (size_t i = 0; i < blocks; ++i) {
    uint64_t k = 0;
    for (int b = 7; b >= 0; --b) k = (k << 8) | data[i * 8 + b];
    k *= m;
    k ^= k >> r;
    k *= m;
    h ^= k;
    h *= m;
  }
  const unsigned char* tail = data + blocks * 8;
  switch (len & 7) {
    case 7: h ^= uint64_t(tail[6]) << 48; [[fallthrough]];
    case 6: h ^= uint64_t(tail[5]) << 40; [[fallthrough]];
    case 5: h ^= uint64_t(tail[4]) << 32; [[fallthrough]];
    case 4: h ^= uint64_t(tail[3]) << 24; [[fallthrough]];
    case 3: h ^= uint64_t(tail[2]) << 16; [[fallthrough]];
    case 2: h ^= uint64_t(tail[1]) << 8; [[fallthrough]];
    case 1:
      h ^= uint64_t(tail[0]);
      h *= m;
  }
  h ^= h >> r;
  h *= m;
  h ^= h >> r;
  return h;
}

namespace {

std::string LittleEndian(uint64_t bits) {
  std::string out(8, '\0');
  for (int i = 0; i < 8; ++i) out[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  return out;
}

}  // namespace

uint64_t HashValue(const Value& v, uint64_t seed) {
  std::string bytes;
  switch (v.kind()) {
    case ValueKind::kNull:
      bytes = "n";
      break;
    case ValueKind::kBoolean:
      bytes = v.as_bool() ? "b1" : "b0";
      break;
    case ValueKind::kInteger:
      bytes = "i" + LittleEndian(static_cast<uint64_t>(v.as_int()));
      break;
    case ValueKind::kReal: {
      double d = v.as_real();
      if (d == 0.0) d = 0.0;
      bytes = "r" + LittleEndian(std::bit_cast<uint64_t>(d));
      break;
    }
    case ValueKind::kText:
      bytes = "t" + v.as_text();
      break;
  }
  return Hash64(bytes, seed);
}

// ---------------------------------------------------------------------------
// DistinctSketch

DistinctSketch::DistinctSketch(int precision, uint64_t seed)
    : precision_(precision), seed_(seed) {
  if (precision < 4 || precision > 18) {
    throw std::invalid_argument("HyperLogLog precision must be in [4, 18]");
  }
  exact_limit_ = (size_t{1} << precision) / 4;
}

void DistinctSketch::Add(const Value& v) {
  if (v.is_null()) return;
  AddHash(HashValue(v, seed_));
}

void DistinctSketch::AddHash(uint64_t h) {
  if (!dense_.empty()) {
    AddDense(h);
    return;
  }
  exact_.insert(h);
  if (exact_.size() > exact_limit_) Densify();
}

void DistinctSketch::AddDense(uint64_t h) {
  const int q = 64 - precision_;
  size_t index = static_cast<size_t>(h >> q);
  uint64_t rest = h << precision_;
  uint8_t rank = rest == 0 ? static_cast<uint8_t>(q + 1)
                           : static_cast<uint8_t>(std::countl_zero(rest) + 1);
  if (rank > q + 1) rank = static_cast<uint8_t>(q + 1);
  dense_[index] = std::max(dense_[index], rank);
}

void DistinctSketch::Densify() {
  dense_.assign(size_t{1} << precision_, 0);
  for (uint64_t h : exact_) AddDense(h);
  exact_.clear();
}

void DistinctSketch::Merge(const DistinctSketch& other) {
  if (other.precision_ != precision_ || other.seed_ != seed_) {
    throw std::invalid_argument("cannot merge sketches with different parameters");
  }
  if (dense_.empty() && other.dense_.empty()) {
    exact_.insert(other.exact_.begin(), other.exact_.end());
    if (exact_.size() > exact_limit_) Densify();
    return;
  }
  if (dense_.empty()) Densify();
  if (other.dense_.empty()) {
    for (uint64_t h : other.exact_) AddDense(h);
  } else {
    for (size_t i = 0; i < dense_.size(); ++i) {
      dense_[i] = std::max(dense_[i], other.dense_[i]);
    }
  }
}

namespace {

double Sigma(double x) {
  if (x == 1.0) return std::numeric_limits<double>::infinity();
  double y = 1.0, z = x, prev;
  do {
    x *= x;
    prev = z;
    z += x * y;
    y += y;
  } while (z != prev);
  return z;
}

double Tau(double x) {
  if (x == 0.0 || x == 1.0) return 0.0;
  double y = 1.0, z = 1.0 - x, prev;
  do {
    x = std::sqrt(x);
    prev = z;
    y *= 0.5;
    z -= (1.0 - x) * (1.0 - x) * y;
  } while (z != prev);
  return z / 3.0;
}

}  // namespace

double DistinctSketch::Estimate() const {
  if (dense_.empty()) return static_cast<double>(exact_.size());
  const int q = 64 - precision_;
  const double m = static_cast<double>(dense_.size());
  std::vector<double> counts(q + 2, 0.0);
  for (uint8_t r : dense_) counts[r] += 1.0;
  double z = m * Tau(1.0 - counts[q + 1] / m);
  for (int k = q; k >= 1; --k) z = 0.5 * (z + counts[k]);
  z += m * Sigma(counts[0] / m);
  const double alpha_inf = 1.0 / (2.0 * std::log(2.0));
  return alpha_inf * m * m / z;
}

double DistinctSketch::StandardError() const {
  return 1.04 / std::sqrt(static_cast<double>(size_t{1} << precision_));
}

// ---------------------------------------------------------------------------
// QuantileSketch

QuantileSketch::QuantileSketch(int k, uint64_t seed) : k_(k), rng_(seed) {
  if (k < 8) throw std::invalid_argument("KLL k must be at least 8");
  levels_.emplace_back();
}

size_t QuantileSketch::Capacity(size_t level) const {
  size_t depth = levels_.size() - 1 - level;
  size_t cap = static_cast<size_t>(k_);
  for (size_t i = 0; i < depth && cap > 2; ++i) cap = (cap * 2 + 2) / 3;
  return std::max<size_t>(cap, 2);
}

size_t QuantileSketch::retained() const {
  size_t total = 0;
  for (const auto& l : levels_) total += l.size();
  return total;
}

void QuantileSketch::Add(double x) {
  if (n_ == 0) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++n_;
  levels_[0].push_back(x);
  CompressIfNeeded();
}

void QuantileSketch::CompressIfNeeded() {
  while (true) {
    size_t total_cap = 0;
    for (size_t h = 0; h < levels_.size(); ++h) total_cap += Capacity(h);
    if (retained() <= total_cap) return;
    for (size_t h = 0; h < levels_.size(); ++h) {
      if (levels_[h].size() >= Capacity(h)) {
        Compact(h);
        break;
      }
    }
  }
}

void QuantileSketch::Compact(size_t level) {
  if (level + 1 == levels_.size()) levels_.emplace_back();
  std::vector<double>& items = levels_[level];
  std::sort(items.begin(), items.end());
  std::vector<double> held;
  if (items.size() % 2 == 1) {
    held.push_back(items.back());
    items.pop_back();
  }
  size_t offset = static_cast<size_t>(rng_.Next() & 1);
  std::vector<double>& up = levels_[level + 1];
  for (size_t i = offset; i < items.size(); i += 2) up.push_back(items[i]);
  items = std::move(held);
}

void QuantileSketch::Merge(const QuantileSketch& other) {
  if (other.k_ != k_) throw std::invalid_argument("KLL k mismatch");
  if (other.n_ == 0) return;
  if (n_ == 0) {
    min_ = other.min_;
    max_ = other.max_;
  } else {
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
  }
  n_ += other.n_;
  if (other.levels_.size() > levels_.size()) levels_.resize(other.levels_.size());
  for (size_t h = 0; h < other.levels_.size(); ++h) {
    levels_[h].insert(levels_[h].end(), other.levels_[h].begin(),
                      other.levels_[h].end());
  }
  CompressIfNeeded();
}

double QuantileSketch::Quantile(double q) const {
  if (n_ == 0) throw std::domain_error("quantile of an empty sketch");
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile outside [0, 1]");
  if (q == 0.0) return min_;
  if (q == 1.0) return max_;
  std::vector<std::pair<double, uint64_t>> weighted;
  weighted.reserve(retained());
  for (size_t h = 0; h < levels_.size(); ++h) {
    for (double x : levels_[h]) weighted.emplace_back(x, uint64_t{1} << h);
  }
  std::sort(weighted.begin(), weighted.end());
  const double target = q * static_cast<double>(n_);
  uint64_t cumulative = 0;
  for (const auto& [x, w] : weighted) {
    cumulative += w;
    if (static_cast<double>(cumulative) >= target) return x;
  }
  return max_;
}

double QuantileSketch::NormalizedRankError() const {
  return 2.446 / std::pow(static_cast<double>(k_), 0.9433);
}

}  // namespace taskdv
