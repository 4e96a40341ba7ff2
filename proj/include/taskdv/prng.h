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

#ifndef TASKDV_PRNG_H_
#define TASKDV_PRNG_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace taskdv {

// Counter-based SplitMix64: the i-th output is Mix(seed + (i+1) * gamma) with
// gamma = 0x9E3779B97F4A7C15 and Mix the SplitMix64 finalizer. Everything
// derived from it (bounded draws, shuffles, samples) uses only integer
// arithmetic, so streams are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : seed_(seed) {}

  static uint64_t Mix(uint64_t z);
  uint64_t At(uint64_t counter) const;
  uint64_t Next() { return At(counter_++); }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  uint64_t Below(uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double Unit();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct indices from [0, n), ascending. Requires k <= n.
  std::vector<size_t> SampleIndices(size_t n, size_t k);

  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace taskdv

#endif  // TASKDV_PRNG_H_
