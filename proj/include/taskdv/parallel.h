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

#ifndef TASKDV_PARALLEL_H_
#define TASKDV_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace taskdv {

// Runs fn(0..n-1) on at most `parallelism` threads and returns results in
// index order. The first exception thrown by any task is rethrown after all
// workers finish.
template <typename R, typename Fn>
std::vector<R> ParallelMap(size_t n, size_t parallelism, Fn&& fn) {
  std::vector<std::optional<R>> slots(n);
  size_t workers = std::min(std::max<size_t>(parallelism, 1), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (size_t i = next++; i < n; i = next++) {
            try {
              slots[i].emplace(fn(i));
            } catch (...) {
              errors[i] = std::current_exception();
            }
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace taskdv

#endif  // TASKDV_PARALLEL_H_
