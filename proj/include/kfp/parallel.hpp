// Copyright 2026 The kfp-lab Authors
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

#pragma once

// Trial-parallel reduction with a fixed chunking. Each chunk of trials is
// reduced into its own accumulator and the chunks are merged in index order,
// so the result is bit-identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "kfp/stats.hpp"

namespace kfp {

inline constexpr std::size_t kTrialChunk = 128;

inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls task(c) for every chunk index c in [0, n_chunks) on up to `workers` threads.
template <typename Task>
void for_each_chunk(std::size_t n_chunks, std::size_t workers, Task&& task) {
  workers = std::min(resolve_workers(workers), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) task(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        task(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_chunks;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// fn(trial, acc) for every trial in [0, n); `zero` is copied per chunk and
/// must provide merge(const Acc&).
template <typename Acc, typename Fn>
Acc chunked_reduce(std::size_t n, std::size_t workers, const Acc& zero, Fn&& fn) {
  const std::size_t n_chunks = (n + kTrialChunk - 1) / kTrialChunk;
  std::vector<Acc> partial(n_chunks, zero);
  for_each_chunk(n_chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kTrialChunk);
    for (std::size_t i = c * kTrialChunk; i < end; ++i) fn(i, partial[c]);
  });
  Acc total = zero;
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// out[i] = fn(i) for i in [0, n).
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, std::size_t workers, Fn&& fn) {
  std::vector<T> out(n);
  const std::size_t n_chunks = (n + kTrialChunk - 1) / kTrialChunk;
  for_each_chunk(n_chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kTrialChunk);
    for (std::size_t i = c * kTrialChunk; i < end; ++i) out[i] = fn(i);
  });
  return out;
}

/// A rows x cols grid of Moments, e.g. one row per record time and one
/// column per observable.
class MomentTable {
 public:
  MomentTable(std::size_t rows, std::size_t cols) : cols_(cols), cells_(rows * cols) {}

  Moments& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
  const Moments& operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

  void merge(const MomentTable& o) {
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(o.cells_[i]);
  }

 private:
  std::size_t cols_;
  std::vector<Moments> cells_;
};

}  // namespace kfp
