// Copyright 2026 The gqaoa-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gqaoa {

/// Resolves a thread-count request: values > 0 are taken as-is, anything
/// else means "one per hardware thread".
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Splits [begin, end) into contiguous chunks and runs `body(lo, hi)` on
/// worker threads. Callers must make results independent of the chunking:
/// write disjoint slots, or merge partials with an order-insensitive
/// reduction. The first exception thrown by any worker is rethrown.
inline void parallel_chunks(std::uint64_t begin, std::uint64_t end, int threads,
                            const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (end <= begin) return;
  const std::uint64_t extent = end - begin;
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(resolve_threads(threads)), extent));
  if (workers <= 1) {
    body(begin, end);
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto guarded = [&](std::uint64_t lo, std::uint64_t hi) {
    try {
      body(lo, hi);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = begin + extent * static_cast<std::uint64_t>(w) / workers;
    const std::uint64_t hi = begin + extent * (static_cast<std::uint64_t>(w) + 1) / workers;
    if (lo != hi) pool.emplace_back(guarded, lo, hi);
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gqaoa
