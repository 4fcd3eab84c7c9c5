// Copyright 2026 The Research Space Authors.
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

#ifndef RSPACE_PARALLEL_HPP
#define RSPACE_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rspace {

/// Worker count used by the row-parallel kernels. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Splits [0, n) into at most thread_count() contiguous chunks and calls
/// body(chunk, begin, end) for each, one thread per chunk. Chunk boundaries
/// depend only on n and the chunk count; callers that need thread-count
/// independent results must merge per-chunk state commutatively or write
/// disjoint output slots.
template <class Body>
void parallel_chunks(std::size_t n, Body&& body) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), n));
  if (chunks == 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(chunks);
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    workers.emplace_back([&, c, begin, end] {
      try {
        body(c, begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::size_t planned_chunks(std::size_t n) {
  return std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), n));
}

}  // namespace rspace

#endif  // RSPACE_PARALLEL_HPP
