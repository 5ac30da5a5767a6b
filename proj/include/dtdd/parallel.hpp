// Copyright 2026 The Authors.
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

#ifndef DTDD_PARALLEL_HPP_
#define DTDD_PARALLEL_HPP_

#include <cstddef>

namespace dtdd {

// Selects between the OpenMP kernels and their serial reference loops.
enum class Execution { kSerial, kParallel };

void set_num_threads(int threads);
int max_threads();

// Runs body(i) for i in [0, n). Each index must write only its own output
// slot; reductions happen afterwards in index order so the result does not
// depend on the thread count.
template <typename Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::kParallel) {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
      body(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

// Fixed chunking for Monte-Carlo reductions: the chunk layout depends only on
// the problem size, never on the number of threads.
struct ChunkPlan {
  std::size_t total = 0;
  std::size_t chunk = 1;

  std::size_t num_chunks() const { return chunk == 0 ? 0 : (total + chunk - 1) / chunk; }
  std::size_t begin(std::size_t c) const { return c * chunk; }
  std::size_t end(std::size_t c) const {
    const std::size_t e = (c + 1) * chunk;
    return e < total ? e : total;
  }
};

ChunkPlan make_chunk_plan(std::size_t total, std::size_t target_chunks = 64);

}  // namespace dtdd

#endif  // DTDD_PARALLEL_HPP_
