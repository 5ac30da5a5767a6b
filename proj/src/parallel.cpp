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

#include "dtdd/parallel.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "dtdd/types.hpp"

namespace dtdd {

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Rng make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

Complex draw_cn(Rng& rng, double variance) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = std::sqrt(variance / 2.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {s * re, s * im};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

bool contains(const IndexSet& set, std::size_t index) {
  return std::binary_search(set.begin(), set.end(), index);
}

IndexSet iota_set(std::size_t n) {
  IndexSet out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

void set_num_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

ChunkPlan make_chunk_plan(std::size_t total, std::size_t target_chunks) {
  ChunkPlan plan;
  plan.total = total;
  plan.chunk = std::max<std::size_t>(1, (total + target_chunks - 1) / std::max<std::size_t>(1, target_chunks));
  return plan;
}

}  // namespace dtdd
