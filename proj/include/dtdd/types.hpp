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

#ifndef DTDD_TYPES_HPP_
#define DTDD_TYPES_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dtdd {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Sorted, duplicate-free list of node indices.
using IndexSet = std::vector<std::size_t>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(const Point2& a, const Point2& b);

// Raised for invalid configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

using Rng = std::mt19937_64;

// Independent, reproducible stream for (seed, a, b). Every random consumer in
// the library derives its engine here so that parallel and serial runs draw
// identical numbers.
Rng make_stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0);

// Circularly-symmetric complex Gaussian with the given variance.
Complex draw_cn(Rng& rng, double variance);

double db_to_linear(double db);

bool contains(const IndexSet& set, std::size_t index);

// {0, 1, ..., n-1}
IndexSet iota_set(std::size_t n);

}  // namespace dtdd

#endif  // DTDD_TYPES_HPP_
