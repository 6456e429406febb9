/*
 * Copyright 2026 The tanc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Deterministic random numbers. Every conversion from raw 64-bit output to a
// double is done here rather than through <random> distributions, whose
// algorithms differ between standard libraries, so seeded runs replay
// bit-exactly on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace tanc {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  // Independent stream `stream` of the generator family `seed`.
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  Eigen::MatrixXd uniform_matrix(int rows, int cols, double lo, double hi);
  Eigen::MatrixXd normal_matrix(int rows, int cols);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Haar-distributed orthogonal matrix.
Eigen::MatrixXd random_orthogonal(Rng& rng, int n);

// Random symmetric positive definite matrix with condition number at most
// `max_condition`.
Eigen::MatrixXd random_spd(Rng& rng, int n, double max_condition = 10.0);

}  // namespace tanc
