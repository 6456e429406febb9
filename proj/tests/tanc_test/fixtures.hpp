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

// Small hand-built instances shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>

#include <Eigen/Dense>

#include "tanc/model.hpp"
#include "tanc/synthetic.hpp"

namespace tanc::testing {

// Task with leading eigenvectors u1, u2 (normalized) and eigenvalues m1, m2,
// padded with a zero row to n x n.
inline Eigen::MatrixXd two_vector_task(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                                       double m1, double m2) {
  const Eigen::Index n = u1.size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  k.row(0) = std::sqrt(m1) * u1.normalized().transpose();
  k.row(1) = std::sqrt(m2) * u2.normalized().transpose();
  return k;
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// n = 3, z = 1, node 1 sees x1, x2 and node 2 sees x2, x3. The dimension
// counts allow the bound but the span conditions fail: sink 3 wants e2, e3
// while sink 4 wants e2, e1.
inline ProblemInstance blocked_triangle() {
  return ProblemInstance{3, 2, 2, 1, Eigen::MatrixXd::Identity(3, 3),
                         two_vector_task(vec({0, 1, 0}), vec({0, 0, 1}), 2.0, 1.0),
                         two_vector_task(vec({0, 1, 0}), vec({1, 0, 0}), 2.0, 1.0)};
}

// Same network; the two tasks share [1, 1, 3] and each private direction is
// reachable, so the bound is attained with a coded relay.
inline ProblemInstance coded_triangle() {
  return ProblemInstance{3, 2, 2, 1, Eigen::MatrixXd::Identity(3, 3),
                         two_vector_task(vec({1, 1, 3}), vec({4, -7, 1}), 2.0, 1.0),
                         two_vector_task(vec({1, 1, 3}), vec({-7, 4, 1}), 2.0, 1.0)};
}

// random_instance rescaled so the largest task eigenvalue is 1, which keeps
// plain gradient descent at the default learning rate stable.
inline ProblemInstance normalized_instance(std::uint64_t seed, int n, int z, int a, int b) {
  ProblemInstance p = random_instance(seed, n, z, a, b);
  const TaskSpectrum s = spectrum(p);
  const double top = std::max(s.mu3.maxCoeff(), s.mu4.maxCoeff());
  p.k3 /= std::sqrt(top);
  p.k4 /= std::sqrt(top);
  return p;
}

// Cosine of the angle between two vectors, sign ignored.
inline double alignment(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return std::abs(x.dot(y)) / (x.norm() * y.norm());
}

}  // namespace tanc::testing
