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

// Tolerance-aware subspace algebra over R^n. Subspaces are carried as
// orthonormal column sets; rank decisions use singular values relative to the
// largest one.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tanc {

struct ToleranceConfig {
  // Singular values below rank_tol * sigma_max count as zero.
  double rank_tol = 1e-10;
};

void validate(const ToleranceConfig& tol);

class Basis {
 public:
  // Empty basis of R^n.
  explicit Basis(int ambient_dim = 0);

  int ambient_dim() const noexcept { return ambient_dim_; }
  int dim() const noexcept { return static_cast<int>(vectors_.cols()); }
  bool empty() const noexcept { return dim() == 0; }

  // n x k, orthonormal columns.
  const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
  Eigen::VectorXd vector(int j) const { return vectors_.col(j); }

  // Orthogonal projector onto the span.
  Eigen::MatrixXd projector() const;

  // Wraps columns that are already orthonormal (checked to 1e-8).
  static Basis from_orthonormal(Eigen::MatrixXd columns);

 private:
  Basis(int ambient_dim, Eigen::MatrixXd vectors);

  int ambient_dim_;
  Eigen::MatrixXd vectors_;
};

// Orthonormal basis of the column span; columns ordered by descending singular
// value, each with its largest-magnitude entry positive.
Basis orthonormal_basis(const Eigen::MatrixXd& columns, const ToleranceConfig& tol = {});
Basis orthonormal_basis(std::span<const Eigen::VectorXd> vectors, int ambient_dim,
                        const ToleranceConfig& tol = {});

int rank_of(const Eigen::MatrixXd& columns, const ToleranceConfig& tol = {});
int rank_of(std::span<const Eigen::VectorXd> vectors, int ambient_dim,
            const ToleranceConfig& tol = {});

Basis intersect(const Basis& a, const Basis& b, const ToleranceConfig& tol = {});
Basis join(const Basis& a, const Basis& b, const ToleranceConfig& tol = {});

// Both results from one decomposition of [A | B], so
// dim(A) + dim(B) == dim(join) + dim(intersection) holds exactly.
struct SumAndIntersection {
  Basis sum;
  Basis intersection;
};
SumAndIntersection sum_and_intersection(const Basis& a, const Basis& b,
                                        const ToleranceConfig& tol = {});

bool is_subspace_of(const Basis& a, const Basis& b, const ToleranceConfig& tol = {});
bool span_equal(const Basis& a, const Basis& b, const ToleranceConfig& tol = {});

// Residual norm of each column of `columns` after projection onto b.
Eigen::VectorXd residual_norms(const Eigen::MatrixXd& columns, const Basis& b);

// Orthonormal basis of the part of `outer` orthogonal to `inner`.
Basis orthogonal_complement_within(const Basis& inner, const Basis& outer,
                                   const ToleranceConfig& tol = {});

// Returns dim(target) - dim(core) vectors lying in the pool such that
// core together with them spans target. Greedy: at each step the candidate
// with the largest residual against the running span wins, ties broken by the
// lowest column index. Throws InfeasibleExtension if no such vectors exist.
std::vector<Eigen::VectorXd> extend_from_pool(const Basis& core, const Basis& pool,
                                              const Basis& target,
                                              const ToleranceConfig& tol = {});

// Picks up to `count` vectors from the pool span that are independent of
// `core`, with the same greedy rule. Returns fewer if the pool runs out.
std::vector<Eigen::VectorXd> pick_independent(const Basis& core, const Basis& pool, int count,
                                              const ToleranceConfig& tol = {});

// Stacks vectors as columns of an n x k matrix.
Eigen::MatrixXd as_columns(std::span<const Eigen::VectorXd> vectors, int ambient_dim);

}  // namespace tanc
