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

#include "tanc/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tanc/error.hpp"

namespace tanc {
namespace {

void require_same_dim(int lhs, int rhs, const char* what) {
  if (lhs != rhs) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + ": ambient dimension " +
                                                   std::to_string(lhs) + " vs " +
                                                   std::to_string(rhs));
  }
}

// Flip each column so that its largest-magnitude entry is positive. Near-ties
// resolve to the lowest row index.
void canonicalize_signs(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double peak = m.col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) >= peak - 1e-12) {
        if (m(i, j) < 0) m.col(j) *= -1.0;
        break;
      }
    }
  }
}

int count_above(const Eigen::VectorXd& sigma, double rank_tol) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double threshold = rank_tol * sigma(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++r;
  }
  return r;
}

// Orthonormalizes columns that are known to be independent, keeping all of them.
Eigen::MatrixXd orthonormalize_all(const Eigen::MatrixXd& w) {
  if (w.cols() == 0) return w;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeThinU);
  Eigen::MatrixXd u = svd.matrixU().leftCols(w.cols());
  canonicalize_signs(u);
  return u;
}

// Greedy selection shared by extend_from_pool and pick_independent.
std::vector<Eigen::VectorXd> greedy_select(const Basis& core, const Eigen::MatrixXd& candidates,
                                           int count, double rank_tol) {
  const int n = core.ambient_dim();
  Eigen::MatrixXd running(n, core.dim() + count);
  running.leftCols(core.dim()) = core.vectors();
  int filled = core.dim();
  std::vector<bool> used(static_cast<std::size_t>(candidates.cols()), false);
  std::vector<Eigen::VectorXd> chosen;
  while (static_cast<int>(chosen.size()) < count) {
    int best = -1;
    double best_residual = rank_tol;
    Eigen::VectorXd best_vec;
    for (Eigen::Index j = 0; j < candidates.cols(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Eigen::VectorXd r = candidates.col(j);
      const auto q = running.leftCols(filled);
      r -= q * (q.transpose() * r);
      r -= q * (q.transpose() * r);
      const double norm = r.norm();
      if (norm > best_residual + 1e-14) {
        best = static_cast<int>(j);
        best_residual = norm;
        best_vec = r / norm;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    chosen.emplace_back(candidates.col(best));
    running.col(filled++) = best_vec;
  }
  return chosen;
}

}  // namespace

void validate(const ToleranceConfig& tol) {
  if (!(tol.rank_tol >= 0.0 && tol.rank_tol < 1.0)) {
    throw Error(ErrorCode::kConfigError, "rank_tol must lie in [0, 1), got " +
                                             std::to_string(tol.rank_tol));
  }
}

Basis::Basis(int ambient_dim) : ambient_dim_(ambient_dim), vectors_(ambient_dim, 0) {}

Basis::Basis(int ambient_dim, Eigen::MatrixXd vectors)
    : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {}

Eigen::MatrixXd Basis::projector() const { return vectors_ * vectors_.transpose(); }

Basis Basis::from_orthonormal(Eigen::MatrixXd columns) {
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() > n) {
    throw Error(ErrorCode::kDimensionMismatch, "more orthonormal columns than ambient dimension");
  }
  const Eigen::MatrixXd gram = columns.transpose() * columns;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(columns.cols(), columns.cols());
  if (columns.cols() > 0 && (gram - eye).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorCode::kDimensionMismatch, "columns are not orthonormal");
  }
  return Basis(n, std::move(columns));
}

Basis orthonormal_basis(const Eigen::MatrixXd& columns, const ToleranceConfig& tol) {
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() == 0) return Basis(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
  const int r = count_above(svd.singularValues(), tol.rank_tol);
  Eigen::MatrixXd u = svd.matrixU().leftCols(r);
  canonicalize_signs(u);
  return Basis::from_orthonormal(std::move(u));
}

Eigen::MatrixXd as_columns(std::span<const Eigen::VectorXd> vectors, int ambient_dim) {
  Eigen::MatrixXd m(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require_same_dim(static_cast<int>(vectors[j].size()), ambient_dim, "as_columns");
    m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return m;
}

Basis orthonormal_basis(std::span<const Eigen::VectorXd> vectors, int ambient_dim,
                        const ToleranceConfig& tol) {
  return orthonormal_basis(as_columns(vectors, ambient_dim), tol);
}

int rank_of(const Eigen::MatrixXd& columns, const ToleranceConfig& tol) {
  if (columns.cols() == 0 || columns.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns);
  return count_above(svd.singularValues(), tol.rank_tol);
}

int rank_of(std::span<const Eigen::VectorXd> vectors, int ambient_dim,
            const ToleranceConfig& tol) {
  return rank_of(as_columns(vectors, ambient_dim), tol);
}

SumAndIntersection sum_and_intersection(const Basis& a, const Basis& b,
                                        const ToleranceConfig& tol) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "sum_and_intersection");
  const int n = a.ambient_dim();
  if (a.empty()) return {b, Basis(n)};
  if (b.empty()) return {a, Basis(n)};

  const int ka = a.dim();
  const int m = ka + b.dim();
  Eigen::MatrixXd stacked(n, m);
  stacked << a.vectors(), b.vectors();

  // [A | B] and [A | -B] share singular values; null vectors [x; y] of
  // [A | B] give intersection vectors A x = -B y with |A x| = 1/sqrt(2).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const int r = count_above(svd.singularValues(), tol.rank_tol);

  Eigen::MatrixXd sum = svd.matrixU().leftCols(r);
  canonicalize_signs(sum);

  const Eigen::MatrixXd null_coeffs = svd.matrixV().rightCols(m - r);
  const Eigen::MatrixXd meet = std::sqrt(2.0) * a.vectors() * null_coeffs.topRows(ka);
  return {Basis::from_orthonormal(std::move(sum)),
          Basis::from_orthonormal(orthonormalize_all(meet))};
}

Basis intersect(const Basis& a, const Basis& b, const ToleranceConfig& tol) {
  return sum_and_intersection(a, b, tol).intersection;
}

Basis join(const Basis& a, const Basis& b, const ToleranceConfig& tol) {
  return sum_and_intersection(a, b, tol).sum;
}

Eigen::VectorXd residual_norms(const Eigen::MatrixXd& columns, const Basis& b) {
  require_same_dim(static_cast<int>(columns.rows()), b.ambient_dim(), "residual_norms");
  const Eigen::MatrixXd r = columns - b.vectors() * (b.vectors().transpose() * columns);
  return r.colwise().norm().transpose();
}

bool is_subspace_of(const Basis& a, const Basis& b, const ToleranceConfig& tol) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "is_subspace_of");
  if (a.empty()) return true;
  if (a.dim() > b.dim()) return false;
  return residual_norms(a.vectors(), b).maxCoeff() <= tol.rank_tol;
}

bool span_equal(const Basis& a, const Basis& b, const ToleranceConfig& tol) {
  return a.dim() == b.dim() && is_subspace_of(a, b, tol) && is_subspace_of(b, a, tol);
}

Basis orthogonal_complement_within(const Basis& inner, const Basis& outer,
                                   const ToleranceConfig& tol) {
  require_same_dim(inner.ambient_dim(), outer.ambient_dim(), "orthogonal_complement_within");
  if (outer.empty()) return Basis(outer.ambient_dim());
  const Eigen::MatrixXd projected =
      outer.vectors() - inner.vectors() * (inner.vectors().transpose() * outer.vectors());
  // Residual columns are at most unit length; threshold them absolutely.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(projected, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > std::max(tol.rank_tol, 1e-12)) ++r;
  }
  Eigen::MatrixXd u = svd.matrixU().leftCols(r);
  canonicalize_signs(u);
  return Basis::from_orthonormal(std::move(u));
}

std::vector<Eigen::VectorXd> extend_from_pool(const Basis& core, const Basis& pool,
                                              const Basis& target,
                                              const ToleranceConfig& tol) {
  require_same_dim(core.ambient_dim(), pool.ambient_dim(), "extend_from_pool");
  require_same_dim(core.ambient_dim(), target.ambient_dim(), "extend_from_pool");
  if (!is_subspace_of(core, target, tol)) {
    throw Error(ErrorCode::kInfeasibleExtension, "core is not contained in target");
  }
  const int needed = target.dim() - core.dim();
  if (needed == 0) return {};
  const Basis candidates = intersect(pool, target, tol);
  auto chosen = greedy_select(core, candidates.vectors(), needed, tol.rank_tol);
  if (static_cast<int>(chosen.size()) < needed) {
    throw Error(ErrorCode::kInfeasibleExtension,
                "pool provides " + std::to_string(chosen.size()) + " of " +
                    std::to_string(needed) + " extension vectors");
  }
  return chosen;
}

std::vector<Eigen::VectorXd> pick_independent(const Basis& core, const Basis& pool, int count,
                                              const ToleranceConfig& tol) {
  require_same_dim(core.ambient_dim(), pool.ambient_dim(), "pick_independent");
  if (count <= 0) return {};
  return greedy_select(core, pool.vectors(), count, tol.rank_tol);
}

}  // namespace tanc
