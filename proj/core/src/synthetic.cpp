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

#include "tanc/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tanc/analytic.hpp"
#include "tanc/error.hpp"
#include "tanc/random.hpp"
#include "tanc/subspace.hpp"

namespace tanc {
namespace {

[[noreturn]] void infeasible(const std::string& what) {
  throw Error(ErrorCode::kInfeasibleSpec, what);
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> v(std::max(0, hi - lo));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

// Moves up to `count` leading entries of `from` onto `to`.
int take(std::vector<int>& from, std::vector<int>& to, int count) {
  const int k = std::min<int>(count, static_cast<int>(from.size()));
  to.insert(to.end(), from.begin(), from.begin() + k);
  from.erase(from.begin(), from.begin() + k);
  return k;
}

// k padded to n x n: rows mu_j^{1/2} e_{idx_j}^T.
Eigen::MatrixXd coordinate_task(int n, const std::vector<int>& idx, const std::vector<double>& mu) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    k(static_cast<Eigen::Index>(j), idx[j]) = std::sqrt(mu[j]);
  }
  return k;
}

int uniform_int(Rng& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

Eigen::MatrixXd random_in(Rng& rng, const Basis& basis, int count) {
  return basis.vectors() * rng.normal_matrix(basis.dim(), count);
}

// Descending values drawn from [lo, hi).
Eigen::VectorXd descending(Rng& rng, int count, double lo, double hi) {
  std::vector<double> v(count);
  for (double& x : v) x = rng.uniform(lo, hi);
  std::sort(v.begin(), v.end(), std::greater<>());
  return Eigen::Map<Eigen::VectorXd>(v.data(), count);
}

// Whitened subspace with basis `top` (n x m) carrying mu and its complement
// carrying the tail, turned into a task matrix on x.
Eigen::MatrixXd task_from_subspace(Rng& rng, const Eigen::MatrixXd& top, const Eigen::MatrixXd& l,
                                   double tail_hi) {
  const int n = static_cast<int>(top.rows());
  const int m = static_cast<int>(top.cols());
  const Basis span = orthonormal_basis(top);
  const Basis rest = orthogonal_complement_within(span, Basis::from_orthonormal(
                                                             Eigen::MatrixXd::Identity(n, n)));
  Eigen::MatrixXd vectors(n, n);
  vectors << span.vectors() * random_orthogonal(rng, m), rest.vectors();
  Eigen::VectorXd mu(n);
  mu.head(m) = descending(rng, m, 1.0, 3.0);
  if (n > m) mu.tail(n - m) = descending(rng, n - m, 0.0, tail_hi);
  const Eigen::MatrixXd kw = mu.cwiseSqrt().asDiagonal() * vectors.transpose();
  // s = l^T k^T k l must equal kw^T kw, so k = kw l^{-1}.
  return l.transpose().triangularView<Eigen::Upper>().solve(kw.transpose()).transpose();
}

std::optional<ProblemInstance> try_small(Rng& rng, int max_n) {
  const int n = uniform_int(rng, 2, max_n);
  const int z = uniform_int(rng, 1, n / 2);
  const int a = uniform_int(rng, 1, n);
  const int b = uniform_int(rng, std::max(1, n - a), n);
  ProblemInstance inst{n, a, b, z, random_spd(rng, n), {}, {}};
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(inst.psi).matrixL();
  const Basis u1 = orthonormal_basis(Eigen::MatrixXd(l.topRows(a).transpose()));
  const Basis u2 = orthonormal_basis(Eigen::MatrixXd(l.bottomRows(b).transpose()));
  const Basis u12 = intersect(u1, u2);

  const int r_minus = uniform_int(rng, std::max(z, 4 * z - n), 2 * z);
  const int c12 = uniform_int(rng, 0, std::min(r_minus, u12.dim()));
  const int c1 = uniform_int(rng, 0, r_minus - c12);
  const int c2 = uniform_int(rng, 0, r_minus - c12 - c1);
  const int cg = r_minus - c12 - c1 - c2;
  if (c1 + c12 < r_minus - z || c2 + c12 < r_minus - z) return std::nullopt;

  Eigen::MatrixXd common(n, r_minus);
  common << random_in(rng, u12, c12), random_in(rng, u1, c1), random_in(rng, u2, c2),
      rng.normal_matrix(n, cg);
  Eigen::MatrixXd top3(n, 2 * z), top4(n, 2 * z);
  top3 << common, random_in(rng, u1, 2 * z - r_minus);
  top4 << common, random_in(rng, u2, 2 * z - r_minus);
  if (rank_of(top3) != 2 * z || rank_of(top4) != 2 * z) return std::nullopt;

  const double tail = rng.uniform() < 0.25 ? 0.0 : 0.5;
  inst.k3 = task_from_subspace(rng, top3, l, tail);
  inst.k4 = task_from_subspace(rng, top4, l, tail);
  return inst;
}

std::optional<ProblemInstance> try_large(Rng& rng, int max_n) {
  const int n = uniform_int(rng, 1, max_n);
  const int z = uniform_int(rng, n / 2 + 1, n);
  const int a = uniform_int(rng, std::max(1, n - z), n);
  const int b = uniform_int(rng, std::max({1, n - z, n - a}), n);
  ProblemInstance inst{n, a, b, z, random_spd(rng, n), rng.normal_matrix(n, n),
                       rng.normal_matrix(n, n)};
  return inst;
}

}  // namespace

std::vector<double> default_eig_profile(int n, int z) {
  const int m = std::min(2 * z, n);
  std::vector<double> mu(m);
  for (int j = 0; j < m; ++j) mu[j] = 2.0 * z - j;
  return mu;
}

ProblemInstance gen_synthetic(const SyntheticSpec& spec) {
  const int n = spec.n, z = spec.z, a = spec.a, b = spec.b;
  if (n <= 0 || z <= 0 || a <= 0 || b <= 0 || a > n || b > n || a + b < n) {
    infeasible("dimensions n=" + std::to_string(n) + " a=" + std::to_string(a) +
               " b=" + std::to_string(b) + " z=" + std::to_string(z));
  }
  const int m = std::min(2 * z, n);
  const int r_plus = spec.r_plus_target;
  if (r_plus < m || r_plus > 2 * m || r_plus > n) {
    infeasible("r_plus_target " + std::to_string(r_plus) + " outside [" + std::to_string(m) +
               ", " + std::to_string(std::min(2 * m, n)) + "]");
  }
  std::vector<double> mu = spec.eig_profile.empty() ? default_eig_profile(n, z) : spec.eig_profile;
  if (static_cast<int>(mu.size()) != m) infeasible("eig_profile must have min(2z, n) entries");
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (!(mu[j] > 0.0) || (j > 0 && mu[j] > mu[j - 1])) {
      infeasible("eig_profile must be positive and non-increasing");
    }
  }

  const int la = spec.layout_a.value_or(a);
  const int lb = spec.layout_b.value_or(b);
  if (la <= 0 || lb <= 0 || la > n || lb > n || la + lb < n) infeasible("bad layout sizes");
  Rng rng(spec.seed, 0x5eed);
  std::vector<int> only1 = range(0, n - lb);
  std::vector<int> overlap = range(n - lb, la);
  std::vector<int> only2 = range(la, n);
  rng.shuffle(only1);
  rng.shuffle(overlap);
  rng.shuffle(only2);

  const int shared_count = 2 * m - r_plus;
  const int exclusive = m - shared_count;
  std::vector<int> ex3, ex4, shared;
  take(only1, ex3, exclusive);
  take(overlap, ex3, exclusive - static_cast<int>(ex3.size()));
  take(only2, ex4, exclusive);
  take(overlap, ex4, exclusive - static_cast<int>(ex4.size()));
  if (static_cast<int>(ex3.size()) < exclusive || static_cast<int>(ex4.size()) < exclusive) {
    infeasible("exclusive eigenvectors do not fit in the observation spans");
  }
  take(overlap, shared, shared_count);
  if (!spec.keep_sf3) {
    take(only2, shared, shared_count - static_cast<int>(shared.size()));
    take(only1, shared, shared_count - static_cast<int>(shared.size()));
  }
  if (static_cast<int>(shared.size()) < shared_count) {
    infeasible("shared eigenvectors do not fit" +
               std::string(spec.keep_sf3 ? " in the observation overlap" : ""));
  }

  std::vector<int> idx3 = shared, idx4 = shared;
  idx3.insert(idx3.end(), ex3.begin(), ex3.end());
  idx4.insert(idx4.end(), ex4.begin(), ex4.end());
  rng.shuffle(idx3);
  rng.shuffle(idx4);

  ProblemInstance inst{n, a, b, z, Eigen::MatrixXd::Identity(n, n), coordinate_task(n, idx3, mu),
                       coordinate_task(n, idx4, mu)};
  std::vector<int> all = idx3;
  all.insert(all.end(), ex4.begin(), ex4.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end() ||
      static_cast<int>(all.size()) != r_plus) {
    infeasible("internal placement error");
  }
  return inst;
}

ProblemInstance random_instance(std::uint64_t seed, int n, int z, int a, int b) {
  Rng rng(seed, 0x1257);
  return ProblemInstance{n, a, b, z, random_spd(rng, n), rng.normal_matrix(n, n),
                         rng.normal_matrix(n, n)};
}

ProblemInstance random_rank_deficient_instance(std::uint64_t seed, int n, int rank, int z, int a,
                                               int b) {
  Rng rng(seed, 0xdef1);
  const Eigen::MatrixXd g = rng.normal_matrix(n, rank);
  Eigen::MatrixXd psi = g * g.transpose();
  psi = 0.5 * (psi + psi.transpose()).eval();
  return ProblemInstance{n, a, b, z, psi, rng.normal_matrix(n, n), rng.normal_matrix(n, n)};
}

ProblemInstance random_sufficient_instance(std::uint64_t seed, int max_n, BlockCase block) {
  if (max_n < 2) throw Error(ErrorCode::kInfeasibleSpec, "max_n must be at least 2");
  for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
    Rng rng(seed, 0x2000 + attempt);
    bool small = block == BlockCase::kSmall;
    if (block == BlockCase::kAny) small = rng.uniform() < 0.5;
    const std::optional<ProblemInstance> inst = small ? try_small(rng, max_n) : try_large(rng, max_n);
    if (!inst) continue;
    const TaskSpectrum spec = spectrum(*inst);
    const ConditionReport report = sufficient_report(spec, *inst);
    if (report.sufficient_ok && report.eigengap_ok3 && report.eigengap_ok4) return *inst;
  }
  throw Error(ErrorCode::kInfeasibleSpec, "no sufficient instance found");
}

}  // namespace tanc
