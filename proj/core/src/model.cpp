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

#include "tanc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tanc/error.hpp"

namespace tanc {
namespace {

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

ProblemInstance validated(const ProblemInstance& instance, const ToleranceConfig& tol) {
  validate(tol);
  const int n = instance.n;
  if (n < 1) throw Error(ErrorCode::kBadDimensions, "n must be positive");
  if (instance.a < 1 || instance.b < 1) {
    throw Error(ErrorCode::kBadDimensions, "observation sizes must be positive");
  }
  if (instance.z < 1) throw Error(ErrorCode::kBadDimensions, "edge capacity z must be >= 1");
  if (instance.psi.rows() != n || instance.psi.cols() != n) {
    throw Error(ErrorCode::kBadDimensions, "psi is " + shape(instance.psi) + ", expected " +
                                               std::to_string(n) + "x" + std::to_string(n));
  }
  if (instance.k3.cols() != n || instance.k4.cols() != n || instance.k3.rows() < 1 ||
      instance.k4.rows() < 1) {
    throw Error(ErrorCode::kBadDimensions, "task matrices are " + shape(instance.k3) + " and " +
                                               shape(instance.k4) + ", expected m x " +
                                               std::to_string(n));
  }
  if (!instance.psi.allFinite() || !instance.k3.allFinite() || !instance.k4.allFinite()) {
    throw Error(ErrorCode::kBadDimensions, "non-finite entries");
  }
  if (std::max(instance.a, instance.b) > n || n > instance.a + instance.b) {
    throw Error(ErrorCode::kObservationConstraintViolated,
                "need max(a, b) <= n <= a + b, got a=" + std::to_string(instance.a) +
                    " b=" + std::to_string(instance.b) + " n=" + std::to_string(n));
  }

  ProblemInstance out = instance;
  const double scale = std::max(1.0, instance.psi.cwiseAbs().maxCoeff());
  const double asym = (instance.psi - instance.psi.transpose()).cwiseAbs().maxCoeff();
  if (asym > std::max(tol.rank_tol, 1e-12) * scale * n) {
    throw Error(ErrorCode::kNotPsd, "psi is not symmetric (max asymmetry " +
                                        std::to_string(asym) + ")");
  }
  out.psi = 0.5 * (instance.psi + instance.psi.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.psi, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -std::max(tol.rank_tol, 1e-12) * std::max(1.0, hi)) {
    throw Error(ErrorCode::kNotPsd, "psi has eigenvalue " + std::to_string(lo));
  }
  return out;
}

Eigen::MatrixXd node1_selector(int n, int a) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(a, n);
  p.leftCols(a).setIdentity();
  return p;
}

Eigen::MatrixXd node2_selector(int n, int b) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(b, n);
  p.rightCols(b).setIdentity();
  return p;
}

SortedEigen sorted_eigen(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (symmetric + symmetric.transpose()));
  const Eigen::Index n = symmetric.rows();
  SortedEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = eig.eigenvalues()(n - 1 - j);
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - j);
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) >= peak - 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.vectors.col(j) = v;
  }
  return out;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (psi + psi.transpose()));
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

WhitenedInstance whiten(const ProblemInstance& raw, const ToleranceConfig& tol) {
  const ProblemInstance instance = validated(raw, tol);
  const int n = instance.n;
  const SortedEigen eig = sorted_eigen(instance.psi);
  const double top = std::max(eig.values(0), 0.0);
  int rank = 0;
  while (rank < n && eig.values(rank) > tol.rank_tol * top && eig.values(rank) > 0.0) ++rank;

  WhitenedInstance out;
  if (rank == n) {
    // Already full rank: the instance is its own reduced form.
    out.inner = instance;
    out.forward_map = Eigen::MatrixXd::Identity(n, n);
    out.backward_map = Eigen::MatrixXd::Identity(n, n);
    out.node1_map = Eigen::MatrixXd::Identity(instance.a, instance.a);
    out.node2_map = Eigen::MatrixXd::Identity(instance.b, instance.b);
    out.a_tilde = instance.a;
    out.b_tilde = instance.b;
    return out;
  }
  if (rank == 0) throw Error(ErrorCode::kNotPsd, "psi is zero");

  // x = Q diag(sqrt(lambda)) w with w white; column i of theta is the
  // functional x_i in w-coordinates.
  const Eigen::MatrixXd q = eig.vectors.leftCols(rank);
  const Eigen::VectorXd root = eig.values.head(rank).cwiseSqrt();
  const Eigen::MatrixXd theta = root.asDiagonal() * q.transpose();  // rank x n
  const Eigen::MatrixXd theta1 = theta.leftCols(instance.a);
  const Eigen::MatrixXd theta2 = theta.rightCols(instance.b);

  const Basis col1 = orthonormal_basis(theta1, tol);
  const Basis col2 = orthonormal_basis(theta2, tol);
  const int a_t = col1.dim();
  const int b_t = col2.dim();
  const Basis shared = intersect(col1, col2, tol);
  if (shared.dim() != a_t + b_t - rank) {
    throw Error(ErrorCode::kNotPsd, "observation spans do not cover the support of psi");
  }
  const Basis only1 = orthogonal_complement_within(shared, col1, tol);
  const Basis only2 = orthogonal_complement_within(shared, col2, tol);

  // omega = [node-1 exclusive | shared | node-2 exclusive]; x' = omega^T w.
  Eigen::MatrixXd omega(rank, rank);
  omega << only1.vectors(), shared.vectors(), only2.vectors();

  out.a_tilde = a_t;
  out.b_tilde = b_t;
  out.forward_map = omega.transpose() * root.cwiseInverse().asDiagonal() * q.transpose();
  const Eigen::MatrixXd omega_inv_t = omega.transpose().inverse();
  out.backward_map = q * root.asDiagonal() * omega_inv_t;

  // x'_j for j < a_tilde as a combination of x_1..x_a, and likewise for node 2.
  const Eigen::MatrixXd omega1 = omega.leftCols(a_t);
  const Eigen::MatrixXd omega2 = omega.rightCols(b_t);
  out.node1_map = theta1.completeOrthogonalDecomposition().solve(omega1).transpose();
  out.node2_map = theta2.completeOrthogonalDecomposition().solve(omega2).transpose();

  out.inner.n = rank;
  out.inner.a = a_t;
  out.inner.b = b_t;
  out.inner.z = instance.z;
  out.inner.psi = omega.transpose() * omega;
  out.inner.k3 = instance.k3 * out.backward_map;
  out.inner.k4 = instance.k4 * out.backward_map;
  return out;
}

Basis TaskSpectrum::span1(const ToleranceConfig& tol) const { return orthonormal_basis(obs1, tol); }
Basis TaskSpectrum::span2(const ToleranceConfig& tol) const { return orthonormal_basis(obs2, tol); }
Basis TaskSpectrum::span3() const { return Basis::from_orthonormal(top3); }
Basis TaskSpectrum::span4() const { return Basis::from_orthonormal(top4); }

TaskSpectrum spectrum(const ProblemInstance& raw, const ToleranceConfig& tol) {
  const ProblemInstance instance = validated(raw, tol);
  const int n = instance.n;
  Eigen::LLT<Eigen::MatrixXd> llt(instance.psi);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kCholeskyFailed, "psi is not positive definite");
  }
  TaskSpectrum out;
  out.n = n;
  out.block = std::min(2 * instance.z, n);
  out.l = llt.matrixL();
  const double dmax = out.l.diagonal().maxCoeff();
  const double dmin = out.l.diagonal().minCoeff();
  if (dmin * dmin <= tol.rank_tol * dmax * dmax) {
    throw Error(ErrorCode::kCholeskyFailed, "psi is numerically singular; whiten first");
  }

  out.s3 = out.l.transpose() * instance.k3.transpose() * instance.k3 * out.l;
  out.s4 = out.l.transpose() * instance.k4.transpose() * instance.k4 * out.l;
  out.s3 = 0.5 * (out.s3 + out.s3.transpose()).eval();
  out.s4 = 0.5 * (out.s4 + out.s4.transpose()).eval();
  const SortedEigen e3 = sorted_eigen(out.s3);
  const SortedEigen e4 = sorted_eigen(out.s4);
  out.mu3 = e3.values;
  out.mu4 = e4.values;
  out.u3 = e3.vectors;
  out.u4 = e4.vectors;
  out.top3 = out.u3.leftCols(out.block);
  out.top4 = out.u4.leftCols(out.block);

  // x_i = (row i of l) . w, so node 1 reaches the span of the first a rows.
  out.obs1 = out.l.topRows(instance.a).transpose();
  out.obs2 = out.l.bottomRows(instance.b).transpose();

  auto gap = [&](const Eigen::VectorXd& mu) {
    // With block == n the leading subspace is all of R^n and never ambiguous.
    if (out.block == n) return std::numeric_limits<double>::infinity();
    return mu(out.block - 1) - mu(out.block);
  };
  out.eigengap3 = gap(out.mu3);
  out.eigengap4 = gap(out.mu4);
  return out;
}

double lower_bound(const TaskSpectrum& spec, int z) {
  const int start = std::min(2 * z, spec.n);
  double lb = 0.0;
  for (int j = start; j < spec.n; ++j) {
    lb += std::max(spec.mu3(j), 0.0) + std::max(spec.mu4(j), 0.0);
  }
  return lb;
}

double lower_bound(const ProblemInstance& raw, const ToleranceConfig& tol) {
  const ProblemInstance instance = validated(raw, tol);
  const Eigen::MatrixXd root = psd_sqrt(instance.psi);
  const int start = std::min(2 * instance.z, instance.n);
  double lb = 0.0;
  for (const Eigen::MatrixXd* k : {&instance.k3, &instance.k4}) {
    const SortedEigen e = sorted_eigen(root * k->transpose() * *k * root);
    for (int j = start; j < instance.n; ++j) lb += std::max(e.values(j), 0.0);
  }
  return lb;
}

double reconstruction_loss(const Eigen::MatrixXd& k, const Eigen::MatrixXd& psi,
                           const Eigen::MatrixXd& decoder, const Eigen::MatrixXd& encoder) {
  const Eigen::Index n = psi.rows();
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n) - decoder * encoder;
  const Eigen::MatrixXd kr = k * r;
  return (kr * psi * kr.transpose()).trace();
}

PcaResult task_pca(const Eigen::MatrixXd& k, const Eigen::MatrixXd& psi, int z,
                   const ToleranceConfig& tol) {
  const int n = static_cast<int>(psi.rows());
  if (psi.cols() != n || k.cols() != n) {
    throw Error(ErrorCode::kBadDimensions, "task_pca: k is " + shape(k) + ", psi is " + shape(psi));
  }
  if (z < 1) throw Error(ErrorCode::kBadDimensions, "task_pca: z must be >= 1");
  validate(tol);
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (psi + psi.transpose()));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kCholeskyFailed, "task_pca: psi is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const SortedEigen e = sorted_eigen(l.transpose() * k.transpose() * k * l);
  const int kept = std::min(z, n);

  // Encoder rows are (l^{-T} u_j)^T; with e_h = u^T the closed-form decoder
  // e_h^T (e_h e_h^T)^{-1} is u itself, mapped back through l.
  PcaResult out;
  out.mu = e.values;
  out.encoder = Eigen::MatrixXd::Zero(z, n);
  out.decoder = Eigen::MatrixXd::Zero(n, z);
  const Eigen::MatrixXd u = e.vectors.leftCols(kept);
  out.encoder.topRows(kept) =
      l.transpose().triangularView<Eigen::Upper>().solve(u).transpose();
  out.decoder.leftCols(kept) = l * u;
  out.loss = reconstruction_loss(k, psi, out.decoder, out.encoder);
  return out;
}

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& samples) {
  if (samples.rows() == 0) {
    throw Error(ErrorCode::kBadDimensions, "estimate_covariance: no samples");
  }
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(samples.rows());
}

}  // namespace tanc
