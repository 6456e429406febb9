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

#include <gtest/gtest.h>

#include <functional>

#include "tanc/code.hpp"
#include "tanc/error.hpp"
#include "tanc/random.hpp"
#include "tanc/synthetic.hpp"
#include "tanc_test/fixtures.hpp"

namespace tanc {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

// Eigenvalues of psi^{1/2} k^T k psi^{1/2}, descending; same spectrum as the
// Cholesky form by similarity.
Eigen::VectorXd sqrt_oracle_spectrum(const Eigen::MatrixXd& k, const Eigen::MatrixXd& psi) {
  const Eigen::MatrixXd root = psd_sqrt(psi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(root * k.transpose() * k * root);
  return eig.eigenvalues().reverse();
}

TEST(Validated, RejectsBadInstances) {
  ProblemInstance ok = random_instance(1, 4, 1, 3, 2);
  EXPECT_NO_THROW(validated(ok));

  ProblemInstance p = ok;
  p.a = 1;
  p.b = 2;
  EXPECT_EQ(code_of([&] { validated(p); }), ErrorCode::kObservationConstraintViolated);
  p = ok;
  p.a = 5;
  EXPECT_EQ(code_of([&] { validated(p); }), ErrorCode::kObservationConstraintViolated);
  p = ok;
  p.psi = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_EQ(code_of([&] { validated(p); }), ErrorCode::kBadDimensions);
  p = ok;
  p.z = 0;
  EXPECT_EQ(code_of([&] { validated(p); }), ErrorCode::kBadDimensions);
  p = ok;
  p.k3 = Eigen::MatrixXd::Identity(4, 3);
  EXPECT_EQ(code_of([&] { validated(p); }), ErrorCode::kBadDimensions);
  p = ok;
  p.psi(0, 1) += 1.0;
  EXPECT_EQ(code_of([&] { validated(p); }), ErrorCode::kNotPsd);
  p = ok;
  p.psi = -Eigen::MatrixXd::Identity(4, 4);
  EXPECT_EQ(code_of([&] { validated(p); }), ErrorCode::kNotPsd);
}

TEST(Validated, SymmetrizesTinyAsymmetry) {
  ProblemInstance p = random_instance(2, 3, 1, 2, 2);
  p.psi(0, 1) += 1e-14;
  const ProblemInstance v = validated(p);
  EXPECT_EQ(v.psi(0, 1), v.psi(1, 0));
}

TEST(Selectors, PickObservedCoordinates) {
  const Eigen::VectorXd x = testing::vec({1, 2, 3, 4});
  EXPECT_TRUE((node1_selector(4, 3) * x).isApprox(testing::vec({1, 2, 3})));
  EXPECT_TRUE((node2_selector(4, 2) * x).isApprox(testing::vec({3, 4})));
}

TEST(Spectrum, CholeskyAndOrdering) {
  const ProblemInstance p = random_instance(3, 6, 2, 4, 4);
  const TaskSpectrum s = spectrum(p);
  EXPECT_TRUE((s.l * s.l.transpose()).isApprox(p.psi, 1e-12));
  EXPECT_EQ(s.block, 4);
  for (Eigen::Index j = 1; j < s.mu3.size(); ++j) EXPECT_GE(s.mu3(j - 1), s.mu3(j));
  EXPECT_TRUE(s.mu3.isApprox(sqrt_oracle_spectrum(p.k3, p.psi), 1e-10));
  EXPECT_TRUE(s.mu4.isApprox(sqrt_oracle_spectrum(p.k4, p.psi), 1e-10));
  EXPECT_TRUE((s.u3.transpose() * s.u3).isIdentity(1e-10));
  EXPECT_EQ(s.span1().dim(), 4);
  EXPECT_EQ(s.span2().dim(), 4);
}

TEST(Spectrum, ObservationSpansAreRowsOfL) {
  // x_i = l_i . w for white w, so node 1 reaches exactly the first a rows.
  const ProblemInstance p = random_instance(4, 5, 1, 3, 3);
  const TaskSpectrum s = spectrum(p);
  for (int i = 0; i < 3; ++i) {
    const Eigen::MatrixXd v = s.l.row(i).transpose();
    EXPECT_TRUE(is_subspace_of(orthonormal_basis(v), s.span1(), {1e-9}));
  }
  const Eigen::MatrixXd last = s.l.row(4).transpose();
  EXPECT_FALSE(is_subspace_of(orthonormal_basis(last), s.span1(), {1e-9}));
}

TEST(Spectrum, RejectsSingularCovariance) {
  const ProblemInstance p = random_rank_deficient_instance(5, 5, 3, 1, 3, 3);
  EXPECT_EQ(code_of([&] { spectrum(p); }), ErrorCode::kCholeskyFailed);
}

TEST(Spectrum, EigenGap) {
  const TaskSpectrum s = spectrum(testing::coded_triangle());
  EXPECT_NEAR(s.eigengap3, 1.0, 1e-12);
  const ProblemInstance full = random_instance(6, 3, 2, 3, 3);
  EXPECT_TRUE(std::isinf(spectrum(full).eigengap3));
}

TEST(LowerBound, TailEigenvalues) {
  const ProblemInstance p = random_instance(7, 6, 1, 4, 4);
  const TaskSpectrum s = spectrum(p);
  const double expected = s.mu3.tail(4).sum() + s.mu4.tail(4).sum();
  EXPECT_NEAR(lower_bound(s, 1), expected, 1e-10 * expected);
  EXPECT_NEAR(lower_bound(p), expected, 1e-9 * expected);
  EXPECT_NEAR(lower_bound(spectrum(testing::coded_triangle()), 1), 0.0, 1e-12);
}

TEST(TaskPca, MatchesTailSum) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ProblemInstance p = random_instance(seed, 7, 1, 4, 4);
    for (int z = 1; z <= 7; ++z) {
      const PcaResult r = task_pca(p.k3, p.psi, z);
      const Eigen::VectorXd mu = sqrt_oracle_spectrum(p.k3, p.psi);
      const double tail = mu.tail(7 - z).sum();
      EXPECT_NEAR(r.loss, tail, 1e-10 * std::max(1.0, tail)) << "seed " << seed << " z " << z;
    }
  }
}

TEST(TaskPca, LargerCapacityThanDimension) {
  const ProblemInstance p = random_instance(9, 3, 1, 2, 2);
  const PcaResult r = task_pca(p.k3, p.psi, 5);
  EXPECT_EQ(r.encoder.rows(), 5);
  EXPECT_NEAR(r.loss, 0.0, 1e-10);
}

TEST(EstimateCovariance, MeanRemovedOverN) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0,
       3, 0,
       1, 2,
       3, 2;
  const Eigen::MatrixXd c = estimate_covariance(x);
  EXPECT_NEAR(c(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(c(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(c(0, 1), 0.0, 1e-15);
  EXPECT_THROW(estimate_covariance(Eigen::MatrixXd(0, 2)), Error);
}

TEST(PsdSqrt, SquaresBack) {
  Rng rng(11);
  const Eigen::MatrixXd psi = random_spd(rng, 5);
  const Eigen::MatrixXd r = psd_sqrt(psi);
  EXPECT_TRUE((r * r).isApprox(psi, 1e-12));
}

TEST(Whiten, FullRankIsIdentityMap) {
  const ProblemInstance p = random_instance(12, 5, 2, 3, 3);
  const WhitenedInstance w = whiten(p);
  EXPECT_EQ(w.inner.n, 5);
  EXPECT_TRUE(w.inner.psi.isApprox(p.psi));
  EXPECT_TRUE(w.forward_map.isIdentity());
}

TEST(Whiten, RankDeficientPreservesStructure) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ProblemInstance p = random_rank_deficient_instance(seed, 7, 4, 2, 5, 5);
    const WhitenedInstance w = whiten(p);
    EXPECT_EQ(w.inner.n, 4);
    EXPECT_EQ(w.a_tilde, 4);
    EXPECT_EQ(w.b_tilde, 4);
    EXPECT_NO_THROW(spectrum(w.inner));
    // backward * forward is the identity on the support of x.
    const Eigen::MatrixXd round = w.backward_map * w.forward_map * p.psi;
    EXPECT_TRUE(round.isApprox(p.psi, 1e-9));
    // Inner covariance is the covariance of forward_map x.
    EXPECT_TRUE((w.forward_map * p.psi * w.forward_map.transpose()).isApprox(w.inner.psi, 1e-9));
    // Reduced observations are functions of the original observations.
    const Eigen::MatrixXd via_node1 = w.node1_map * node1_selector(7, 5);
    const Eigen::MatrixXd direct1 = w.forward_map.topRows(w.a_tilde);
    EXPECT_LT(((via_node1 - direct1) * p.psi).norm(), 1e-9 * p.psi.norm());
    const Eigen::MatrixXd via_node2 = w.node2_map * node2_selector(7, 5);
    const Eigen::MatrixXd direct2 = w.forward_map.bottomRows(w.b_tilde);
    EXPECT_LT(((via_node2 - direct2) * p.psi).norm(), 1e-9 * p.psi.norm());
    EXPECT_NEAR(lower_bound(spectrum(w.inner), 2), lower_bound(p), 1e-9 * (1 + lower_bound(p)));
  }
}

TEST(Whiten, ZeroCovariance) {
  ProblemInstance p = random_instance(13, 3, 1, 2, 2);
  p.psi.setZero();
  EXPECT_THROW(whiten(p), Error);
}

}  // namespace
}  // namespace tanc
