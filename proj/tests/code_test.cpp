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

#include "tanc/code.hpp"

#include <gtest/gtest.h>

#include <limits>

#include "tanc/error.hpp"
#include "tanc/random.hpp"
#include "tanc/synthetic.hpp"
#include "tanc/train.hpp"
#include "tanc_test/fixtures.hpp"

namespace tanc {
namespace {

// |k r psi^{1/2}|_F^2, the same expectation through a different factorization.
double frobenius_oracle(const Eigen::MatrixXd& k, const Eigen::MatrixXd& psi,
                        const Eigen::MatrixXd& d, const Eigen::MatrixXd& a) {
  const Eigen::Index n = psi.rows();
  return (k * (Eigen::MatrixXd::Identity(n, n) - d * a) * psd_sqrt(psi)).squaredNorm();
}

ButterflyCode random_code(const ProblemInstance& p, std::uint64_t seed) {
  return init_code(p, seed, 1.0);
}

TEST(ButterflyCode, Shapes) {
  const ButterflyCode c = ButterflyCode::zeros(5, 3, 4, 2);
  EXPECT_EQ(c.e13.rows(), 2);
  EXPECT_EQ(c.e13.cols(), 3);
  EXPECT_EQ(c.e25.cols(), 4);
  EXPECT_EQ(c.e56.cols(), 4);
  EXPECT_EQ(c.d3.rows(), 5);
  EXPECT_EQ(c.d3.cols(), 4);
  const ProblemInstance p = random_instance(1, 5, 2, 3, 4);
  EXPECT_NO_THROW(check_shapes(c, p));
  ButterflyCode bad = c;
  bad.e24.resize(2, 3);
  EXPECT_THROW(check_shapes(bad, p), Error);
  bad = c;
  bad.d4(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(check_shapes(bad, p), Error);
}

TEST(Encoders, BlockStructure) {
  const ProblemInstance p = random_instance(2, 5, 2, 3, 4);
  const ButterflyCode c = random_code(p, 3);
  const Eigen::MatrixXd a3 = sink3_encoder(c, p);
  const Eigen::MatrixXd a4 = sink4_encoder(c, p);
  // Private rows only touch the sending node's coordinates.
  EXPECT_TRUE(a3.topRightCorner(2, 2).isZero());
  EXPECT_TRUE(a4.topLeftCorner(2, 1).isZero());
  EXPECT_TRUE(a3.bottomRows(2).isApprox(a4.bottomRows(2)));
  Eigen::MatrixXd inputs(4, 5);
  inputs << c.e15 * node1_selector(5, 3), c.e25 * node2_selector(5, 4);
  EXPECT_TRUE(relay_encoder(c, p).isApprox(c.e56 * inputs));
}

TEST(ExactLoss, ZeroCodeLosesEverything) {
  const ProblemInstance p = random_instance(4, 4, 1, 3, 3);
  const TaskLosses l = exact_loss(ButterflyCode::zeros_like(p), p);
  EXPECT_NEAR(l.l3, (p.k3 * p.psi * p.k3.transpose()).trace(), 1e-10);
  EXPECT_NEAR(l.l4, (p.k4 * p.psi * p.k4.transpose()).trace(), 1e-10);
  EXPECT_DOUBLE_EQ(l.total, l.l3 + l.l4);
}

TEST(ExactLoss, MatchesFrobeniusOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance p = random_instance(seed, 6, 2, 4, 3);
    const ButterflyCode c = random_code(p, seed + 100);
    const TaskLosses l = exact_loss(c, p);
    EXPECT_NEAR(l.l3, frobenius_oracle(p.k3, p.psi, c.d3, sink3_encoder(c, p)), 1e-9 * l.l3);
    EXPECT_NEAR(l.l4, frobenius_oracle(p.k4, p.psi, c.d4, sink4_encoder(c, p)), 1e-9 * l.l4);
  }
}

TEST(ExactLoss, SemidefiniteCovariance) {
  const ProblemInstance p = random_rank_deficient_instance(5, 5, 2, 1, 3, 3);
  const ButterflyCode c = random_code(p, 6);
  const TaskLosses l = exact_loss(c, p);
  EXPECT_NEAR(l.l3, frobenius_oracle(p.k3, p.psi, c.d3, sink3_encoder(c, p)), 1e-9 * l.l3);
}

TEST(OptimalDecoders, StationaryAndBest) {
  const ProblemInstance p = random_instance(7, 6, 2, 4, 4);
  const ButterflyCode c = with_optimal_decoders(random_code(p, 8), p);
  const Gradient g = loss_and_gradient(c, p, TrainMode::kTaskAwareCoding);
  EXPECT_LT(g.grad.d3.norm(), 1e-9);
  EXPECT_LT(g.grad.d4.norm(), 1e-9);
  const double best = exact_loss(c, p).total;
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    ButterflyCode q = c;
    q.d3 += 1e-3 * rng.normal_matrix(6, 4);
    EXPECT_GT(exact_loss(q, p).total, best);
  }
}

TEST(OptimalDecoders, RankDeficientEncoder) {
  const ProblemInstance p = random_instance(10, 5, 2, 3, 3);
  ButterflyCode c = random_code(p, 11);
  c.e13.setZero();
  c.e56.row(1) = c.e56.row(0);
  c = with_optimal_decoders(c, p);
  EXPECT_TRUE(c.d3.allFinite());
  EXPECT_LE(exact_loss(c, p).l3, (p.k3 * p.psi * p.k3.transpose()).trace() + 1e-9);
}

TEST(FlowSpans, LinkSignals) {
  const ProblemInstance p = random_instance(12, 5, 2, 3, 4);
  const ButterflyCode c = random_code(p, 13);
  const CodeSpans s = flow_spans(c, p);
  const TaskSpectrum spec = spectrum(p);
  // phi = Phi^T l^{-1} x, so Phi^T = E l.
  EXPECT_TRUE(s.phi56.transpose().isApprox(relay_encoder(c, p) * spec.l, 1e-12));
  const SpanValidity v = span_validity(s, spec);
  EXPECT_TRUE(v.phi13_valid);
  EXPECT_TRUE(v.phi24_valid);
}

TEST(RealizeSpans, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance p = random_instance(seed, 6, 2, 4, 4);
    const CodeSpans s = flow_spans(random_code(p, seed + 50), p);
    const ButterflyCode c = realize_spans(s, p);
    const CodeSpans back = flow_spans(c, p);
    EXPECT_TRUE(back.phi13.isApprox(s.phi13, 1e-9));
    EXPECT_TRUE(back.phi24.isApprox(s.phi24, 1e-9));
    EXPECT_TRUE(back.phi56.isApprox(s.phi56, 1e-9));
  }
}

TEST(RealizeSpans, RejectsInvalidSpan) {
  const ProblemInstance p = testing::coded_triangle();
  CodeSpans s{Eigen::MatrixXd::Zero(3, 1), Eigen::MatrixXd::Zero(3, 1),
              Eigen::MatrixXd::Zero(3, 1)};
  s.phi13(2, 0) = 1.0;  // x3 is not observed by node 1
  try {
    realize_spans(s, p);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSpan);
  }
  s.phi13.setZero();
  s.phi24(0, 0) = 1.0;
  EXPECT_THROW(realize_spans(s, p), Error);
  s.phi24.setZero();
  s.phi56 = Eigen::MatrixXd::Zero(3, 2);
  EXPECT_THROW(realize_spans(s, p), Error);
}

TEST(Utilities, ConservationWithOptimalDecoders) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ProblemInstance p = random_instance(seed, 7, 2, 5, 4);
    const ButterflyCode c = with_optimal_decoders(random_code(p, seed + 7), p);
    const Utilities u = utilities(c, p);
    const TaskSpectrum s = spectrum(p);
    const double total = s.s3.trace() + s.s4.trace();
    EXPECT_NEAR(exact_loss(c, p).total + u.u56 + u.u13 + u.u24, total, 1e-9 * total);
    EXPECT_GE(u.u56, 0.0);
    EXPECT_GE(u.u13, -1e-12);
  }
}

TEST(Utilities, IndependentOfColumnBasis) {
  const ProblemInstance p = random_instance(30, 6, 2, 4, 4);
  const CodeSpans s = flow_spans(random_code(p, 31), p);
  Rng rng(32);
  CodeSpans mixed = s;
  mixed.phi13 = s.phi13 * rng.normal_matrix(2, 2);
  mixed.phi56 = s.phi56 * rng.normal_matrix(2, 2);
  const TaskSpectrum spec = spectrum(p);
  const Utilities a = utilities(s, spec);
  const Utilities b = utilities(mixed, spec);
  EXPECT_NEAR(a.u56, b.u56, 1e-9);
  EXPECT_NEAR(a.u13, b.u13, 1e-9);
  EXPECT_NEAR(a.u24, b.u24, 1e-9);
}

TEST(LiftCode, PreservesLossOnRankDeficientInstances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance p = random_rank_deficient_instance(seed, 6, 4, 1, 4, 4);
    const WhitenedInstance w = whiten(p);
    const ButterflyCode inner = random_code(w.inner, seed + 1);
    const ButterflyCode outer = lift_code(inner, w, p);
    const double li = exact_loss(inner, w.inner).total;
    EXPECT_NEAR(exact_loss(outer, p).total, li, 1e-9 * li);
  }
}

}  // namespace
}  // namespace tanc
