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

#include "tanc/analytic.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "tanc/code.hpp"
#include "tanc/error.hpp"
#include "tanc/synthetic.hpp"
#include "tanc_test/fixtures.hpp"

namespace tanc {
namespace {

using testing::alignment;
using testing::vec;

ConditionReport report_of(const ProblemInstance& p) { return sufficient_report(spectrum(p), p); }

void expect_attains_bound(const ProblemInstance& p) {
  const TaskSpectrum spec = spectrum(p);
  const double lb = lower_bound(spec, p.z);
  const double loss = exact_loss(construct_lb_code(spec, p), p).total;
  EXPECT_LE(loss - lb, 1e-8 * (1.0 + lb));
  EXPECT_GE(loss - lb, -1e-8 * (1.0 + lb));
}

TEST(Conditions, BlockedTriangle) {
  // Reference counts from tests/oracles/triangle_oracle.py.
  const ConditionReport r = report_of(testing::blocked_triangle());
  EXPECT_TRUE(r.eigengap_ok3);
  EXPECT_TRUE(r.eigengap_ok4);
  EXPECT_EQ(r.r_plus_34, 3);
  EXPECT_EQ(r.r_minus_34, 1);
  EXPECT_EQ(r.r_minus_13, 1);
  EXPECT_EQ(r.r_minus_24, 1);
  EXPECT_TRUE(r.necessary_ok);
  EXPECT_FALSE(r.sf1_ok);
  EXPECT_FALSE(r.sf2_ok);
  EXPECT_TRUE(r.corollary_nc_free);
  // The dimension count holds; the span conditions are what fail.
  EXPECT_TRUE(r.corollary_dim);
  EXPECT_FALSE(r.sufficient_ok);
}

TEST(Conditions, BlockedTriangleRefusesConstruction) {
  const ProblemInstance p = testing::blocked_triangle();
  try {
    construct_lb_spans(spectrum(p), p);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionNotMet);
  }
}

TEST(Conditions, CodedTriangle) {
  const ConditionReport r = report_of(testing::coded_triangle());
  EXPECT_EQ(r.r_plus_34, 3);
  EXPECT_EQ(r.r_minus_34, 1);
  EXPECT_EQ(r.r_minus_13, 1);
  EXPECT_EQ(r.r_minus_24, 1);
  EXPECT_TRUE(r.necessary_ok);
  EXPECT_TRUE(r.sf1_ok);
  EXPECT_TRUE(r.sf2_ok);
  EXPECT_FALSE(r.corollary_nc_free);
  EXPECT_TRUE(r.sufficient_ok);
}

TEST(Construction, CodedTriangleDirections) {
  const ProblemInstance p = testing::coded_triangle();
  const TaskSpectrum spec = spectrum(p);
  const CodeSpans s = construct_lb_spans(spec, p);
  EXPECT_NEAR(alignment(s.phi13.col(0), vec({1, -2, 0})), 1.0, 1e-9);
  EXPECT_NEAR(alignment(s.phi24.col(0), vec({0, 1, 2})), 1.0, 1e-9);
  EXPECT_NEAR(alignment(s.phi56.col(0), vec({1, 1, 3})), 1.0, 1e-9);
  const double lb = lower_bound(spec, 1);
  EXPECT_NEAR(exact_loss(construct_lb_code(spec, p), p).total, lb, 1e-9);
}

TEST(Conditions, TooManyTaskDirections) {
  // n = 4, z = 1, tasks on disjoint planes: r_plus = 4 > 3z.
  const Eigen::MatrixXd i4 = Eigen::MatrixXd::Identity(4, 4);
  const ProblemInstance p{4, 3, 3, 1, i4,
                          testing::two_vector_task(i4.col(0), i4.col(1), 2.0, 1.0),
                          testing::two_vector_task(i4.col(2), i4.col(3), 2.0, 1.0)};
  const ConditionReport r = necessary_report(spectrum(p), p);
  EXPECT_EQ(r.r_plus_34, 4);
  EXPECT_EQ(r.r_minus_34, 0);
  EXPECT_FALSE(r.necessary_ok);
  EXPECT_FALSE(report_of(p).sufficient_ok);
}

TEST(Conditions, PrivateLinkStarved) {
  // Sink 3 wants x3 and x4, neither of which node 1 sees.
  const Eigen::MatrixXd i4 = Eigen::MatrixXd::Identity(4, 4);
  const ProblemInstance p{4, 2, 2, 1, i4,
                          testing::two_vector_task(i4.col(2), i4.col(3), 2.0, 1.0),
                          testing::two_vector_task(i4.col(2), i4.col(3), 2.0, 1.0)};
  const ConditionReport r = necessary_report(spectrum(p), p);
  EXPECT_EQ(r.r_minus_13, 0);
  EXPECT_FALSE(r.necessary_ok);
}

TEST(Conditions, EigengapDetection) {
  const ProblemInstance p{3, 2, 2, 1, Eigen::MatrixXd::Identity(3, 3),
                          Eigen::MatrixXd::Identity(3, 3),
                          testing::coded_triangle().k4};
  const ConditionReport r = necessary_report(spectrum(p), p);
  EXPECT_FALSE(r.eigengap_ok3);
  EXPECT_TRUE(r.eigengap_ok4);
}

TEST(Construction, IdenticalTasksFullObservation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ProblemInstance p = random_instance(seed, 5, 2, 5, 5);
    p.k4 = p.k3;
    const ConditionReport r = report_of(p);
    EXPECT_TRUE(r.sufficient_ok);
    EXPECT_TRUE(r.corollary_nc_free);
    EXPECT_TRUE(r.corollary_dim);
    expect_attains_bound(p);
  }
}

TEST(Construction, LargeBlockSmallNetwork) {
  // n = 3, z = 2, node 1 sees two coordinates, node 2 sees all three.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance p = random_instance(seed, 3, 2, 2, 3);
    EXPECT_TRUE(report_of(p).sufficient_ok);
    expect_attains_bound(p);
  }
  // Mirrored: node 1 sees everything.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance p = random_instance(seed, 3, 2, 3, 2);
    EXPECT_TRUE(report_of(p).sufficient_ok);
    expect_attains_bound(p);
  }
}

TEST(Construction, GeneralCovariance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance p = random_instance(seed, 4, 2, 4, 4);
    EXPECT_FALSE(p.psi.isIdentity(1e-6));
    EXPECT_TRUE(report_of(p).sufficient_ok);
    expect_attains_bound(p);
  }
}

class RandomSufficient : public ::testing::TestWithParam<BlockCase> {};

TEST_P(RandomSufficient, AttainsBoundWithinLinkCapacity) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ProblemInstance p = random_sufficient_instance(seed, 9, GetParam());
    EXPECT_EQ(2 * p.z > p.n, GetParam() == BlockCase::kLarge);
    const TaskSpectrum spec = spectrum(p);
    const CodeSpans s = construct_lb_spans(spec, p);
    EXPECT_EQ(s.phi13.cols(), p.z);
    EXPECT_EQ(s.phi24.cols(), p.z);
    EXPECT_EQ(s.phi56.cols(), p.z);
    const SpanValidity v = span_validity(s, spec);
    EXPECT_TRUE(v.phi13_valid);
    EXPECT_TRUE(v.phi24_valid);
    expect_attains_bound(p);
  }
}

INSTANTIATE_TEST_SUITE_P(Blocks, RandomSufficient,
                         ::testing::Values(BlockCase::kSmall, BlockCase::kLarge));

TEST(Conditions, SufficientImpliesNecessary) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 3 + static_cast<int>(seed % 5);
    const int z = 1 + static_cast<int>(seed % 3);
    const int a = 1 + static_cast<int>((seed * 7) % n);
    const int b = n - a + 1 + static_cast<int>((seed * 3) % a);
    const ProblemInstance p = random_instance(seed, n, z, a, std::min(b, n));
    const TaskSpectrum spec = spectrum(p);
    const ConditionReport nec = necessary_report(spec, p);
    const ConditionReport suf = sufficient_report(spec, p);
    EXPECT_EQ(nec.necessary_ok, suf.necessary_ok);
    EXPECT_EQ(nec.r_plus_34, suf.r_plus_34);
    EXPECT_TRUE(!suf.sufficient_ok || suf.necessary_ok);
    if (suf.corollary_dim) {
      EXPECT_GE(suf.r_minus_13, std::min(z, n - z));
      EXPECT_GE(suf.r_minus_24, std::min(z, n - z));
    }
  }
}

}  // namespace
}  // namespace tanc
