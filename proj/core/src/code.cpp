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

#include <string>

#include "tanc/error.hpp"

namespace tanc {
namespace {

void expect_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                  const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(name) + " is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  if (!m.allFinite()) throw Error(ErrorCode::kShapeMismatch, std::string(name) + " not finite");
}

// [e15 x^(1); e25 x^(2)] as a 2z x n map.
Eigen::MatrixXd relay_input(const ButterflyCode& code, const ProblemInstance& instance) {
  const int z = instance.z;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * z, instance.n);
  m.topLeftCorner(z, instance.a) = code.e15;
  m.bottomRightCorner(z, instance.b) = code.e25;
  return m;
}

}  // namespace

ButterflyCode ButterflyCode::zeros(int n, int a, int b, int z) {
  return ButterflyCode{
      Eigen::MatrixXd::Zero(z, a),     Eigen::MatrixXd::Zero(z, a),
      Eigen::MatrixXd::Zero(z, b),     Eigen::MatrixXd::Zero(z, b),
      Eigen::MatrixXd::Zero(z, 2 * z), Eigen::MatrixXd::Zero(n, 2 * z),
      Eigen::MatrixXd::Zero(n, 2 * z),
  };
}

ButterflyCode ButterflyCode::zeros_like(const ProblemInstance& instance) {
  return zeros(instance.n, instance.a, instance.b, instance.z);
}

void check_shapes(const ButterflyCode& code, const ProblemInstance& instance) {
  const int n = instance.n, a = instance.a, b = instance.b, z = instance.z;
  expect_shape(code.e13, z, a, "e13");
  expect_shape(code.e15, z, a, "e15");
  expect_shape(code.e24, z, b, "e24");
  expect_shape(code.e25, z, b, "e25");
  expect_shape(code.e56, z, 2 * z, "e56");
  expect_shape(code.d3, n, 2 * z, "d3");
  expect_shape(code.d4, n, 2 * z, "d4");
}

Eigen::MatrixXd relay_encoder(const ButterflyCode& code, const ProblemInstance& instance) {
  return code.e56 * relay_input(code, instance);
}

Eigen::MatrixXd sink3_encoder(const ButterflyCode& code, const ProblemInstance& instance) {
  const int z = instance.z;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * z, instance.n);
  m.topLeftCorner(z, instance.a) = code.e13;
  m.bottomRows(z) = relay_encoder(code, instance);
  return m;
}

Eigen::MatrixXd sink4_encoder(const ButterflyCode& code, const ProblemInstance& instance) {
  const int z = instance.z;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * z, instance.n);
  m.topRightCorner(z, instance.b) = code.e24;
  m.bottomRows(z) = relay_encoder(code, instance);
  return m;
}

CodeSpans flow_spans(const ButterflyCode& code, const ProblemInstance& instance,
                     const ToleranceConfig& tol) {
  check_shapes(code, instance);
  const int z = instance.z;
  const TaskSpectrum spec = spectrum(instance, tol);
  Eigen::MatrixXd private13 = Eigen::MatrixXd::Zero(z, instance.n);
  private13.leftCols(instance.a) = code.e13;
  Eigen::MatrixXd private24 = Eigen::MatrixXd::Zero(z, instance.n);
  private24.rightCols(instance.b) = code.e24;
  return CodeSpans{
      (private13 * spec.l).transpose(),
      (private24 * spec.l).transpose(),
      (relay_encoder(code, instance) * spec.l).transpose(),
  };
}

SpanValidity span_validity(const CodeSpans& spans, const TaskSpectrum& spec,
                           const ToleranceConfig& tol) {
  return SpanValidity{
      is_subspace_of(orthonormal_basis(spans.phi13, tol), spec.span1(tol), tol),
      is_subspace_of(orthonormal_basis(spans.phi24, tol), spec.span2(tol), tol),
  };
}

TaskLosses exact_loss(const ButterflyCode& code, const ProblemInstance& instance) {
  check_shapes(code, instance);
  TaskLosses out;
  out.l3 = reconstruction_loss(instance.k3, instance.psi, code.d3, sink3_encoder(code, instance));
  out.l4 = reconstruction_loss(instance.k4, instance.psi, code.d4, sink4_encoder(code, instance));
  out.total = out.l3 + out.l4;
  return out;
}

Eigen::MatrixXd psd_pinv(const Eigen::MatrixXd& m, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  const Eigen::VectorXd& w = eig.eigenvalues();
  const double top = w.size() > 0 ? w.cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (top > 0.0 && w(i) > rank_tol * top) inv(i) = 1.0 / w(i);
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Decoders optimal_decoders(const ButterflyCode& code, const ProblemInstance& instance,
                          const ToleranceConfig& tol) {
  check_shapes(code, instance);
  auto solve = [&](const Eigen::MatrixXd& enc) {
    const Eigen::MatrixXd psi_at = instance.psi * enc.transpose();
    return Eigen::MatrixXd(psi_at * psd_pinv(enc * psi_at, tol.rank_tol));
  };
  return Decoders{solve(sink3_encoder(code, instance)), solve(sink4_encoder(code, instance))};
}

ButterflyCode with_optimal_decoders(ButterflyCode code, const ProblemInstance& instance,
                                    const ToleranceConfig& tol) {
  Decoders d = optimal_decoders(code, instance, tol);
  code.d3 = std::move(d.d3);
  code.d4 = std::move(d.d4);
  return code;
}

ButterflyCode realize_spans(const CodeSpans& spans, const ProblemInstance& instance,
                            const ToleranceConfig& tol) {
  const int n = instance.n, a = instance.a, b = instance.b, z = instance.z;
  for (const Eigen::MatrixXd* phi : {&spans.phi13, &spans.phi24, &spans.phi56}) {
    if (phi->rows() != n || phi->cols() != z) {
      throw Error(ErrorCode::kShapeMismatch, "spans must be n x z");
    }
  }
  const TaskSpectrum spec = spectrum(instance, tol);
  const SpanValidity valid = span_validity(spans, spec, tol);
  if (!valid.phi13_valid) throw Error(ErrorCode::kInvalidSpan, "phi13 leaves the node-1 span");
  if (!valid.phi24_valid) throw Error(ErrorCode::kInvalidSpan, "phi24 leaves the node-2 span");

  ButterflyCode code = ButterflyCode::zeros(n, a, b, z);
  // phi13 = obs1 e13^T, phi24 = obs2 e24^T; obs1/obs2 have full column rank.
  code.e13 = spec.obs1.colPivHouseholderQr().solve(spans.phi13).transpose();
  code.e24 = spec.obs2.colPivHouseholderQr().solve(spans.phi24).transpose();

  Eigen::MatrixXd both(n, a + b);
  both << spec.obs1, spec.obs2;
  const Eigen::MatrixXd split = both.completeOrthogonalDecomposition().solve(spans.phi56);
  const double miss = (both * split - spans.phi56).norm();
  if (miss > 1e-8 * (1.0 + spans.phi56.norm())) {
    throw Error(ErrorCode::kInvalidSpan, "phi56 leaves the joint observation span");
  }
  code.e15 = split.topRows(a).transpose();
  code.e25 = split.bottomRows(b).transpose();
  code.e56.leftCols(z).setIdentity();
  code.e56.rightCols(z).setIdentity();
  return with_optimal_decoders(std::move(code), instance, tol);
}

Utilities utilities(const CodeSpans& spans, const TaskSpectrum& spec, const ToleranceConfig& tol) {
  const Basis relay = orthonormal_basis(spans.phi56, tol);
  auto private_gain = [&](const Eigen::MatrixXd& phi, const Eigen::MatrixXd& s) {
    Eigen::MatrixXd joint(phi.rows(), phi.cols() + spans.phi56.cols());
    joint << phi, spans.phi56;
    const Basis extra = orthogonal_complement_within(relay, orthonormal_basis(joint, tol), tol);
    return (extra.vectors().transpose() * s * extra.vectors()).trace();
  };
  Utilities out;
  out.u56 = (relay.vectors().transpose() * (spec.s3 + spec.s4) * relay.vectors()).trace();
  out.u13 = private_gain(spans.phi13, spec.s3);
  out.u24 = private_gain(spans.phi24, spec.s4);
  return out;
}

Utilities utilities(const ButterflyCode& code, const ProblemInstance& instance,
                    const ToleranceConfig& tol) {
  return utilities(flow_spans(code, instance, tol), spectrum(instance, tol), tol);
}

ButterflyCode lift_code(const ButterflyCode& inner_code, const WhitenedInstance& whitened,
                        const ProblemInstance& original) {
  check_shapes(inner_code, whitened.inner);
  ButterflyCode out;
  out.e13 = inner_code.e13 * whitened.node1_map;
  out.e15 = inner_code.e15 * whitened.node1_map;
  out.e24 = inner_code.e24 * whitened.node2_map;
  out.e25 = inner_code.e25 * whitened.node2_map;
  out.e56 = inner_code.e56;
  out.d3 = whitened.backward_map * inner_code.d3;
  out.d4 = whitened.backward_map * inner_code.d4;
  check_shapes(out, original);
  return out;
}

}  // namespace tanc
