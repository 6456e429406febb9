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

// Linear codes on the butterfly network: node 1 sends e13 x^(1) to sink 3 and
// e15 x^(1) to the relay, node 2 sends e24 x^(2) and e25 x^(2), the relay
// forwards e56 [phi15; phi25] to both sinks, and sink i decodes
// x_hat = d_i [phi_private; phi56].

#include <Eigen/Dense>

#include "tanc/model.hpp"
#include "tanc/subspace.hpp"

namespace tanc {

struct ButterflyCode {
  Eigen::MatrixXd e13;  // z x a
  Eigen::MatrixXd e15;  // z x a
  Eigen::MatrixXd e24;  // z x b
  Eigen::MatrixXd e25;  // z x b
  Eigen::MatrixXd e56;  // z x 2z
  Eigen::MatrixXd d3;   // n x 2z
  Eigen::MatrixXd d4;   // n x 2z

  static ButterflyCode zeros(int n, int a, int b, int z);
  static ButterflyCode zeros_like(const ProblemInstance& instance);
};

// Throws ShapeMismatch unless every matrix matches the instance and is finite.
void check_shapes(const ButterflyCode& code, const ProblemInstance& instance);

// Everything sink 3 (resp. 4) receives, as a 2z x n map applied to x.
Eigen::MatrixXd sink3_encoder(const ButterflyCode& code, const ProblemInstance& instance);
Eigen::MatrixXd sink4_encoder(const ButterflyCode& code, const ProblemInstance& instance);
// The relay output phi56 as a z x n map applied to x.
Eigen::MatrixXd relay_encoder(const ButterflyCode& code, const ProblemInstance& instance);

// Link signals written as phi = Phi^T l^{-1} x (whitened coordinates).
struct CodeSpans {
  Eigen::MatrixXd phi13;  // n x z
  Eigen::MatrixXd phi24;  // n x z
  Eigen::MatrixXd phi56;  // n x z
};

CodeSpans flow_spans(const ButterflyCode& code, const ProblemInstance& instance,
                     const ToleranceConfig& tol = {});

struct SpanValidity {
  bool phi13_valid = false;  // col(phi13) inside the node-1 span
  bool phi24_valid = false;  // col(phi24) inside the node-2 span
};
SpanValidity span_validity(const CodeSpans& spans, const TaskSpectrum& spec,
                           const ToleranceConfig& tol = {});

struct TaskLosses {
  double l3 = 0.0;
  double l4 = 0.0;
  double total = 0.0;
};

// Exact expected losses by trace; works for any PSD covariance.
TaskLosses exact_loss(const ButterflyCode& code, const ProblemInstance& instance);

// Linear MMSE decoders psi A^T pinv(A psi A^T) for the given encoders.
struct Decoders {
  Eigen::MatrixXd d3;
  Eigen::MatrixXd d4;
};
Decoders optimal_decoders(const ButterflyCode& code, const ProblemInstance& instance,
                          const ToleranceConfig& tol = {});
ButterflyCode with_optimal_decoders(ButterflyCode code, const ProblemInstance& instance,
                                    const ToleranceConfig& tol = {});

// Builds encoders reproducing the given spans: private links by least squares,
// relay columns split across the two observation spans by minimum-norm least
// squares and summed with e56 = [I I]. Decoders are optimal.
ButterflyCode realize_spans(const CodeSpans& spans, const ProblemInstance& instance,
                            const ToleranceConfig& tol = {});

struct Utilities {
  double u56 = 0.0;
  double u13 = 0.0;
  double u24 = 0.0;
};
Utilities utilities(const ButterflyCode& code, const ProblemInstance& instance,
                    const ToleranceConfig& tol = {});
Utilities utilities(const CodeSpans& spans, const TaskSpectrum& spec,
                    const ToleranceConfig& tol = {});

// Maps a code on whitened.inner to a code on the original instance carrying
// identical link signals and reconstructions of k x.
ButterflyCode lift_code(const ButterflyCode& inner_code, const WhitenedInstance& whitened,
                        const ProblemInstance& original);

// Symmetric pseudo-inverse with eigenvalues below rank_tol * max treated as zero.
Eigen::MatrixXd psd_pinv(const Eigen::MatrixXd& m, double rank_tol);

}  // namespace tanc
