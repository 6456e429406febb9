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

// Problem instances for linear task-aware coding over the butterfly network,
// their validation, rank reduction to a full-rank covariance, Gram spectra and
// the PCA lower bound.

#include <Eigen/Dense>

#include "tanc/subspace.hpp"

namespace tanc {

// x in R^n with covariance psi. Node 1 observes x_1..x_a, node 2 observes
// x_{n-b+1}..x_n. Every link carries z real dimensions. Sink 3 wants k3 x,
// sink 4 wants k4 x.
struct ProblemInstance {
  int n = 0;
  int a = 0;
  int b = 0;
  int z = 0;
  Eigen::MatrixXd psi;
  Eigen::MatrixXd k3;
  Eigen::MatrixXd k4;
};

// Checks shapes, the observation constraint, symmetry and positive
// semidefiniteness; returns a copy with psi symmetrized.
ProblemInstance validated(const ProblemInstance& instance, const ToleranceConfig& tol = {});

// Selection matrices x -> x^(1) (a x n) and x -> x^(2) (b x n).
Eigen::MatrixXd node1_selector(int n, int a);
Eigen::MatrixXd node2_selector(int n, int b);

// Full-rank reparameterization of an instance. forward_map sends x to the
// reduced coordinates x' and backward_map sends x' back; on the support of x
// they are mutually inverse. node1_map (a_tilde x a) and node2_map
// (b_tilde x b) express the reduced observations through the original ones.
struct WhitenedInstance {
  ProblemInstance inner;
  Eigen::MatrixXd forward_map;
  Eigen::MatrixXd backward_map;
  Eigen::MatrixXd node1_map;
  Eigen::MatrixXd node2_map;
  int a_tilde = 0;
  int b_tilde = 0;
};

WhitenedInstance whiten(const ProblemInstance& instance, const ToleranceConfig& tol = {});

// Symmetric eigendecomposition with eigenvalues in descending order and each
// eigenvector's largest-magnitude entry positive.
struct SortedEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
SortedEigen sorted_eigen(const Eigen::MatrixXd& symmetric);

struct TaskSpectrum {
  int n = 0;
  int block = 0;             // min(2z, n)
  Eigen::MatrixXd l;         // psi = l l^T, lower triangular
  Eigen::MatrixXd s3, s4;    // l^T k^T k l
  Eigen::VectorXd mu3, mu4;  // descending
  Eigen::MatrixXd u3, u4;    // eigenvectors, column j pairs with mu(j)
  Eigen::MatrixXd top3, top4;  // leading `block` eigenvectors
  Eigen::MatrixXd obs1;      // n x a, spans the node-1 functionals in whitened coordinates
  Eigen::MatrixXd obs2;      // n x b, same for node 2
  double eigengap3 = 0.0;
  double eigengap4 = 0.0;

  Basis span1(const ToleranceConfig& tol = {}) const;
  Basis span2(const ToleranceConfig& tol = {}) const;
  Basis span3() const;
  Basis span4() const;
};

// Requires a positive definite covariance (whiten first otherwise).
TaskSpectrum spectrum(const ProblemInstance& instance, const ToleranceConfig& tol = {});

// Sum over both tasks of the eigenvalues past index min(2z, n).
double lower_bound(const TaskSpectrum& spec, int z);

// Same bound for a merely semidefinite covariance, through psi^{1/2}.
double lower_bound(const ProblemInstance& instance, const ToleranceConfig& tol = {});

// Optimal single-link task-aware compression of x through z dimensions.
struct PcaResult {
  Eigen::MatrixXd encoder;  // z x n
  Eigen::MatrixXd decoder;  // n x z
  double loss = 0.0;        // E|k x - k decoder encoder x|^2, evaluated by trace
  Eigen::VectorXd mu;       // eigenvalues of l^T k^T k l, descending
};
PcaResult task_pca(const Eigen::MatrixXd& k, const Eigen::MatrixXd& psi, int z,
                   const ToleranceConfig& tol = {});

// E|k (x - d e x)|^2 = tr(k (I - d e) psi (I - d e)^T k^T).
double reconstruction_loss(const Eigen::MatrixXd& k, const Eigen::MatrixXd& psi,
                           const Eigen::MatrixXd& decoder, const Eigen::MatrixXd& encoder);

// Mean-removed empirical covariance (1/N) sum x x^T over rows of samples.
Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& samples);

// Symmetric PSD square root.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& psi);

}  // namespace tanc
