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

#include "tanc/train.hpp"

#include <array>
#include <cmath>
#include <string>

#include "tanc/error.hpp"
#include "tanc/random.hpp"
#include "tanc/subspace.hpp"

namespace tanc {
namespace {

constexpr std::size_t kParts = 7;

std::array<Eigen::MatrixXd*, kParts> parts(ButterflyCode& c) {
  return {&c.e13, &c.e15, &c.e24, &c.e25, &c.e56, &c.d3, &c.d4};
}

struct Objective {
  Eigen::MatrixXd k3;
  Eigen::MatrixXd k4;
};

Objective objective_for(const ProblemInstance& instance, TrainMode mode) {
  if (mode == TrainMode::kTaskAgnosticCoding) {
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(instance.n, instance.n);
    return {eye, eye};
  }
  return {instance.k3, instance.k4};
}

// Loss of one sink and the gradients with respect to its decoder and its
// stacked encoder a (2z x n).
struct SinkTerms {
  double loss;
  Eigen::MatrixXd grad_d;
  Eigen::MatrixXd grad_a;
};

SinkTerms sink_terms(const Eigen::MatrixXd& k, const Eigen::MatrixXd& moment,
                     const Eigen::MatrixXd& d, const Eigen::MatrixXd& a) {
  const Eigen::Index n = moment.rows();
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n) - d * a;
  const Eigen::MatrixXd kr = k * r;
  const Eigen::MatrixXd krm = kr * moment;
  // g r psi with g = k^T k.
  const Eigen::MatrixXd grm = k.transpose() * krm;
  return SinkTerms{
      (krm * kr.transpose()).trace(),
      -2.0 * grm * a.transpose(),
      -2.0 * d.transpose() * grm,
  };
}

void record(std::vector<TraceEntry>& trace, int epoch, const TaskLosses& loss) {
  trace.push_back(TraceEntry{epoch, loss.l3, loss.l4, loss.total});
}

}  // namespace

std::string_view to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::kTaskAwareCoding: return "task_aware_coding";
    case TrainMode::kTaskAwareNoCoding: return "task_aware_no_coding";
    case TrainMode::kTaskAgnosticCoding: return "task_agnostic_coding";
    case TrainMode::kCodingBenchmark: return "coding_benchmark";
  }
  return "unknown";
}

std::string_view to_string(GradientMode mode) {
  return mode == GradientMode::kExactExpectation ? "exact_expectation" : "empirical_batch";
}

std::string_view to_string(Optimizer optimizer) {
  return optimizer == Optimizer::kGradientDescent ? "gradient_descent" : "adam";
}

TrainMode parse_train_mode(std::string_view name) {
  for (TrainMode m : {TrainMode::kTaskAwareCoding, TrainMode::kTaskAwareNoCoding,
                      TrainMode::kTaskAgnosticCoding, TrainMode::kCodingBenchmark}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::kConfigError, "unknown train mode '" + std::string(name) + "'");
}

GradientMode parse_gradient_mode(std::string_view name) {
  for (GradientMode m : {GradientMode::kExactExpectation, GradientMode::kEmpiricalBatch}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::kConfigError, "unknown gradient mode '" + std::string(name) + "'");
}

Optimizer parse_optimizer(std::string_view name) {
  for (Optimizer o : {Optimizer::kGradientDescent, Optimizer::kAdam}) {
    if (to_string(o) == name) return o;
  }
  throw Error(ErrorCode::kConfigError, "unknown optimizer '" + std::string(name) + "'");
}

void validate(const TrainConfig& config) {
  if (config.epochs <= 0) throw Error(ErrorCode::kConfigError, "epochs must be positive");
  if (!(config.learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfigError, "learning_rate must be positive");
  }
  if (config.batch_size <= 0) throw Error(ErrorCode::kConfigError, "batch_size must be positive");
  if (!(config.init_scale >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "init_scale must be non-negative");
  }
  validate(config.tol);
}

ButterflyCode init_code(const ProblemInstance& instance, std::uint64_t seed, double init_scale) {
  ButterflyCode code = ButterflyCode::zeros_like(instance);
  std::uint64_t stream = 0;
  for (Eigen::MatrixXd* m : parts(code)) {
    Rng rng(seed, stream++);
    *m = rng.uniform_matrix(static_cast<int>(m->rows()), static_cast<int>(m->cols()),
                            -init_scale, init_scale);
  }
  return code;
}

Eigen::MatrixXd no_coding_relay(int z) {
  Eigen::MatrixXd e56 = Eigen::MatrixXd::Zero(z, 2 * z);
  const int from1 = (z + 1) / 2;
  for (int i = 0; i < from1; ++i) e56(i, i) = 1.0;
  for (int i = from1; i < z; ++i) e56(i, z + (i - from1)) = 1.0;
  return e56;
}

Gradient loss_and_gradient(const ButterflyCode& code, const ProblemInstance& instance,
                           TrainMode mode) {
  return loss_and_gradient(code, instance, mode, instance.psi);
}

Gradient loss_and_gradient(const ButterflyCode& code, const ProblemInstance& instance,
                           TrainMode mode, const Eigen::MatrixXd& moment) {
  check_shapes(code, instance);
  const int z = instance.z, a = instance.a, b = instance.b, n = instance.n;
  const Objective obj = objective_for(instance, mode);

  Eigen::MatrixXd relay_in = Eigen::MatrixXd::Zero(2 * z, n);
  relay_in.topLeftCorner(z, a) = code.e15;
  relay_in.bottomRightCorner(z, b) = code.e25;
  const SinkTerms t3 = sink_terms(obj.k3, moment, code.d3, sink3_encoder(code, instance));
  const SinkTerms t4 = sink_terms(obj.k4, moment, code.d4, sink4_encoder(code, instance));

  Gradient out;
  out.loss = TaskLosses{t3.loss, t4.loss, t3.loss + t4.loss};
  ButterflyCode& g = out.grad;
  g.d3 = t3.grad_d;
  g.d4 = t4.grad_d;
  g.e13 = t3.grad_a.topLeftCorner(z, a);
  g.e24 = t4.grad_a.topRightCorner(z, b);
  // Both sinks see the relay.
  const Eigen::MatrixXd relay_grad = t3.grad_a.bottomRows(z) + t4.grad_a.bottomRows(z);
  g.e56 = relay_grad * relay_in.transpose();
  const Eigen::MatrixXd in_grad = code.e56.transpose() * relay_grad;
  g.e15 = in_grad.topLeftCorner(z, a);
  g.e25 = in_grad.bottomRightCorner(z, b);
  if (mode == TrainMode::kTaskAwareNoCoding) g.e56.setZero();
  return out;
}

TrainResult train(const ProblemInstance& instance, const TrainConfig& config) {
  return train(instance, config, init_code(instance, config.seed, config.init_scale));
}

TrainResult train(const ProblemInstance& raw, const TrainConfig& config,
                  const ButterflyCode& initial) {
  validate(config);
  const ProblemInstance instance = validated(raw, config.tol);
  TrainResult result;
  if (config.mode == TrainMode::kCodingBenchmark) {
    result.code = greedy_benchmark_code(instance, config.tol);
    record(result.trace, 0, exact_loss(result.code, instance));
    return result;
  }

  ButterflyCode code = initial;
  check_shapes(code, instance);
  if (config.mode == TrainMode::kTaskAwareNoCoding) code.e56 = no_coding_relay(instance.z);

  const bool batched = config.gradient == GradientMode::kEmpiricalBatch;
  Rng batch_rng(config.seed, 1u << 16);
  const Eigen::MatrixXd psi_root = batched ? psd_sqrt(instance.psi) : Eigen::MatrixXd();
  auto exact_objective = [&](const ButterflyCode& c) {
    return loss_and_gradient(c, instance, config.mode).loss.total;
  };

  const bool adam = config.optimizer == Optimizer::kAdam;
  ButterflyCode m1 = ButterflyCode::zeros_like(instance);
  ButterflyCode m2 = ButterflyCode::zeros_like(instance);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  const double start = exact_objective(code);
  auto check = [&](double objective, int epoch) {
    if (!std::isfinite(objective) || (start > 0.0 && objective > 10.0 * start)) {
      throw Error(ErrorCode::kDivergenceDetected,
                  "objective " + std::to_string(objective) + " at epoch " +
                      std::to_string(epoch) + " (initial " + std::to_string(start) + ")");
    }
  };
  record(result.trace, 0, exact_loss(code, instance));

  result.trace.reserve(static_cast<std::size_t>(config.epochs) + 1);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Gradient g;
    if (batched) {
      const Eigen::MatrixXd x = batch_rng.normal_matrix(config.batch_size, instance.n) * psi_root;
      const Eigen::MatrixXd moment = x.transpose() * x / config.batch_size;
      g = loss_and_gradient(code, instance, config.mode, moment);
      check(exact_objective(code), epoch - 1);
    } else {
      g = loss_and_gradient(code, instance, config.mode);
      check(g.loss.total, epoch - 1);
    }

    auto p = parts(code);
    auto d = parts(g.grad);
    auto v1 = parts(m1);
    auto v2 = parts(m2);
    for (std::size_t i = 0; i < kParts; ++i) {
      if (!adam) {
        *p[i] -= config.learning_rate * *d[i];
        continue;
      }
      *v1[i] = kBeta1 * *v1[i] + (1.0 - kBeta1) * *d[i];
      *v2[i] = kBeta2 * *v2[i] + (1.0 - kBeta2) * d[i]->cwiseAbs2();
      const double c1 = 1.0 - std::pow(kBeta1, epoch);
      const double c2 = 1.0 - std::pow(kBeta2, epoch);
      *p[i] -= config.learning_rate *
               ((*v1[i] / c1).array() / ((*v2[i] / c2).array().sqrt() + kEps)).matrix();
    }
    const TaskLosses now = exact_loss(code, instance);
    record(result.trace, epoch, now);
  }
  check(exact_objective(code), config.epochs);
  result.code = std::move(code);
  return result;
}

ButterflyCode greedy_benchmark_code(const ProblemInstance& raw, const ToleranceConfig& tol) {
  const ProblemInstance instance = validated(raw, tol);
  const int n = instance.n, z = instance.z;
  const TaskSpectrum spec = spectrum(instance, tol);
  const SortedEigen joint = sorted_eigen(spec.s3 + spec.s4);
  const Basis relay = Basis::from_orthonormal(joint.vectors.leftCols(z));

  auto private_span = [&](const Basis& obs, const Eigen::MatrixXd& s) {
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, z);
    const Basis room = orthogonal_complement_within(relay, join(relay, obs, tol), tol);
    if (room.empty()) return phi;
    const Eigen::MatrixXd& w = room.vectors();
    const int k = std::min(z, room.dim());
    const SortedEigen inner = sorted_eigen(w.transpose() * s * w);
    const Basis best = Basis::from_orthonormal(w * inner.vectors.leftCols(k));
    const auto cols = extend_from_pool(relay, obs, join(best, relay, tol), tol);
    for (std::size_t j = 0; j < cols.size(); ++j) phi.col(static_cast<Eigen::Index>(j)) = cols[j];
    return phi;
  };

  CodeSpans spans;
  spans.phi56 = relay.vectors();
  spans.phi13 = private_span(spec.span1(tol), spec.s3);
  spans.phi24 = private_span(spec.span2(tol), spec.s4);
  return realize_spans(spans, instance, tol);
}

}  // namespace tanc
