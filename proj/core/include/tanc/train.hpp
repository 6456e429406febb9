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

// Gradient-based training of butterfly codes and the greedy coding baseline.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tanc/code.hpp"
#include "tanc/model.hpp"

namespace tanc {

enum class TrainMode {
  kTaskAwareCoding,    // every matrix trains against the true tasks
  kTaskAwareNoCoding,  // e56 is a fixed coordinate selection
  kTaskAgnosticCoding, // trains to reconstruct x itself
  kCodingBenchmark,    // greedy relay-first code, no training
};

enum class GradientMode {
  kExactExpectation,  // analytic gradient of the trace-form loss
  kEmpiricalBatch,    // same formulas on a Gaussian batch covariance
};

enum class Optimizer {
  kGradientDescent,
  kAdam,
};

std::string_view to_string(TrainMode mode);
std::string_view to_string(GradientMode mode);
std::string_view to_string(Optimizer optimizer);
// Throw ConfigError on unknown names.
TrainMode parse_train_mode(std::string_view name);
GradientMode parse_gradient_mode(std::string_view name);
Optimizer parse_optimizer(std::string_view name);

struct TrainConfig {
  int epochs = 2000;
  double learning_rate = 0.05;
  int batch_size = 64;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::kTaskAwareCoding;
  GradientMode gradient = GradientMode::kExactExpectation;
  double init_scale = 0.1;
  Optimizer optimizer = Optimizer::kGradientDescent;
  ToleranceConfig tol{};
};

void validate(const TrainConfig& config);

struct TraceEntry {
  int epoch = 0;
  double l3 = 0.0;
  double l4 = 0.0;
  double total = 0.0;
};

struct TrainResult {
  ButterflyCode code;
  // Entry 0 is the initial code; entry e follows epoch e. Losses are always
  // measured against the true tasks.
  std::vector<TraceEntry> trace;
};

// Entries uniform in [-init_scale, init_scale]; each matrix draws from its own
// stream of `seed`.
ButterflyCode init_code(const ProblemInstance& instance, std::uint64_t seed, double init_scale);

// The fixed relay map of the no-coding baseline: the first ceil(z/2) relay
// dimensions copy phi15, the remaining floor(z/2) copy phi25.
Eigen::MatrixXd no_coding_relay(int z);

// Gradient of the loss with respect to every code matrix. Matrices the mode
// keeps fixed get a zero gradient.
struct Gradient {
  TaskLosses loss;
  ButterflyCode grad;
};
Gradient loss_and_gradient(const ButterflyCode& code, const ProblemInstance& instance,
                           TrainMode mode);
// Same with psi replaced by the given second-moment matrix.
Gradient loss_and_gradient(const ButterflyCode& code, const ProblemInstance& instance,
                           TrainMode mode, const Eigen::MatrixXd& moment);

// Trains from init_code(instance, config.seed, config.init_scale). Throws
// DivergenceDetected when the objective exceeds 10x its initial value or
// stops being finite.
TrainResult train(const ProblemInstance& instance, const TrainConfig& config);
TrainResult train(const ProblemInstance& instance, const TrainConfig& config,
                  const ButterflyCode& initial);

// Relay first: phi56 carries the top-z eigenvectors of s3 + s4, then each
// private link carries what best complements it for its own sink.
ButterflyCode greedy_benchmark_code(const ProblemInstance& instance,
                                    const ToleranceConfig& tol = {});

}  // namespace tanc
