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

// Instance generators: the controlled standard-basis family used by sweeps and
// random families used by property tests.

#include <cstdint>
#include <optional>
#include <vector>

#include "tanc/model.hpp"

namespace tanc {

struct SyntheticSpec {
  int n = 32;
  int z = 8;
  int a = 24;
  int b = 24;
  int r_plus_target = 24;
  // mu_1..mu_m for m = min(2z, n); empty means mu_j = 2z - j + 1.
  std::vector<double> eig_profile;
  // Keep the shared eigenvectors inside the observation overlap.
  bool keep_sf3 = true;
  std::uint64_t seed = 0;
  // Observation sizes used to place the eigenvectors. Defaults to a and b;
  // fixing them keeps the task spectra identical while a and b vary.
  std::optional<int> layout_a;
  std::optional<int> layout_b;
};

std::vector<double> default_eig_profile(int n, int z);

// psi = I and task eigenvectors drawn from the standard basis so that the
// span conditions hold by counting. Throws InfeasibleSpec when r_plus_target
// or the placement cannot be realized.
ProblemInstance gen_synthetic(const SyntheticSpec& spec);

// Random positive definite covariance and dense random tasks.
ProblemInstance random_instance(std::uint64_t seed, int n, int z, int a, int b);

// Random instance whose covariance has the given rank < n.
ProblemInstance random_rank_deficient_instance(std::uint64_t seed, int n, int rank, int z,
                                               int a, int b);

enum class BlockCase { kAny, kSmall, kLarge };  // 2z <= n, 2z > n

// Random instance satisfying the sufficient conditions (checked), with a
// random positive definite covariance and rotated task subspaces. Trailing
// task eigenvalues are positive so the lower bound is usually nonzero.
ProblemInstance random_sufficient_instance(std::uint64_t seed, int max_n,
                                           BlockCase block = BlockCase::kAny);

}  // namespace tanc
