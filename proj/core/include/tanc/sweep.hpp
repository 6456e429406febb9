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

// Experiment sweeps over generated instances: one record per
// (value, approach, seed) cell.

#include <cstdint>
#include <string>
#include <vector>

#include "tanc/synthetic.hpp"
#include "tanc/train.hpp"

namespace tanc {

// Approach names accepted in a sweep: the four train modes plus this one.
inline constexpr const char* kAnalyticConstruction = "analytic_construction";

struct SweepConfig {
  std::string axis = "r_plus";  // "r_plus" or "a" (a and b move together)
  std::vector<int> values;
  std::vector<std::string> approaches;
  SyntheticSpec base;      // seed and the swept field are overwritten per cell
  bool timing = false;     // wall_ms stays 0 unless set, keeping CSVs reproducible
  int threads = 0;         // 0 means hardware concurrency
};

struct ExperimentConfig {
  SweepConfig sweep;
  TrainConfig train;
  ToleranceConfig tolerances;
  std::vector<std::uint64_t> seeds;
};

struct ResultRecord {
  std::string approach;
  std::string sweep_param_name;
  int sweep_param_value = 0;
  std::uint64_t seed = 0;
  double l3 = 0.0;
  double l4 = 0.0;
  double l_total = 0.0;
  double lower_bound = 0.0;
  double u56 = 0.0;
  double u13 = 0.0;
  double u24 = 0.0;
  int epochs_run = 0;
  double wall_ms = 0.0;
  // "ok", or the error name when the cell failed; losses are NaN then.
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

void validate(const ExperimentConfig& config);

// Instance of one cell.
ProblemInstance sweep_instance(const ExperimentConfig& config, int value, std::uint64_t seed);

// Runs one cell; module errors are caught and recorded in status.
ResultRecord run_cell(const ExperimentConfig& config, int value, const std::string& approach,
                      std::uint64_t seed);

// Cells may run concurrently; records come back ordered by value, then
// approach (config order), then seed (config order).
std::vector<ResultRecord> run_sweep(const ExperimentConfig& config);

struct Summary {
  std::string approach;
  int sweep_param_value = 0;
  int count = 0;     // successful records
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single record
};
std::vector<Summary> summarize(const std::vector<ResultRecord>& records);

}  // namespace tanc
