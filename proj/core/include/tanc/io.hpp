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

// JSON and CSV serialization. Matrices in JSON are arrays of rows. CSV numbers
// use the shortest decimal form that round-trips.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tanc/analytic.hpp"
#include "tanc/code.hpp"
#include "tanc/model.hpp"
#include "tanc/sweep.hpp"
#include "tanc/synthetic.hpp"
#include "tanc/train.hpp"

namespace tanc {

std::string format_double(double x);
double parse_double(const std::string& text);

// Configuration of a single-instance CLI run: exactly one of instance or
// synthetic is present.
struct RunConfig {
  std::optional<ProblemInstance> instance;
  std::optional<SyntheticSpec> synthetic;
  TrainConfig train;
  ToleranceConfig tolerances;

  ProblemInstance resolve() const;
};

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& text);

std::string code_to_json(const ButterflyCode& code);
ButterflyCode code_from_json(const std::string& text);

std::string report_to_json(const ConditionReport& report, double lower_bound);
std::string pca_to_json(const PcaResult& result);

// Throws ConfigError naming the first missing or malformed field.
RunConfig parse_run_config(const std::string& text);
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig read_config(const std::filesystem::path& path);

std::string records_to_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> records_from_csv(const std::string& text);
void write_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path);

std::string summary_to_csv(const std::vector<Summary>& summary);
std::string trace_to_csv(const std::vector<TraceEntry>& trace);

// One sample per row; a non-numeric first row is treated as a header.
Eigen::MatrixXd samples_from_csv(const std::string& text);
Eigen::MatrixXd read_samples_csv(const std::filesystem::path& path);

}  // namespace tanc
