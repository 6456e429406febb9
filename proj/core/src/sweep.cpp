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

#include "tanc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "tanc/analytic.hpp"
#include "tanc/error.hpp"

namespace tanc {
namespace {

bool is_train_mode(const std::string& name) {
  try {
    parse_train_mode(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.sweep.axis != "r_plus" && config.sweep.axis != "a") {
    throw Error(ErrorCode::kConfigError, "sweep.axis must be 'r_plus' or 'a'");
  }
  for (const std::string& a : config.sweep.approaches) {
    if (a != kAnalyticConstruction && !is_train_mode(a)) {
      throw Error(ErrorCode::kConfigError, "unknown approach '" + a + "'");
    }
  }
  if (config.sweep.threads < 0) throw Error(ErrorCode::kConfigError, "sweep.threads must be >= 0");
  validate(config.train);
  validate(config.tolerances);
}

ProblemInstance sweep_instance(const ExperimentConfig& config, int value, std::uint64_t seed) {
  SyntheticSpec spec = config.sweep.base;
  spec.seed = seed;
  if (config.sweep.axis == "r_plus") {
    spec.r_plus_target = value;
  } else {
    spec.a = value;
    spec.b = value;
  }
  return gen_synthetic(spec);
}

ResultRecord run_cell(const ExperimentConfig& config, int value, const std::string& approach,
                      std::uint64_t seed) {
  ResultRecord rec;
  rec.approach = approach;
  rec.sweep_param_name = config.sweep.axis;
  rec.sweep_param_value = value;
  rec.seed = seed;
  const auto started = std::chrono::steady_clock::now();
  try {
    const ToleranceConfig& tol = config.tolerances;
    const ProblemInstance inst = sweep_instance(config, value, seed);
    const TaskSpectrum spec = spectrum(inst, tol);
    rec.lower_bound = lower_bound(spec, inst.z);
    ButterflyCode code;
    if (approach == kAnalyticConstruction) {
      code = construct_lb_code(spec, inst, tol);
    } else {
      TrainConfig tc = config.train;
      tc.seed = seed;
      tc.mode = parse_train_mode(approach);
      tc.tol = tol;
      code = train(inst, tc).code;
      if (tc.mode != TrainMode::kCodingBenchmark) rec.epochs_run = tc.epochs;
    }
    const TaskLosses loss = exact_loss(code, inst);
    rec.l3 = loss.l3;
    rec.l4 = loss.l4;
    rec.l_total = loss.total;
    const Utilities u = utilities(code, inst, tol);
    rec.u56 = u.u56;
    rec.u13 = u.u13;
    rec.u24 = u.u24;
  } catch (const Error& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.status = std::string(to_string(e.code()));
    rec.l3 = rec.l4 = rec.l_total = rec.u56 = rec.u13 = rec.u24 = nan;
    rec.epochs_run = 0;
  }
  if (config.sweep.timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            started)
                      .count();
  }
  return rec;
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config) {
  validate(config);
  struct Cell {
    int value;
    const std::string* approach;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int v : config.sweep.values) {
    for (const std::string& a : config.sweep.approaches) {
      for (std::uint64_t s : config.seeds) cells.push_back(Cell{v, &a, s});
    }
  }
  std::vector<ResultRecord> out(cells.size());
  int threads = config.sweep.threads > 0 ? config.sweep.threads
                                         : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max<int>(1, static_cast<int>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      out[i] = run_cell(config, cells[i].value, *cells[i].approach, cells[i].seed);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return out;
}

std::vector<Summary> summarize(const std::vector<ResultRecord>& records) {
  std::vector<Summary> out;
  std::map<std::pair<std::string, int>, std::size_t> where;
  std::vector<std::vector<double>> values;
  for (const ResultRecord& r : records) {
    const auto key = std::make_pair(r.approach, r.sweep_param_value);
    auto it = where.find(key);
    if (it == where.end()) {
      it = where.emplace(key, out.size()).first;
      out.push_back(Summary{r.approach, r.sweep_param_value, 0, 0.0, 0.0});
      values.emplace_back();
    }
    if (r.ok()) values[it->second].push_back(r.l_total);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = values[i];
    out[i].count = static_cast<int>(v.size());
    if (v.empty()) {
      out[i].mean = out[i].stddev = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    out[i].mean = sum / static_cast<double>(v.size());
    double sq = 0.0;
    for (double x : v) sq += (x - out[i].mean) * (x - out[i].mean);
    out[i].stddev = v.size() > 1 ? std::sqrt(sq / static_cast<double>(v.size() - 1)) : 0.0;
  }
  return out;
}

}  // namespace tanc
