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

// Command-line front end: analyze, construct, train, sweep and pca.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tanc/analytic.hpp"
#include "tanc/code.hpp"
#include "tanc/error.hpp"
#include "tanc/io.hpp"
#include "tanc/sweep.hpp"
#include "tanc/train.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<double> tol;
  std::string samples;
};

void add_common(CLI::App* cmd, Common& c, bool samples) {
  cmd->add_option("--config", c.config, "JSON configuration file")->required()->check(
      CLI::ExistingFile);
  cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
  cmd->add_option("--tol", c.tol, "Override tolerances.rank_tol");
  if (samples) {
    cmd->add_option("--samples", c.samples,
                    "CSV of samples (one per row); replaces psi by their covariance")
        ->check(CLI::ExistingFile);
  }
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    tanc::write_text(c.out, text);
  }
}

struct Loaded {
  tanc::ProblemInstance instance;
  tanc::RunConfig config;
};

Loaded load(const Common& c) {
  Loaded l;
  l.config = tanc::parse_run_config(tanc::read_text(c.config));
  if (c.tol) l.config.tolerances.rank_tol = *c.tol;
  tanc::validate(l.config.tolerances);
  l.config.train.tol = l.config.tolerances;
  l.instance = l.config.resolve();
  if (!c.samples.empty()) {
    const Eigen::MatrixXd x = tanc::read_samples_csv(c.samples);
    if (x.cols() != l.instance.n) {
      throw tanc::Error(tanc::ErrorCode::kDimensionMismatch,
                        "samples have " + std::to_string(x.cols()) + " columns, instance has n = " +
                            std::to_string(l.instance.n));
    }
    l.instance.psi = tanc::estimate_covariance(x);
  }
  l.instance = tanc::validated(l.instance, l.config.tolerances);
  return l;
}

void report_losses(const tanc::ButterflyCode& code, const tanc::ProblemInstance& p,
                   const tanc::ToleranceConfig& tol) {
  const tanc::TaskLosses l = tanc::exact_loss(code, p);
  std::fprintf(stderr, "L3 %s  L4 %s  L_total %s  lower_bound %s\n",
               tanc::format_double(l.l3).c_str(), tanc::format_double(l.l4).c_str(),
               tanc::format_double(l.total).c_str(),
               tanc::format_double(tanc::lower_bound(p, tol)).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-aware linear coding on the butterfly network"};
  app.require_subcommand(1);

  Common analyze_opts, construct_opts, train_opts, sweep_opts, pca_opts;
  CLI::App* analyze = app.add_subcommand("analyze", "Print the condition report as JSON");
  add_common(analyze, analyze_opts, true);

  CLI::App* construct = app.add_subcommand("construct", "Build a bound-attaining code");
  add_common(construct, construct_opts, true);

  CLI::App* train = app.add_subcommand("train", "Train a code; writes the loss trace CSV");
  add_common(train, train_opts, true);
  std::string code_out;
  train->add_option("--code-out", code_out, "Also write the trained code as JSON");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep; writes one CSV row per cell");
  add_common(sweep, sweep_opts, false);
  std::string summary_out;
  sweep->add_option("--summary", summary_out, "Also write per-cell means and deviations");

  CLI::App* pca = app.add_subcommand("pca", "Single-link task PCA of one sink's task");
  add_common(pca, pca_opts, true);
  int sink = 3;
  pca->add_option("--sink", sink, "Task to compress (3 or 4)")->check(CLI::IsMember({3, 4}));
  std::optional<int> pca_z;
  pca->add_option("--z", pca_z, "Link width (defaults to the instance z)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      const Loaded l = load(analyze_opts);
      const tanc::TaskSpectrum spec = tanc::spectrum(l.instance, l.config.tolerances);
      emit(analyze_opts,
           tanc::report_to_json(tanc::sufficient_report(spec, l.instance, l.config.tolerances),
                                tanc::lower_bound(spec, l.instance.z)));
    } else if (construct->parsed()) {
      const Loaded l = load(construct_opts);
      const tanc::ButterflyCode code = tanc::construct_lb_code(l.instance, l.config.tolerances);
      report_losses(code, l.instance, l.config.tolerances);
      emit(construct_opts, tanc::code_to_json(code));
    } else if (train->parsed()) {
      const Loaded l = load(train_opts);
      const tanc::TrainResult r = tanc::train(l.instance, l.config.train);
      report_losses(r.code, l.instance, l.config.tolerances);
      emit(train_opts, tanc::trace_to_csv(r.trace));
      if (!code_out.empty()) tanc::write_text(code_out, tanc::code_to_json(r.code));
    } else if (sweep->parsed()) {
      tanc::ExperimentConfig cfg = tanc::read_config(sweep_opts.config);
      if (sweep_opts.tol) cfg.tolerances.rank_tol = *sweep_opts.tol;
      const std::vector<tanc::ResultRecord> records = tanc::run_sweep(cfg);
      emit(sweep_opts, tanc::records_to_csv(records));
      if (!summary_out.empty()) {
        tanc::write_text(summary_out, tanc::summary_to_csv(tanc::summarize(records)));
      }
    } else if (pca->parsed()) {
      const Loaded l = load(pca_opts);
      const int z = pca_z.value_or(l.instance.z);
      emit(pca_opts, tanc::pca_to_json(tanc::task_pca(sink == 3 ? l.instance.k3 : l.instance.k4,
                                                      l.instance.psi, z, l.config.tolerances)));
    }
  } catch (const tanc::Error& e) {
    std::fprintf(stderr, "tanc: %s\n", e.what());
    return 2;
  }
  return 0;
}
