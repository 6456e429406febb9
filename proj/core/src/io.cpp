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

#include "tanc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "tanc/error.hpp"

namespace tanc {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfigError, what);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* field, const std::string& where) {
  if (!j.is_object() || !j.contains(field)) {
    config_error("missing field '" + where + (where.empty() ? "" : ".") + field + "'");
  }
  return j.at(field);
}

template <typename T>
T get_as(const json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error("field '" + name + "' has the wrong type");
  }
}

template <typename T>
void read_optional(const json& j, const char* field, const std::string& where, T& out) {
  if (j.is_object() && j.contains(field)) {
    out = get_as<T>(j.at(field), where + (where.empty() ? "" : ".") + field);
  }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& name, Eigen::Index rows,
                                 Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    config_error("field '" + name + "' must have " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      config_error("field '" + name + "' must have " + std::to_string(cols) + " columns");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = get_as<double>(row[static_cast<std::size_t>(c)], name);
    }
  }
  return m;
}

Eigen::Index row_count(const json& j) { return j.is_array() ? static_cast<Eigen::Index>(j.size()) : 0; }
Eigen::Index col_count(const json& j) {
  return j.is_array() && !j.empty() && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
}

json instance_json(const ProblemInstance& p) {
  return json{{"n", p.n},
              {"a", p.a},
              {"b", p.b},
              {"z", p.z},
              {"psi", matrix_to_json(p.psi)},
              {"k3", matrix_to_json(p.k3)},
              {"k4", matrix_to_json(p.k4)}};
}

ProblemInstance instance_from(const json& j, const std::string& where) {
  ProblemInstance p;
  p.n = get_as<int>(require(j, "n", where), where + ".n");
  p.a = get_as<int>(require(j, "a", where), where + ".a");
  p.b = get_as<int>(require(j, "b", where), where + ".b");
  p.z = get_as<int>(require(j, "z", where), where + ".z");
  if (p.n <= 0) config_error("field '" + where + ".n' must be positive");
  p.psi = j.contains("psi") ? matrix_from_json(j.at("psi"), where + ".psi", p.n, p.n)
                            : Eigen::MatrixXd::Identity(p.n, p.n);
  const json& k3 = require(j, "k3", where);
  const json& k4 = require(j, "k4", where);
  p.k3 = matrix_from_json(k3, where + ".k3", row_count(k3), p.n);
  p.k4 = matrix_from_json(k4, where + ".k4", row_count(k4), p.n);
  return p;
}

SyntheticSpec synthetic_from(const json& j, const std::string& where) {
  SyntheticSpec s;
  read_optional(j, "n", where, s.n);
  read_optional(j, "z", where, s.z);
  read_optional(j, "a", where, s.a);
  read_optional(j, "b", where, s.b);
  read_optional(j, "r_plus_target", where, s.r_plus_target);
  read_optional(j, "eig_profile", where, s.eig_profile);
  read_optional(j, "keep_sf3", where, s.keep_sf3);
  read_optional(j, "seed", where, s.seed);
  if (j.contains("layout_a")) s.layout_a = get_as<int>(j.at("layout_a"), where + ".layout_a");
  if (j.contains("layout_b")) s.layout_b = get_as<int>(j.at("layout_b"), where + ".layout_b");
  return s;
}

TrainConfig train_from(const json& j) {
  TrainConfig t;
  if (!j.is_object()) config_error("field 'train' must be an object");
  read_optional(j, "epochs", "train", t.epochs);
  read_optional(j, "learning_rate", "train", t.learning_rate);
  read_optional(j, "batch_size", "train", t.batch_size);
  read_optional(j, "seed", "train", t.seed);
  read_optional(j, "init_scale", "train", t.init_scale);
  if (j.contains("mode")) t.mode = parse_train_mode(get_as<std::string>(j["mode"], "train.mode"));
  if (j.contains("gradient")) {
    t.gradient = parse_gradient_mode(get_as<std::string>(j["gradient"], "train.gradient"));
  }
  if (j.contains("optimizer")) {
    t.optimizer = parse_optimizer(get_as<std::string>(j["optimizer"], "train.optimizer"));
  }
  return t;
}

ToleranceConfig tolerances_from(const json& j) {
  ToleranceConfig tol;
  if (!j.is_object()) config_error("field 'tolerances' must be an object");
  read_optional(j, "rank_tol", "tolerances", tol.rank_tol);
  return tol;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename Int>
Int parse_int(const std::string& text) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kIoError, "bad integer '" + text + "'");
  }
  return v;
}

constexpr const char* kRecordHeader =
    "approach,sweep_param_name,sweep_param_value,seed,L3,L4,L_total,lower_bound,u56,u13,u24,"
    "epochs_run,wall_ms,status";

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kIoError, "bad number '" + text + "'");
  }
  return v;
}

ProblemInstance RunConfig::resolve() const {
  if (instance) return *instance;
  if (synthetic) return gen_synthetic(*synthetic);
  config_error("missing field 'instance' or 'synthetic'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

std::string instance_to_json(const ProblemInstance& instance) {
  return instance_json(instance).dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
  return instance_from(parse_json(text), "");
}

std::string code_to_json(const ButterflyCode& c) {
  const json j{{"e13", matrix_to_json(c.e13)}, {"e15", matrix_to_json(c.e15)},
               {"e24", matrix_to_json(c.e24)}, {"e25", matrix_to_json(c.e25)},
               {"e56", matrix_to_json(c.e56)}, {"d3", matrix_to_json(c.d3)},
               {"d4", matrix_to_json(c.d4)}};
  return j.dump(2) + "\n";
}

ButterflyCode code_from_json(const std::string& text) {
  const json j = parse_json(text);
  auto read = [&](const char* name) {
    const json& m = require(j, name, "");
    return matrix_from_json(m, name, row_count(m), col_count(m));
  };
  return ButterflyCode{read("e13"), read("e15"), read("e24"), read("e25"),
                       read("e56"), read("d3"),  read("d4")};
}

std::string report_to_json(const ConditionReport& r, double lower_bound) {
  const json j{{"eigengap_ok3", r.eigengap_ok3},
               {"eigengap_ok4", r.eigengap_ok4},
               {"r_plus_34", r.r_plus_34},
               {"r_minus_34", r.r_minus_34},
               {"r_minus_13", r.r_minus_13},
               {"r_minus_24", r.r_minus_24},
               {"necessary_ok", r.necessary_ok},
               {"sf1_ok", r.sf1_ok},
               {"sf2_ok", r.sf2_ok},
               {"corollary_nc_free", r.corollary_nc_free},
               {"corollary_dim", r.corollary_dim},
               {"sufficient_ok", r.sufficient_ok},
               {"lower_bound", lower_bound}};
  return j.dump(2) + "\n";
}

std::string pca_to_json(const PcaResult& r) {
  const json j{{"loss", r.loss},
               {"mu", std::vector<double>(r.mu.data(), r.mu.data() + r.mu.size())},
               {"encoder", matrix_to_json(r.encoder)},
               {"decoder", matrix_to_json(r.decoder)}};
  return j.dump(2) + "\n";
}

RunConfig parse_run_config(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) config_error("config must be a JSON object");
  RunConfig c;
  if (j.contains("instance")) c.instance = instance_from(j["instance"], "instance");
  if (j.contains("synthetic")) c.synthetic = synthetic_from(j["synthetic"], "synthetic");
  if (!c.instance && !c.synthetic) config_error("missing field 'instance' or 'synthetic'");
  if (c.instance && c.synthetic) config_error("give only one of 'instance' and 'synthetic'");
  if (j.contains("train")) c.train = train_from(j["train"]);
  if (j.contains("tolerances")) c.tolerances = tolerances_from(j["tolerances"]);
  validate(c.train);
  return c;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) config_error("config must be a JSON object");
  ExperimentConfig c;
  const json& sweep = require(j, "sweep", "");
  c.train = train_from(require(j, "train", ""));
  c.tolerances = tolerances_from(require(j, "tolerances", ""));
  c.seeds = get_as<std::vector<std::uint64_t>>(require(j, "seeds", ""), "seeds");

  c.sweep.axis = get_as<std::string>(require(sweep, "axis", "sweep"), "sweep.axis");
  c.sweep.values = get_as<std::vector<int>>(require(sweep, "values", "sweep"), "sweep.values");
  c.sweep.approaches =
      get_as<std::vector<std::string>>(require(sweep, "approaches", "sweep"), "sweep.approaches");
  if (sweep.contains("base")) c.sweep.base = synthetic_from(sweep["base"], "sweep.base");
  read_optional(sweep, "timing", "sweep", c.sweep.timing);
  read_optional(sweep, "threads", "sweep", c.sweep.threads);
  validate(c);
  return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text(path));
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
  std::string out = std::string(kRecordHeader) + "\n";
  for (const ResultRecord& r : records) {
    out += r.approach + "," + r.sweep_param_name + "," + std::to_string(r.sweep_param_value) + "," +
           std::to_string(r.seed) + "," + format_double(r.l3) + "," + format_double(r.l4) + "," +
           format_double(r.l_total) + "," + format_double(r.lower_bound) + "," +
           format_double(r.u56) + "," + format_double(r.u13) + "," + format_double(r.u24) + "," +
           std::to_string(r.epochs_run) + "," + format_double(r.wall_ms) + "," + r.status + "\n";
  }
  return out;
}

std::vector<ResultRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kIoError, "empty records CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) throw Error(ErrorCode::kIoError, "unexpected records CSV header");
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 14) throw Error(ErrorCode::kIoError, "records CSV row needs 14 fields");
    ResultRecord r;
    r.approach = f[0];
    r.sweep_param_name = f[1];
    r.sweep_param_value = parse_int<int>(f[2]);
    r.seed = parse_int<std::uint64_t>(f[3]);
    r.l3 = parse_double(f[4]);
    r.l4 = parse_double(f[5]);
    r.l_total = parse_double(f[6]);
    r.lower_bound = parse_double(f[7]);
    r.u56 = parse_double(f[8]);
    r.u13 = parse_double(f[9]);
    r.u24 = parse_double(f[10]);
    r.epochs_run = parse_int<int>(f[11]);
    r.wall_ms = parse_double(f[12]);
    r.status = f[13];
    out.push_back(std::move(r));
  }
  return out;
}

void write_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path) {
  write_text(path, records_to_csv(records));
}

std::string summary_to_csv(const std::vector<Summary>& summary) {
  std::string out = "approach,sweep_param_value,count,mean_L_total,std_L_total\n";
  for (const Summary& s : summary) {
    out += s.approach + "," + std::to_string(s.sweep_param_value) + "," + std::to_string(s.count) +
           "," + format_double(s.mean) + "," + format_double(s.stddev) + "\n";
  }
  return out;
}

std::string trace_to_csv(const std::vector<TraceEntry>& trace) {
  std::string out = "epoch,L3,L4,L_total\n";
  for (const TraceEntry& t : trace) {
    out += std::to_string(t.epoch) + "," + format_double(t.l3) + "," + format_double(t.l4) + "," +
           format_double(t.total) + "\n";
  }
  return out;
}

Eigen::MatrixXd samples_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    try {
      for (const auto& f : fields) row.push_back(parse_double(f));
    } catch (const Error&) {
      if (first) {
        first = false;
        continue;
      }
      throw;
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kIoError, "samples CSV rows differ in length");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kIoError, "samples CSV has no data rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Eigen::MatrixXd read_samples_csv(const std::filesystem::path& path) {
  try {
    return samples_from_csv(read_text(path));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kIoError) throw;
    throw Error(ErrorCode::kIoError, path.string() + ": " + e.what());
  }
}

}  // namespace tanc
