// Copyright 2026 The kfp-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kfp/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>
#include <utility>

#include "kfp/errors.hpp"

namespace kfp {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kExperimentNames{{
    {ExperimentKind::kernel_check, "kernel-check"},
    {ExperimentKind::mixture_decay, "mixture-decay"},
    {ExperimentKind::coadapted_decay, "coadapted-decay"},
    {ExperimentKind::non_contraction, "non-contraction"},
    {ExperimentKind::sqrt_optimality, "sqrt-optimality"},
    {ExperimentKind::stopping_time, "stopping-time"},
    {ExperimentKind::martingale_h, "martingale-H"},
}};

constexpr std::array<std::pair<BrownianCoupling, std::string_view>, 3> kCouplingNames{{
    {BrownianCoupling::reflection, "reflection"},
    {BrownianCoupling::synchronous, "synchronous"},
    {BrownianCoupling::independent, "independent"},
}};

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

double get_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(std::string("'") + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

std::vector<double> parse_grid(const json& j, const char* key) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(std::string("'") + key + "' entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  reject_unknown(j, {"spacing", "start", "stop", "count", "extra"}, key);
  const std::string spacing = j.value("spacing", std::string("linear"));
  const double start = get_number(j, "start");
  const double stop = get_number(j, "stop");
  const std::size_t count = get_count(j, "count");
  std::vector<double> out;
  if (spacing == "log") {
    if (!(start > 0 && stop > start)) throw ConfigError(std::string("log grid '") + key + "' needs 0 < start < stop");
    out = log_grid(start, stop, count);
  } else if (spacing == "linear") {
    if (!(stop >= start)) throw ConfigError(std::string("grid '") + key + "' needs start <= stop");
    out = linear_grid(start, stop, count);
  } else {
    throw ConfigError("grid spacing must be 'log' or 'linear'");
  }
  if (j.contains("extra")) {
    for (double x : parse_grid(j.at("extra"), key)) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

PhasePointd parse_point(const json& j, const char* x_key, const char* v_key) {
  return {get_number(j, x_key), get_number(j, v_key)};
}

void require_increasing(const std::vector<double>& grid, const char* name, bool allow_zero) {
  if (grid.empty()) throw ConfigError(std::string("'") + name + "' must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ConfigError(std::string("'") + name + "' must be finite");
    if (allow_zero ? grid[i] < 0 : grid[i] <= 0)
      throw ConfigError(std::string("'") + name + (allow_zero ? "' must be non-negative" : "' must be positive"));
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ConfigError(std::string("'") + name + "' must be strictly increasing");
  }
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  for (const auto& [k, name] : kExperimentNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperimentNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view coupling_name(BrownianCoupling c) {
  for (const auto& [k, name] : kCouplingNames)
    if (k == c) return name;
  return "unknown";
}

std::vector<double> log_grid(double start, double stop, std::size_t count) {
  if (count == 1) return {start};
  std::vector<double> out(count);
  const double ratio = std::log(stop / start);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = start * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  out.back() = stop;
  return out;
}

std::vector<double> linear_grid(double start, double stop, std::size_t count) {
  if (count == 1) return {start};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = stop;
  return out;
}

void ExperimentConfig::validate() const {
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  require_increasing(t_grid, "t_grid",
                     experiment == ExperimentKind::kernel_check || experiment == ExperimentKind::mixture_decay);
  if (n_samples < 1 || n_trials < 1) throw ConfigError("n_samples and n_trials must be >= 1");
  if (!(h > 0) || !std::isfinite(h)) throw ConfigError("'h' must be positive");
  const double half_period = kPi<double> * params.L;
  const double period = 2.0 * half_period;
  if (experiment == ExperimentKind::sqrt_optimality) {
    require_increasing(z_grid, "z_grid", false);
    if (z_grid.back() > half_period * (1 + 1e-12)) throw ConfigError("'z_grid' must lie in (0, πL]");
  }
  if (experiment == ExperimentKind::stopping_time) {
    require_increasing(m0_grid, "m0_grid", true);
    if (m0_grid.back() > period) throw ConfigError("'m0_grid' must lie in [0, 2πL]");
  }
  if (experiment == ExperimentKind::martingale_h && !(z0 >= 0 && z0 <= half_period * (1 + 1e-12)))
    throw ConfigError("'z0' must lie in [0, πL]");
  if (!(probe_t > 0)) throw ConfigError("'probe_t' must be positive");
  if (!(calibration_t > 0)) throw ConfigError("'calibration_t' must be positive");
  for (double g : gammas)
    if (!(g > 0)) throw ConfigError("'gammas' must be positive");
}

ExperimentConfig parse_config(const json& j, std::optional<ExperimentKind> expected) {
  reject_unknown(j,
                 {"experiment", "params", "t_grid", "n_samples", "n_trials", "h", "seed", "out_path", "initial",
                  "z_grid", "m0_grid", "z0", "coupling", "probe_t", "gammas", "calibration_t", "workers"},
                 "config");
  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) {
      const auto& e = j.at("experiment");
      if (!e.is_string()) throw ConfigError("'experiment' must be a string");
      const auto kind = parse_experiment(e.get<std::string>());
      if (!kind) throw ConfigError("unknown experiment '" + e.get<std::string>() + "'");
      if (expected && *expected != *kind)
        throw ConfigError("config is for '" + e.get<std::string>() + "' but '" +
                          std::string(experiment_name(*expected)) + "' was requested");
      cfg.experiment = *kind;
    } else if (expected) {
      cfg.experiment = *expected;
    } else {
      throw ConfigError("missing 'experiment'");
    }

    if (!j.contains("params")) throw ConfigError("missing 'params'");
    reject_unknown(j.at("params"), {"lambda", "L"}, "params");
    cfg.params.lambda = get_number(j.at("params"), "lambda");
    cfg.params.L = get_number(j.at("params"), "L");
    if (!(cfg.params.lambda > 0) || !(cfg.params.L > 0)) throw ConfigError("'lambda' and 'L' must be positive");

    if (!j.contains("t_grid")) throw ConfigError("missing 't_grid'");
    cfg.t_grid = parse_grid(j.at("t_grid"), "t_grid");
    if (j.contains("n_samples")) cfg.n_samples = get_count(j, "n_samples");
    if (j.contains("n_trials")) cfg.n_trials = get_count(j, "n_trials");
    cfg.h = j.contains("h") ? get_number(j, "h") : default_step(cfg.params);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        throw ConfigError("'seed' must be a non-negative integer");
      cfg.seed = s.get<std::uint64_t>();
    }
    if (j.contains("out_path")) {
      if (!j.at("out_path").is_string()) throw ConfigError("'out_path' must be a string");
      cfg.out_path = j.at("out_path").get<std::string>();
    }

    const double half_period = kPi<double> * cfg.params.L;
    cfg.initial = {{0.0, 0.0}, {half_period, 0.0}};
    if (j.contains("initial")) {
      const auto& ini = j.at("initial");
      reject_unknown(ini, {"x1", "v1", "x2", "v2"}, "initial");
      cfg.initial.p1 = parse_point(ini, "x1", "v1");
      cfg.initial.p2 = parse_point(ini, "x2", "v2");
      cfg.initial.p1.x = wrap(cfg.initial.p1.x, cfg.params.L);
      cfg.initial.p2.x = wrap(cfg.initial.p2.x, cfg.params.L);
    }
    cfg.z_grid = j.contains("z_grid") ? parse_grid(j.at("z_grid"), "z_grid")
                                      : std::vector<double>{half_period / 16, half_period / 8, half_period / 4,
                                                            half_period / 2, half_period};
    cfg.m0_grid = j.contains("m0_grid") ? parse_grid(j.at("m0_grid"), "m0_grid")
                                        : std::vector<double>{half_period / 2, half_period, 1.5 * half_period};
    cfg.z0 = j.contains("z0") ? get_number(j, "z0") : half_period / 2;
    if (j.contains("coupling")) {
      const auto& c = j.at("coupling");
      if (!c.is_string()) throw ConfigError("'coupling' must be a string");
      bool found = false;
      for (const auto& [k, name] : kCouplingNames) {
        if (name == c.get<std::string>()) {
          cfg.coupling = k;
          found = true;
        }
      }
      if (!found) throw ConfigError("unknown coupling '" + c.get<std::string>() + "'");
    }
    if (j.contains("probe_t")) cfg.probe_t = get_number(j, "probe_t");
    if (j.contains("gammas")) cfg.gammas = parse_grid(j.at("gammas"), "gammas");
    if (j.contains("calibration_t")) cfg.calibration_t = get_number(j, "calibration_t");
    if (j.contains("workers")) {
      const auto& w = j.at("workers");
      if (!w.is_number_integer() || w.get<long long>() < 0) throw ConfigError("'workers' must be >= 0");
      cfg.workers = w.get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j, expected);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = std::string(experiment_name(cfg.experiment));
  j["params"] = {{"lambda", cfg.params.lambda}, {"L", cfg.params.L}};
  j["t_grid"] = cfg.t_grid;
  j["n_samples"] = cfg.n_samples;
  j["n_trials"] = cfg.n_trials;
  j["h"] = cfg.h;
  j["seed"] = cfg.seed;
  j["out_path"] = cfg.out_path;
  j["initial"] = {{"x1", cfg.initial.p1.x}, {"v1", cfg.initial.p1.v}, {"x2", cfg.initial.p2.x}, {"v2", cfg.initial.p2.v}};
  j["z_grid"] = cfg.z_grid;
  j["m0_grid"] = cfg.m0_grid;
  j["z0"] = cfg.z0;
  j["coupling"] = std::string(coupling_name(cfg.coupling));
  j["probe_t"] = cfg.probe_t;
  j["gammas"] = cfg.gammas;
  j["calibration_t"] = cfg.calibration_t;
  // workers is deliberately absent: results do not depend on it.
  return j;
}

}  // namespace kfp
