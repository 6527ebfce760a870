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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kfp/couplings.hpp"
#include "kfp/kernel.hpp"

namespace kfp {

enum class ExperimentKind {
  kernel_check,
  mixture_decay,
  coadapted_decay,
  non_contraction,
  sqrt_optimality,
  stopping_time,
  martingale_h,
};

std::string_view experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment(std::string_view name);

/// Resolved configuration of one experiment run.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kernel_check;
  ModelParamsd params;
  std::vector<double> t_grid;
  std::size_t n_samples = 1000;
  std::size_t n_trials = 1000;
  double h = 1e-3;
  std::uint64_t seed = 0;
  std::string out_path;

  // Experiment-specific settings; every one has a default.
  CoupledPair initial;                  ///< Dirac initial pair (default: (0,0) and (πL,0))
  std::vector<double> z_grid;           ///< sqrt-optimality separations
  std::vector<double> m0_grid;          ///< stopping-time starting separations
  double z0 = 0;                        ///< martingale-h initial separation (default πL/2)
  BrownianCoupling coupling = BrownianCoupling::reflection;
  double probe_t = 0.01;                ///< non-contraction empirical cross-check time
  std::vector<double> gammas{0.1, 1.0, 10.0};
  double calibration_t = 1.0;           ///< mixture-decay: time at which ĉ is fitted
  std::size_t workers = 0;              ///< 0: one per hardware thread

  void validate() const;
};

/// Parses a JSON config. Unknown keys, wrong types and invalid values raise
/// ConfigError. `t_grid` (and `z_grid`, `m0_grid`) accept either an explicit
/// array or {"spacing": "log"|"linear", "start", "stop", "count", "extra": [...]}.
ExperimentConfig parse_config(const nlohmann::json& j, std::optional<ExperimentKind> expected = std::nullopt);
ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> expected = std::nullopt);

/// Fully resolved config (grids expanded) as JSON; parse_config accepts it back.
nlohmann::json to_json(const ExperimentConfig& cfg);

std::vector<double> log_grid(double start, double stop, std::size_t count);
std::vector<double> linear_grid(double start, double stop, std::size_t count);

std::string_view coupling_name(BrownianCoupling c);

}  // namespace kfp
