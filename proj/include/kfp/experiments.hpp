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

// Experiment drivers. Each returns a table with one row per grid point and a
// JSON summary (calibrated constants, fitted rates, pass/fail of the checks
// the experiment was built for).

#include <vector>

#include "json.hpp"
#include "kfp/config.hpp"
#include "kfp/csv.hpp"

namespace kfp {

struct ExperimentOutput {
  Table table;
  nlohmann::json summary;
};

std::vector<ColumnSpec> experiment_columns(ExperimentKind kind);

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

ExperimentOutput run_kernel_check(const ExperimentConfig& cfg);
ExperimentOutput run_mixture_decay(const ExperimentConfig& cfg);
ExperimentOutput run_coadapted_decay(const ExperimentConfig& cfg);
ExperimentOutput run_non_contraction(const ExperimentConfig& cfg);
ExperimentOutput run_sqrt_optimality(const ExperimentConfig& cfg);
ExperimentOutput run_stopping_time(const ExperimentConfig& cfg);
ExperimentOutput run_martingale_h(const ExperimentConfig& cfg);

/// Gaussian mass of the position noise outside [-d, d], d = dist · t^{3/2}.
double non_contraction_tail(double t, double dist, const ModelParamsd& p);

/// Lower bound on W2 between the laws at time t of two Dirac initial
/// conditions at torus distance dist with equal velocities:
/// sqrt((dist - 2d)² (1 - 2 tail)). Throws DomainError once the two
/// intervals of half-width d can overlap on the torus (d ≥ πL - dist/2).
double non_contraction_bound(double t, double dist, const ModelParamsd& p);

}  // namespace kfp
