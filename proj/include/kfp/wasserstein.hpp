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

// Exact W2 between equally weighted point clouds on T x R with ground cost
// |Δx|²_T + (Δv)², and the Monte Carlo upper bound given by a coupling.

#include <cstddef>
#include <vector>

#include "kfp/couplings.hpp"
#include "kfp/kernel.hpp"

namespace kfp {

struct EmpiricalMeasure {
  std::vector<PhasePointd> points;

  std::size_t size() const { return points.size(); }
};

double ground_cost(const PhasePointd& a, const PhasePointd& b, double L);

struct W2Options {
  /// Largest cloud accepted; the dense cost matrix needs 8n² bytes.
  std::size_t max_points = 4096;
  /// Evaluate costs on demand instead of materialising the matrix.
  bool stream_costs = false;
};

struct W2Result {
  double distance = 0;
  double mean_cost = 0;
  /// Standard error of `distance` from the spread of the matched costs
  /// (delta method); zero when every matched cost is equal.
  double std_error = 0;
  std::vector<int> matching;
};

W2Result w2_solve(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double L, const W2Options& options = {});

/// sqrt of the optimal assignment value min_σ (1/n) Σ_i c(p_i, q_σ(i)).
double w2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double L, const W2Options& options = {});

struct CouplingCost {
  double distance = 0;   ///< sqrt of the mean ground cost
  double mean_cost = 0;
  double std_error = 0;     ///< standard error of `distance` (delta method)
};

CouplingCost coupling_cost(const std::vector<CoupledPair>& pairs, double L);

/// sqrt(E[|ΔX|²_T + |ΔV|²]) over the paired samples.
double w2_upper_from_coupling(const std::vector<CoupledPair>& pairs, double L);

EmpiricalMeasure first_marginal(const std::vector<CoupledPair>& pairs);
EmpiricalMeasure second_marginal(const std::vector<CoupledPair>& pairs);

}  // namespace kfp
