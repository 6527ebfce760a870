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

#include "kfp/wasserstein.hpp"

#include <cmath>
#include <string>

#include "kfp/assignment.hpp"
#include "kfp/errors.hpp"

namespace kfp {
namespace {

struct CostSummary {
  double mean = 0;
  double distance = 0;
  double std_error = 0;
};

template <typename CostAt>
CostSummary summarise(std::size_t n, CostAt&& cost_at) {
  double sum = 0;
  double sum_sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cost_at(i);
    sum += c;
    sum_sq += c * c;
  }
  CostSummary s;
  const double dn = static_cast<double>(n);
  s.mean = sum / dn;
  s.distance = std::sqrt(s.mean);
  if (n > 1 && s.distance > 0) {
    const double var = std::max(0.0, (sum_sq - dn * s.mean * s.mean) / (dn - 1.0));
    s.std_error = std::sqrt(var / dn) / (2.0 * s.distance);
  }
  return s;
}

}  // namespace

double ground_cost(const PhasePointd& a, const PhasePointd& b, double L) {
  const double dx = torus_dist(a.x, b.x, L);
  const double dv = a.v - b.v;
  return dx * dx + dv * dv;
}

W2Result w2_solve(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double L, const W2Options& options) {
  require_positive_scale(L);
  if (mu.size() != nu.size())
    throw SizeMismatchError("w2 needs clouds of equal size (" + std::to_string(mu.size()) + " vs " +
                            std::to_string(nu.size()) + ")");
  if (mu.size() == 0) throw ParameterError("w2 needs non-empty clouds");
  if (mu.size() > options.max_points)
    throw ParameterError("cloud size " + std::to_string(mu.size()) + " exceeds max_points");
  const auto n = static_cast<int>(mu.size());

  Assignment assignment;
  if (options.stream_costs) {
    assignment = solve_assignment(n, [&](int i, int j) { return ground_cost(mu.points[i], nu.points[j], L); });
  } else {
    RowMajorMatrix cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = ground_cost(mu.points[i], nu.points[j], L);
    assignment = solve_assignment(cost);
  }

  W2Result r;
  r.matching = std::move(assignment.row_to_col);
  const auto s = summarise(mu.size(), [&](std::size_t i) {
    return ground_cost(mu.points[i], nu.points[static_cast<std::size_t>(r.matching[i])], L);
  });
  r.mean_cost = s.mean;
  r.distance = s.distance;
  r.std_error = s.std_error;
  return r;
}

double w2(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double L, const W2Options& options) {
  return w2_solve(mu, nu, L, options).distance;
}

CouplingCost coupling_cost(const std::vector<CoupledPair>& pairs, double L) {
  require_positive_scale(L);
  if (pairs.empty()) throw ParameterError("coupling estimate needs at least one pair");
  const auto s = summarise(pairs.size(), [&](std::size_t i) { return ground_cost(pairs[i].p1, pairs[i].p2, L); });
  return {s.distance, s.mean, s.std_error};
}

double w2_upper_from_coupling(const std::vector<CoupledPair>& pairs, double L) {
  return coupling_cost(pairs, L).distance;
}

EmpiricalMeasure first_marginal(const std::vector<CoupledPair>& pairs) {
  EmpiricalMeasure m;
  m.points.reserve(pairs.size());
  for (const auto& pr : pairs) m.points.push_back(pr.p1);
  return m;
}

EmpiricalMeasure second_marginal(const std::vector<CoupledPair>& pairs) {
  EmpiricalMeasure m;
  m.points.reserve(pairs.size());
  for (const auto& pr : pairs) m.points.push_back(pr.p2);
  return m;
}

}  // namespace kfp
