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

#include <cmath>
#include <limits>

#include "common.hpp"
#include "kfp/errors.hpp"
#include "kfp/kernel.hpp"
#include "kfp/parallel.hpp"
#include "kfp/wasserstein.hpp"

namespace kfp {
namespace {

void check_inputs(double t, double dist, const ModelParamsd& p) {
  p.validate();
  if (!(t > 0)) throw ParameterError("non-contraction bound needs t > 0");
  if (!(dist > 0) || dist > kPi<double> * p.L * (1 + 1e-12))
    throw ParameterError("non-contraction bound needs 0 < dist <= pi L");
}

}  // namespace

double non_contraction_tail(double t, double dist, const ModelParamsd& p) {
  check_inputs(t, dist, p);
  const double d = dist * t * std::sqrt(t);
  const double s_aa = covariance(t, p).s_aa;
  return std::erfc(d / std::sqrt(2.0 * s_aa));
}

double non_contraction_bound(double t, double dist, const ModelParamsd& p) {
  check_inputs(t, dist, p);
  const double d = dist * t * std::sqrt(t);
  if (d >= kPi<double> * p.L - dist / 2)
    throw DomainError("transport intervals overlap on the torus at t = " + format_double(t));
  const double tail = non_contraction_tail(t, dist, p);
  const double gap = dist - 2.0 * d;
  return std::sqrt(gap * gap * std::max(0.0, 1.0 - 2.0 * tail));
}

ExperimentOutput run_non_contraction(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  const double dist = torus_dist(cfg.initial.p1.x, cfg.initial.p2.x, p.L);
  if (!(dist > 0)) throw DomainError("non-contraction needs distinct initial positions");
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto table = detail::make_table(ExperimentKind::non_contraction);
  std::vector<double> first_violation(cfg.gammas.size(), nan);
  for (double t : cfg.t_grid) {
    const double d = dist * t * std::sqrt(t);
    const double tail = non_contraction_tail(t, dist, p);
    double bound = nan;
    try {
      bound = non_contraction_bound(t, dist, p);
    } catch (const DomainError&) {
    }
    const bool valid = !std::isnan(bound);
    const double threshold = valid && bound > 0 ? -std::log(bound / dist) / t : nan;
    for (std::size_t g = 0; g < cfg.gammas.size(); ++g)
      if (valid && std::isnan(first_violation[g]) && bound > std::exp(-cfg.gammas[g] * t) * dist)
        first_violation[g] = t;
    table.add_row({t, d, tail, bound, valid ? 1.0 : 0.0, threshold});
  }

  nlohmann::json summary;
  summary["dist"] = dist;
  nlohmann::json gammas = nlohmann::json::array();
  bool all_violated = true;
  for (std::size_t g = 0; g < cfg.gammas.size(); ++g) {
    const bool violated = !std::isnan(first_violation[g]);
    all_violated = all_violated && violated;
    gammas.push_back({{"gamma", cfg.gammas[g]}, {"violated", violated},
                      {"first_t", violated ? nlohmann::json(first_violation[g]) : nlohmann::json(nullptr)}});
  }
  summary["gammas"] = gammas;
  summary["no_contraction_rate"] = all_violated;

  // Empirical W2 between exact-kernel clouds from the two Dirac masses.
  const double tp = cfg.probe_t;
  const std::size_t n = cfg.n_samples;
  const auto cloud = [&](const PhasePointd& p0, std::uint64_t which) {
    EmpiricalMeasure m;
    m.points = parallel_map<PhasePointd>(n, cfg.workers, [&](std::size_t i) {
      RandomStream rng = RandomStream::derive(cfg.seed, which, i);
      auto q = sample_transition(p0, tp, p, rng);
      q.x = wrap(q.x, p.L);
      return q;
    });
    return m;
  };
  W2Options options;
  options.max_points = std::size_t{1} << 14;
  options.stream_costs = n > 4096;
  const auto w2r = w2_solve(cloud(cfg.initial.p1, 0), cloud(cfg.initial.p2, 1), p.L, options);
  double probe_bound = nan;
  try {
    probe_bound = non_contraction_bound(tp, dist, p);
  } catch (const DomainError&) {
  }
  summary["probe_t"] = tp;
  summary["probe_w2"] = w2r.distance;
  summary["probe_w2_se"] = w2r.std_error;
  summary["probe_bound"] = std::isnan(probe_bound) ? nlohmann::json(nullptr) : nlohmann::json(probe_bound);
  summary["probe_consistent"] = !std::isnan(probe_bound) && w2r.distance >= probe_bound - 3.0 * w2r.std_error;
  return {std::move(table), std::move(summary)};
}

}  // namespace kfp
