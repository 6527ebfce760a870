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

#include "common.hpp"
#include "kfp/couplings.hpp"
#include "kfp/parallel.hpp"

namespace kfp {
namespace {

// Per grid point: squared torus separation, its running trapezoid integral
// from 0, and the lifted separation stopped at the merging time.
enum Observable { kSep2, kIntegral, kStopped, kObservables };

}  // namespace

ExperimentOutput run_sqrt_optimality(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  const auto& grid = cfg.t_grid;
  const std::size_t n_t = grid.size();
  // The drift-corrected positions are Brownian motions of rate 1/λ².
  const BrownianPairStepper stepper(BrownianCoupling::reflection, 1.0 / (p.lambda * p.lambda), p.L);

  auto table = detail::make_table(ExperimentKind::sqrt_optimality);
  std::vector<double> log_z, log_integral;
  nlohmann::json martingale = nlohmann::json::array();
  bool martingale_ok = true;
  for (std::size_t zi = 0; zi < cfg.z_grid.size(); ++zi) {
    const double z = cfg.z_grid[zi];
    const MomentTable mc = chunked_reduce(cfg.n_trials, cfg.workers, MomentTable(n_t, kObservables),
                                          [&](std::size_t trial, MomentTable& acc) {
      RandomStream rng = RandomStream::derive(cfg.seed, zi, trial);
      BrownianPairState s;
      s.w1 = z;
      double now = 0, prev = z * z, integral = 0;
      for (std::size_t k = 0; k < n_t; ++k) {
        const auto seg = detail::segment(now, grid[k], cfg.h);
        for (std::size_t i = 0; i < seg.steps && !s.merged; ++i) stepper.step(s, seg.dt, rng);
        const double sep = s.merged ? 0.0 : torus_dist(s.w1, s.w2, p.L);
        integral += 0.5 * (prev + sep * sep) * (grid[k] - now);
        prev = sep * sep;
        now = grid[k];
        acc(k, kSep2).add(sep * sep);
        acc(k, kIntegral).add(integral);
        acc(k, kStopped).add(s.diff());
      }
    });

    double peak = z * z;
    std::size_t peak_k = 0;
    for (std::size_t k = 0; k < n_t; ++k) {
      if (mc(k, kSep2).mean() > peak) {
        peak = mc(k, kSep2).mean();
        peak_k = k;
      }
    }
    std::size_t cut = n_t - 1;
    bool truncated = true;
    for (std::size_t k = peak_k; k < n_t; ++k) {
      if (mc(k, kSep2).mean() < 0.01 * peak) {
        cut = k;
        truncated = false;
        break;
      }
    }
    const double integral = mc(cut, kIntegral).mean();
    const auto& stopped = mc(n_t - 1, kStopped);
    const bool ok = std::abs(stopped.mean() - z) <= 3.0 * stopped.std_error();
    martingale_ok = martingale_ok && ok;
    martingale.push_back({{"z", z}, {"mean", stopped.mean()}, {"se", stopped.std_error()}, {"within_3se", ok}});
    if (integral > 0) {
      log_z.push_back(std::log(z));
      log_integral.push_back(std::log(integral));
    }
    table.add_row({z, integral, mc(cut, kIntegral).std_error(), std::sqrt(integral), grid[cut], peak,
                   truncated ? 1.0 : 0.0, stopped.mean(), stopped.std_error()});
  }

  nlohmann::json summary;
  summary["optional_stopping"] = martingale;
  summary["optional_stopping_ok"] = martingale_ok;
  if (log_z.size() >= 2) {
    const std::size_t n = log_z.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += log_z[i];
      my += log_integral[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (log_z[i] - mx) * (log_z[i] - mx);
      sxy += (log_z[i] - mx) * (log_integral[i] - my);
    }
    summary["loglog_slope"] = sxy / sxx;
    summary["loglog_intercept"] = my - sxy / sxx * mx;
  } else {
    summary["loglog_slope"] = nullptr;
  }
  return {std::move(table), std::move(summary)};
}

}  // namespace kfp
