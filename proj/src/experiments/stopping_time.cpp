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
#include "kfp/couplings.hpp"
#include "kfp/parallel.hpp"
#include "kfp/stopping_time.hpp"

namespace kfp {

ExperimentOutput run_stopping_time(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  const auto& grid = cfg.t_grid;
  const auto& starts = cfg.m0_grid;
  const std::size_t n_t = grid.size();
  const std::size_t n_m = starts.size();
  const double period = torus_period(p.L);
  const double rate = 4.0 / (p.lambda * p.lambda);

  // All starting points share one Brownian path; each is killed on its own.
  const MomentTable mc = chunked_reduce(cfg.n_trials, cfg.workers, MomentTable(n_t, n_m),
                                        [&](std::size_t trial, MomentTable& acc) {
    RandomStream rng = RandomStream::derive(cfg.seed, trial);
    std::vector<char> alive(n_m);
    std::size_t n_alive = 0;
    for (std::size_t j = 0; j < n_m; ++j) {
      alive[j] = starts[j] > 0 && starts[j] < period;
      n_alive += alive[j];
    }
    double b = 0, now = 0;
    for (std::size_t k = 0; k < n_t; ++k) {
      const auto seg = detail::segment(now, grid[k], cfg.h);
      const double sd = std::sqrt(rate * seg.dt);
      for (std::size_t i = 0; i < seg.steps && n_alive > 0; ++i) {
        const double b_new = b + sd * rng.normal();
        for (std::size_t j = 0; j < n_m; ++j) {
          if (!alive[j]) continue;
          if (detect_boundary_crossing(starts[j] + b, starts[j] + b_new, rate * seg.dt, period, rng).crossed) {
            alive[j] = 0;
            --n_alive;
          }
        }
        b = b_new;
      }
      now = grid[k];
      for (std::size_t j = 0; j < n_m; ++j) acc(k, j).add(alive[j] ? 1.0 : 0.0);
    }
  });

  auto table = detail::make_table(ExperimentKind::stopping_time);
  std::size_t within = 0, dominated = 0, rows = 0;
  for (std::size_t j = 0; j < n_m; ++j) {
    for (std::size_t k = 0; k < n_t; ++k) {
      const double t = grid[k];
      const double series = stopping_time_tail(t, starts[j], p);
      const double bound =
          t > 0 ? stopping_time_tail_bound(t, starts[j], p) : std::numeric_limits<double>::infinity();
      const auto& m = mc(k, j);
      ++rows;
      if (std::abs(m.mean() - series) <= 3.0 * m.std_error() || (m.std_error() == 0 && m.mean() == series))
        ++within;
      if (bound >= series) ++dominated;
      table.add_row({starts[j], t, series, bound, m.mean(), m.std_error()});
    }
  }
  nlohmann::json summary;
  summary["rows"] = rows;
  summary["mc_within_3se"] = within;
  summary["bound_dominates"] = dominated;
  summary["tail_constant"] = stopping_time_tail_constant(p);
  return {std::move(table), std::move(summary)};
}

}  // namespace kfp
