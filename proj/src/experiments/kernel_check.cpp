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
#include "kfp/kernel.hpp"
#include "kfp/parallel.hpp"
#include "kfp/random.hpp"

namespace kfp {
namespace {

// Through-the-origin regression sums for A on B; both have mean zero.
struct RegressionSums {
  double n = 0, saa = 0, sab = 0, sbb = 0;
  void merge(const RegressionSums& o) {
    n += o.n;
    saa += o.saa;
    sab += o.sab;
    sbb += o.sbb;
  }
};

}  // namespace

ExperimentOutput run_kernel_check(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  const auto& grid = cfg.t_grid;
  const std::size_t n_t = grid.size();

  // Euler-Maruyama paths of (A, B) from the origin, recorded on the grid.
  // Columns: A², AB, B².
  const MomentTable em = chunked_reduce(cfg.n_trials, cfg.workers, MomentTable(n_t, 3), [&](std::size_t trial, MomentTable& acc) {
    RandomStream rng = RandomStream::derive(cfg.seed, 0, trial);
    double a = 0, b = 0, now = 0;
    for (std::size_t k = 0; k < n_t; ++k) {
      const auto seg = detail::segment(now, grid[k], cfg.h);
      const double sd = std::sqrt(seg.dt);
      for (std::size_t s = 0; s < seg.steps; ++s) {
        const double b_next = b - p.lambda * b * seg.dt + sd * rng.normal();
        a += b * seg.dt;
        b = b_next;
      }
      now = grid[k];
      acc(k, 0).add(a * a);
      acc(k, 1).add(a * b);
      acc(k, 2).add(b * b);
    }
  });

  auto table = detail::make_table(ExperimentKind::kernel_check);
  for (std::size_t k = 0; k < n_t; ++k) {
    const double t = grid[k];
    if (t == 0) {
      table.add_row(std::vector<double>(table.columns().size(), 0.0));
      continue;
    }
    const auto cov = covariance(t, p);
    const NoiseSampler<double> sampler(t, p);
    const auto reg = chunked_reduce(cfg.n_samples, cfg.workers, RegressionSums{}, [&](std::size_t i, RegressionSums& acc) {
      RandomStream rng = RandomStream::derive(cfg.seed, 1 + k, i);
      const auto ab = sampler(rng);
      acc.n += 1;
      acc.saa += ab(0) * ab(0);
      acc.sab += ab(0) * ab(1);
      acc.sbb += ab(1) * ab(1);
    });
    const double slope_mc = reg.sab / reg.sbb;
    const double dof = std::max(1.0, reg.n - 1);
    const double resid = std::max(0.0, reg.saa - reg.sab * slope_mc) / dof;
    const double slope_se = std::sqrt(resid / reg.sbb);
    const double resid_se = resid * std::sqrt(2.0 / dof);
    table.add_row({t, cov.s_aa, em(k, 0).mean(), em(k, 0).std_error(), cov.s_ab, em(k, 1).mean(),
                   em(k, 1).std_error(), cov.s_bb, em(k, 2).mean(), em(k, 2).std_error(), cov.s_ab / cov.s_bb,
                   slope_mc, slope_se, conditional_variance(cov), resid, resid_se});
  }

  nlohmann::json summary;
  std::size_t within = 0, checked = 0;
  for (std::size_t k = 0; k < n_t; ++k) {
    if (grid[k] == 0) continue;
    for (const char* name : {"S_AA", "S_AB", "S_BB", "slope", "cond_var"}) {
      const std::string base(name);
      const std::string mc = base + "_mc";
      const std::string se = base + "_se";
      ++checked;
      if (std::abs(table.at(k, mc) - table.at(k, base)) <= 3.0 * table.at(k, se)) ++within;
    }
  }
  summary["checks"] = checked;
  summary["within_3se"] = within;
  return {std::move(table), std::move(summary)};
}

}  // namespace kfp
