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

#include "kfp/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kfp/errors.hpp"

namespace kfp {

DecayFit fit_rate(std::span<const SeriesPoint> series, const FitOptions& options) {
  for (std::size_t i = 1; i < series.size(); ++i)
    if (!(series[i].t > series[i - 1].t)) throw ParameterError("fit_rate needs strictly increasing times");

  auto usable = [&](const SeriesPoint& s) {
    return s.t >= options.t_min && s.value > 0 && s.value > options.snr * s.std_error && std::isfinite(s.value);
  };
  std::size_t best_begin = 0;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < series.size();) {
    if (!usable(series[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < series.size() && usable(series[j])) ++j;
    if (j - i > best_len) {
      best_begin = i;
      best_len = j - i;
    }
    i = j;
  }
  if (best_len < options.min_points) throw FitWindowError("not enough points with signal to fit a decay rate");

  const auto window = series.subspan(best_begin, best_len);
  std::vector<double> w(best_len), y(best_len);
  for (std::size_t k = 0; k < best_len; ++k) {
    const double rel = window[k].std_error / window[k].value;
    w[k] = 1.0 / (rel * rel + 1e-24);
    y[k] = std::log(window[k].value);
  }
  const double w_max = *std::max_element(w.begin(), w.end());
  double sw = 0, st = 0, sy = 0;
  for (std::size_t k = 0; k < best_len; ++k) {
    w[k] /= w_max;
    sw += w[k];
    st += w[k] * window[k].t;
    sy += w[k] * y[k];
  }
  const double t_bar = st / sw;
  const double y_bar = sy / sw;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t k = 0; k < best_len; ++k) {
    const double dt = window[k].t - t_bar;
    const double dy = y[k] - y_bar;
    stt += w[k] * dt * dt;
    sty += w[k] * dt * dy;
    syy += w[k] * dy * dy;
  }
  const double slope = sty / stt;

  DecayFit fit;
  fit.rate = -slope;
  fit.log_intercept = y_bar - slope * t_bar;
  double ss_res = 0;
  for (std::size_t k = 0; k < best_len; ++k) {
    const double r = y[k] - (fit.log_intercept + slope * window[k].t);
    ss_res += w[k] * r * r;
  }
  fit.r2 = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  // Unnormalised inverse-variance weights give Var(slope) = 1 / Σ w (t - t̄)².
  fit.rate_se = std::sqrt(1.0 / (stt * w_max));
  fit.t_lo = window.front().t;
  fit.t_hi = window.back().t;
  fit.points = best_len;
  return fit;
}

}  // namespace kfp
