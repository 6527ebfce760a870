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

#include "kfp/stopping_time.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "kfp/errors.hpp"

namespace kfp {
namespace {

void check_start(double m0, const ModelParamsd& p) {
  p.validate();
  const double period = torus_period(p.L);
  if (!(m0 >= 0.0 && m0 <= period)) throw ParameterError("m0 must lie in [0, 2πL]");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double stopping_time_tail_series(double t, double m0, const ModelParamsd& p, double tol) {
  check_start(m0, p);
  if (!(tol > 0)) throw ParameterError("tolerance must be positive");
  const double rate = 1.0 / (2.0 * p.lambda * p.lambda * p.L * p.L);
  double sum = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    const double odd = 2.0 * k + 1.0;
    const double envelope = (4.0 / kPi<double>) / odd * std::exp(-odd * odd * t * rate);
    if (envelope < tol && k > 0) break;
    sum += envelope * std::sin(odd * m0 / (2.0 * p.L));
  }
  return std::clamp(sum, 0.0, 1.0);
}

double stopping_time_tail_images(double t, double m0, const ModelParamsd& p) {
  check_start(m0, p);
  const double width = torus_period(p.L);
  const double sd = 2.0 * std::sqrt(t) / p.lambda;
  // Killed heat kernel on (0, width): Σ_n φ(y - m0 + 2n·width) - φ(y + m0 + 2n·width).
  const int n_max = 2 + static_cast<int>(std::ceil(4.0 * sd / width));
  double sum = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    const double shift = 2.0 * n * width;
    sum += normal_cdf((width - m0 + shift) / sd) - normal_cdf((-m0 + shift) / sd);
    sum -= normal_cdf((width + m0 + shift) / sd) - normal_cdf((m0 + shift) / sd);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double stopping_time_tail(double t, double m0, const ModelParamsd& p, double tol) {
  check_start(m0, p);
  if (!(t >= 0)) throw ParameterError("t must be non-negative");
  const double width = torus_period(p.L);
  if (m0 == 0.0 || m0 == width) return 0.0;
  if (t == 0.0) return 1.0;
  // Below 2λ²L² the series needs many slowly decaying terms; the images converge fast there.
  if (t < 2.0 * p.lambda * p.lambda * p.L * p.L) return stopping_time_tail_images(t, m0, p);
  return stopping_time_tail_series(t, m0, p, tol);
}

double stopping_time_tail_constant(const ModelParamsd& p) {
  p.validate();
  const double lam_l = p.lambda * p.L;
  return 2.0 / (kPi<double> * p.L) * std::max(1.0, std::sqrt(kPi<double> * lam_l * lam_l / 8.0));
}

double stopping_time_tail_bound(double t, double m0, const ModelParamsd& p) {
  check_start(m0, p);
  if (!(t > 0)) throw ParameterError("the tail bound diverges at t = 0");
  const double m = std::min(m0, torus_period(p.L) - m0);
  const double rate = 1.0 / (2.0 * p.lambda * p.lambda * p.L * p.L);
  return stopping_time_tail_constant(p) * m * (1.0 + 1.0 / std::sqrt(t)) * std::exp(-rate * t);
}

DecayRegime decay_regime(const ModelParamsd& p) {
  p.validate();
  const double velocity_rate = 2.0 * p.lambda;
  const double spatial_rate = 1.0 / (2.0 * p.lambda * p.lambda * p.L * p.L);
  if (std::abs(velocity_rate - spatial_rate) <= 1e-12 * std::max(velocity_rate, spatial_rate))
    return DecayRegime::critical;
  return velocity_rate < spatial_rate ? DecayRegime::velocity_limited : DecayRegime::spatial_limited;
}

double second_moment_rate_term(double t, const ModelParamsd& p) {
  switch (decay_regime(p)) {
    case DecayRegime::velocity_limited:
      return std::exp(-2.0 * p.lambda * t);
    case DecayRegime::critical:
      return (1.0 + t) * std::exp(-2.0 * p.lambda * t);
    case DecayRegime::spatial_limited:
      break;
  }
  return std::exp(-t / (2.0 * p.lambda * p.lambda * p.L * p.L));
}

double second_moment_bound(double t, double z0, double m0, double C, const ModelParamsd& p) {
  if (!(C > 0)) throw ParameterError("second-moment constant must be positive");
  if (!(t >= 0)) throw ParameterError("t must be non-negative");
  return z0 * z0 * std::exp(-2.0 * p.lambda * t) + C * std::abs(m0) * second_moment_rate_term(t, p);
}

double velocity_second_moment(double t, double z0, double m0, const ModelParamsd& p, double source_coefficient) {
  check_start(m0, p);
  if (!(t >= 0)) throw ParameterError("t must be non-negative");
  const double decay = 2.0 * p.lambda;
  double forced = 0.0;
  if (t > 0 && m0 > 0.0 && m0 < torus_period(p.L)) {
    auto integrand = [&](double s) { return std::exp(-decay * (t - s)) * stopping_time_tail(s, m0, p); };
    forced = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 15, 1e-12);
  }
  return z0 * z0 * std::exp(-decay * t) + source_coefficient * forced;
}

}  // namespace kfp
