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

// Geometry of the circle T = R / (2πL Z) and Gaussians wrapped onto it.

#include <cmath>
#include <numbers>

#include "kfp/errors.hpp"

namespace kfp {

template <typename Scalar>
constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

template <typename Scalar>
Scalar torus_period(Scalar L) {
  return Scalar(2) * kPi<Scalar> * L;
}

template <typename Scalar>
void require_positive_scale(Scalar L) {
  if (!(L > Scalar(0)) || !std::isfinite(L)) throw ParameterError("torus scale L must be positive");
}

/// Canonical representative of x in [0, 2πL).
template <typename Scalar>
Scalar wrap(Scalar x, Scalar L) {
  require_positive_scale(L);
  const Scalar period = torus_period(L);
  Scalar r = std::fmod(x, period);
  if (r < Scalar(0)) r += period;
  // -tiny + period rounds to period
  if (r >= period) r = Scalar(0);
  return r;
}

/// Geodesic distance between canonical coordinates; lies in [0, πL].
template <typename Scalar>
Scalar torus_dist(Scalar a, Scalar b, Scalar L) {
  require_positive_scale(L);
  const Scalar period = torus_period(L);
  Scalar d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

/// L² sin²((a - b) / 2L): smooth on the lift, equivalent to |a - b|²_T with
/// constants 1/π² and 1/4 independent of L.
template <typename Scalar>
Scalar sin_metric_sq(Scalar a, Scalar b, Scalar L) {
  require_positive_scale(L);
  const Scalar s = std::sin((a - b) / (Scalar(2) * L));
  return L * L * s * s;
}

/// Gaussian N(center, sigma2) on the line, pushed onto the torus.
template <typename Scalar>
struct WrappedGaussian {
  Scalar center{0};
  Scalar sigma2{1};
};

/// Density of a wrapped Gaussian at x with absolute truncation error ≤ tol.
///
/// For sigma2 ≤ L² the lattice sum Σ_n h(x + 2πLn) converges fastest; above
/// that the Fourier series (1/2πL)[1 + 2Σ_k e^{-k²σ²/2L²} cos(k(x-c)/L)] does.
template <typename Scalar>
Scalar wrapped_pdf(const WrappedGaussian<Scalar>& g, Scalar x, Scalar L, Scalar tol = Scalar(1e-12)) {
  require_positive_scale(L);
  if (!(g.sigma2 > Scalar(0)) || !std::isfinite(g.sigma2)) throw ParameterError("wrapped Gaussian variance must be positive");
  if (!(tol > Scalar(0))) throw ParameterError("tolerance must be positive");
  const Scalar period = torus_period(L);
  const Scalar two_pi = Scalar(2) * kPi<Scalar>;
  const Scalar delta = x - g.center;

  if (g.sigma2 <= L * L) {
    const Scalar sigma = std::sqrt(g.sigma2);
    const Scalar norm = Scalar(1) / std::sqrt(two_pi * g.sigma2);
    // Reduce to the nearest image so the sum is centred.
    const Scalar base = delta - period * std::round(delta / period);
    const int n_min = static_cast<int>(std::ceil(Scalar(6) * sigma / period)) + 2;
    Scalar sum = norm * std::exp(-base * base / (Scalar(2) * g.sigma2));
    for (int n = 1;; ++n) {
      const Scalar up = base + period * Scalar(n);
      const Scalar down = base - period * Scalar(n);
      const Scalar term = norm * (std::exp(-up * up / (Scalar(2) * g.sigma2)) +
                                  std::exp(-down * down / (Scalar(2) * g.sigma2)));
      sum += term;
      if (n >= n_min && term < tol * Scalar(1e-3)) break;
    }
    return sum;
  }

  const Scalar decay = g.sigma2 / (Scalar(2) * L * L);
  Scalar sum = Scalar(1);
  for (int k = 1;; ++k) {
    const Scalar coeff = std::exp(-Scalar(k) * Scalar(k) * decay);
    if (Scalar(2) * coeff / period < tol * Scalar(1e-3)) break;
    sum += Scalar(2) * coeff * std::cos(Scalar(k) * delta / L);
  }
  return sum / period;
}

/// Guaranteed uniform fraction β of a wrapped Gaussian with variance sigma2:
/// Qh ≥ β / 2πL everywhere, where 1 - β = 2e^{-σ²/2L²} / (1 - e^{-σ²/2L²}).
/// Clamped to 0 where the bound is vacuous (σ² ≤ 2L² ln 3).
template <typename Scalar>
Scalar spreading_beta(Scalar sigma2, Scalar L) {
  require_positive_scale(L);
  if (!(sigma2 > Scalar(0))) throw ParameterError("spreading_beta needs positive variance");
  const Scalar a = sigma2 / (Scalar(2) * L * L);
  const Scalar q = std::exp(-a);
  const Scalar one_minus_q = -std::expm1(-a);
  const Scalar beta = Scalar(1) - Scalar(2) * q / one_minus_q;
  return beta > Scalar(0) ? beta : Scalar(0);
}

}  // namespace kfp
