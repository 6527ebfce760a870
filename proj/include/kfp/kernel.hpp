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

// Closed-form transition law of the kinetic Fokker-Planck SDE
//
//   dX = V dt,   dV = -λ V dt + dW,   X on the torus R / (2πL Z).
//
// Started from (x0, v0) the state at time t is
//   X_t = x0 + (1 - e^{-λt}) v0 / λ + A_t,   V_t = e^{-λt} v0 + B_t
// where (A_t, B_t) is a centred Gaussian pair with covariance Σ(t).

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "kfp/errors.hpp"
#include "kfp/random.hpp"
#include "kfp/torus.hpp"

namespace kfp {

template <typename Scalar>
struct ModelParams {
  Scalar lambda{1};  ///< friction
  Scalar L{1};       ///< torus circumference is 2πL

  void validate() const {
    if (!(lambda > Scalar(0)) || !std::isfinite(lambda)) throw ParameterError("lambda must be positive");
    require_positive_scale(L);
  }
};

template <typename Scalar>
struct PhasePoint {
  Scalar x{0};  ///< canonical torus coordinate
  Scalar v{0};
};

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Covariance Σ(t) of the noise pair (A_t, B_t).
template <typename Scalar>
struct TransitionCovariance {
  Scalar t{0};
  Scalar s_aa{0};
  Scalar s_ab{0};
  Scalar s_bb{0};

  Matrix2<Scalar> matrix() const {
    Matrix2<Scalar> m;
    m << s_aa, s_ab, s_ab, s_bb;
    return m;
  }
  Scalar determinant() const { return s_aa * s_bb - s_ab * s_ab; }
};

template <typename Scalar>
struct ConditionalGaussian {
  Scalar mean{0};
  Scalar var{0};
};

namespace detail {

// x - 2(1 - e^{-x}) + (1 - e^{-2x})/2 and (1 - e^{-x}) - (1 - e^{-2x})/2.
// Both cancel to leading orders x³/3 and x²/2; below x = 1/2 the Taylor
// series is summed to full precision instead.
template <typename Scalar>
Scalar position_variance_core(Scalar x) {
  if (x >= Scalar(0.5)) return x + Scalar(2) * std::expm1(-x) - std::expm1(-Scalar(2) * x) / Scalar(2);
  Scalar sum = 0;
  Scalar power_over_factorial = x * x / Scalar(2);  // x^n / n! at n = 2
  Scalar two_pow = 2;                               // 2^{n-1}
  for (int n = 3; n < 80; ++n) {
    power_over_factorial *= x / Scalar(n);
    two_pow *= Scalar(2);
    const Scalar sign = (n % 2 == 1) ? Scalar(1) : Scalar(-1);
    const Scalar term = sign * (two_pow - Scalar(2)) * power_over_factorial;
    sum += term;
    if (std::abs(term) <= std::numeric_limits<Scalar>::epsilon() * std::abs(sum) * Scalar(0.25)) break;
  }
  return sum;
}

template <typename Scalar>
Scalar cross_covariance_core(Scalar x) {
  if (x >= Scalar(0.5)) return -std::expm1(-x) + std::expm1(-Scalar(2) * x) / Scalar(2);
  Scalar sum = 0;
  Scalar power_over_factorial = x;  // n = 1
  Scalar two_pow = 1;
  for (int n = 2; n < 80; ++n) {
    power_over_factorial *= x / Scalar(n);
    two_pow *= Scalar(2);
    const Scalar sign = (n % 2 == 1) ? Scalar(1) : Scalar(-1);
    const Scalar term = sign * (Scalar(1) - two_pow) * power_over_factorial;
    sum += term;
    if (std::abs(term) <= std::numeric_limits<Scalar>::epsilon() * std::abs(sum) * Scalar(0.25)) break;
  }
  return sum;
}

}  // namespace detail

/// Σ_AA, Σ_AB, Σ_BB at time t (Itō isometry applied to the explicit solution).
template <typename Scalar>
TransitionCovariance<Scalar> covariance(Scalar t, const ModelParams<Scalar>& p) {
  p.validate();
  if (!(t >= Scalar(0)) || !std::isfinite(t)) throw ParameterError("covariance requires t >= 0");
  const Scalar lam = p.lambda;
  const Scalar x = lam * t;
  TransitionCovariance<Scalar> c;
  c.t = t;
  c.s_aa = detail::position_variance_core(x) / (lam * lam * lam);
  c.s_ab = detail::cross_covariance_core(x) / (lam * lam);
  c.s_bb = -std::expm1(-Scalar(2) * x) / (Scalar(2) * lam);
  return c;
}

/// Variance of A_t given B_t; independent of the conditioning value.
template <typename Scalar>
Scalar conditional_variance(const TransitionCovariance<Scalar>& c) {
  if (!(c.s_bb > Scalar(0))) throw DegenerateConditioningError("cannot condition on B at t = 0");
  const Scalar var = c.s_aa - c.s_ab * c.s_ab / c.s_bb;
  return var > Scalar(0) ? var : Scalar(0);
}

/// Law of A_t given B_t = b: mean Σ_AB Σ_BB^{-1} b, variance Σ_AA - Σ_AB² Σ_BB^{-1}.
template <typename Scalar>
ConditionalGaussian<Scalar> conditional_a_given_b(Scalar t, Scalar b, const ModelParams<Scalar>& p) {
  if (!(t > Scalar(0))) throw DegenerateConditioningError("conditioning on B requires t > 0");
  const auto c = covariance(t, p);
  return {c.s_ab / c.s_bb * b, conditional_variance(c)};
}

/// Lower-triangular square root of a 2x2 PSD matrix. Falls back to the
/// symmetric eigendecomposition when a Cholesky pivot is below 1e-14.
template <typename Scalar>
Matrix2<Scalar> psd_factor(const Matrix2<Scalar>& m) {
  constexpr Scalar kPivotFloor = Scalar(1e-14);
  Eigen::LLT<Matrix2<Scalar>> llt(m);
  if (llt.info() == Eigen::Success) {
    Matrix2<Scalar> l = llt.matrixL();
    if (l(0, 0) >= kPivotFloor && l(1, 1) >= kPivotFloor) return l;
  }
  Eigen::SelfAdjointEigenSolver<Matrix2<Scalar>> eig(m);
  const Vector2<Scalar> roots = eig.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

/// Draws (A_t, B_t) for a fixed t; reusable across many samples.
template <typename Scalar>
class NoiseSampler {
 public:
  NoiseSampler(Scalar t, const ModelParams<Scalar>& p)
      : cov_(covariance(t, p)), factor_(psd_factor(cov_.matrix())) {}

  Vector2<Scalar> operator()(RandomStream& rng) const {
    Vector2<Scalar> z(static_cast<Scalar>(rng.normal()), static_cast<Scalar>(rng.normal()));
    return factor_ * z;
  }
  const TransitionCovariance<Scalar>& cov() const { return cov_; }

 private:
  TransitionCovariance<Scalar> cov_;
  Matrix2<Scalar> factor_;
};

/// Maps an initial point and a noise pair (A, B) to the state at time t.
template <typename Scalar>
PhasePoint<Scalar> propagate(const PhasePoint<Scalar>& p0, Scalar t, const ModelParams<Scalar>& p,
                             const Vector2<Scalar>& noise) {
  const Scalar lam = p.lambda;
  const Scalar drift = -std::expm1(-lam * t) / lam;
  return {wrap(p0.x + drift * p0.v + noise(0), p.L), std::exp(-lam * t) * p0.v + noise(1)};
}

/// Exact draw from the time-t transition law; no time stepping.
template <typename Scalar>
PhasePoint<Scalar> sample_transition(const PhasePoint<Scalar>& p0, Scalar t, const ModelParams<Scalar>& p,
                                     RandomStream& rng) {
  p.validate();
  if (!(t >= Scalar(0))) throw ParameterError("sample_transition requires t >= 0");
  if (t == Scalar(0)) return p0;
  return propagate(p0, t, p, NoiseSampler<Scalar>(t, p)(rng));
}

/// Drift-corrected position Y = X + V/λ, a Brownian motion of rate 1/λ².
template <typename Scalar>
Scalar drift_corrected(const PhasePoint<Scalar>& pt, const ModelParams<Scalar>& p) {
  p.validate();
  return wrap(pt.x + pt.v / p.lambda, p.L);
}

/// Covariance of (W_{t+h} - W_t, B-part of V over the step) for one step of
/// length h: [[h, (1 - e^{-λh})/λ], [., Σ_BB(h)]].
template <typename Scalar>
Matrix2<Scalar> increment_covariance(Scalar h, const ModelParams<Scalar>& p) {
  const Scalar lam = p.lambda;
  Matrix2<Scalar> m;
  const Scalar cross = -std::expm1(-lam * h) / lam;
  m << h, cross, cross, -std::expm1(-Scalar(2) * lam * h) / (Scalar(2) * lam);
  return m;
}

using ModelParamsd = ModelParams<double>;
using PhasePointd = PhasePoint<double>;
using TransitionCovarianced = TransitionCovariance<double>;

}  // namespace kfp
