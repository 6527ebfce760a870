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

// Law of the merging time T of the reflection coupling and the resulting
// second-moment envelopes. Before T, M = Y¹ - Y² is a Brownian motion of
// variance rate 4/λ² on (0, 2πL), so T is its exit time from that interval.

#include "kfp/kernel.hpp"

namespace kfp {

/// P(T > t | M_0 = m0) for m0 ∈ [0, 2πL]:
///   (4/π) Σ_k (2k+1)^{-1} exp(-(2k+1)² t / 2λ²L²) sin((2k+1) m0 / 2L).
/// For t < 2λ²L² the equivalent method-of-images sum is used instead.
double stopping_time_tail(double t, double m0, const ModelParamsd& p, double tol = 1e-12);

/// The eigen-series alone, without the small-t switch. Exposed for tests.
double stopping_time_tail_series(double t, double m0, const ModelParamsd& p, double tol = 1e-12);
/// The image sum alone, without the switch. Exposed for tests.
double stopping_time_tail_images(double t, double m0, const ModelParamsd& p);

/// C in P(T > t | M_0) ≤ C |M_0|_T (1 + t^{-1/2}) e^{-t/2λ²L²}:
/// (2/πL) · max(1, sqrt(πλ²L²/8)).
double stopping_time_tail_constant(const ModelParamsd& p);

/// Upper bound C |m0|_T (1 + t^{-1/2}) e^{-t/2λ²L²}; throws for t ≤ 0.
double stopping_time_tail_bound(double t, double m0, const ModelParamsd& p);

enum class DecayRegime {
  velocity_limited,  ///< 2λ < 1/(2λ²L²): rate 2λ
  critical,          ///< 4L²λ³ = 1: (1 + t) e^{-2λt}
  spatial_limited,   ///< 2λ > 1/(2λ²L²): rate 1/(2λ²L²)
};

DecayRegime decay_regime(const ModelParamsd& p);

/// r(t) in the second-moment envelope for the current regime.
double second_moment_rate_term(double t, const ModelParamsd& p);

/// |z0|² e^{-2λt} + C |m0| r(t).
double second_moment_bound(double t, double z0, double m0, double C, const ModelParamsd& p);

/// E|Z_t|² solving d/dt E|Z|² = -2λ E|Z|² + k P(t ≤ T) with E|Z_0|² = z0²,
/// i.e. z0² e^{-2λt} + k ∫_0^t e^{-2λ(t-s)} P(T ≥ s) ds, by adaptive quadrature.
/// Itō's formula for dZ = -λZ dt + 2 dW gives k = 4.
double velocity_second_moment(double t, double z0, double m0, const ModelParamsd& p, double source_coefficient);

}  // namespace kfp
