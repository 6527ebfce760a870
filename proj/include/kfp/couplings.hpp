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

// Couplings of two kinetic Fokker-Planck particles.
//
//  * mixture_coupling: one-shot coupling at a fixed time t that shares a
//    uniform torus draw with probability β and a residual draw otherwise.
//  * reflection coupling: co-adapted construction in drift-corrected
//    coordinates Y = X + V/λ. Particle 2 is driven by -dW until Y¹ = Y² on
//    the torus, then by +dW (synchronisation).
//  * synchronous_coupling: both particles share the same noise.

#include <functional>
#include <optional>
#include <vector>

#include "kfp/kernel.hpp"
#include "kfp/random.hpp"
#include "kfp/torus.hpp"

namespace kfp {

struct CoupledPair {
  PhasePointd p1;
  PhasePointd p2;
};

/// Residual density s = (Qg - β/2πL) / (1 - β) left after removing the
/// guaranteed uniform part of a wrapped Gaussian. β = 0 gives Qg itself.
class ResidualDensity {
 public:
  ResidualDensity(WrappedGaussian<double> g, double beta, double L);

  double pdf(double x) const;
  /// Rejection sampling: propose from Qg, accept with 1 - β / (2πL Qg(a)).
  double sample(RandomStream& rng) const;

  double beta() const { return beta_; }
  const WrappedGaussian<double>& gaussian() const { return g_; }

 private:
  WrappedGaussian<double> g_;
  double beta_;
  double L_;
  double uniform_level_;
};

/// β for the wrapped conditional law of A_t given B_t (independent of B_t).
double mixture_beta(double t, const ModelParamsd& p);

/// Draw from s(t, ., b). Throws SpreadingUnavailableError when β ≤ 0.
double residual_sampler(double t, double b, const ModelParamsd& p, RandomStream& rng);

/// One-shot mixture coupling between the time-t laws started at pair0.p1 and
/// pair0.p2. Throws SpreadingUnavailableError when β(t) ≤ 0.
CoupledPair mixture_coupling(const CoupledPair& pair0, double t, const ModelParamsd& p, RandomStream& rng);

/// Both particles driven by one shared (A_t, B_t) draw.
CoupledPair synchronous_coupling(const CoupledPair& pair0, double t, const ModelParamsd& p, RandomStream& rng);

/// State of the reflection/synchronisation coupling in (Y, V) coordinates.
struct CouplingPathState {
  double t = 0;
  double y1 = 0;
  double y2 = 0;
  double v1 = 0;
  double v2 = 0;
  bool merged = false;
  std::optional<double> t_hit;
  /// Y¹ - Y² on the lift, in [0, 2πL]; frozen at the hit boundary (0 or 2πL)
  /// once merged.
  double m_lift = 0;

  double z() const { return v1 - v2; }
};

/// Initial coupling state; particles are relabelled so that M_0 ∈ [0, πL].
CouplingPathState initial_path_state(const CoupledPair& pair0, const ModelParamsd& p);

struct BoundaryCrossing {
  bool crossed = false;
  double fraction = 1;   ///< position of the crossing inside the step, in [0, 1]
  double boundary = 0;   ///< 0 or the period
};

/// Detects whether a Brownian difference with per-step variance step_var left
/// (0, period) between the endpoints m and m_new: by a sign change on the lift,
/// otherwise by the Brownian-bridge crossing probability of each boundary.
BoundaryCrossing detect_boundary_crossing(double m, double m_new, double step_var, double period,
                                          RandomStream& rng);

/// Stepper for the reflection/synchronisation coupling with fixed step h.
class ReflectionCoupler {
 public:
  ReflectionCoupler(double h, const ModelParamsd& p);

  /// Advances by one step of length h; per-step increments are drawn from the
  /// exact Gaussian one-step law of (ΔW, ΔV-noise).
  void step(CouplingPathState& s, RandomStream& rng) const;

  double h() const { return h_; }

 private:
  Vector2<double> split_at(double tau, double w_tau, const Vector2<double>& total, RandomStream& rng) const;

  ModelParamsd p_;
  double h_;
  double decay_;
  Matrix2<double> factor_;
};

CouplingPathState reflection_coupling_step(const CouplingPathState& s, double h, const ModelParamsd& p,
                                           RandomStream& rng);

/// Runs the coupling from pair0 to t_end and returns every step's state,
/// starting with the initial one.
std::vector<CouplingPathState> run_reflection_coupling(const CoupledPair& pair0, double t_end, double h,
                                                       const ModelParamsd& p, RandomStream& rng);

/// As run_reflection_coupling but reports the state only at the given
/// increasing times (each hit exactly by shortening steps), via callback.
void simulate_reflection_coupling(const CoupledPair& pair0, const std::vector<double>& record_times,
                                  double h, const ModelParamsd& p, RandomStream& rng,
                                  const std::function<void(std::size_t, const CouplingPathState&)>& record);

/// Default step 1e-3 · min(1, λ²L²).
double default_step(const ModelParamsd& p);

// --- Two Brownian motions on the torus ------------------------------------

enum class BrownianCoupling { reflection, synchronous, independent };

struct BrownianPairState {
  double t = 0;
  double w1 = 0;  ///< lifted positions
  double w2 = 0;
  double qv = 0;  ///< realised quadratic variation of w1 - w2
  bool merged = false;
  std::optional<double> t_hit;

  double diff() const { return w1 - w2; }
};

/// Two Brownian motions of variance rate `rate` on the torus of scale L.
/// Under reflection, the difference is absorbed on first reaching a multiple
/// of 2πL (it is then frozen at that boundary).
class BrownianPairStepper {
 public:
  BrownianPairStepper(BrownianCoupling mode, double rate, double L);

  void step(BrownianPairState& s, double h, RandomStream& rng) const;

 private:
  BrownianCoupling mode_;
  double rate_;
  double L_;
};

}  // namespace kfp
