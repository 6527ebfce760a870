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

#include "kfp/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace kfp {

ResidualDensity::ResidualDensity(WrappedGaussian<double> g, double beta, double L)
    : g_(g), beta_(beta), L_(L), uniform_level_(beta / torus_period(L)) {
  require_positive_scale(L);
  if (!(g.sigma2 > 0)) throw ParameterError("residual density needs positive variance");
  if (!(beta >= 0 && beta < 1)) throw ParameterError("residual density needs beta in [0, 1)");
}

double ResidualDensity::pdf(double x) const {
  return (wrapped_pdf(g_, x, L_) - uniform_level_) / (1.0 - beta_);
}

double ResidualDensity::sample(RandomStream& rng) const {
  const double sd = std::sqrt(g_.sigma2);
  for (;;) {
    const double a = wrap(g_.center + sd * rng.normal(), L_);
    if (beta_ == 0.0) return a;
    const double accept = 1.0 - uniform_level_ / wrapped_pdf(g_, a, L_);
    if (rng.uniform() < accept) return a;
  }
}

double mixture_beta(double t, const ModelParamsd& p) {
  if (!(t > 0)) return 0.0;
  return spreading_beta(conditional_variance(covariance(t, p)), p.L);
}

double residual_sampler(double t, double b, const ModelParamsd& p, RandomStream& rng) {
  const auto cond = conditional_a_given_b(t, b, p);
  const double beta = cond.var > 0 ? spreading_beta(cond.var, p.L) : 0.0;
  if (!(beta > 0)) throw SpreadingUnavailableError("no uniform component at this t; choose a larger t");
  return ResidualDensity({wrap(cond.mean, p.L), cond.var}, beta, p.L).sample(rng);
}

CoupledPair mixture_coupling(const CoupledPair& pair0, double t, const ModelParamsd& p, RandomStream& rng) {
  p.validate();
  if (!(t > 0)) throw SpreadingUnavailableError("mixture coupling needs t > 0");
  const auto cov = covariance(t, p);
  const double cond_var = conditional_variance(cov);
  const double beta = cond_var > 0 ? spreading_beta(cond_var, p.L) : 0.0;
  if (!(beta > 0)) throw SpreadingUnavailableError("no uniform component at this t; choose a larger t");

  const double b = std::sqrt(cov.s_bb) * rng.normal();
  const double selector = rng.uniform();
  const double decay = std::exp(-p.lambda * t);
  const double drift = -std::expm1(-p.lambda * t) / p.lambda;

  CoupledPair out;
  out.p1.v = decay * pair0.p1.v + b;
  out.p2.v = decay * pair0.p2.v + b;
  if (selector <= beta) {
    // A^i = U - (free motion of particle i), so both land on U.
    const double u = torus_period(p.L) * rng.uniform();
    out.p1.x = u;
    out.p2.x = u;
  } else {
    const ResidualDensity residual({wrap(cov.s_ab / cov.s_bb * b, p.L), cond_var}, beta, p.L);
    const double s = residual.sample(rng);
    out.p1.x = wrap(pair0.p1.x + drift * pair0.p1.v + s, p.L);
    out.p2.x = wrap(pair0.p2.x + drift * pair0.p2.v + s, p.L);
  }
  return out;
}

CoupledPair synchronous_coupling(const CoupledPair& pair0, double t, const ModelParamsd& p, RandomStream& rng) {
  p.validate();
  if (!(t >= 0)) throw ParameterError("synchronous coupling requires t >= 0");
  if (t == 0) return pair0;
  const auto noise = NoiseSampler<double>(t, p)(rng);
  return {propagate(pair0.p1, t, p, noise), propagate(pair0.p2, t, p, noise)};
}

CouplingPathState initial_path_state(const CoupledPair& pair0, const ModelParamsd& p) {
  CouplingPathState s;
  s.y1 = drift_corrected(pair0.p1, p);
  s.y2 = drift_corrected(pair0.p2, p);
  s.v1 = pair0.p1.v;
  s.v2 = pair0.p2.v;
  double m = wrap(s.y1 - s.y2, p.L);
  if (m > kPi<double> * p.L) {
    std::swap(s.y1, s.y2);
    std::swap(s.v1, s.v2);
    m = wrap(s.y1 - s.y2, p.L);
  }
  s.m_lift = m;
  if (m == 0.0) {
    s.merged = true;
    s.t_hit = 0.0;
    s.y2 = s.y1;
  }
  return s;
}

BoundaryCrossing detect_boundary_crossing(double m, double m_new, double step_var, double period,
                                          RandomStream& rng) {
  BoundaryCrossing c;
  if (m_new <= 0.0) {
    c.crossed = true;
    c.fraction = m / (m - m_new);
    c.boundary = 0.0;
    return c;
  }
  if (m_new >= period) {
    c.crossed = true;
    c.fraction = (period - m) / (m_new - m);
    c.boundary = period;
    return c;
  }
  // Both endpoints inside: a Brownian bridge between them still touches a
  // boundary at distance a, b from the endpoints with probability e^{-2ab/σ²h}.
  const double low_exponent = -2.0 * m * m_new / step_var;
  const double high_exponent = -2.0 * (period - m) * (period - m_new) / step_var;
  constexpr double kNegligible = -40.0;
  if (low_exponent < kNegligible && high_exponent < kNegligible) return c;
  const double p_low = std::exp(low_exponent);
  const double p_high = std::exp(high_exponent);
  if (rng.uniform() < p_low + p_high - p_low * p_high) {
    c.crossed = true;
    c.fraction = 0.5;
    c.boundary = p_low >= p_high ? 0.0 : period;
  }
  return c;
}

double default_step(const ModelParamsd& p) {
  return 1e-3 * std::min(1.0, p.lambda * p.lambda * p.L * p.L);
}

ReflectionCoupler::ReflectionCoupler(double h, const ModelParamsd& p) : p_(p), h_(h) {
  p.validate();
  if (!(h > 0) || !std::isfinite(h)) throw ParameterError("step size must be positive");
  decay_ = std::exp(-p.lambda * h);
  factor_ = psd_factor(increment_covariance(h, p));
}

// Noise accrued over [0, tau] of a step whose totals (ΔW, ΔB) are known and
// whose Brownian part is pinned at W_tau = w_tau (the hitting level). B_tau is
// drawn from its Gaussian law given (W_tau, ΔW, ΔB); with D = diag(1, e^{-λ(h-tau)})
// the totals are D·(W_tau, B_tau) plus an independent remainder.
Vector2<double> ReflectionCoupler::split_at(double tau, double w_tau, const Vector2<double>& total,
                                            RandomStream& rng) const {
  const double rest = h_ - tau;
  if (tau <= 1e-15 * h_) return Vector2<double>::Zero();
  if (rest <= 1e-15 * h_) return total;
  const Matrix2<double> first = increment_covariance(tau, p_);
  const Matrix2<double> second = increment_covariance(rest, p_);
  const double rest_decay = std::exp(-p_.lambda * rest);
  const Eigen::DiagonalMatrix<double, 2> d(1.0, rest_decay);

  // Joint covariance of (W_tau, ΔW, ΔB) and their covariance with B_tau.
  Eigen::Matrix3d given;
  given(0, 0) = first(0, 0);
  given.block<1, 2>(0, 1) = (first * d).row(0);
  given.block<2, 1>(1, 0) = given.block<1, 2>(0, 1).transpose();
  given.block<2, 2>(1, 1) = d * first * d + Matrix2<double>(second);
  Eigen::RowVector3d cross;
  cross(0) = first(1, 0);
  cross.tail<2>() = (first * d).row(1);

  const Eigen::Vector3d observed(w_tau, total(0), total(1));
  const Eigen::LDLT<Eigen::Matrix3d> solver(given);
  const double mean = cross * solver.solve(observed);
  const double var = std::max(0.0, first(1, 1) - cross * solver.solve(cross.transpose()));
  return {w_tau, mean + std::sqrt(var) * rng.normal()};
}

void ReflectionCoupler::step(CouplingPathState& s, RandomStream& rng) const {
  const Vector2<double> inc = factor_ * Vector2<double>(rng.normal(), rng.normal());
  const double lam = p_.lambda;
  const double dy = inc(0) / lam;

  s.y1 = wrap(s.y1 + dy, p_.L);
  const double v1_new = decay_ * s.v1 + inc(1);

  if (s.merged) {
    s.y2 = s.y1;
    s.v1 = v1_new;
    s.v2 = decay_ * s.v2 + inc(1);
    s.t += h_;
    return;
  }

  const double period = torus_period(p_.L);
  const double m_new = s.m_lift + 2.0 * dy;
  const auto crossing = detect_boundary_crossing(s.m_lift, m_new, 4.0 * h_ / (lam * lam), period, rng);
  if (!crossing.crossed) {
    s.y2 = wrap(s.y2 - dy, p_.L);
    s.v1 = v1_new;
    s.v2 = decay_ * s.v2 - inc(1);
    s.m_lift = m_new;
    s.t += h_;
    return;
  }

  // Reflected on [0, tau], synchronised on [tau, h]. At tau the separation sits
  // on the boundary, which fixes the Brownian increment accrued so far.
  const double tau = crossing.fraction * h_;
  const double w_tau = lam * (crossing.boundary - s.m_lift) / 2.0;
  const Vector2<double> first = split_at(tau, w_tau, inc, rng);
  const double rest_decay = std::exp(-lam * (h_ - tau));
  const Vector2<double> second = inc - Vector2<double>(first(0), rest_decay * first(1));
  s.v2 = decay_ * s.v2 - rest_decay * first(1) + second(1);
  s.v1 = v1_new;
  s.y2 = s.y1;
  s.merged = true;
  s.t_hit = s.t + tau;
  s.m_lift = crossing.boundary;
  s.t += h_;
}

CouplingPathState reflection_coupling_step(const CouplingPathState& s, double h, const ModelParamsd& p,
                                           RandomStream& rng) {
  CouplingPathState next = s;
  ReflectionCoupler(h, p).step(next, rng);
  return next;
}

std::vector<CouplingPathState> run_reflection_coupling(const CoupledPair& pair0, double t_end, double h,
                                                       const ModelParamsd& p, RandomStream& rng) {
  if (!(t_end > 0)) throw ParameterError("t_end must be positive");
  if (!(h > 0)) throw ParameterError("step size must be positive");
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
  const ReflectionCoupler coupler(t_end / static_cast<double>(n_steps), p);
  std::vector<CouplingPathState> path;
  path.reserve(n_steps + 1);
  path.push_back(initial_path_state(pair0, p));
  for (std::size_t k = 0; k < n_steps; ++k) {
    CouplingPathState next = path.back();
    coupler.step(next, rng);
    path.push_back(next);
  }
  return path;
}

void simulate_reflection_coupling(const CoupledPair& pair0, const std::vector<double>& record_times,
                                  double h, const ModelParamsd& p, RandomStream& rng,
                                  const std::function<void(std::size_t, const CouplingPathState&)>& record) {
  if (!(h > 0)) throw ParameterError("step size must be positive");
  CouplingPathState s = initial_path_state(pair0, p);
  double now = 0.0;
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    const double target = record_times[i];
    if (target < now) throw ParameterError("record times must be increasing");
    const double span = target - now;
    if (span > 0) {
      const auto n_steps = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
      const ReflectionCoupler coupler(span / static_cast<double>(n_steps), p);
      for (std::size_t k = 0; k < n_steps; ++k) coupler.step(s, rng);
      s.t = target;
    }
    now = target;
    record(i, s);
  }
}

BrownianPairStepper::BrownianPairStepper(BrownianCoupling mode, double rate, double L)
    : mode_(mode), rate_(rate), L_(L) {
  require_positive_scale(L);
  if (!(rate > 0)) throw ParameterError("Brownian rate must be positive");
}

void BrownianPairStepper::step(BrownianPairState& s, double h, RandomStream& rng) const {
  if (!(h > 0)) throw ParameterError("step size must be positive");
  const double sd = std::sqrt(rate_ * h);
  const double dw1 = sd * rng.normal();
  switch (mode_) {
    case BrownianCoupling::synchronous:
      s.w1 += dw1;
      s.w2 += dw1;
      break;
    case BrownianCoupling::independent: {
      const double dw2 = sd * rng.normal();
      const double before = s.diff();
      s.w1 += dw1;
      s.w2 += dw2;
      const double change = s.diff() - before;
      s.qv += change * change;
      break;
    }
    case BrownianCoupling::reflection: {
      if (s.merged) {
        s.w1 += dw1;
        s.w2 += dw1;
        break;
      }
      const double period = torus_period(L_);
      const double d = s.diff();
      const double base = period * std::floor(d / period);
      const double m = d - base;
      const double m_new = m + 2.0 * dw1;
      const auto crossing = detect_boundary_crossing(m, m_new, 4.0 * rate_ * h, period, rng);
      if (!crossing.crossed) {
        s.w1 += dw1;
        s.w2 -= dw1;
        s.qv += 4.0 * dw1 * dw1;
        break;
      }
      // Freeze the difference exactly at the boundary it reached.
      const double moved = crossing.boundary - m;
      s.w1 += dw1;
      s.w2 = s.w1 - (base + crossing.boundary);
      s.qv += moved * moved;
      s.merged = true;
      s.t_hit = s.t + crossing.fraction * h;
      break;
    }
  }
  s.t += h;
}

}  // namespace kfp
