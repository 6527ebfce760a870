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

// Acceptance suite: one check per criterion, selected with --criterion N
// (all of them when no argument is given). Prints one PASS/FAIL line per
// criterion plus indented detail lines; exits non-zero if any check failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kfp/config.hpp"
#include "kfp/couplings.hpp"
#include "kfp/csv.hpp"
#include "kfp/errors.hpp"
#include "kfp/experiments.hpp"
#include "kfp/kernel.hpp"
#include "kfp/stats.hpp"
#include "kfp/stopping_time.hpp"
#include "kfp/torus.hpp"
#include "kfp/wasserstein.hpp"

namespace {

using kfp::ExperimentConfig;
using kfp::ExperimentKind;
using kfp::ModelParamsd;
using nlohmann::json;

constexpr double kPi = kfp::kPi<double>;

struct Report {
  bool pass = true;
  void check(bool ok, const std::string& what) {
    std::printf("    [%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
    pass = pass && ok;
  }
  void info(const std::string& what) { std::printf("    info: %s\n", what.c_str()); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig config(ExperimentKind kind, json j) {
  j["experiment"] = std::string(kfp::experiment_name(kind));
  return kfp::parse_config(j);
}

std::size_t g_workers = 0;

kfp::ExperimentOutput run(ExperimentConfig cfg) {
  cfg.workers = g_workers;
  return kfp::run_experiment(cfg);
}

// 1. Closed-form noise covariance against Euler-Maruyama.
void kernel_exactness(Report& r) {
  for (double lambda : {0.25, 1.0, 4.0}) {
    const auto out = run(config(ExperimentKind::kernel_check,
                                {{"params", {{"lambda", lambda}, {"L", 1.0}}},
                                 {"t_grid", {0.1, 1.0, 5.0}},
                                 {"n_trials", 100000},
                                 {"n_samples", 10000},
                                 {"h", 1e-3},
                                 {"seed", 101}}));
    for (std::size_t k = 0; k < out.table.rows(); ++k) {
      for (const char* name : {"S_AA", "S_AB", "S_BB"}) {
        const std::string n(name);
        const double exact = out.table.at(k, n), mc = out.table.at(k, n + "_mc"), se = out.table.at(k, n + "_se");
        r.check(std::abs(mc - exact) <= 3 * se, fmt("lambda=%g t=%g %s: closed %.6g, EM %.6g, |diff|/SE %.2f", lambda,
                                                     out.table.at(k, "t"), name, exact, mc, std::abs(mc - exact) / se));
      }
    }
    const double ratio = kfp::covariance(10.0, ModelParamsd{lambda, 1.0}).s_aa / (10.0 / (lambda * lambda));
    r.check(ratio >= 0.8 && ratio <= 1.0, fmt("lambda=%g: S_AA(10)/(10/lambda^2) = %.4f in [0.8, 1]", lambda, ratio));
  }
}

// 2. Uniform component of the wrapped Gaussian.
void spreading(Report& r) {
  const double L = 1.0;
  for (double s2 : {1.0, 4.0, 8.0}) {
    const double beta = kfp::spreading_beta(s2 * L * L, L);
    const kfp::WrappedGaussian<double> g{0.0, s2 * L * L};
    const int n = 10000;
    double min_pdf = std::numeric_limits<double>::infinity(), sum = 0;
    for (int i = 0; i < n; ++i) {
      const double v = kfp::wrapped_pdf(g, kfp::torus_period(L) * i / n, L);
      min_pdf = std::min(min_pdf, v);
      sum += v;
    }
    const double mass = sum * kfp::torus_period(L) / n;
    r.check(min_pdf >= beta / kfp::torus_period(L),
            fmt("sigma2=%g: min Qh = %.6g >= beta/(2 pi L) = %.6g (beta = %.6g)", s2, min_pdf,
                beta / kfp::torus_period(L), beta));
    r.check(std::abs(mass - 1) <= 1e-10, fmt("sigma2=%g: |integral - 1| = %.2e", s2, std::abs(mass - 1)));
  }
}

// CDF of a wrapped normal on [0, 2πL).
double wrapped_normal_cdf(double x, double center, double sigma2, double L) {
  const double period = kfp::torus_period(L), sd = std::sqrt(sigma2);
  double sum = 0;
  for (int n = -60; n <= 60; ++n)
    sum += kfp::normal_cdf((x - center + n * period) / sd) - kfp::normal_cdf((-center + n * period) / sd);
  return sum;
}

// 3. Mixture coupling: velocity identity, exact marginals, spatial bound.
void mixture_coupling(Report& r) {
  const ModelParamsd p{1.0, 1.0};
  const kfp::CoupledPair pair0{{0.0, 0.5}, {kPi, -0.3}};
  const double dx0 = kfp::torus_dist(pair0.p1.x, pair0.p2.x, p.L), dv0 = pair0.p1.v - pair0.p2.v;
  for (double t : {5.0, 8.0}) {
    const int n = 10000;
    const double beta = kfp::mixture_beta(t, p);
    const double decay = std::exp(-p.lambda * t);
    double worst = 0;
    std::vector<double> x1, x2, v1, v2;
    kfp::Moments dx2;
    for (int i = 0; i < n; ++i) {
      kfp::RandomStream rng = kfp::RandomStream::derive(303, static_cast<std::uint64_t>(t), i);
      const auto out = kfp::mixture_coupling(pair0, t, p, rng);
      worst = std::max(worst, std::abs((out.p1.v - out.p2.v) - decay * dv0));
      x1.push_back(out.p1.x);
      x2.push_back(out.p2.x);
      v1.push_back(out.p1.v);
      v2.push_back(out.p2.v);
      const double d = kfp::torus_dist(out.p1.x, out.p2.x, p.L);
      dx2.add(d * d);
    }
    r.check(worst <= 1e-14, fmt("t=%g (a): max |dV_t - e^{-lambda t} dV_0| = %.2e over %d samples", t, worst, n));
    const auto cov = kfp::covariance(t, p);
    const double drift = -std::expm1(-p.lambda * t) / p.lambda;
    const double c1 = kfp::wrap(pair0.p1.x + drift * pair0.p1.v, p.L), c2 = kfp::wrap(pair0.p2.x + drift * pair0.p2.v, p.L);
    const double sd = std::sqrt(cov.s_bb);
    const auto ks_x1 = kfp::ks_one_sample(x1, [&](double x) { return wrapped_normal_cdf(x, c1, cov.s_aa, p.L); });
    const auto ks_x2 = kfp::ks_one_sample(x2, [&](double x) { return wrapped_normal_cdf(x, c2, cov.s_aa, p.L); });
    const auto ks_v1 = kfp::ks_one_sample(v1, [&](double v) { return kfp::normal_cdf((v - decay * pair0.p1.v) / sd); });
    const auto ks_v2 = kfp::ks_one_sample(v2, [&](double v) { return kfp::normal_cdf((v - decay * pair0.p2.v) / sd); });
    r.check(std::min({ks_x1.p_value, ks_x2.p_value, ks_v1.p_value, ks_v2.p_value}) > 0.01,
            fmt("t=%g (b): KS p-values x1 %.3f, x2 %.3f, v1 %.3f, v2 %.3f", t, ks_x1.p_value, ks_x2.p_value,
                ks_v1.p_value, ks_v2.p_value));
    const double bound = 2 * (1 - beta) * (dx0 * dx0 + dv0 * dv0 / (p.lambda * p.lambda));
    r.check(dx2.mean() + 3 * dx2.std_error() <= bound,
            fmt("t=%g (c): E|dX|^2 + 3SE = %.5f <= 2(1-beta)(...) = %.5f (beta %.4f)", t,
                dx2.mean() + 3 * dx2.std_error(), bound, beta));
  }
}

// 4. Decay of the non-Markovian coupling.
void mixture_decay(Report& r) {
  json grid = {{"spacing", "log"}, {"start", 0.5}, {"stop", 20.0}, {"count", 25}, {"extra", {1.0}}};
  const auto out = run(config(ExperimentKind::mixture_decay, {{"params", {{"lambda", 1.0}, {"L", 1.0}}},
                                                              {"t_grid", grid},
                                                              {"n_samples", 2048},
                                                              {"calibration_t", 1.0},
                                                              {"seed", 404}}));
  const auto& s = out.summary;
  r.info(fmt("c_hat = %.6f fitted at t = %g", s["c_hat"].get<double>(), s["calibration_t"].get<double>()));
  std::vector<std::string> violations;
  std::vector<std::string> disagreements;
  for (std::size_t k = 0; k < out.table.rows(); ++k) {
    const double t = out.table.at(k, "t"), exact = out.table.at(k, "W2_exact"), bound = out.table.at(k, "bound");
    const double est = out.table.at(k, "W2_estimate");
    if (exact > bound) violations.push_back(fmt("t=%.3f (%.4f > %.4f)", t, exact, bound));
    if (t >= 5 && std::abs(exact - est) > 0.1 * est) disagreements.push_back(fmt("t=%.3f (%.4f vs %.4f)", t, exact, est));
  }
  const auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out.empty() ? std::string("none") : out;
  };
  r.check(violations.empty(), "exact-assignment W2 under (e^{-lambda t} + c_hat e^{-t/4 lambda^2 L^2}) pi; violations: " +
                                  join(violations));
  const auto& fit = s["fit_coupling"];
  if (fit.contains("rate")) {
    const double rate = fit["rate"].get<double>();
    r.check(std::abs(rate - 0.25) <= 0.15 * 0.25,
            fmt("fitted rate (coupling estimate, t in [%.2f, %.2f]) = %.4f, target 0.25 +- 15%%",
                fit["t_lo"].get<double>(), fit["t_hi"].get<double>(), rate));
  } else {
    r.check(false, "rate fit failed: " + fit["error"].get<std::string>());
  }
  if (s["fit_exact"].contains("rate"))
    r.info(fmt("rate fitted to the exact-assignment column = %.4f", s["fit_exact"]["rate"].get<double>()));
  r.check(disagreements.empty(), "exact W2 within 10% of the coupling estimate for t >= 5; misses: " + join(disagreements));
}

// 5. No uniform contraction rate.
void non_contraction(Report& r) {
  const auto start = std::chrono::steady_clock::now();
  const ModelParamsd p{1.0, 1.0};
  std::vector<double> grid = kfp::log_grid(1e-6, 0.1, 41);
  for (double gamma : {0.1, 1.0, 10.0}) {
    double witness = std::numeric_limits<double>::quiet_NaN();
    for (double t : grid) {
      try {
        if (kfp::non_contraction_bound(t, kPi, p) > std::exp(-gamma * t) * kPi) {
          witness = t;
          break;
        }
      } catch (const kfp::DomainError&) {
      }
    }
    r.check(!std::isnan(witness), fmt("gamma=%g: bound exceeds e^{-gamma t} pi first at t = %.3g", gamma, witness));
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.check(elapsed < 1.0, fmt("deterministic evaluation took %.4f s", elapsed));
  const auto out = run(config(ExperimentKind::non_contraction, {{"params", {{"lambda", 1.0}, {"L", 1.0}}},
                                                                {"t_grid", grid},
                                                                {"n_samples", 2048},
                                                                {"probe_t", 0.01},
                                                                {"seed", 505}}));
  const auto& s = out.summary;
  const double w = s["probe_w2"].get<double>(), se = s["probe_w2_se"].get<double>(), b = s["probe_bound"].get<double>();
  r.check(w >= b - 3 * se, fmt("t=0.01: empirical W2 %.6f (SE %.2e) >= bound %.6f - 3 SE", w, se, b));
}

// 6. Exit-time law.
void stopping_time(Report& r) {
  const ModelParamsd p{1.0, 1.0};
  const auto out = run(config(ExperimentKind::stopping_time, {{"params", {{"lambda", 1.0}, {"L", 1.0}}},
                                                              {"t_grid", {0.2, 1.0, 3.0}},
                                                              {"m0_grid", {kPi / 2, kPi, 1.5 * kPi}},
                                                              {"n_trials", 100000},
                                                              {"h", 1e-4},
                                                              {"seed", 606}}));
  for (std::size_t k = 0; k < out.table.rows(); ++k) {
    const double series = out.table.at(k, "series"), mc = out.table.at(k, "mc"), se = out.table.at(k, "mc_se");
    r.check(std::abs(series - mc) <= 3 * se, fmt("m0=%.4f t=%g: series %.5f, MC %.5f, |diff|/SE %.2f",
                                                 out.table.at(k, "m0"), out.table.at(k, "t"), series, mc,
                                                 std::abs(series - mc) / se));
  }
  std::size_t points = 0, dominated = 0;
  for (int i = 0; i <= 200; ++i) {
    const double t = 1e-3 * std::pow(2e4, i / 200.0);
    for (int j = 1; j < 100; ++j) {
      const double m0 = 2 * kPi * j / 100.0;
      ++points;
      dominated += kfp::stopping_time_tail_bound(t, m0, p) >= kfp::stopping_time_tail(t, m0, p);
    }
  }
  r.check(dominated == points, fmt("tail bound dominates the series on %zu of %zu grid points", dominated, points));
}

// 7. Second-moment decay of the co-adapted coupling.
void coadapted(Report& r) {
  const auto out = run(config(ExperimentKind::coadapted_decay, {{"params", {{"lambda", 1.0}, {"L", 1.0}}},
                                                                {"t_grid", {{"start", 0.25}, {"stop", 20.0}, {"count", 80}}},
                                                                {"n_trials", 10000},
                                                                {"seed", 707}}));
  const auto& s = out.summary;
  if (s["fit"].contains("rate")) {
    const double rate = s["fit"]["rate"].get<double>();
    r.check(std::abs(rate - 0.5) <= 0.15 * 0.5, fmt("fitted rate of E[|M|^2 + |Z|^2] = %.4f (t in [%.2f, %.2f]), target 0.5 +- 15%%",
                                                    rate, s["fit"]["t_lo"].get<double>(), s["fit"]["t_hi"].get<double>()));
  } else {
    r.check(false, "rate fit failed: " + s["fit"]["error"].get<std::string>());
  }
  const std::size_t n = out.table.rows();
  const std::size_t within = s["ode_within_3se"].get<std::size_t>();
  std::string first_miss = "none";
  for (std::size_t k = 0; k < n; ++k) {
    const double z2 = out.table.at(k, "Z2_mean"), ode = out.table.at(k, "Z2_ode"), se = out.table.at(k, "Z2_se");
    if (std::abs(z2 - ode) > 3 * se) {
      first_miss = fmt("t=%.2f: MC %.5f vs %.5f (SE %.5f)", out.table.at(k, "t"), z2, ode, se);
      break;
    }
  }
  r.check(within == n, fmt("E|Z|^2 vs moment equation with source 2 P(t <= T): %zu of %zu points within 3 SE; first miss %s",
                           within, n, first_miss.c_str()));
  r.info(fmt("same check with source 4 P(t <= T): %zu of %zu points within 3 SE", s["ode_ito_within_3se"].get<std::size_t>(), n));
  r.check(s["bound_dominates"].get<bool>(), fmt("calibrated envelope (C = %.4f) dominates the MC curve at every t",
                                                s["C"].get<double>()));
}

// 8. √z dependence of the integrated separation.
void sqrt_optimality(Report& r) {
  const auto out = run(config(ExperimentKind::sqrt_optimality,
                              {{"params", {{"lambda", 1.0}, {"L", 1.0}}},
                               {"t_grid", {{"start", 0.005}, {"stop", 25.0}, {"count", 5000}}},
                               {"z_grid", {kPi / 16, kPi / 8, kPi / 4, kPi / 2, kPi}},
                               {"n_trials", 10000},
                               {"seed", 808}}));
  const double slope = out.summary["loglog_slope"].get<double>();
  for (std::size_t k = 0; k < out.table.rows(); ++k)
    r.info(fmt("z=%.4f integral %.5f (SE %.5f) t_max %.2f", out.table.at(k, "z"), out.table.at(k, "integral_estimate"),
               out.table.at(k, "integral_se"), out.table.at(k, "t_max")));
  r.check(std::abs(slope - 1.0) <= 0.15, fmt("log-log slope %.4f, target 1.0 +- 0.15", slope));
  for (const auto& m : out.summary["optional_stopping"])
    r.check(m["within_3se"].get<bool>(), fmt("z=%.4f: E[M_{t^T}] = %.4f (SE %.4f)", m["z"].get<double>(),
                                             m["mean"].get<double>(), m["se"].get<double>()));
}

// 9. The sin-metric process along reflection-coupled Brownian motions.
void martingale(Report& r) {
  const auto out = run(config(ExperimentKind::martingale_h, {{"params", {{"lambda", 1.0}, {"L", 1.0}}},
                                                             {"t_grid", {{"start", 0.1}, {"stop", 3.0}, {"count", 30}}},
                                                             {"n_trials", 10000},
                                                             {"coupling", "reflection"},
                                                             {"z0", kPi / 2},
                                                             {"seed", 909}}));
  const auto& t = out.table;
  const double h0 = t.at(0, "E_H"), h20 = t.at(0, "E_H2");
  std::size_t mean_ok = 0, ito_ok = 0, jensen_ok = 0, floor_ok = 0;
  double worst = 0, worst_t = 0;
  for (std::size_t k = 0; k < t.rows(); ++k) {
    const double dev = std::abs(t.at(k, "E_H") - h0);
    if (dev <= 3 * t.at(k, "E_H_se")) ++mean_ok;
    if (dev / std::max(t.at(k, "E_H_se"), 1e-300) > worst && k > 0) {
      worst = dev / t.at(k, "E_H_se");
      worst_t = t.at(k, "t");
    }
    if (std::abs(t.at(k, "E_H_ito") - t.at(0, "E_H_ito")) <= 3 * t.at(k, "E_H_ito_se")) ++ito_ok;
    if (t.at(k, "E_H2") >= h20 - 3 * t.at(k, "E_H2_se")) ++jensen_ok;
    if (t.at(k, "E_dW2") >= t.at(k, "floor") - 3 * t.at(k, "E_dW2_se")) ++floor_ok;
  }
  const std::size_t n = t.rows();
  r.check(mean_ok == n, fmt("|E[H_t] - E[H_0]| <= 3 SE at %zu of %zu times; worst %.1f SE at t=%.1f (E[H_3] = %.4f vs %.4f)",
                            mean_ok, n, worst, worst_t, t.at(n - 1, "E_H"), h0));
  r.info(fmt("with exponent [D]/8L^2 instead: %zu of %zu times within 3 SE", ito_ok, n));
  r.check(jensen_ok == n, fmt("E[H_t^2] >= E[H_0^2] - 3 SE at %zu of %zu times", jensen_ok, n));
  r.check(floor_ok == n, fmt("E|dW_t|^2_T >= (4/pi^2) E|dW_0|^2_T e^{-2t/L^2} - 3 SE at %zu of %zu times", floor_ok, n));
}

// 10. Exact assignment solver.
void w2_solver(Report& r) {
  kfp::RandomStream rng(1010);
  const auto cloud = [&](int n) {
    kfp::EmpiricalMeasure m;
    for (int i = 0; i < n; ++i) m.points.push_back({rng.uniform() * 2 * kPi, rng.normal()});
    return m;
  };
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = cloud(5), b = cloud(5);
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0;
      for (int i = 0; i < 5; ++i) total += kfp::ground_cost(a.points[i], b.points[perm[i]], 1.0);
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst = std::max(worst, std::abs(kfp::w2(a, b, 1.0) - std::sqrt(best / 5)));
  }
  r.check(worst <= 1e-12, fmt("50 instances n=5: max |solver - brute force| = %.2e", worst));
  std::size_t ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = cloud(64), b = cloud(64), c = cloud(64);
    const double ab = kfp::w2(a, b, 1.0), ba = kfp::w2(b, a, 1.0), ac = kfp::w2(a, c, 1.0), cb = kfp::w2(c, b, 1.0);
    const double aa = kfp::w2(a, a, 1.0);
    ok += aa == 0.0 && ab > 0 && std::abs(ab - ba) <= 1e-12 && ab <= ac + cb + 1e-12;
  }
  r.check(ok == 100, fmt("metric axioms on %zu of 100 random triples (n=64)", ok));
}

// 11. Byte-identical output regardless of worker count.
void determinism(Report& r) {
  const json params = {{"lambda", 1.0}, {"L", 1.0}};
  const std::vector<std::pair<ExperimentKind, json>> cases = {
      {ExperimentKind::kernel_check, {{"t_grid", {0.0, 0.5, 2.0}}, {"n_trials", 2000}, {"n_samples", 5000}}},
      {ExperimentKind::mixture_decay, {{"t_grid", {0.5, 1.0, 5.0, 8.0}}, {"n_samples", 300}}},
      {ExperimentKind::coadapted_decay, {{"t_grid", {0.5, 1.0, 4.0}}, {"n_trials", 2000}}},
      {ExperimentKind::non_contraction, {{"t_grid", {1e-5, 1e-3, 0.05}}, {"n_samples", 300}}},
      {ExperimentKind::sqrt_optimality, {{"t_grid", {{"start", 0.01}, {"stop", 5.0}, {"count", 500}}}, {"n_trials", 1000}}},
      {ExperimentKind::stopping_time, {{"t_grid", {0.2, 1.0}}, {"n_trials", 2000}, {"h", 1e-3}}},
      {ExperimentKind::martingale_h, {{"t_grid", {0.5, 1.0}}, {"n_trials", 2000}, {"coupling", "independent"}}},
  };
  for (const auto& [kind, extra] : cases) {
    json j = extra;
    j["params"] = params;
    j["seed"] = 1111;
    auto cfg = config(kind, j);
    std::vector<std::string> rendered;
    for (std::size_t workers : {1, 1, 2, 4}) {
      cfg.workers = workers;
      const auto out = kfp::run_experiment(cfg);
      std::ostringstream s;
      kfp::write_csv(s, out.table, kfp::to_json(cfg), out.summary);
      rendered.push_back(s.str());
    }
    const bool same = std::all_of(rendered.begin(), rendered.end(), [&](const auto& x) { return x == rendered[0]; });
    r.check(same, fmt("%s: identical CSV bytes for repeated runs and 1, 2, 4 workers (%zu bytes)",
                      std::string(kfp::experiment_name(kind)).c_str(), rendered[0].size()));
  }
}

const std::vector<std::pair<const char*, std::function<void(Report&)>>> kCriteria = {
    {"kernel exactness", kernel_exactness},
    {"spreading estimate", spreading},
    {"mixture coupling", mixture_coupling},
    {"non-Markovian coupling decay", mixture_decay},
    {"non-contraction", non_contraction},
    {"stopping-time law", stopping_time},
    {"co-adapted second-moment decay", coadapted},
    {"sqrt(z) dependence", sqrt_optimality},
    {"sin-metric martingale", martingale},
    {"W2 solver", w2_solver},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kfp-lab acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  app.add_option("--workers", g_workers, "worker threads for the experiments (0: all cores)");
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only && static_cast<std::size_t>(only) != i + 1) continue;
    Report r;
    const auto start = std::chrono::steady_clock::now();
    try {
      kCriteria[i].second(r);
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu (%s): %s [%.1f s]\n", i + 1, kCriteria[i].first, r.pass ? "PASS" : "FAIL", secs);
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}
