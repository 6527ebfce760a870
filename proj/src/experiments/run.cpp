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

#include "kfp/experiments.hpp"

#include "kfp/errors.hpp"

namespace kfp {

std::vector<ColumnSpec> experiment_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kernel_check:
      return {
          {"t", "time"},
          {"S_AA", "closed-form position noise variance"},
          {"S_AA_mc", "Euler-Maruyama estimate of S_AA over n_trials paths"},
          {"S_AA_se", "standard error of S_AA_mc"},
          {"S_AB", "closed-form position-velocity noise covariance"},
          {"S_AB_mc", "Euler-Maruyama estimate of S_AB"},
          {"S_AB_se", "standard error of S_AB_mc"},
          {"S_BB", "closed-form velocity noise variance"},
          {"S_BB_mc", "Euler-Maruyama estimate of S_BB"},
          {"S_BB_se", "standard error of S_BB_mc"},
          {"slope", "closed-form conditional slope S_AB/S_BB"},
          {"slope_mc", "regression slope of A on B over n_samples exact draws"},
          {"slope_se", "standard error of slope_mc"},
          {"cond_var", "closed-form conditional variance S_AA - S_AB^2/S_BB"},
          {"cond_var_mc", "residual variance of the regression"},
          {"cond_var_se", "standard error of cond_var_mc"},
      };
    case ExperimentKind::mixture_decay:
      return {
          {"t", "time"},
          {"vacuous", "1 when the spreading fraction is zero and the synchronous coupling is used instead"},
          {"beta", "spreading fraction of the conditional position law"},
          {"W2_estimate", "sqrt of the mean coupling cost over n_samples coupled pairs (upper bound on W2)"},
          {"W2_estimate_se", "standard error of W2_estimate"},
          {"W2_exact", "exact-assignment W2 between the two marginal clouds"},
          {"W2_exact_se", "standard error of W2_exact from the matched costs"},
          {"bound", "(exp(-lambda t) + c_hat exp(-t/(4 lambda^2 L^2))) times the initial distance"},
          {"Z2_mean", "mean squared velocity difference"},
          {"X2_mean", "mean squared torus position difference"},
          {"X2_se", "standard error of X2_mean"},
          {"X2_bound", "2 (1 - beta) (|dx0|_T^2 + dv0^2/lambda^2)"},
      };
    case ExperimentKind::coadapted_decay:
      return {
          {"t", "time"},
          {"M2_mean", "mean squared torus distance of the drift-corrected positions"},
          {"M2_se", "standard error of M2_mean"},
          {"Z2_mean", "mean squared velocity difference"},
          {"Z2_se", "standard error of Z2_mean"},
          {"total", "M2_mean + Z2_mean"},
          {"total_se", "standard error of total"},
          {"survival", "fraction of paths not yet merged"},
          {"survival_se", "standard error of survival"},
          {"tail_exact", "P(T > t) from the exit-time series"},
          {"Z2_ode", "velocity second moment from the moment equation with source 2 P(T >= t)"},
          {"Z2_ode_ito", "velocity second moment from the moment equation with source 4 P(T >= t)"},
          {"M_stopped_mean", "mean lifted separation at t and T, whichever is first"},
          {"M_stopped_se", "standard error of M_stopped_mean"},
          {"bound", "second-moment envelope with the calibrated constant"},
      };
    case ExperimentKind::non_contraction:
      return {
          {"t", "time"},
          {"d", "half-width dist t^{3/2} of the transport intervals"},
          {"tail", "Gaussian position-noise mass outside [-d, d]"},
          {"bound", "lower bound on W2 at time t (nan when the intervals overlap)"},
          {"valid", "1 when the bound is defined"},
          {"gamma_threshold", "-log(bound/dist)/t; every contraction rate above it is violated"},
      };
    case ExperimentKind::sqrt_optimality:
      return {
          {"z", "initial torus separation"},
          {"integral_estimate", "trapezoid estimate of the time integral of E|W1 - W2|_T^2 up to t_max"},
          {"integral_se", "standard error of integral_estimate"},
          {"alpha_proxy", "sqrt(integral_estimate)"},
          {"t_max", "integration cut, first time after the peak with integrand below 1% of the peak"},
          {"peak", "largest mean integrand on the grid"},
          {"truncated", "1 when the integrand never fell below 1% of its peak"},
          {"M_stopped_mean", "mean lifted separation at the last grid time or the merging time"},
          {"M_stopped_se", "standard error of M_stopped_mean"},
      };
    case ExperimentKind::stopping_time:
      return {
          {"m0", "initial separation"},
          {"t", "time"},
          {"series", "P(T > t) from the exit-time series"},
          {"bound", "tail bound C |m0|_T (1 + t^{-1/2}) exp(-t/(2 lambda^2 L^2))"},
          {"mc", "Monte Carlo survival fraction"},
          {"mc_se", "standard error of mc"},
      };
    case ExperimentKind::martingale_h:
      return {
          {"t", "time"},
          {"E_H", "mean of L sin(D/2L) exp([D]/4L^2)"},
          {"E_H_se", "standard error of E_H"},
          {"E_H2", "mean of the square of that process"},
          {"E_H2_se", "standard error of E_H2"},
          {"E_H_ito", "mean of L sin(D/2L) exp([D]/8L^2)"},
          {"E_H_ito_se", "standard error of E_H_ito"},
          {"E_dW2", "mean squared torus distance of the two Brownian motions"},
          {"E_dW2_se", "standard error of E_dW2"},
          {"floor", "(4/pi^2) |dW_0|_T^2 exp(-2t/L^2)"},
      };
  }
  throw ParameterError("unknown experiment");
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.experiment) {
    case ExperimentKind::kernel_check:
      return run_kernel_check(cfg);
    case ExperimentKind::mixture_decay:
      return run_mixture_decay(cfg);
    case ExperimentKind::coadapted_decay:
      return run_coadapted_decay(cfg);
    case ExperimentKind::non_contraction:
      return run_non_contraction(cfg);
    case ExperimentKind::sqrt_optimality:
      return run_sqrt_optimality(cfg);
    case ExperimentKind::stopping_time:
      return run_stopping_time(cfg);
    case ExperimentKind::martingale_h:
      return run_martingale_h(cfg);
  }
  throw ParameterError("unknown experiment");
}

}  // namespace kfp
