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

#include <cstddef>
#include <limits>
#include <span>

namespace kfp {

struct SeriesPoint {
  double t = 0;
  double value = 0;
  double std_error = 0;
};

/// Exponential decay fitted as log(value) ≈ log_intercept - rate · t.
struct DecayFit {
  double rate = 0;
  double log_intercept = 0;
  double r2 = 0;
  double t_lo = 0;
  double t_hi = 0;
  double rate_se = 0;  ///< from the per-point standard errors
  std::size_t points = 0;
};

struct FitOptions {
  /// Points before this time are treated as transient and dropped.
  double t_min = -std::numeric_limits<double>::infinity();
  /// A point carries signal when value > snr · std_error.
  double snr = 3.0;
  std::size_t min_points = 4;
};

/// Weighted least squares of log(value) on t over the longest contiguous run
/// of points (after t_min) that carry signal. Weights are the inverse
/// variances (value / std_error)² of log(value). Throws FitWindowError when
/// fewer than min_points qualify.
DecayFit fit_rate(std::span<const SeriesPoint> series, const FitOptions& options = {});

}  // namespace kfp
