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
#include <functional>
#include <span>
#include <vector>

#include "kfp/random.hpp"

namespace kfp {

/// Running sums for a mean and its standard error. Merging is plain
/// summation, so a fixed merge order gives bit-identical results.
struct Moments {
  double count = 0;
  double sum = 0;
  double sum_sq = 0;

  void add(double x) {
    count += 1;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Moments& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const;
  /// Unbiased sample variance.
  double variance() const;
  double std_error() const;
};

struct TestResult {
  double statistic = 0;
  double p_value = 1;
};

double normal_cdf(double x);

/// Asymptotic Kolmogorov survival function Q(λ) at λ = (√n + 0.12 + 0.11/√n) D.
double kolmogorov_pvalue(double d, double n_effective);

TestResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square goodness of fit of counts against expected counts.
TestResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                           std::size_t fitted_parameters = 0);

/// Two-sample energy-distance test on the line with a permutation null.
TestResult energy_test_1d(std::span<const double> a, std::span<const double> b, std::size_t permutations,
                          RandomStream& rng);

}  // namespace kfp
