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

#include "kfp/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "kfp/errors.hpp"

namespace kfp {

double Moments::mean() const { return count > 0 ? sum / count : 0.0; }

double Moments::variance() const {
  if (count < 2) return 0.0;
  const double m = mean();
  return std::max(0.0, (sum_sq - count * m * m) / (count - 1));
}

double Moments::std_error() const { return count > 0 ? std::sqrt(variance() / count) : 0.0; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_pvalue(double d, double n_effective) {
  const double root = std::sqrt(n_effective);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0;
  double sign = 1;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ParameterError("KS test needs samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return {d, kolmogorov_pvalue(d, n)};
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS test needs samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double next = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == next) ++i;
    while (j < y.size() && y[j] == next) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return {d, kolmogorov_pvalue(d, nx * ny / (nx + ny))};
}

TestResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                           std::size_t fitted_parameters) {
  if (observed.size() != expected.size() || observed.size() < 2 + fitted_parameters)
    throw ParameterError("chi-square test needs matching bins");
  double stat = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (!(expected[k] > 0)) throw ParameterError("chi-square expected counts must be positive");
    const double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
  }
  const double dof = static_cast<double>(observed.size() - 1 - fitted_parameters);
  const boost::math::chi_squared dist(dof);
  return {stat, boost::math::cdf(boost::math::complement(dist, stat))};
}

namespace {

// Σ_{i<j} |z_i - z_j| for sorted z.
double pairwise_abs_sum(const std::vector<double>& sorted) {
  double total = 0;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) total += sorted[k] * (2.0 * static_cast<double>(k) - n + 1.0);
  return total;
}

double energy_statistic(const std::vector<double>& pooled, std::size_t na) {
  std::vector<double> a(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(na));
  std::vector<double> b(pooled.begin() + static_cast<std::ptrdiff_t>(na), pooled.end());
  std::vector<double> all = pooled;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::sort(all.begin(), all.end());
  const double within_a = pairwise_abs_sum(a);
  const double within_b = pairwise_abs_sum(b);
  const double cross = pairwise_abs_sum(all) - within_a - within_b;
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  return 2.0 * cross / (n * m) - 2.0 * within_a / (n * n) - 2.0 * within_b / (m * m);
}

}  // namespace

TestResult energy_test_1d(std::span<const double> a, std::span<const double> b, std::size_t permutations,
                          RandomStream& rng) {
  if (a.empty() || b.empty()) throw ParameterError("energy test needs samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const double observed = energy_statistic(pooled, a.size());
  std::size_t at_least = 0;
  for (std::size_t k = 0; k < permutations; ++k) {
    std::shuffle(pooled.begin(), pooled.end(), rng);
    if (energy_statistic(pooled, a.size()) >= observed) ++at_least;
  }
  return {observed, (static_cast<double>(at_least) + 1.0) / (static_cast<double>(permutations) + 1.0)};
}

}  // namespace kfp
