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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "kfp/errors.hpp"
#include "kfp/random.hpp"
#include "kfp/torus.hpp"

namespace kfp {
namespace {

constexpr double kTwoPi = 2.0 * kPi<double>;

// Independent oracle: brute-force lattice sum in long double with a fixed,
// generous number of images.
double lattice_oracle(double center, double sigma2, double x, double L) {
  const long double period = 2.0L * std::numbers::pi_v<long double> * L;
  const long double norm = 1.0L / std::sqrt(2.0L * std::numbers::pi_v<long double> * sigma2);
  long double sum = 0;
  for (int n = -400; n <= 400; ++n) {
    const long double u = static_cast<long double>(x) - center + period * n;
    sum += norm * std::exp(-u * u / (2.0L * sigma2));
  }
  return static_cast<double>(sum);
}

TEST(Wrap, Examples) {
  EXPECT_EQ(wrap(0.0, 1.0), 0.0);
  EXPECT_EQ(wrap(kTwoPi, 1.0), 0.0);
  EXPECT_NEAR(wrap(-0.5, 1.0), kTwoPi - 0.5, 1e-15);
  EXPECT_NEAR(wrap(7.0, 0.5), 7.0 - 2 * kPi<double>, 1e-14);
}

TEST(Wrap, RejectsNonPositiveScale) {
  EXPECT_THROW(wrap(1.0, 0.0), ParameterError);
  EXPECT_THROW(wrap(1.0, -2.0), ParameterError);
  EXPECT_THROW(torus_dist(0.0, 1.0, 0.0), ParameterError);
}

TEST(Wrap, CanonicalAndIdempotent) {
  RandomStream rng(11);
  for (double L : {0.1, 1.0, 3.7}) {
    const double period = torus_period(L);
    for (int i = 0; i < 10000; ++i) {
      const double x = (rng.uniform() - 0.5) * 1e3;
      const double w = wrap(x, L);
      ASSERT_GE(w, 0.0);
      ASSERT_LT(w, period);
      ASSERT_EQ(wrap(w, L), w);
    }
  }
  // A tiny negative number must not round to the period itself.
  const double w = wrap(-1e-18, 1.0);
  EXPECT_GE(w, 0.0);
  EXPECT_LT(w, kTwoPi);
}

TEST(TorusDist, Examples) {
  const double L = 1.3;
  EXPECT_NEAR(torus_dist(0.0, kPi<double> * L, L), kPi<double> * L, 1e-15);
  EXPECT_NEAR(torus_dist(0.1, torus_period(L) - 0.1, L), 0.2, 1e-14);
  EXPECT_EQ(torus_dist(2.0, 2.0, L), 0.0);
}

TEST(TorusDist, IsAMetric) {
  RandomStream rng(12);
  const double L = 0.8;
  const double period = torus_period(L);
  for (int i = 0; i < 20000; ++i) {
    const double a = rng.uniform() * period, b = rng.uniform() * period, c = rng.uniform() * period;
    const double ab = torus_dist(a, b, L);
    ASSERT_LE(ab, kPi<double> * L + 1e-15);
    ASSERT_EQ(ab, torus_dist(b, a, L));
    ASSERT_LE(ab, torus_dist(a, c, L) + torus_dist(c, b, L) + 1e-14);
  }
}

TEST(SinMetric, ExamplesAndEquivalenceConstants) {
  for (double L : {0.3, 1.0, 5.0}) {
    EXPECT_EQ(sin_metric_sq(1.0, 1.0, L), 0.0);
    EXPECT_NEAR(sin_metric_sq(0.0, kPi<double> * L, L), L * L, 1e-12 * L * L);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int i = 1; i <= 100000; ++i) {
      const double d = kPi<double> * L * i / 100000.0;
      const double ratio = sin_metric_sq(0.0, d, L) / (d * d);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    EXPECT_GE(lo, 1.0 / (kPi<double> * kPi<double>) - 1e-15);
    EXPECT_NEAR(lo, 1.0 / (kPi<double> * kPi<double>), 1e-12);
    EXPECT_LE(hi, 0.25);
    EXPECT_NEAR(hi, 0.25, 1e-9);
  }
}

TEST(WrappedPdf, MatchesBruteForceLatticeOnBothBranches) {
  for (double L : {0.5, 1.0, 2.0}) {
    for (double s2_over_L2 : {0.01, 0.3, 0.999, 1.0, 1.001, 3.0, 20.0}) {
      const double sigma2 = s2_over_L2 * L * L;
      const WrappedGaussian<double> g{0.7 * L, sigma2};
      for (int i = 0; i < 50; ++i) {
        const double x = torus_period(L) * i / 50.0;
        const double oracle = lattice_oracle(g.center, sigma2, x, L);
        ASSERT_NEAR(wrapped_pdf(g, x, L), oracle, 1e-12) << "L=" << L << " s2=" << sigma2 << " x=" << x;
      }
    }
  }
}

TEST(WrappedPdf, BranchesAgreeAtSwitch) {
  const double L = 1.0;
  const double below = std::nextafter(1.0, 0.0), above = std::nextafter(1.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double x = kTwoPi * i / 100.0;
    EXPECT_NEAR(wrapped_pdf<double>({0.0, below}, x, L), wrapped_pdf<double>({0.0, above}, x, L), 2e-12);
  }
}

TEST(WrappedPdf, NormalisedAndNonNegative) {
  // The periodic trapezoid rule is spectrally accurate for smooth integrands.
  for (double L : {0.5, 1.0, 3.0}) {
    for (double s2 : {0.05, 0.5, 1.0, 4.0, 8.0}) {
      const WrappedGaussian<double> g{1.0, s2 * L * L};
      const int n = 10000;
      double sum = 0;
      for (int i = 0; i < n; ++i) {
        const double v = wrapped_pdf(g, torus_period(L) * i / n, L);
        ASSERT_GE(v, 0.0);
        sum += v;
      }
      EXPECT_NEAR(sum * torus_period(L) / n, 1.0, 1e-10);
    }
  }
}

TEST(WrappedPdf, UniformLimit) {
  const double L = 1.5;
  for (int i = 0; i < 20; ++i)
    EXPECT_NEAR(wrapped_pdf<double>({0.3, 400.0}, i * 0.4, L), 1.0 / torus_period(L), 1e-15);
}

TEST(WrappedPdf, RejectsBadArguments) {
  EXPECT_THROW(wrapped_pdf<double>({0.0, 0.0}, 0.0, 1.0), ParameterError);
  EXPECT_THROW(wrapped_pdf<double>({0.0, -1.0}, 0.0, 1.0), ParameterError);
  EXPECT_THROW(wrapped_pdf<double>({0.0, 1.0}, 0.0, 1.0, 0.0), ParameterError);
}

TEST(WrappedPdf, MatchesMonteCarloHistogramAtZero) {
  // Fraction of 10^6 wrapped standard normals landing within ±w of 0.
  RandomStream rng(99);
  const int n = 1000000;
  const double w = 0.05;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = wrap(rng.normal(), 1.0);
    if (x < w || x > kTwoPi - w) ++hits;
  }
  double mass = 0;
  const int m = 2000;
  for (int i = 0; i < m; ++i) mass += wrapped_pdf<double>({0.0, 1.0}, -w + 2 * w * (i + 0.5) / m, 1.0);
  mass *= 2 * w / m;
  const double p_hat = static_cast<double>(hits) / n;
  const double se = std::sqrt(mass * (1 - mass) / n);
  EXPECT_NEAR(p_hat, mass, 3 * se);
}

TEST(SpreadingBeta, Examples) {
  const double L = 1.7;
  EXPECT_NEAR(spreading_beta(2 * L * L * std::log(3.0), L), 0.0, 1e-14);
  EXPECT_EQ(spreading_beta(0.1, L), 0.0);
  EXPECT_NEAR(spreading_beta(1e4, L), 1.0, 1e-12);
  EXPECT_NEAR(spreading_beta(8.0, 1.0), 1 - 2 * std::exp(-4.0) / (1 - std::exp(-4.0)), 1e-15);
  EXPECT_THROW(spreading_beta(0.0, 1.0), ParameterError);
}

TEST(SpreadingBeta, MonotoneInVariance) {
  double prev = 0;
  for (int i = 1; i < 400; ++i) {
    const double b = spreading_beta(0.05 * i, 1.0);
    ASSERT_GE(b, prev);
    ASSERT_LE(b, 1.0);
    prev = b;
  }
}

TEST(SpreadingBeta, UniformComponentLowerBoundsDensity) {
  for (double L : {0.5, 1.0, 2.0}) {
    for (double s2 : {1.0, 4.0, 8.0, 1.5, 2.5}) {
      const double beta = spreading_beta(s2 * L * L, L);
      const WrappedGaussian<double> g{0.4, s2 * L * L};
      double min_pdf = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 10000; ++i) min_pdf = std::min(min_pdf, wrapped_pdf(g, torus_period(L) * i / 10000.0, L));
      EXPECT_GE(min_pdf, beta / torus_period(L)) << "L=" << L << " s2=" << s2;
    }
  }
}

TEST(ScalarTemplates, FloatAgreesWithDouble) {
  EXPECT_NEAR(wrap(-0.5f, 1.0f), static_cast<float>(wrap(-0.5, 1.0)), 1e-6f);
  EXPECT_NEAR(torus_dist(0.1f, 6.0f, 1.0f), static_cast<float>(torus_dist(0.1, 6.0, 1.0)), 1e-6f);
  EXPECT_NEAR(wrapped_pdf<float>({0.f, 2.f}, 1.f, 1.f, 1e-6f), static_cast<float>(wrapped_pdf<double>({0., 2.}, 1., 1.)),
              1e-6f);
  EXPECT_NEAR(spreading_beta(8.0f, 1.0f), static_cast<float>(spreading_beta(8.0, 1.0)), 1e-6f);
}

}  // namespace
}  // namespace kfp
