// Copyright 2026 The PCConv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "pcconv/pcpoly.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace pcconv {
namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// n-th Taylor coefficient of (1 - x)^k e^(t x), obtained by multiplying the
// two expansions term by term.
double taylor_coefficient(int k, double t, int n) {
  double s = 0.0;
  for (int j = 0; j <= std::min(n, k); ++j) {
    s += ((j % 2 == 0) ? 1.0 : -1.0) * binom(k, j) * std::pow(t, n - j) / factorial(n - j);
  }
  return s;
}

TEST(PcCoeffRecurrence, HandComputedValues) {
  const auto c = pc_coeff_recurrence(2.0, 1.0, 2);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], 1.0);
  EXPECT_EQ(c[1], 1.0);
  EXPECT_EQ(c[2], -1.0);
  for (double g : {0.5, 3.0, 7.25}) EXPECT_EQ(pc_coeff_recurrence(g, g, 1)[1], 0.0);
  EXPECT_EQ(pc_coeff_recurrence(3.0, 0.5, 0), (std::vector<double>{1.0}));
}

TEST(PcCoeffRecurrence, RejectsNegativeOrder) {
  EXPECT_THROW(pc_coeff_recurrence(1.0, 0.5, -1), std::invalid_argument);
}

TEST(PcCoeffExplicit, Examples) {
  EXPECT_EQ(pc_coeff_explicit(3.7, 1.3, 0), 1.0);
  EXPECT_DOUBLE_EQ(pc_coeff_explicit(2.0, 1.0, 2), -1.0);
  EXPECT_DOUBLE_EQ(pc_coeff_explicit(5.0, 2.0, 1), 3.0);
}

TEST(PcCoeff, RecurrenceMatchesExplicitSumProperty) {
  for (int gamma = 1; gamma <= 8; ++gamma) {
    for (double t : {0.25, 0.5, 1.5, 2.5}) {
      const auto rec = pc_coeff_recurrence(gamma, t, 15);
      for (int n = 0; n <= 15; ++n) {
        const double expl = pc_coeff_explicit(gamma, t, n);
        EXPECT_NEAR(rec[n], expl, 1e-9 * std::max(1.0, std::abs(expl)))
            << "gamma=" << gamma << " t=" << t << " n=" << n;
      }
    }
  }
}

TEST(PcCoeff, SeriesCoefficientsMatchTaylorOracleProperty) {
  for (int k = 1; k <= 6; ++k) {
    for (double t : {0.1, 0.5, 1.3, 2.0, 2.7}) {
      const auto c = pc_coeff_recurrence(k, t, 20);
      for (int n = 0; n <= 20; ++n) {
        const double series = ((n % 2 == 0) ? 1.0 : -1.0) * c[n] / factorial(n);
        EXPECT_NEAR(series, taylor_coefficient(k, t, n), 1e-10)
            << "k=" << k << " t=" << t << " n=" << n;
      }
    }
  }
}

TEST(SeriesEvalG, Examples) {
  for (double g : {0.0, 1.0, 4.0}) EXPECT_EQ(series_eval_G(g, 0.7, 0.0, 12), 1.0);
  EXPECT_NEAR(series_eval_G(0.0, 1.0, 1.0, 25), std::exp(1.0), 1e-10);
  EXPECT_NEAR(series_eval_G(1.0, 0.5, 0.5, 25), 0.5 * std::exp(0.25), 1e-10);
}

double max_truncation_error(int k, double t, int order) {
  double worst = 0.0;
  for (int i = 0; i < 201; ++i) {
    const double x = 2.0 * i / 201;  // [0, 2)
    worst = std::max(worst, std::abs(series_eval_G(k, t, x, order) - closed_form_G(k, t, x)));
  }
  return worst;
}

// With N = 25 the truncation tail at x near 2 stays below 1e-8 for every
// k <= 6 only while t is at most about 1.35.
TEST(SeriesEvalG, ConvergesToClosedFormProperty) {
  for (int k = 1; k <= 6; ++k) {
    for (double t : {1e-6, 0.05, 0.5, 0.9, 1.25, 1.3}) {
      EXPECT_LE(max_truncation_error(k, t, 25), 1e-8) << "k=" << k << " t=" << t;
    }
  }
}

// The tail is genuinely larger for big t: with k = 6 and t = 2 the exact
// order-25 remainder at x = 400/201 is about 1.7e-5.
TEST(SeriesEvalG, TruncationTailAtLargeDiffusionScale) {
  const double err = max_truncation_error(6, 2.0, 25);
  EXPECT_GT(err, 1e-5);
  EXPECT_LT(err, 2e-5);
  EXPECT_LT(max_truncation_error(6, 2.0, 40), 1e-10);
}

// Roundoff in the recurrence is below 1e-10 here, far under the truncation
// differences being compared.
TEST(SeriesEvalG, TruncationErrorDecreasesWithOrderProperty) {
  for (int k = 1; k <= 6; ++k) {
    for (double t : {0.05, 0.3, 0.7, 1.0}) {
      double previous = INFINITY;
      for (int order : {5, 10, 15, 20, 25}) {
        const double worst = max_truncation_error(k, t, order);
        EXPECT_LE(worst, previous + 1e-10) << "k=" << k << " t=" << t << " N=" << order;
        previous = worst;
      }
    }
  }
}

TEST(ClosedFormG, Examples) {
  EXPECT_EQ(closed_form_G(3.0, 1.7, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(closed_form_G(0.0, 2.0, 1.0), std::exp(2.0));
  EXPECT_DOUBLE_EQ(closed_form_G(2.0, 1.0, 2.0), std::exp(2.0));
  EXPECT_NEAR(closed_form_G(0.5, 1.0, 0.75), 0.5 * std::exp(0.75), 1e-15);
}

TEST(ClosedFormG, NonIntegerPowerDomain) {
  EXPECT_THROW(closed_form_G(0.5, 1.0, 1.0), std::domain_error);
  EXPECT_THROW(closed_form_G(2.5, 1.0, 1.5), std::domain_error);
}

TEST(BuildTable, Examples) {
  const PCCoeffTable a = build_table(1.0, 1, 2);
  EXPECT_EQ(a.max_order(), 1);
  EXPECT_EQ(a.max_filter_order(), 2);
  EXPECT_EQ(a.at(0, 1), 1.0);
  EXPECT_EQ(a.at(0, 2), 1.0);
  EXPECT_EQ(a.at(1, 1), 0.0);
  EXPECT_EQ(a.at(1, 2), 1.0);

  const PCCoeffTable b = build_table(0.0, 2, 1);
  EXPECT_EQ(b.at(0, 1), 1.0);
  EXPECT_EQ(b.at(1, 1), 1.0);
  EXPECT_EQ(b.at(2, 1), 0.0);
}

TEST(BuildTable, InvariantsProperty) {
  for (double t : {0.3, 1.5, 4.2}) {
    const PCCoeffTable table = build_table(t, 12, 7);
    for (int k = 1; k <= 7; ++k) {
      EXPECT_EQ(table.at(0, k), 1.0);
      EXPECT_EQ(table.at(1, k), k - t);
      for (int n = 2; n <= 12; ++n) {
        const double expected =
            (k - n - t + 1) * table.at(n - 1, k) - (n - 1) * t * table.at(n - 2, k);
        EXPECT_EQ(table.at(n, k), expected);
      }
    }
  }
}

TEST(BuildTable, RejectsBadOrders) {
  EXPECT_THROW(build_table(0.5, -1, 2), std::invalid_argument);
  EXPECT_THROW(build_table(0.5, 3, 0), std::invalid_argument);
}

TEST(ValidateDiffusionScale, Rules) {
  EXPECT_NO_THROW(validate_diffusion_scale(0.5, 5));
  EXPECT_NO_THROW(validate_diffusion_scale(3.0, 2));
  EXPECT_NO_THROW(validate_diffusion_scale(2.0 + 2e-9, 3));
  EXPECT_THROW(validate_diffusion_scale(2.0, 3), std::invalid_argument);
  EXPECT_THROW(validate_diffusion_scale(1.0 + 5e-10, 1), std::invalid_argument);
  EXPECT_THROW(validate_diffusion_scale(0.0, 3), std::invalid_argument);
  EXPECT_THROW(validate_diffusion_scale(-0.5, 3), std::invalid_argument);
  EXPECT_THROW(validate_diffusion_scale(NAN, 3), std::invalid_argument);
}

}  // namespace
}  // namespace pcconv
