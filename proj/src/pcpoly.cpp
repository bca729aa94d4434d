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

#include <cmath>
#include <stdexcept>
#include <string>

namespace pcconv {

std::vector<double> pc_coeff_recurrence(double gamma, double t, int order) {
  if (order < 0) {
    throw std::invalid_argument("pc_coeff_recurrence: order must be non-negative");
  }
  std::vector<double> c(static_cast<std::size_t>(order) + 1);
  c[0] = 1.0;
  if (order >= 1) c[1] = gamma - t;
  for (int n = 2; n <= order; ++n) {
    const auto i = static_cast<std::size_t>(n);
    c[i] = (gamma - n - t + 1.0) * c[i - 1] - (n - 1) * t * c[i - 2];
  }
  return c;
}

double pc_coeff_explicit(double gamma, double t, int n) {
  if (n < 0) {
    throw std::invalid_argument("pc_coeff_explicit: order must be non-negative");
  }
  double sum = 0.0;
  double binom = 1.0;  // binom(n, k)
  for (int k = 0; k <= n; ++k) {
    double falling = 1.0;  // gamma (gamma-1) ... (gamma-n+k+1), n-k factors
    for (int j = 0; j < n - k; ++j) falling *= gamma - j;
    sum += binom * std::pow(-t, k) * falling;
    binom = binom * (n - k) / (k + 1);
  }
  return sum;
}

double series_eval_G(double gamma, double t, double x, int order) {
  const std::vector<double> c = pc_coeff_recurrence(gamma, t, order);
  double factor = 1.0;  // (-x)^n / n!
  double sum = c[0];
  for (int n = 1; n <= order; ++n) {
    factor *= -x / n;
    sum += factor * c[static_cast<std::size_t>(n)];
  }
  return sum;
}

double closed_form_G(double gamma, double t, double x) {
  const bool integral = gamma == std::floor(gamma);
  if (!integral && x >= 1.0) {
    throw std::domain_error("closed_form_G: non-integer gamma needs x < 1");
  }
  return std::pow(1.0 - x, gamma) * std::exp(t * x);
}

void validate_diffusion_scale(double t, int max_filter_order) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("t must be positive and finite, got " + std::to_string(t));
  }
  const double nearest = std::round(t);
  if (nearest >= 1.0 && nearest <= max_filter_order && std::abs(t - nearest) <= 1e-9) {
    throw std::invalid_argument("t must not be an integer in 1..K (t=" + std::to_string(t) +
                                ", K=" + std::to_string(max_filter_order) + ")");
  }
}

PCCoeffTable build_table(double t, int max_order, int max_filter_order) {
  if (max_order < 0) {
    throw std::invalid_argument("build_table: N must be non-negative");
  }
  if (max_filter_order < 1) {
    throw std::invalid_argument("build_table: K must be at least 1");
  }
  PCCoeffTable table;
  table.t_ = t;
  table.max_order_ = max_order;
  table.max_filter_order_ = max_filter_order;
  const auto width = static_cast<std::size_t>(max_filter_order);
  table.coeffs_.assign((static_cast<std::size_t>(max_order) + 1) * width, 0.0);
  for (int k = 1; k <= max_filter_order; ++k) {
    const std::vector<double> column = pc_coeff_recurrence(k, t, max_order);
    for (std::size_t n = 0; n < column.size(); ++n) {
      table.coeffs_[n * width + static_cast<std::size_t>(k - 1)] = column[n];
    }
  }
  return table;
}

}  // namespace pcconv
