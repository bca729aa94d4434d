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


#pragma once

#include <cstddef>
#include <vector>

// Poisson-Charlier coefficients C_n(gamma, t), defined as the power series
// coefficients of G(gamma, t, x) = (1 - x)^gamma * e^(t x):
//
//   G(gamma, t, x) = sum_n (-x)^n / n! * C_n(gamma, t).

namespace pcconv {

// C_0..C_N by the three-term recurrence
//   C_0 = 1, C_1 = gamma - t,
//   C_n = (gamma - n - t + 1) C_{n-1} - (n - 1) t C_{n-2}.
std::vector<double> pc_coeff_recurrence(double gamma, double t, int order);

// C_n from the explicit binomial sum
//   sum_k binom(n, k) (-t)^k gamma (gamma - 1) ... (gamma - n + k + 1).
double pc_coeff_explicit(double gamma, double t, int n);

// Truncated series sum_{n <= order} (-x)^n / n! * C_n(gamma, t).
double series_eval_G(double gamma, double t, double x, int order);

// (1 - x)^gamma * e^(t x). Non-integer gamma requires x < 1.
double closed_form_G(double gamma, double t, double x);

// Throws std::invalid_argument unless t > 0 and t is not within 1e-9 of any
// integer in 1..K.
void validate_diffusion_scale(double t, int max_filter_order);

// C_n(k, t) for n in 0..N and k in 1..K.
class PCCoeffTable {
 public:
  PCCoeffTable() = default;

  double t() const { return t_; }
  int max_order() const { return max_order_; }                // N
  int max_filter_order() const { return max_filter_order_; }  // K

  double at(int n, int k) const {
    return coeffs_[static_cast<std::size_t>(n) * static_cast<std::size_t>(max_filter_order_) +
                   static_cast<std::size_t>(k - 1)];
  }

 private:
  friend PCCoeffTable build_table(double t, int max_order, int max_filter_order);

  double t_ = 0.0;
  int max_order_ = 0;
  int max_filter_order_ = 0;
  std::vector<double> coeffs_;  // row n, column k-1
};

// Fills the table column by column with pc_coeff_recurrence.
PCCoeffTable build_table(double t, int max_order, int max_filter_order);

}  // namespace pcconv
