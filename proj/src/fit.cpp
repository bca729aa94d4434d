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


#include "pcconv/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pcconv/pcpoly.hpp"

namespace pcconv {

namespace {

double low_band_pass(double x) {
  if (x >= 0.0 && x <= 0.5) return 1.0;
  if (x > 0.5 && x < 1.0) return std::exp(-100.0 * (x - 0.5) * (x - 0.5));
  if (x >= 1.0 && x <= 2.0) return std::exp(-50.0 * (x - 1.5) * (x - 1.5));
  return 0.0;
}

void check_orders(int K, int N, double t) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (N < K) throw std::invalid_argument("N must be at least K for fitting");
  validate_diffusion_scale(t, K);
}

}  // namespace

std::vector<std::string> target_names() {
  return {"low_band_pass", "comb", "low_pass", "high_pass", "identity"};
}

TargetFilter target_zoo(const std::string& name) {
  if (name == "low_band_pass") return {name, low_band_pass};
  if (name == "comb") {
    return {name, [](double x) { return std::abs(std::sin(std::numbers::pi * x)); }};
  }
  if (name == "low_pass") return {name, [](double x) { return 1.0 - x / 2.0; }};
  if (name == "high_pass") return {name, [](double x) { return x / 2.0; }};
  if (name == "identity") return {name, [](double) { return 1.0; }};
  throw std::invalid_argument("unknown target filter '" + name + "'");
}

std::vector<double> uniform_grid(std::size_t size) {
  if (size < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  std::vector<double> grid(size);
  const double step = 2.0 / static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i) grid[i] = step * static_cast<double>(i);
  grid.back() = 2.0;
  return grid;
}

DenseMatrix pc_design_matrix(std::span<const double> grid, int K, int N, double t) {
  DenseMatrix design(grid.size(), static_cast<std::size_t>(K) + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    design(i, 0) = 1.0;
    for (int k = 1; k <= K; ++k) {
      design(i, static_cast<std::size_t>(k)) = series_eval_G(k, t, grid[i], N);
    }
  }
  return design;
}

FitResult fit_least_squares(const TargetFilter& target, std::size_t grid_size, int K, int N,
                            double t) {
  check_orders(K, N, t);
  if (grid_size < static_cast<std::size_t>(K) + 2) {
    throw std::invalid_argument("fit_least_squares: grid needs at least K+2 points");
  }
  FitResult result;
  result.grid = uniform_grid(grid_size);
  const DenseMatrix design = pc_design_matrix(result.grid, K, N, t);

  std::vector<double> values(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) values[i] = target.eval(result.grid[i]);

  DenseMatrix normal = matmul_tn(design, design);
  for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += kRidgeDamping;
  const DenseMatrix rhs = matmul_tn(design, DenseMatrix::column(values));
  result.theta = dense_solve(normal, rhs).col(0);

  result.responses = matmul(design, DenseMatrix::column(result.theta)).col(0);
  double sq = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double r = result.responses[i] - values[i];
    sq += r * r;
  }
  result.rmse = std::sqrt(sq / static_cast<double>(grid_size));
  return result;
}

DenseMatrix interpolation_matrix(int K, double t) {
  const auto size = static_cast<std::size_t>(K) + 1;
  DenseMatrix m(size, size);
  m(0, 0) = 1.0;
  for (int k = 1; k <= K; ++k) {
    const std::vector<double> c = pc_coeff_recurrence(k, t, K);
    double sign_over_factorial = 1.0;
    for (int n = 0; n <= K; ++n) {
      if (n > 0) sign_over_factorial *= -1.0 / n;
      m(static_cast<std::size_t>(n), static_cast<std::size_t>(k)) =
          sign_over_factorial * c[static_cast<std::size_t>(n)];
    }
  }
  return m;
}

double interpolation_min_pivot(int K, double t) {
  DenseMatrix m = interpolation_matrix(K, t);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double scale = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) scale = std::max(scale, std::abs(m(i, j)));
    if (scale == 0.0) return 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) /= scale;
  }
  try {
    return lu_factor(m).min_abs_pivot();
  } catch (const SingularMatrixError& e) {
    return std::abs(e.pivot_value());
  }
}

TheoryViolationError::TheoryViolationError(const SingularMatrixError& cause)
    : SingularMatrixError(cause) {}

std::vector<double> interpolate_polynomial(std::span<const double> poly_coeffs, int K, int N,
                                           double t) {
  check_orders(K, N, t);
  if (poly_coeffs.size() > static_cast<std::size_t>(K) + 1) {
    throw std::invalid_argument("interpolate_polynomial: target degree exceeds K");
  }
  std::vector<double> b(static_cast<std::size_t>(K) + 1, 0.0);
  std::copy(poly_coeffs.begin(), poly_coeffs.end(), b.begin());
  try {
    return dense_solve(interpolation_matrix(K, t), DenseMatrix::column(b)).col(0);
  } catch (const SingularMatrixError& e) {
    throw TheoryViolationError(e);
  }
}

}  // namespace pcconv
