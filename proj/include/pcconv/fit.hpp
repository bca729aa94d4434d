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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pcconv/linalg.hpp"

namespace pcconv {

// A reference spectral response on [0, 2].
struct TargetFilter {
  std::string name;
  std::function<double(double)> eval;
};

// Names accepted by target_zoo.
std::vector<std::string> target_names();

// low_band_pass, comb (|sin(pi x)|), low_pass (1 - x/2), high_pass (x/2),
// identity. Throws std::invalid_argument for other names.
TargetFilter target_zoo(const std::string& name);

// size points spaced uniformly over [0, 2], endpoints included.
std::vector<double> uniform_grid(std::size_t size);

struct FitResult {
  std::vector<double> theta;
  double rmse = 0.0;
  std::vector<double> grid;
  std::vector<double> responses;
};

inline constexpr std::size_t kDefaultGridSize = 201;
inline constexpr double kRidgeDamping = 1e-10;

// Evaluation of the PC-filter basis [1, P_1(x), ..., P_K(x)] at each grid
// point, one row per point.
DenseMatrix pc_design_matrix(std::span<const double> grid, int K, int N, double t);

// Least-squares theta for the target over a uniform grid, solved through the
// ridge-damped normal equations.
FitResult fit_least_squares(const TargetFilter& target, std::size_t grid_size, int K, int N,
                            double t);

// The square system mapping theta to the first K+1 power-series coefficients
// of the filter. Column 0 is e_0; column k holds (-1)^n C_n(k, t) / n!.
DenseMatrix interpolation_matrix(int K, double t);

// Smallest LU pivot of the interpolation matrix after scaling each column to
// unit max-abs.
double interpolation_min_pivot(int K, double t);

// The interpolation matrix was singular although t avoids 1..K.
class TheoryViolationError : public SingularMatrixError {
 public:
  explicit TheoryViolationError(const SingularMatrixError& cause);
};

// theta whose filter matches sum_n b_n x^n in orders 0..K. With N = K the
// filter equals the target polynomial exactly; orders above K are left free.
std::vector<double> interpolate_polynomial(std::span<const double> poly_coeffs, int K, int N,
                                           double t);

}  // namespace pcconv
