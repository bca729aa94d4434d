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
#include <functional>
#include <vector>

#include "pcconv/linalg.hpp"
#include "pcconv/pcpoly.hpp"

namespace pcconv {

// One PC-Conv filter bank:
//   g(x) = theta_0 + sum_{k=1..K} theta_k * sum_{n=0..N} (-x)^n / n! * C_n(k, t)
struct FilterParams {
  std::vector<double> theta;  // theta_0..theta_K
  double t = 0.5;
  double p = 2.0;
  double eta = 0.5;
  int N = 10;
  int K = 1;

  // Checks len(theta) = K+1, N >= 0, K >= 1 and the diffusion scale rule.
  void validate() const;
};

// Power-basis coefficients a_0..a_N of the filter polynomial:
//   a_n = (-1)^n / n! * sum_k theta_k C_n(k, t),  a_0 += theta_0.
struct FoldedCoeffs {
  std::vector<double> a;
};

double scalar_response(const FilterParams& params, double lambda);

FoldedCoeffs fold_coefficients(const FilterParams& params, const PCCoeffTable& table);

// sum_n a_n L^n X by repeated sparse products, one pass.
DenseMatrix propagate(const SparseMatrix& laplacian, const DenseMatrix& x,
                      const FoldedCoeffs& folded);

DenseMatrix apply_conv(const SparseMatrix& laplacian, const DenseMatrix& x,
                       const FilterParams& params);

// --- Dense eigendecomposition oracles -------------------------------------

// U diag(f(lambda_i)) U^T X for a dense symmetric operator.
DenseMatrix apply_spectral_function(const DenseMatrix& laplacian, const DenseMatrix& x,
                                    const std::function<double(double)>& response);

DenseMatrix spectral_oracle(const DenseMatrix& laplacian, const DenseMatrix& x,
                            const FilterParams& params);

// U diag((1 - lambda)^k e^(t lambda)) U^T X, the untruncated PC-filter.
DenseMatrix exact_filter_oracle(const DenseMatrix& laplacian, const DenseMatrix& x, int k,
                                double t);

struct TwofoldParams {
  double alpha1 = 0.1;
  double alpha2 = 1.0;
  double t = 0.5;
  double p = 2.0;
};

enum class TwofoldOrder { kHeteroFirst, kHomoFirst };

inline constexpr std::size_t kMaxTwofoldOrder = 500;

// Closed form of chained heterophilic and homophilic aggregation:
//   Z = [(alpha1 I + h1(L)) (alpha2 I + h2(L))]^-1 X
// with h1(x) = e^(-t (p - 2 + x)) - alpha1 and h2(x) = p - 2 + x evaluated on
// the standard Laplacian spectrum. kHomoFirst swaps the two factors.
DenseMatrix twofold_closed_form(const DenseMatrix& laplacian, const DenseMatrix& x,
                                const TwofoldParams& params, TwofoldOrder order);

enum class HeatSign { kHomophilic, kHeterophilic };

// e^(-t L) X for kHomophilic, e^(t L) X for kHeterophilic.
DenseMatrix heat_kernel_oracle(const DenseMatrix& laplacian, const DenseMatrix& x, double t,
                               HeatSign sign);

}  // namespace pcconv
