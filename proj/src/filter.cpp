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


#include "pcconv/filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pcconv/graph.hpp"

namespace pcconv {

void FilterParams::validate() const {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (N < 0) throw std::invalid_argument("N must be non-negative");
  if (theta.size() != static_cast<std::size_t>(K) + 1) {
    throw std::invalid_argument("theta must have K+1 = " + std::to_string(K + 1) +
                                " entries, got " + std::to_string(theta.size()));
  }
  validate_diffusion_scale(t, K);
}

double scalar_response(const FilterParams& params, double lambda) {
  params.validate();
  double g = params.theta[0];
  for (int k = 1; k <= params.K; ++k) {
    g += params.theta[static_cast<std::size_t>(k)] * series_eval_G(k, params.t, lambda, params.N);
  }
  return g;
}

FoldedCoeffs fold_coefficients(const FilterParams& params, const PCCoeffTable& table) {
  // Folding is plain algebra, so only shapes are checked here.
  if (params.theta.size() != static_cast<std::size_t>(params.K) + 1) {
    throw std::invalid_argument("fold_coefficients: theta must have K+1 entries");
  }
  if (table.t() != params.t || table.max_order() != params.N ||
      table.max_filter_order() != params.K) {
    throw std::invalid_argument("fold_coefficients: table was built for different (t, N, K)");
  }
  FoldedCoeffs folded{std::vector<double>(static_cast<std::size_t>(params.N) + 1, 0.0)};
  double sign_over_factorial = 1.0;  // (-1)^n / n!
  for (int n = 0; n <= params.N; ++n) {
    if (n > 0) sign_over_factorial *= -1.0 / n;
    double s = 0.0;
    for (int k = 1; k <= params.K; ++k) {
      s += params.theta[static_cast<std::size_t>(k)] * table.at(n, k);
    }
    folded.a[static_cast<std::size_t>(n)] = sign_over_factorial * s;
  }
  folded.a[0] += params.theta[0];
  return folded;
}

DenseMatrix propagate(const SparseMatrix& laplacian, const DenseMatrix& x,
                      const FoldedCoeffs& folded) {
  if (laplacian.rows() != laplacian.cols() || laplacian.cols() != x.rows()) {
    throw std::invalid_argument("propagate: operator and features disagree in size");
  }
  DenseMatrix out = x;
  out *= folded.a.at(0);
  DenseMatrix power = x;
  for (std::size_t n = 1; n < folded.a.size(); ++n) {
    power = spmm(laplacian, power);
    out.add_scaled(power, folded.a[n]);
  }
  return out;
}

DenseMatrix apply_conv(const SparseMatrix& laplacian, const DenseMatrix& x,
                       const FilterParams& params) {
  params.validate();
  const PCCoeffTable table = build_table(params.t, params.N, params.K);
  return propagate(laplacian, x, fold_coefficients(params, table));
}

DenseMatrix apply_spectral_function(const DenseMatrix& laplacian, const DenseMatrix& x,
                                    const std::function<double(double)>& response) {
  if (laplacian.rows() != x.rows()) {
    throw std::invalid_argument("spectral oracle: operator and features disagree in size");
  }
  const EigenDecomposition eig = sym_eig(laplacian);
  DenseMatrix coords = matmul_tn(eig.vectors, x);  // U^T X
  for (std::size_t i = 0; i < coords.rows(); ++i) {
    const double g = response(eig.values[i]);
    for (double& v : coords.row(i)) v *= g;
  }
  return matmul(eig.vectors, coords);
}

DenseMatrix spectral_oracle(const DenseMatrix& laplacian, const DenseMatrix& x,
                            const FilterParams& params) {
  params.validate();
  return apply_spectral_function(laplacian, x,
                                 [&](double lambda) { return scalar_response(params, lambda); });
}

DenseMatrix exact_filter_oracle(const DenseMatrix& laplacian, const DenseMatrix& x, int k,
                                double t) {
  if (k < 0) throw std::invalid_argument("exact_filter_oracle: k must be non-negative");
  return apply_spectral_function(laplacian, x, [&](double lambda) {
    return std::pow(1.0 - lambda, k) * std::exp(t * lambda);
  });
}

DenseMatrix twofold_closed_form(const DenseMatrix& laplacian, const DenseMatrix& x,
                                const TwofoldParams& params, TwofoldOrder order) {
  if (!(params.alpha2 > 0.0)) {
    throw std::invalid_argument("twofold_closed_form: alpha2 must be positive");
  }
  const FeasibleInterval feasible = psd_feasible_p(params.t, params.alpha1);
  if (!feasible.contains(params.p)) {
    throw std::invalid_argument("twofold_closed_form: p=" + std::to_string(params.p) +
                                " outside the feasible interval [2, " +
                                std::to_string(feasible.upper) + ")");
  }
  const std::size_t m = laplacian.rows();
  if (laplacian.cols() != m || x.rows() != m) {
    throw std::invalid_argument("twofold_closed_form: size mismatch");
  }
  if (m > kMaxTwofoldOrder) {
    throw std::invalid_argument("twofold_closed_form: at most " +
                                std::to_string(kMaxTwofoldOrder) + " nodes");
  }
  const double shift = params.p - 2.0;

  // alpha1 I + h1(L): the alpha1 terms cancel, leaving e^(-t (shift I + L)).
  const DenseMatrix hetero = apply_spectral_function(
      laplacian, DenseMatrix::identity(m), [&](double lambda) {
        return params.alpha1 + (std::exp(-params.t * (shift + lambda)) - params.alpha1);
      });
  DenseMatrix homo = laplacian;
  for (std::size_t i = 0; i < m; ++i) homo(i, i) += params.alpha2 + shift;

  const DenseMatrix system = order == TwofoldOrder::kHeteroFirst ? matmul(hetero, homo)
                                                                 : matmul(homo, hetero);
  return dense_solve(system, x);
}

DenseMatrix heat_kernel_oracle(const DenseMatrix& laplacian, const DenseMatrix& x, double t,
                               HeatSign sign) {
  const double rate = sign == HeatSign::kHomophilic ? -t : t;
  return apply_spectral_function(laplacian, x,
                                 [&](double lambda) { return std::exp(rate * lambda); });
}

}  // namespace pcconv
