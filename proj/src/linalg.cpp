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

#include "pcconv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace pcconv {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs "
        << b.rows() << "x" << b.cols();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("DenseMatrix: entry count does not match shape");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(n_rows * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) {
      throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
    }
    data.insert(data.end(), r.begin(), r.end());
  }
  return DenseMatrix(n_rows, n_cols, std::move(data));
}

DenseMatrix DenseMatrix::column(std::span<const double> values) {
  return DenseMatrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::vector<double> DenseMatrix::col(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  add_scaled(other, 1.0);
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  add_scaled(other, -1.0);
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

void DenseMatrix::add_scaled(const DenseMatrix& other, double scale) {
  require_same_shape(*this, other, "add_scaled");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double scale, DenseMatrix a) { return a *= scale; }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("matmul_tn: row counts differ");
  }
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto arow = a.row(k);
    auto brow = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      auto out = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aki * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("matmul_nt: column counts differ");
  }
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto arow = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto brow = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += arow[k] * brow[k];
      c(i, j) = s;
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

double frobenius_dot(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "frobenius_dot");
  double s = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
  return s;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != values_.size() || col_idx_.size() != values_.size()) {
    throw std::invalid_argument("SparseMatrix: inconsistent CSR buffers");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) {
      throw std::invalid_argument("SparseMatrix: row_ptr must be non-decreasing");
    }
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      if (col_idx_[e] >= cols_) {
        throw std::invalid_argument("SparseMatrix: column index out of range");
      }
      if (e > row_ptr_[i] && col_idx_[e] <= col_idx_[e - 1]) {
        throw std::invalid_argument(
            "SparseMatrix: column indices must be strictly increasing per row");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) {
      throw std::invalid_argument("SparseMatrix::from_triplets: index out of range");
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      values.back() += e.value;
      continue;
    }
    col_idx.push_back(e.col);
    values.push_back(e.value);
    ++row_ptr[e.row + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx),
                      std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<std::size_t> col_idx(n);
  std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
  std::iota(col_idx.begin(), col_idx.end(), std::size_t{0});
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx),
                      std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zero(std::size_t rows, std::size_t cols) {
  return SparseMatrix(rows, cols, std::vector<std::size_t>(rows + 1, 0), {}, {});
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense, double drop_tol) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      if (std::abs(dense(i, j)) > drop_tol) entries.push_back({i, j, dense(i, j)});
    }
  }
  return from_triplets(dense.rows(), dense.cols(), std::move(entries));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      const std::size_t j = col_idx_[e];
      const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j]);
      const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j + 1]);
      const auto it = std::lower_bound(begin, end, i);
      if (it == end || *it != i) return false;
      const double mirror = values_[static_cast<std::size_t>(it - col_idx_.begin())];
      if (std::abs(mirror - values_[e]) > tol) return false;
    }
  }
  return true;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      d(i, col_idx_[e]) = values_[e];
    }
  }
  return d;
}

SparseMatrix SparseMatrix::add_diagonal(double shift) const {
  if (rows_ != cols_) {
    throw std::invalid_argument("add_diagonal: matrix is not square");
  }
  std::vector<Triplet> entries;
  entries.reserve(nnz() + rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      entries.push_back({i, col_idx_[e], values_[e]});
    }
    entries.push_back({i, i, shift});
  }
  return from_triplets(rows_, cols_, std::move(entries));
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  std::vector<double> values = values_;
  for (double& v : values) v *= factor;
  return SparseMatrix(rows_, cols_, row_ptr_, col_idx_, std::move(values));
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw std::invalid_argument("spmv: vector length does not match column count");
  }
  const auto row_ptr = a.row_ptr();
  const auto col_idx = a.col_idx();
  const auto values = a.values();
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) s += values[e] * x[col_idx[e]];
    y[i] = s;
  }
  return y;
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
  if (x.rows() != a.cols()) {
    throw std::invalid_argument("spmm: dense row count does not match column count");
  }
  const auto row_ptr = a.row_ptr();
  const auto col_idx = a.col_idx();
  const auto values = a.values();
  DenseMatrix y(a.rows(), x.cols());
  // Per output element the accumulation order matches spmv.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = y.row(i);
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      const double v = values[e];
      auto in = x.row(col_idx[e]);
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += v * in[c];
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition

EigenDecomposition sym_eig(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) {
    throw std::invalid_argument("sym_eig: matrix is not square");
  }
  if (n > kMaxEigenOrder) {
    throw std::invalid_argument("sym_eig: order exceeds the dense eigensolver cap");
  }
  const double scale = std::max(1.0, input.max_abs());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * scale) {
        throw std::invalid_argument("sym_eig: matrix is not symmetric");
      }
    }
  }

  DenseMatrix a = input;
  // Symmetrize exactly so rotations see one value per pair.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }
  DenseMatrix v = DenseMatrix::identity(n);

  const double target = 1e-12 * a.frobenius_norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        auto row_p = a.row(p);
        auto row_q = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = row_p[k];
          const double aqk = row_q[k];
          row_p[k] = c * apk - s * aqk;
          row_q[k] = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_norm() > target) {
    throw std::runtime_error("sym_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LU and dense solves

SingularMatrixError::SingularMatrixError(std::size_t pivot_index, double pivot_value)
    : std::runtime_error("singular matrix: pivot " + std::to_string(pivot_index) +
                         " has magnitude " + std::to_string(std::abs(pivot_value))),
      pivot_index_(pivot_index),
      pivot_value_(pivot_value) {}

double LuFactorization::min_abs_pivot() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lu.rows(); ++i) m = std::min(m, std::abs(lu(i, i)));
  return m;
}

LuFactorization lu_factor(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) {
    throw std::invalid_argument("lu_factor: matrix is not square");
  }
  LuFactorization f{a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  DenseMatrix& lu = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    }
    if (!(std::abs(lu(piv, k)) > kPivotTolerance)) {
      throw SingularMatrixError(k, lu(piv, k));
    }
    if (piv != k) {
      std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(piv).begin());
      std::swap(f.perm[k], f.perm[piv]);
    }
    const double pivot = lu(k, k);
    auto row_k = lu.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto row_i = lu.row(i);
      const double factor = row_i[k] / pivot;
      row_i[k] = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) row_i[j] -= factor * row_k[j];
    }
  }
  return f;
}

DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& b) {
  const std::size_t n = f.lu.rows();
  if (b.rows() != n) {
    throw std::invalid_argument("lu_solve: right-hand side row count mismatch");
  }
  DenseMatrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto src = b.row(f.perm[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  // Forward substitution with unit lower triangle.
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double l = f.lu(i, k);
      if (l == 0.0) continue;
      auto xk = x.row(k);
      for (std::size_t c = 0; c < xi.size(); ++c) xi[c] -= l * xk[c];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double u = f.lu(ii, k);
      if (u == 0.0) continue;
      auto xk = x.row(k);
      for (std::size_t c = 0; c < xi.size(); ++c) xi[c] -= u * xk[c];
    }
    const double d = f.lu(ii, ii);
    for (double& value : xi) value /= d;
  }
  return x;
}

DenseMatrix dense_solve(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("dense_solve: matrix is not square");
  }
  if (b.rows() != a.rows()) {
    throw std::invalid_argument("dense_solve: right-hand side row count mismatch");
  }
  return lu_solve(lu_factor(a), b);
}

}  // namespace pcconv
