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
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcconv {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  // Column vector (n x 1).
  static DenseMatrix column(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<double> col(std::size_t j) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double max_abs() const;
  double frobenius_norm() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double scale);
  // this += scale * other
  void add_scaled(const DenseMatrix& other, double scale);

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double scale, DenseMatrix a);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// a^T * b without materializing the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// a * b^T without materializing the transpose.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
// Max-abs entrywise difference; dimensions must agree.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
// Frobenius inner product <a, b>.
double frobenius_dot(const DenseMatrix& a, const DenseMatrix& b);

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix. Column indices are strictly increasing
// within each row. Immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  // Takes ownership of CSR buffers and validates the layout.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  // Sorts entries and merges duplicates by summation. Explicit zeros are kept.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix zero(std::size_t rows, std::size_t cols);
  static SparseMatrix from_dense(const DenseMatrix& dense, double drop_tol = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  // Stored value at (i, j), or 0 when the entry is structurally absent.
  double at(std::size_t i, std::size_t j) const;

  // True when (i,j) is stored iff (j,i) is stored and |a_ij - a_ji| <= tol.
  bool is_symmetric(double tol = 0.0) const;

  DenseMatrix to_dense() const;

  // this + shift * I, keeping the diagonal stored for every row.
  SparseMatrix add_diagonal(double shift) const;
  SparseMatrix scaled(double factor) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column i pairs with values[i]
};

// Largest order accepted by sym_eig.
inline constexpr std::size_t kMaxEigenOrder = 1000;

// Cyclic Jacobi eigensolver for dense symmetric matrices.
EigenDecomposition sym_eig(const DenseMatrix& a);

// Raised when LU elimination meets a pivot with magnitude <= 1e-12.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t pivot_index, double pivot_value);
  std::size_t pivot_index() const { return pivot_index_; }
  double pivot_value() const { return pivot_value_; }

 private:
  std::size_t pivot_index_;
  double pivot_value_;
};

inline constexpr double kPivotTolerance = 1e-12;

// LU factorization with partial pivoting, PA = LU packed in one matrix.
struct LuFactorization {
  DenseMatrix lu;
  std::vector<std::size_t> perm;  // row perm[i] of A sits at row i of LU

  double min_abs_pivot() const;
};

LuFactorization lu_factor(const DenseMatrix& a);
DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& b);

// Solves A X = B.
DenseMatrix dense_solve(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace pcconv
