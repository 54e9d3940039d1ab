// Copyright 2026 The pairgt Authors.
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

// Sparse matrices with both row- and column-compressed storage, the implicit
// centering/scaling wrapper, and the matrix-vector kernels the rest of the
// library is built on.

#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pairgt {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
/// Blocks of vectors travel through operators in row-major layout so that
/// the sparse kernels touch contiguous memory per row.
using RowBlock =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Process-wide guard on dense allocations made through `dense_block` and
/// `dense_matrix`. A limit of 0 disables the check.
class DenseBudget {
 public:
  static void set_limit(std::size_t max_elements);
  static std::size_t limit();
  /// Largest request seen since the last reset.
  static std::size_t peak();
  static void reset_peak();
  /// Throws Error(kResourceLimit) when rows*cols exceeds the limit.
  static void check(std::size_t rows, std::size_t cols);
};

RowBlock dense_block(std::size_t rows, std::size_t cols);
DenseMatrix dense_matrix(std::size_t rows, std::size_t cols);

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  // Row-compressed view. Column indices are ascending within each row.
  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_index() const { return col_index_; }
  std::span<const double> values() const { return values_; }

  // Column-compressed view. Row indices are ascending within each column.
  std::span<const std::size_t> col_ptr() const { return col_ptr_; }
  std::span<const std::size_t> row_index() const { return row_index_; }
  std::span<const double> col_values() const { return col_values_; }

  /// Entries in row-major order.
  std::vector<Triplet> triplets() const;
  Vector row_sums() const;
  Vector col_sums() const;
  double total() const;
  double min_value() const;
  DenseMatrix to_dense() const;

  bool operator==(const SparseMatrix& other) const;

 private:
  friend SparseMatrix build_sparse(std::vector<Triplet>, std::size_t,
                                   std::size_t);
  void build_columns();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_index_;
  std::vector<double> values_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_index_;
  std::vector<double> col_values_;
};

/// Sums duplicate coordinates, drops entries that end up exactly zero, and
/// orders entries row-major. Duplicates are summed in ascending value order
/// so the result does not depend on the order of `triplets`.
SparseMatrix build_sparse(std::vector<Triplet> triplets, std::size_t n_rows,
                          std::size_t n_cols);

SparseMatrix sparse_from_dense(const DenseMatrix& dense);

/// M = diag(row_scales) * base * diag(col_scales) - 1 * col_offsetsᵀ.
///
/// The offset is a rank-one correction applied inside the products, so a
/// centered sparse matrix is never materialized.
class CenteredMatrix {
 public:
  CenteredMatrix() = default;
  explicit CenteredMatrix(SparseMatrix base);
  CenteredMatrix(SparseMatrix base, Vector col_offsets, Vector row_scales,
                 Vector col_scales);

  std::size_t rows() const { return base_.rows(); }
  std::size_t cols() const { return base_.cols(); }
  const SparseMatrix& base() const { return base_; }
  const Vector& col_offsets() const { return col_offsets_; }
  const Vector& row_scales() const { return row_scales_; }
  const Vector& col_scales() const { return col_scales_; }
  bool has_offsets() const { return has_offsets_; }

  /// Rows/columns that scale_rows_cols left untouched because their sum was 0.
  const std::vector<std::size_t>& flagged_rows() const { return flagged_rows_; }
  const std::vector<std::size_t>& flagged_cols() const { return flagged_cols_; }

  /// Column sums of the implicit matrix (before offsets are subtracted they
  /// are the scaled sums; this returns the sums of M itself).
  Vector col_sums() const;
  /// M * 1.
  Vector row_sums() const;

  DenseMatrix to_dense() const;

 private:
  friend CenteredMatrix scale_rows_cols(const SparseMatrix&);

  SparseMatrix base_;
  Vector col_offsets_;
  Vector row_scales_;
  Vector col_scales_;
  bool has_offsets_ = false;
  bool has_row_scales_ = false;
  bool has_col_scales_ = false;
  std::vector<std::size_t> flagged_rows_;
  std::vector<std::size_t> flagged_cols_;

  friend RowBlock matmat(const CenteredMatrix&, const RowBlock&);
  friend RowBlock rmatmat(const CenteredMatrix&, const RowBlock&);
};

/// Offsets become the column means of `m`; the densified result has zero
/// column sums.
CenteredMatrix center_columns(const SparseMatrix& m);
/// Centers the implicit form of an already scaled matrix. Applying it twice
/// gives the same offsets as applying it once.
CenteredMatrix center_columns(const CenteredMatrix& m);

/// Entry (i,j) becomes m_ij / sqrt(rowsum_i * colsum_j). Rows or columns
/// with zero sum keep scale 1 and are reported through flagged_rows/cols.
CenteredMatrix scale_rows_cols(const SparseMatrix& m);

Vector matvec(const SparseMatrix& m, const Vector& v);
Vector rmatvec(const SparseMatrix& m, const Vector& u);
RowBlock matmat(const SparseMatrix& m, const RowBlock& v);
RowBlock rmatmat(const SparseMatrix& m, const RowBlock& u);

Vector matvec(const CenteredMatrix& m, const Vector& v);
Vector rmatvec(const CenteredMatrix& m, const Vector& u);
RowBlock matmat(const CenteredMatrix& m, const RowBlock& v);
RowBlock rmatmat(const CenteredMatrix& m, const RowBlock& u);

// Triplet text format, see docs/formats.md:
//   line 1: "<rows> <cols> <nnz>"
//   then nnz lines "<row> <col> <value>", 0-based, row-major order.
void write_triplets(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_triplets(std::istream& in, const std::string& source);
void save_triplets(const std::string& path, const SparseMatrix& m);
SparseMatrix load_triplets(const std::string& path);

}  // namespace pairgt
