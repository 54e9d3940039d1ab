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

#include "pairgt/sparse.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

namespace {

std::atomic<std::size_t> g_dense_limit{0};
std::atomic<std::size_t> g_dense_peak{0};

std::string describe(const Triplet& t, std::size_t index) {
  return "triplet #" + std::to_string(index) + " (" + std::to_string(t.row) +
         ", " + std::to_string(t.col) + ", " + format_double(t.value) + ")";
}

void require_rows(const RowBlock& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.rows()) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": operand has " +
                    std::to_string(v.rows()) + " rows, expected " +
                    std::to_string(n));
  }
}

// out.row(ptr_owner) += sum_k val[k] * in.row(idx[k]) for each compressed
// slice; `ptr` is row_ptr (for A*V) or col_ptr (for Aᵀ*U).
RowBlock gather_product(std::span<const std::size_t> ptr,
                        std::span<const std::size_t> idx,
                        std::span<const double> val, std::size_t out_rows,
                        const RowBlock& in) {
  const std::size_t b = static_cast<std::size_t>(in.cols());
  RowBlock out = dense_block(out_rows, b);
  out.setZero();
  const double* src = in.data();
  double* dst = out.data();
  for (std::size_t r = 0; r < out_rows; ++r) {
    double* o = dst + r * b;
    for (std::size_t k = ptr[r]; k < ptr[r + 1]; ++k) {
      const double w = val[k];
      const double* s = src + idx[k] * b;
      for (std::size_t c = 0; c < b; ++c) o[c] += w * s[c];
    }
  }
  return out;
}

RowBlock as_block(const Vector& v) {
  RowBlock b(v.size(), 1);
  b.col(0) = v;
  return b;
}

}  // namespace

void DenseBudget::set_limit(std::size_t max_elements) {
  g_dense_limit.store(max_elements);
}
std::size_t DenseBudget::limit() { return g_dense_limit.load(); }
std::size_t DenseBudget::peak() { return g_dense_peak.load(); }
void DenseBudget::reset_peak() { g_dense_peak.store(0); }

void DenseBudget::check(std::size_t rows, std::size_t cols) {
  const std::size_t n = rows * cols;
  std::size_t prev = g_dense_peak.load();
  while (n > prev && !g_dense_peak.compare_exchange_weak(prev, n)) {
  }
  const std::size_t lim = g_dense_limit.load();
  if (lim != 0 && n > lim) {
    throw Error(ErrorCode::kResourceLimit,
                "dense allocation of " + std::to_string(rows) + " x " +
                    std::to_string(cols) + " exceeds the budget of " +
                    std::to_string(lim) + " elements");
  }
}

RowBlock dense_block(std::size_t rows, std::size_t cols) {
  DenseBudget::check(rows, cols);
  return RowBlock(rows, cols);
}

DenseMatrix dense_matrix(std::size_t rows, std::size_t cols) {
  DenseBudget::check(rows, cols);
  return DenseMatrix(rows, cols);
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix build_sparse(std::vector<Triplet> triplets, std::size_t n_rows,
                          std::size_t n_cols) {
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (t.row >= n_rows || t.col >= n_cols) {
      throw Error(ErrorCode::kInvalidArgument,
                  describe(t, k) + " is out of range for a " +
                      std::to_string(n_rows) + " x " + std::to_string(n_cols) +
                      " matrix");
    }
    if (!std::isfinite(t.value)) {
      throw Error(ErrorCode::kInvalidArgument,
                  describe(t, k) + " has a non-finite value");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              if (a.row != b.row) return a.row < b.row;
              if (a.col != b.col) return a.col < b.col;
              return a.value < b.value;
            });

  SparseMatrix m;
  m.rows_ = n_rows;
  m.cols_ = n_cols;
  m.row_ptr_.assign(n_rows + 1, 0);
  m.col_index_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t k = 0;
  while (k < triplets.size()) {
    const std::size_t r = triplets[k].row;
    const std::size_t c = triplets[k].col;
    double sum = 0.0;
    while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) {
      sum += triplets[k].value;
      ++k;
    }
    if (sum != 0.0) {
      m.col_index_.push_back(c);
      m.values_.push_back(sum);
      ++m.row_ptr_[r + 1];
    }
  }
  for (std::size_t r = 0; r < n_rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  m.build_columns();
  return m;
}

void SparseMatrix::build_columns() {
  col_ptr_.assign(cols_ + 1, 0);
  for (auto c : col_index_) ++col_ptr_[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) col_ptr_[c + 1] += col_ptr_[c];
  row_index_.resize(values_.size());
  col_values_.resize(values_.size());
  std::vector<std::size_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t pos = cursor[col_index_[k]]++;
      row_index_[pos] = r;
      col_values_[pos] = values_[k];
    }
  }
}

SparseMatrix sparse_from_dense(const DenseMatrix& dense) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                     dense(i, j)});
      }
    }
  }
  return build_sparse(std::move(t), dense.rows(), dense.cols());
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back({r, col_index_[k], values_[k]});
    }
  }
  return out;
}

Vector SparseMatrix::row_sums() const {
  Vector s = Vector::Zero(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      s[r] += values_[k];
    }
  }
  return s;
}

Vector SparseMatrix::col_sums() const {
  Vector s = Vector::Zero(cols_);
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      s[c] += col_values_[k];
    }
  }
  return s;
}

double SparseMatrix::total() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double SparseMatrix::min_value() const {
  if (values_.empty()) return 0.0;
  return *std::min_element(values_.begin(), values_.end());
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = dense_matrix(rows_, cols_);
  d.setZero();
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      d(r, col_index_[k]) = values_[k];
    }
  }
  return d;
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ &&
         row_ptr_ == other.row_ptr_ && col_index_ == other.col_index_ &&
         values_ == other.values_;
}

// ---------------------------------------------------------------------------
// CenteredMatrix

CenteredMatrix::CenteredMatrix(SparseMatrix base)
    : base_(std::move(base)),
      col_offsets_(Vector::Zero(base_.cols())),
      row_scales_(Vector::Ones(base_.rows())),
      col_scales_(Vector::Ones(base_.cols())) {}

CenteredMatrix::CenteredMatrix(SparseMatrix base, Vector col_offsets,
                               Vector row_scales, Vector col_scales)
    : base_(std::move(base)),
      col_offsets_(std::move(col_offsets)),
      row_scales_(std::move(row_scales)),
      col_scales_(std::move(col_scales)) {
  if (static_cast<std::size_t>(col_offsets_.size()) != base_.cols() ||
      static_cast<std::size_t>(col_scales_.size()) != base_.cols() ||
      static_cast<std::size_t>(row_scales_.size()) != base_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "CenteredMatrix: offset/scale lengths do not match the base");
  }
  has_offsets_ = (col_offsets_.array() != 0.0).any();
  has_row_scales_ = (row_scales_.array() != 1.0).any();
  has_col_scales_ = (col_scales_.array() != 1.0).any();
}

Vector CenteredMatrix::col_sums() const {
  Vector scaled_rows = row_scales_;
  Vector s = Vector::Zero(cols());
  auto ptr = base_.col_ptr();
  auto idx = base_.row_index();
  auto val = base_.col_values();
  for (std::size_t c = 0; c < cols(); ++c) {
    double acc = 0.0;
    for (std::size_t k = ptr[c]; k < ptr[c + 1]; ++k) {
      acc += scaled_rows[idx[k]] * val[k];
    }
    s[c] = col_scales_[c] * acc -
           static_cast<double>(rows()) * col_offsets_[c];
  }
  return s;
}

Vector CenteredMatrix::row_sums() const {
  return matvec(*this, Vector::Ones(cols()));
}

DenseMatrix CenteredMatrix::to_dense() const {
  DenseMatrix d = base_.to_dense();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      d(i, j) = row_scales_[i] * col_scales_[j] * d(i, j) - col_offsets_[j];
    }
  }
  return d;
}

CenteredMatrix center_columns(const SparseMatrix& m) {
  return center_columns(CenteredMatrix(m));
}

CenteredMatrix center_columns(const CenteredMatrix& m) {
  const std::size_t n = m.rows();
  Vector offsets = Vector::Zero(m.cols());
  if (n > 0) {
    auto ptr = m.base().col_ptr();
    auto idx = m.base().row_index();
    auto val = m.base().col_values();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t k = ptr[c]; k < ptr[c + 1]; ++k) {
        acc += m.row_scales()[idx[k]] * val[k];
      }
      offsets[c] = m.col_scales()[c] * acc / static_cast<double>(n);
    }
  }
  CenteredMatrix out(m.base(), std::move(offsets), m.row_scales(),
                     m.col_scales());
  return out;
}

CenteredMatrix scale_rows_cols(const SparseMatrix& m) {
  if (m.nnz() > 0 && m.min_value() < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "scale_rows_cols: matrix has negative entries; scaling is "
                "defined for count data");
  }
  Vector rs = m.row_sums();
  Vector cs = m.col_sums();
  Vector row_scales = Vector::Ones(m.rows());
  Vector col_scales = Vector::Ones(m.cols());
  std::vector<std::size_t> zero_rows, zero_cols;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (rs[i] > 0.0) {
      row_scales[i] = 1.0 / std::sqrt(rs[i]);
    } else {
      zero_rows.push_back(i);
    }
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (cs[j] > 0.0) {
      col_scales[j] = 1.0 / std::sqrt(cs[j]);
    } else {
      zero_cols.push_back(j);
    }
  }
  CenteredMatrix out(m, Vector::Zero(m.cols()), std::move(row_scales),
                     std::move(col_scales));
  out.flagged_rows_ = std::move(zero_rows);
  out.flagged_cols_ = std::move(zero_cols);
  return out;
}

// ---------------------------------------------------------------------------
// Products

RowBlock matmat(const SparseMatrix& m, const RowBlock& v) {
  require_rows(v, m.cols(), "matmat");
  return gather_product(m.row_ptr(), m.col_index(), m.values(), m.rows(), v);
}

RowBlock rmatmat(const SparseMatrix& m, const RowBlock& u) {
  require_rows(u, m.rows(), "rmatmat");
  return gather_product(m.col_ptr(), m.row_index(), m.col_values(), m.cols(),
                        u);
}

Vector matvec(const SparseMatrix& m, const Vector& v) {
  return matmat(m, as_block(v)).col(0);
}

Vector rmatvec(const SparseMatrix& m, const Vector& u) {
  return rmatmat(m, as_block(u)).col(0);
}

RowBlock matmat(const CenteredMatrix& m, const RowBlock& v) {
  require_rows(v, m.cols(), "matmat");
  RowBlock out;
  if (m.has_col_scales_) {
    RowBlock scaled = m.col_scales_.asDiagonal() * v;
    out = matmat(m.base_, scaled);
  } else {
    out = matmat(m.base_, v);
  }
  if (m.has_row_scales_) out = m.row_scales_.asDiagonal() * out;
  if (m.has_offsets_) {
    Eigen::RowVectorXd shift = Eigen::RowVectorXd::Zero(v.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.col_offsets_[j] != 0.0) shift += m.col_offsets_[j] * v.row(j);
    }
    out.rowwise() -= shift;
  }
  return out;
}

RowBlock rmatmat(const CenteredMatrix& m, const RowBlock& u) {
  require_rows(u, m.rows(), "rmatmat");
  RowBlock out;
  if (m.has_row_scales_) {
    RowBlock scaled = m.row_scales_.asDiagonal() * u;
    out = rmatmat(m.base_, scaled);
  } else {
    out = rmatmat(m.base_, u);
  }
  if (m.has_col_scales_) out = m.col_scales_.asDiagonal() * out;
  if (m.has_offsets_) {
    Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i) total += u.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.col_offsets_[j] != 0.0) out.row(j) -= m.col_offsets_[j] * total;
    }
  }
  return out;
}

Vector matvec(const CenteredMatrix& m, const Vector& v) {
  return matmat(m, as_block(v)).col(0);
}

Vector rmatvec(const CenteredMatrix& m, const Vector& u) {
  return rmatmat(m, as_block(u)).col(0);
}

// ---------------------------------------------------------------------------
// Triplet text format

void write_triplets(std::ostream& out, const SparseMatrix& m) {
  std::string buf;
  buf += std::to_string(m.rows()) + ' ' + std::to_string(m.cols()) + ' ' +
         std::to_string(m.nnz()) + '\n';
  for (const auto& t : m.triplets()) {
    buf += std::to_string(t.row);
    buf += ' ';
    buf += std::to_string(t.col);
    buf += ' ';
    buf += format_double(t.value);
    buf += '\n';
  }
  out << buf;
}

SparseMatrix read_triplets(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorCode::kParse,
                 source + ":" + std::to_string(line_no) + ": " + what);
  };
  std::size_t rows = 0, cols = 0, nnz = 0;
  bool have_header = false;
  std::vector<Triplet> triplets;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty()) continue;
    std::vector<std::string_view> fields;
    for (auto f : split(t, ' ')) {
      if (!f.empty()) fields.push_back(f);
    }
    if (fields.size() != 3) throw fail("expected 3 fields");
    try {
      if (!have_header) {
        rows = parse_uint(fields[0], "rows");
        cols = parse_uint(fields[1], "cols");
        nnz = parse_uint(fields[2], "nnz");
        have_header = true;
        triplets.reserve(nnz);
        continue;
      }
      Triplet tr{parse_uint(fields[0], "row"), parse_uint(fields[1], "col"),
                 parse_double(fields[2], "value")};
      triplets.push_back(tr);
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  if (!have_header) {
    throw Error(ErrorCode::kParse, source + ": missing header line");
  }
  if (triplets.size() != nnz) {
    throw Error(ErrorCode::kParse, source + ": header declares " +
                                       std::to_string(nnz) + " entries, found " +
                                       std::to_string(triplets.size()));
  }
  try {
    return build_sparse(std::move(triplets), rows, cols);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, source + ": " + e.what());
  }
}

void save_triplets(const std::string& path, const SparseMatrix& m) {
  std::ostringstream ss;
  write_triplets(ss, m);
  write_file(path, ss.str());
}

SparseMatrix load_triplets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return read_triplets(in, path);
}

}  // namespace pairgt
