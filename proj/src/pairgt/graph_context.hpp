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

// The graph-context operators: regularized Laplacian L, call-response matrix
// W = XᵀLY, its hard threshold T_ω(W), and the similarity operator
// S = L + h·X·T_ω(W)·Yᵀ applied matrix-free.

#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "pairgt/linear_operator.hpp"
#include "pairgt/sparse.hpp"

namespace pairgt {

/// L = D_C^{-1/2} A D_P^{-1/2} with D_C = rowdeg + τ_c, D_P = coldeg + τ_p.
class RegularizedLaplacian final : public LinearOperator {
 public:
  using LinearOperator::apply;
  using LinearOperator::apply_transpose;

  /// Missing τ values default to the mean row (column) degree.
  explicit RegularizedLaplacian(SparseMatrix a,
                                std::optional<double> tau_c = std::nullopt,
                                std::optional<double> tau_p = std::nullopt);

  double tau_c() const { return tau_c_; }
  double tau_p() const { return tau_p_; }
  const SparseMatrix& adjacency() const { return a_; }
  /// 1/sqrt(rowdeg + τ_c); 0 where that sum is 0.
  const Vector& row_scale() const { return d_c_inv_sqrt_; }
  const Vector& col_scale() const { return d_p_inv_sqrt_; }
  /// L itself, same sparsity pattern as A.
  const SparseMatrix& matrix() const { return l_; }

  std::size_t rows() const override { return l_.rows(); }
  std::size_t cols() const override { return l_.cols(); }
  RowBlock apply(const RowBlock& v) const override { return matmat(l_, v); }
  RowBlock apply_transpose(const RowBlock& u) const override {
    return rmatmat(l_, u);
  }

 private:
  SparseMatrix a_;
  SparseMatrix l_;
  double tau_c_ = 0.0;
  double tau_p_ = 0.0;
  Vector d_c_inv_sqrt_;
  Vector d_p_inv_sqrt_;
};

RegularizedLaplacian laplacian(SparseMatrix a,
                               std::optional<double> tau_c = std::nullopt,
                               std::optional<double> tau_p = std::nullopt);

/// Unthresholded W = XᵀLY, M_C x M_P.
struct CallResponse {
  DenseMatrix values;
};

/// Computes W in blocks of `block_width` citizen-word columns. X and Y stay
/// sparse; per block only an n_P x width and an M_P x width buffer exist.
CallResponse call_response(const CenteredMatrix& x,
                           const RegularizedLaplacian& l,
                           const CenteredMatrix& y,
                           std::size_t block_width = 256);

enum class ThresholdPopulation {
  kNonzero,  // quantile over entries with W != 0
  kAll,      // quantile over every entry
};

enum class ThresholdTest {
  kMagnitude,  // keep |W_sr| > ω
  kSigned,     // keep W_sr > ω
};

struct ThresholdOptions {
  ThresholdPopulation population = ThresholdPopulation::kNonzero;
  ThresholdTest test = ThresholdTest::kMagnitude;
};

struct ThresholdedResponse {
  SparseMatrix values;  // T_ω(W)
  double omega = 0.0;
  double alpha = 1.0;
  std::size_t population_size = 0;
  /// Set when W has no nonzero entry; ω is then 0 and the result empty.
  bool all_zero = false;
};

/// Nearest-rank quantile: the ceil(q·n)-th smallest value (rank clamped to
/// [1, n]). Throws on an empty input.
double nearest_rank_quantile(std::vector<double> values, double q);

/// ω is the (1-α) nearest-rank quantile of |W| over the chosen population;
/// entries failing the strict test against ω are zeroed.
ThresholdedResponse threshold(const CallResponse& w, double alpha,
                              const ThresholdOptions& options = {});

enum class TextKernel {
  kThresholded,  // X T_ω(W) Yᵀ
  kAllOne,       // X J Yᵀ, J the all-ones matrix
};

enum class SimilarityMode { kGraphOnly, kCombined, kTextOnly, kAllOne };

inline constexpr double kInfiniteWeight =
    std::numeric_limits<double>::infinity();

/// S = L + h·C applied right to left; C = X·T·Yᵀ or X·J·Yᵀ is never formed.
/// h = 0 reduces to L exactly, h = ∞ drops L.
class SimilarityOperator final : public LinearOperator {
 public:
  using LinearOperator::apply;
  using LinearOperator::apply_transpose;

  /// Graph-only operator (h = 0).
  explicit SimilarityOperator(std::shared_ptr<const RegularizedLaplacian> l);
  SimilarityOperator(std::shared_ptr<const RegularizedLaplacian> l,
                     std::shared_ptr<const CenteredMatrix> x,
                     std::shared_ptr<const CenteredMatrix> y,
                     std::shared_ptr<const SparseMatrix> tw, double h,
                     TextKernel kernel = TextKernel::kThresholded);

  double h() const { return h_; }
  TextKernel kernel() const { return kernel_; }
  SimilarityMode mode() const;
  SimilarityOperator with_h(double h) const;

  const RegularizedLaplacian& laplacian() const { return *l_; }
  bool has_text() const { return x_ != nullptr; }

  std::size_t rows() const override { return l_->rows(); }
  std::size_t cols() const override { return l_->cols(); }
  RowBlock apply(const RowBlock& v) const override;
  RowBlock apply_transpose(const RowBlock& u) const override;

  /// Text part alone, C·V and Cᵀ·U.
  RowBlock apply_text(const RowBlock& v) const;
  RowBlock apply_text_transpose(const RowBlock& u) const;

  /// Densifies by applying the operator to identity columns. Only for small
  /// instances; goes through DenseBudget.
  DenseMatrix to_dense() const;

 private:
  std::shared_ptr<const RegularizedLaplacian> l_;
  std::shared_ptr<const CenteredMatrix> x_;
  std::shared_ptr<const CenteredMatrix> y_;
  std::shared_ptr<const SparseMatrix> tw_;
  double h_ = 0.0;
  TextKernel kernel_ = TextKernel::kThresholded;
  Vector x_ones_;  // X·1, used by the all-one kernel
  Vector y_ones_;  // Y·1
};

}  // namespace pairgt
