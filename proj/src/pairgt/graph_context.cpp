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

#include "pairgt/graph_context.hpp"

#include <algorithm>
#include <cmath>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

// ---------------------------------------------------------------------------
// Laplacian

RegularizedLaplacian::RegularizedLaplacian(SparseMatrix a,
                                           std::optional<double> tau_c,
                                           std::optional<double> tau_p)
    : a_(std::move(a)) {
  if (a_.nnz() > 0 && a_.min_value() < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "laplacian: adjacency matrix has negative entries");
  }
  const Vector deg_c = a_.row_sums();
  const Vector deg_p = a_.col_sums();
  const double total = a_.total();
  tau_c_ = tau_c.value_or(a_.rows() ? total / static_cast<double>(a_.rows())
                                    : 0.0);
  tau_p_ = tau_p.value_or(a_.cols() ? total / static_cast<double>(a_.cols())
                                    : 0.0);
  if (!(tau_c_ >= 0.0) || !(tau_p_ >= 0.0) || !std::isfinite(tau_c_) ||
      !std::isfinite(tau_p_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "laplacian: regularizers must be finite and non-negative");
  }
  d_c_inv_sqrt_.resize(a_.rows());
  d_p_inv_sqrt_.resize(a_.cols());
  for (std::size_t i = 0; i < a_.rows(); ++i) {
    const double d = deg_c[i] + tau_c_;
    d_c_inv_sqrt_[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  for (std::size_t j = 0; j < a_.cols(); ++j) {
    const double d = deg_p[j] + tau_p_;
    d_p_inv_sqrt_[j] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  std::vector<Triplet> t = a_.triplets();
  for (auto& e : t) e.value *= d_c_inv_sqrt_[e.row] * d_p_inv_sqrt_[e.col];
  l_ = build_sparse(std::move(t), a_.rows(), a_.cols());
}

RegularizedLaplacian laplacian(SparseMatrix a, std::optional<double> tau_c,
                               std::optional<double> tau_p) {
  return RegularizedLaplacian(std::move(a), tau_c, tau_p);
}

// ---------------------------------------------------------------------------
// Call-response matrix

CallResponse call_response(const CenteredMatrix& x,
                           const RegularizedLaplacian& l,
                           const CenteredMatrix& y, std::size_t block_width) {
  if (x.rows() != l.rows() || y.rows() != l.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "call_response: X is " + std::to_string(x.rows()) + " x " +
                    std::to_string(x.cols()) + ", L is " +
                    std::to_string(l.rows()) + " x " +
                    std::to_string(l.cols()) + ", Y is " +
                    std::to_string(y.rows()) + " x " +
                    std::to_string(y.cols()));
  }
  if (block_width == 0) block_width = 256;
  const std::size_t n_p = l.cols();
  const std::size_t m_c = x.cols();
  const std::size_t m_p = y.cols();

  const SparseMatrix& lm = l.matrix();
  auto l_ptr = lm.row_ptr();
  auto l_col = lm.col_index();
  auto l_val = lm.values();

  const SparseMatrix& xb = x.base();
  auto x_ptr = xb.col_ptr();
  auto x_row = xb.row_index();
  auto x_val = xb.col_values();

  const SparseMatrix& yb = y.base();
  auto y_ptr = yb.row_ptr();
  auto y_col = yb.col_index();
  auto y_val = yb.values();

  // ℓ = Lᵀ1, needed for the X offsets.
  const Vector l_col_sums = lm.col_sums();

  CallResponse out;
  out.values = dense_matrix(m_c, m_p);
  out.values.setZero();

  for (std::size_t s0 = 0; s0 < m_c; s0 += block_width) {
    const std::size_t s1 = std::min(m_c, s0 + block_width);
    const std::size_t b = s1 - s0;

    // P = (X_c[:, s0:s1])ᵀ L stored transposed as n_P x b.
    RowBlock p = dense_block(n_p, b);
    p.setZero();
    double* pd = p.data();
    for (std::size_t s = s0; s < s1; ++s) {
      const double cs = x.col_scales()[s];
      for (std::size_t k = x_ptr[s]; k < x_ptr[s + 1]; ++k) {
        const std::size_t i = x_row[k];
        const double xv = x.row_scales()[i] * cs * x_val[k];
        for (std::size_t e = l_ptr[i]; e < l_ptr[i + 1]; ++e) {
          pd[l_col[e] * b + (s - s0)] += xv * l_val[e];
        }
      }
    }
    if (x.has_offsets()) {
      for (std::size_t j = 0; j < n_p; ++j) {
        const double lj = l_col_sums[j];
        if (lj == 0.0) continue;
        for (std::size_t c = 0; c < b; ++c) {
          pd[j * b + c] -= lj * x.col_offsets()[s0 + c];
        }
      }
    }

    // W[s0:s1, :]ᵀ = Y_cᵀ P, accumulated as M_P x b.
    RowBlock wb = dense_block(m_p, b);
    wb.setZero();
    double* wd = wb.data();
    for (std::size_t j = 0; j < n_p; ++j) {
      const double rs = y.row_scales()[j];
      const double* prow = pd + j * b;
      for (std::size_t k = y_ptr[j]; k < y_ptr[j + 1]; ++k) {
        const std::size_t r = y_col[k];
        const double yv = rs * y.col_scales()[r] * y_val[k];
        double* wrow = wd + r * b;
        for (std::size_t c = 0; c < b; ++c) wrow[c] += yv * prow[c];
      }
    }
    if (y.has_offsets()) {
      Eigen::RowVectorXd p_total = Eigen::RowVectorXd::Zero(b);
      for (std::size_t j = 0; j < n_p; ++j) p_total += p.row(j);
      for (std::size_t r = 0; r < m_p; ++r) {
        const double o = y.col_offsets()[r];
        if (o != 0.0) wb.row(r) -= o * p_total;
      }
    }
    out.values.middleRows(s0, b) = wb.transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Threshold

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "nearest_rank_quantile: empty population");
  }
  const double n = static_cast<double>(values.size());
  const double raw = q * n;
  double rank = std::ceil(raw - 1e-9 * std::max(1.0, raw));
  rank = std::clamp(rank, 1.0, n);
  const auto idx = static_cast<std::size_t>(rank) - 1;
  std::nth_element(values.begin(),
                   values.begin() + static_cast<std::ptrdiff_t>(idx),
                   values.end());
  return values[idx];
}

ThresholdedResponse threshold(const CallResponse& w, double alpha,
                              const ThresholdOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold: alpha must lie in (0, 1], got " +
                    format_double(alpha));
  }
  const DenseMatrix& v = w.values;
  std::vector<double> population;
  population.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double a = std::abs(v.data()[k]);
    if (options.population == ThresholdPopulation::kAll || a != 0.0) {
      population.push_back(a);
    }
  }
  ThresholdedResponse out;
  out.alpha = alpha;
  out.population_size = population.size();
  bool any_nonzero = std::any_of(population.begin(), population.end(),
                                 [](double a) { return a != 0.0; });
  if (!any_nonzero) {
    out.all_zero = true;
    out.omega = 0.0;
    out.values = build_sparse({}, v.rows(), v.cols());
    return out;
  }
  out.omega = nearest_rank_quantile(std::move(population), 1.0 - alpha);
  std::vector<Triplet> kept;
  for (Eigen::Index s = 0; s < v.rows(); ++s) {
    for (Eigen::Index r = 0; r < v.cols(); ++r) {
      const double x = v(s, r);
      const bool keep = options.test == ThresholdTest::kMagnitude
                            ? std::abs(x) > out.omega
                            : x > out.omega;
      if (keep) {
        kept.push_back(
            {static_cast<std::size_t>(s), static_cast<std::size_t>(r), x});
      }
    }
  }
  out.values = build_sparse(std::move(kept), v.rows(), v.cols());
  return out;
}

// ---------------------------------------------------------------------------
// Similarity operator

SimilarityOperator::SimilarityOperator(
    std::shared_ptr<const RegularizedLaplacian> l)
    : l_(std::move(l)) {
  if (!l_) throw Error(ErrorCode::kInvalidArgument, "similarity: null L");
}

SimilarityOperator::SimilarityOperator(
    std::shared_ptr<const RegularizedLaplacian> l,
    std::shared_ptr<const CenteredMatrix> x,
    std::shared_ptr<const CenteredMatrix> y,
    std::shared_ptr<const SparseMatrix> tw, double h, TextKernel kernel)
    : l_(std::move(l)),
      x_(std::move(x)),
      y_(std::move(y)),
      tw_(std::move(tw)),
      h_(h),
      kernel_(kernel) {
  if (!l_) throw Error(ErrorCode::kInvalidArgument, "similarity: null L");
  if (std::isnan(h_) || h_ < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "similarity: h must be non-negative, got " + format_double(h_));
  }
  if (!x_ || !y_) {
    throw Error(ErrorCode::kInvalidArgument,
                "similarity: text operator needs both X and Y");
  }
  if (x_->rows() != l_->rows() || y_->rows() != l_->cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "similarity: X rows must match citizens and Y rows must match "
                "posts");
  }
  if (kernel_ == TextKernel::kThresholded) {
    if (!tw_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "similarity: thresholded kernel needs T(W)");
    }
    if (tw_->rows() != x_->cols() || tw_->cols() != y_->cols()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "similarity: T(W) must be " + std::to_string(x_->cols()) +
                      " x " + std::to_string(y_->cols()));
    }
  } else {
    x_ones_ = x_->row_sums();
    y_ones_ = y_->row_sums();
  }
}

SimilarityMode SimilarityOperator::mode() const {
  if (h_ == 0.0 || !x_) return SimilarityMode::kGraphOnly;
  if (kernel_ == TextKernel::kAllOne) return SimilarityMode::kAllOne;
  if (std::isinf(h_)) return SimilarityMode::kTextOnly;
  return SimilarityMode::kCombined;
}

SimilarityOperator SimilarityOperator::with_h(double h) const {
  if (!x_) {
    if (h != 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "similarity: graph-only operator has no text part");
    }
    return *this;
  }
  return SimilarityOperator(l_, x_, y_, tw_, h, kernel_);
}

RowBlock SimilarityOperator::apply_text(const RowBlock& v) const {
  if (!x_) {
    throw Error(ErrorCode::kInvalidArgument, "similarity: no text part");
  }
  RowBlock t = rmatmat(*y_, v);  // M_P x b
  if (kernel_ == TextKernel::kAllOne) {
    // X J Yᵀ v = (X 1)(1ᵀ Yᵀ v) = (X 1)((Y 1)ᵀ v)
    Eigen::RowVectorXd s = y_ones_.transpose() * v;
    RowBlock out = dense_block(rows(), v.cols());
    out = x_ones_ * s;
    return out;
  }
  RowBlock tt = matmat(*tw_, t);  // M_C x b
  return matmat(*x_, tt);
}

RowBlock SimilarityOperator::apply_text_transpose(const RowBlock& u) const {
  if (!x_) {
    throw Error(ErrorCode::kInvalidArgument, "similarity: no text part");
  }
  if (kernel_ == TextKernel::kAllOne) {
    Eigen::RowVectorXd s = x_ones_.transpose() * u;
    RowBlock out = dense_block(cols(), u.cols());
    out = y_ones_ * s;
    return out;
  }
  RowBlock t = rmatmat(*x_, u);    // M_C x b
  RowBlock tt = rmatmat(*tw_, t);  // M_P x b
  return matmat(*y_, tt);
}

RowBlock SimilarityOperator::apply(const RowBlock& v) const {
  if (h_ == 0.0 || !x_) return l_->apply(v);
  if (std::isinf(h_)) return apply_text(v);
  RowBlock out = l_->apply(v);
  out += h_ * apply_text(v);
  return out;
}

RowBlock SimilarityOperator::apply_transpose(const RowBlock& u) const {
  if (h_ == 0.0 || !x_) return l_->apply_transpose(u);
  if (std::isinf(h_)) return apply_text_transpose(u);
  RowBlock out = l_->apply_transpose(u);
  out += h_ * apply_text_transpose(u);
  return out;
}

DenseMatrix SimilarityOperator::to_dense() const {
  DenseMatrix d = dense_matrix(rows(), cols());
  RowBlock eye = RowBlock::Identity(cols(), cols());
  d = apply(eye);
  return d;
}

}  // namespace pairgt
