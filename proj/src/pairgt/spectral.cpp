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

#include "pairgt/spectral.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

namespace {

DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix g = dense_matrix(rows, cols);
  // Fill column by column so the draw order is independent of storage.
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) g(r, c) = normal(rng);
  }
  return g;
}

DenseMatrix orthonormalize(const DenseMatrix& y) {
  Eigen::HouseholderQR<DenseMatrix> qr(y);
  DenseMatrix q = dense_matrix(y.rows(), y.cols());
  q.setIdentity();
  q = qr.householderQ() * q;
  return q;
}

void fix_signs(DenseMatrix& u, DenseMatrix& v, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      const double a = std::abs(u(r, i));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (u.rows() > 0 && u(best, i) < 0.0) {
      u.col(i) *= -1.0;
      v.col(i) *= -1.0;
    }
  }
}

void validate(const LinearOperator& op, const SvdOptions& options) {
  const std::size_t r = std::min(op.rows(), op.cols());
  if (options.k == 0 || options.k > r) {
    throw Error(ErrorCode::kInvalidArgument,
                "truncated_svd: k = " + std::to_string(options.k) +
                    " must lie in [1, min(rows, cols) = " + std::to_string(r) +
                    "]");
  }
  if (!(options.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "truncated_svd: tol must be positive");
  }
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

SpectralEmbedding randomized(const LinearOperator& op,
                             const SvdOptions& options) {
  const std::size_t k = options.k;
  const std::size_t width =
      std::min(k + options.oversample, std::min(op.rows(), op.cols()));
  std::mt19937_64 rng(options.seed);

  RowBlock y = op.apply(RowBlock(gaussian(op.cols(), width, rng)));
  Vector residuals = Vector::Zero(k);
  const std::size_t max_iter = std::max<std::size_t>(1, options.max_iter);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const DenseMatrix q = orthonormalize(DenseMatrix(y));
    const DenseMatrix bt = op.apply_transpose(RowBlock(q));  // n x width
    Eigen::JacobiSVD<DenseMatrix> svd(bt,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
    DenseMatrix v = svd.matrixU();           // right singular vectors of S
    DenseMatrix u = q * svd.matrixV();       // left singular vectors of S
    const Vector& sigma = svd.singularValues();
    y = op.apply(RowBlock(v));               // S V, also the next iterate
    for (std::size_t i = 0; i < k; ++i) {
      residuals[i] = (y.col(i) - sigma[i] * u.col(i)).norm();
    }
    const double bound = options.tol * sigma[0];
    const bool converged = (residuals.array() <= bound).all();
    if (converged && it >= std::max<std::size_t>(1, options.power_iters)) {
      SpectralEmbedding e;
      e.u_c = u.leftCols(k);
      e.u_p = v.leftCols(k);
      e.sigma = sigma.head(k);
      e.residuals = residuals;
      e.iterations = it;
      fix_signs(e.u_c, e.u_p, k);
      return e;
    }
  }
  throw ConvergenceError("truncated_svd: randomized subspace iteration did "
                         "not converge in " +
                             std::to_string(max_iter) + " iterations",
                         to_std(residuals));
}

// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
// Starts from a right vector, so S P = Q B holds and the check that matters
// is ‖Sᵀ u − σ v‖; both residuals are measured explicitly.
SpectralEmbedding lanczos(const LinearOperator& op, const SvdOptions& options) {
  const std::size_t k = options.k;
  const std::size_t m = op.rows();
  const std::size_t n = op.cols();
  const std::size_t rank_cap = std::min(m, n);
  std::size_t steps = std::min(rank_cap, std::max<std::size_t>(2 * k + 10, 20));
  std::mt19937_64 rng(options.seed);
  Vector residuals = Vector::Zero(k);
  const std::size_t max_iter = std::max<std::size_t>(1, options.max_iter);

  auto random_orthogonal = [&](const DenseMatrix& basis, std::size_t used,
                               std::size_t dim) {
    Vector r = gaussian(dim, 1, rng).col(0);
    for (int pass = 0; pass < 2; ++pass) {
      r -= basis.leftCols(used) * (basis.leftCols(used).transpose() * r);
    }
    return Vector(r / r.norm());
  };

  for (std::size_t it = 1; it <= max_iter; ++it) {
    DenseMatrix p = dense_matrix(n, steps);
    DenseMatrix q = dense_matrix(m, steps);
    p.setZero();
    q.setZero();
    Vector alpha = Vector::Zero(steps);
    Vector beta = Vector::Zero(steps);
    p.col(0) = gaussian(n, 1, rng).col(0).normalized();
    double scale = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
      Vector qj = op.apply(Vector(p.col(j)));
      if (j > 0) qj -= beta[j - 1] * q.col(j - 1);
      for (int pass = 0; pass < 2; ++pass) {
        qj -= q.leftCols(j) * (q.leftCols(j).transpose() * qj);
      }
      alpha[j] = qj.norm();
      scale = std::max(scale, alpha[j]);
      if (alpha[j] <= 1e-14 * std::max(scale, 1e-300)) {
        alpha[j] = 0.0;
        q.col(j) = random_orthogonal(q, j, m);
      } else {
        q.col(j) = qj / alpha[j];
      }
      if (j + 1 == steps) break;
      Vector pj = op.apply_transpose(Vector(q.col(j)));
      pj -= alpha[j] * p.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        pj -= p.leftCols(j + 1) * (p.leftCols(j + 1).transpose() * pj);
      }
      beta[j] = pj.norm();
      scale = std::max(scale, beta[j]);
      if (beta[j] <= 1e-14 * std::max(scale, 1e-300)) {
        beta[j] = 0.0;
        p.col(j + 1) = random_orthogonal(p, j + 1, n);
      } else {
        p.col(j + 1) = pj / beta[j];
      }
    }
    DenseMatrix b = DenseMatrix::Zero(steps, steps);
    for (std::size_t j = 0; j < steps; ++j) {
      b(j, j) = alpha[j];
      if (j + 1 < steps) b(j, j + 1) = beta[j];
    }
    Eigen::JacobiSVD<DenseMatrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    DenseMatrix u = q * svd.matrixU().leftCols(k);
    DenseMatrix v = p * svd.matrixV().leftCols(k);
    Vector sigma = svd.singularValues().head(k);
    const RowBlock sv = op.apply(RowBlock(v));
    const RowBlock su = op.apply_transpose(RowBlock(u));
    for (std::size_t i = 0; i < k; ++i) {
      const double r1 = (sv.col(i) - sigma[i] * u.col(i)).norm();
      const double r2 = (su.col(i) - sigma[i] * v.col(i)).norm();
      residuals[i] = std::max(r1, r2);
    }
    const double bound = options.tol * svd.singularValues()[0];
    if ((residuals.array() <= bound).all() || steps == rank_cap) {
      // At full dimension the factorization is exact up to rounding.
      SpectralEmbedding e;
      e.u_c = u;
      e.u_p = v;
      e.sigma = sigma;
      e.residuals = residuals;
      e.iterations = it;
      fix_signs(e.u_c, e.u_p, k);
      return e;
    }
    steps = std::min(rank_cap, 2 * steps);
  }
  throw ConvergenceError("truncated_svd: Lanczos bidiagonalization did not "
                         "converge in " +
                             std::to_string(max_iter) + " restarts",
                         to_std(residuals));
}

}  // namespace

SpectralEmbedding truncated_svd(const LinearOperator& op,
                                const SvdOptions& options) {
  validate(op, options);
  SpectralEmbedding e = options.method == SvdMethod::kLanczos
                            ? lanczos(op, options)
                            : randomized(op, options);
  return e;
}

void normalize_rows(SpectralEmbedding& embedding, double eps) {
  auto normalize = [eps](const DenseMatrix& u, DenseMatrix& out,
                         std::vector<std::size_t>& zero_rows) {
    out = u;
    zero_rows.clear();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double norm = u.row(i).norm();
      if (norm < eps) {
        out.row(i).setZero();
        zero_rows.push_back(static_cast<std::size_t>(i));
      } else {
        out.row(i) /= norm;
      }
    }
  };
  normalize(embedding.u_c, embedding.u_c_star, embedding.zero_rows_c);
  normalize(embedding.u_p, embedding.u_p_star, embedding.zero_rows_p);
}

Scree scree(const LinearOperator& op, std::size_t k_max,
            const SvdOptions& options) {
  SvdOptions o = options;
  o.k = k_max;
  Scree s;
  s.sigma = truncated_svd(op, o).sigma;
  s.gap_ratio.resize(k_max > 0 ? k_max - 1 : 0);
  for (std::size_t i = 0; i + 1 < k_max; ++i) {
    s.gap_ratio[i] = s.sigma[i + 1] > 0.0
                         ? s.sigma[i] / s.sigma[i + 1]
                         : std::numeric_limits<double>::infinity();
  }
  return s;
}

}  // namespace pairgt
