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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pairgt/linear_operator.hpp"

namespace pairgt {

enum class SvdMethod { kRandomized, kLanczos };

struct SvdOptions {
  std::size_t k = 4;
  std::uint64_t seed = 1;
  /// Accept when every retained ‖S v_i − σ_i u_i‖ ≤ tol·σ₁.
  double tol = 1e-10;
  std::size_t max_iter = 300;
  std::size_t oversample = 10;
  /// Minimum number of subspace iterations before convergence is checked.
  std::size_t power_iters = 4;
  SvdMethod method = SvdMethod::kRandomized;
};

struct SpectralEmbedding {
  DenseMatrix u_c;  // n_C x K left singular vectors
  DenseMatrix u_p;  // n_P x K right singular vectors
  Vector sigma;     // K values, nonincreasing
  DenseMatrix u_c_star;
  DenseMatrix u_p_star;
  std::vector<std::size_t> zero_rows_c;
  std::vector<std::size_t> zero_rows_p;
  Vector residuals;
  std::size_t iterations = 0;
};

/// Top-k singular triplets of `op` using only apply/apply_transpose.
/// Singular vectors are sign-fixed so the largest-magnitude entry of each
/// left vector is positive. Throws ConvergenceError carrying the residuals
/// when max_iter is exhausted.
SpectralEmbedding truncated_svd(const LinearOperator& op,
                                const SvdOptions& options);

/// Fills u_c_star/u_p_star with unit-norm rows. Rows with norm below `eps`
/// stay zero and are listed in zero_rows_c/zero_rows_p.
void normalize_rows(SpectralEmbedding& embedding, double eps = 1e-12);

struct Scree {
  Vector sigma;
  /// gap_ratio[i] = σ_i / σ_{i+1} (infinite when σ_{i+1} = 0), length k-1.
  Vector gap_ratio;
};

Scree scree(const LinearOperator& op, std::size_t k_max,
            const SvdOptions& options);

}  // namespace pairgt
