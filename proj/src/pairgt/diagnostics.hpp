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

// Interpretive statistics for a fitted co-clustering: attention-ratio,
// the Ψ interaction matrices, and keyword scores Φ.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pairgt/sparse.hpp"

namespace pairgt {

struct AttentionRatio {
  /// max_ℓ ζ_iℓ / d_i; NaN where d_i = 0.
  std::vector<double> ratio;
  /// Wall the citizen focuses on; npos where d_i = 0.
  std::vector<std::size_t> focus;
  std::vector<double> degree;
  std::vector<bool> undefined;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// ζ_iℓ sums A_ij over the posts j on wall ℓ. Tied favourite walls are
/// resolved uniformly at random by a generator seeded from (seed, i).
AttentionRatio attention_ratio(const SparseMatrix& a,
                               const std::vector<std::size_t>& wall_of_post,
                               std::size_t n_walls, std::uint64_t seed);

struct Histogram {
  std::vector<double> lower;  // bin edges, left-open except the first
  std::vector<double> upper;
  std::vector<std::size_t> counts;
  std::size_t n_included = 0;
};

/// Equal-width bins over [0, 1] for citizens with degree ≥ min_degree.
Histogram attention_histogram(const AttentionRatio& ar, double min_degree,
                              std::size_t n_bins);

enum class InteractionKind { kPsiC, kPsiP, kPsi };

struct InteractionMatrix {
  InteractionKind kind = InteractionKind::kPsi;
  DenseMatrix values;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  /// Rows (columns) whose group is empty; their entries are NaN.
  std::vector<bool> empty_rows;
  std::vector<bool> empty_cols;
};

/// comments from citizen-cluster a on wall b / (|a| · posts on wall b).
InteractionMatrix psi_c(const SparseMatrix& a,
                        const std::vector<std::size_t>& citizen_labels,
                        std::size_t k_c,
                        const std::vector<std::size_t>& wall_of_post,
                        const std::vector<std::string>& wall_names);

/// posts of cluster a on wall b / (|a| · posts on wall b).
InteractionMatrix psi_p(const std::vector<std::size_t>& post_labels,
                        std::size_t k_p,
                        const std::vector<std::size_t>& wall_of_post,
                        const std::vector<std::string>& wall_names);

/// comments from citizen-cluster a under post-cluster b / (|a| · |b|).
InteractionMatrix psi(const SparseMatrix& a,
                      const std::vector<std::size_t>& citizen_labels,
                      std::size_t k_c,
                      const std::vector<std::size_t>& post_labels,
                      std::size_t k_p);

struct KeywordScore {
  std::string term;
  std::size_t column = 0;
  double score = 0.0;
  double observed = 0.0;
  double expected = 0.0;
};

struct KeywordTable {
  std::size_t cluster = 0;
  /// Ranked by score descending, ties by term.
  std::vector<KeywordScore> ranked;
  /// Every term, in column order; scores are NaN where expected is 0.
  std::vector<KeywordScore> all;
  std::vector<std::size_t> zero_expected;
};

/// Φ_kj = Σ_{i∈k} X_ij / Σ_{i∈k} X̂_ij with X̂_ij = X_i· X_·j / X_··, on raw
/// counts. Terms with zero expected count are listed and left unranked.
KeywordTable keyword_scores(const SparseMatrix& term_matrix,
                            const std::vector<std::size_t>& labels,
                            std::size_t cluster,
                            const std::vector<std::string>& terms,
                            std::size_t top_n);

}  // namespace pairgt
