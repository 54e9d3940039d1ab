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

#include "pairgt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_labels(const std::vector<std::size_t>& labels, std::size_t k,
                  std::size_t expected_size, const char* what) {
  if (labels.size() != expected_size) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(expected_size) + " nodes");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= k) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + ": label " + std::to_string(labels[i]) +
                      " of node " + std::to_string(i) + " is not below k = " +
                      std::to_string(k));
    }
  }
}

void check_walls(const std::vector<std::size_t>& wall_of_post,
                 std::size_t n_walls, const char* what) {
  for (std::size_t j = 0; j < wall_of_post.size(); ++j) {
    if (wall_of_post[j] >= n_walls) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + ": post " + std::to_string(j) +
                      " has wall " + std::to_string(wall_of_post[j]) +
                      " but there are " + std::to_string(n_walls) + " walls");
    }
  }
}

std::vector<double> group_sizes(const std::vector<std::size_t>& labels,
                                std::size_t k) {
  std::vector<double> sizes(k, 0.0);
  for (std::size_t l : labels) sizes[l] += 1.0;
  return sizes;
}

std::vector<std::string> numbered(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::to_string(i + 1));
  return out;
}

// counts(a, b) / (rows[a] · cols[b]); empty groups give NaN and a flag.
void normalize(InteractionMatrix& m, const std::vector<double>& row_sizes,
               const std::vector<double>& col_sizes) {
  m.empty_rows.assign(row_sizes.size(), false);
  m.empty_cols.assign(col_sizes.size(), false);
  for (std::size_t a = 0; a < row_sizes.size(); ++a) {
    m.empty_rows[a] = row_sizes[a] == 0.0;
  }
  for (std::size_t b = 0; b < col_sizes.size(); ++b) {
    m.empty_cols[b] = col_sizes[b] == 0.0;
  }
  for (std::size_t a = 0; a < row_sizes.size(); ++a) {
    for (std::size_t b = 0; b < col_sizes.size(); ++b) {
      const double denom = row_sizes[a] * col_sizes[b];
      m.values(a, b) = denom > 0.0 ? m.values(a, b) / denom : kNaN;
    }
  }
}

}  // namespace

AttentionRatio attention_ratio(const SparseMatrix& a,
                               const std::vector<std::size_t>& wall_of_post,
                               std::size_t n_walls, std::uint64_t seed) {
  if (wall_of_post.size() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "attention_ratio: " + std::to_string(wall_of_post.size()) +
                    " wall ids for " + std::to_string(a.cols()) + " posts");
  }
  check_walls(wall_of_post, n_walls, "attention_ratio");
  const std::size_t n = a.rows();
  AttentionRatio out;
  out.ratio.assign(n, kNaN);
  out.focus.assign(n, AttentionRatio::npos);
  out.degree.assign(n, 0.0);
  out.undefined.assign(n, true);
  const auto rp = a.row_ptr();
  const auto ci = a.col_index();
  const auto v = a.values();
  std::vector<double> zeta(n_walls);
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(zeta.begin(), zeta.end(), 0.0);
    double d = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
      zeta[wall_of_post[ci[p]]] += v[p];
      d += v[p];
    }
    out.degree[i] = d;
    if (d <= 0.0) continue;
    const double best = *std::max_element(zeta.begin(), zeta.end());
    ties.clear();
    for (std::size_t w = 0; w < n_walls; ++w) {
      if (zeta[w] == best) ties.push_back(w);
    }
    std::size_t pick = 0;
    if (ties.size() > 1) {
      std::mt19937_64 rng(derive_seed(seed, i));
      pick = std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng);
    }
    out.ratio[i] = best / d;
    out.focus[i] = ties[pick];
    out.undefined[i] = false;
  }
  return out;
}

Histogram attention_histogram(const AttentionRatio& ar, double min_degree,
                              std::size_t n_bins) {
  if (n_bins == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "attention_histogram: need at least one bin");
  }
  Histogram h;
  h.counts.assign(n_bins, 0);
  for (std::size_t b = 0; b < n_bins; ++b) {
    h.lower.push_back(static_cast<double>(b) / static_cast<double>(n_bins));
    h.upper.push_back(static_cast<double>(b + 1) /
                      static_cast<double>(n_bins));
  }
  for (std::size_t i = 0; i < ar.ratio.size(); ++i) {
    if (ar.undefined[i] || ar.degree[i] < min_degree) continue;
    const double r = ar.ratio[i];
    std::size_t bin = static_cast<std::size_t>(
        std::ceil(r * static_cast<double>(n_bins)));
    bin = bin == 0 ? 0 : std::min(bin - 1, n_bins - 1);
    ++h.counts[bin];
    ++h.n_included;
  }
  return h;
}

InteractionMatrix psi_c(const SparseMatrix& a,
                        const std::vector<std::size_t>& citizen_labels,
                        std::size_t k_c,
                        const std::vector<std::size_t>& wall_of_post,
                        const std::vector<std::string>& wall_names) {
  const std::size_t n_walls = wall_names.size();
  check_labels(citizen_labels, k_c, a.rows(), "psi_c");
  if (wall_of_post.size() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "psi_c: wall ids do not match the number of posts");
  }
  check_walls(wall_of_post, n_walls, "psi_c");
  InteractionMatrix m;
  m.kind = InteractionKind::kPsiC;
  m.values = DenseMatrix::Zero(k_c, n_walls);
  m.row_labels = numbered(k_c);
  m.col_labels = wall_names;
  for (const Triplet& t : a.triplets()) {
    m.values(citizen_labels[t.row], wall_of_post[t.col]) += t.value;
  }
  normalize(m, group_sizes(citizen_labels, k_c),
            group_sizes(wall_of_post, n_walls));
  return m;
}

InteractionMatrix psi_p(const std::vector<std::size_t>& post_labels,
                        std::size_t k_p,
                        const std::vector<std::size_t>& wall_of_post,
                        const std::vector<std::string>& wall_names) {
  const std::size_t n_walls = wall_names.size();
  check_labels(post_labels, k_p, wall_of_post.size(), "psi_p");
  check_walls(wall_of_post, n_walls, "psi_p");
  InteractionMatrix m;
  m.kind = InteractionKind::kPsiP;
  m.values = DenseMatrix::Zero(k_p, n_walls);
  m.row_labels = numbered(k_p);
  m.col_labels = wall_names;
  for (std::size_t j = 0; j < post_labels.size(); ++j) {
    m.values(post_labels[j], wall_of_post[j]) += 1.0;
  }
  normalize(m, group_sizes(post_labels, k_p),
            group_sizes(wall_of_post, n_walls));
  return m;
}

InteractionMatrix psi(const SparseMatrix& a,
                      const std::vector<std::size_t>& citizen_labels,
                      std::size_t k_c,
                      const std::vector<std::size_t>& post_labels,
                      std::size_t k_p) {
  check_labels(citizen_labels, k_c, a.rows(), "psi");
  check_labels(post_labels, k_p, a.cols(), "psi");
  InteractionMatrix m;
  m.kind = InteractionKind::kPsi;
  m.values = DenseMatrix::Zero(k_c, k_p);
  m.row_labels = numbered(k_c);
  m.col_labels = numbered(k_p);
  for (const Triplet& t : a.triplets()) {
    m.values(citizen_labels[t.row], post_labels[t.col]) += t.value;
  }
  normalize(m, group_sizes(citizen_labels, k_c), group_sizes(post_labels, k_p));
  return m;
}

KeywordTable keyword_scores(const SparseMatrix& term_matrix,
                            const std::vector<std::size_t>& labels,
                            std::size_t cluster,
                            const std::vector<std::string>& terms,
                            std::size_t top_n) {
  if (labels.size() != term_matrix.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "keyword_scores: " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(term_matrix.rows()) +
                    " rows");
  }
  if (terms.size() != term_matrix.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "keyword_scores: " + std::to_string(terms.size()) +
                    " terms for " + std::to_string(term_matrix.cols()) +
                    " columns");
  }
  if (term_matrix.nnz() > 0 && term_matrix.min_value() < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "keyword_scores: term matrix has negative entries");
  }
  const bool any_member =
      std::find(labels.begin(), labels.end(), cluster) != labels.end();
  if (!any_member) {
    throw Error(ErrorCode::kInvalidArgument,
                "keyword_scores: cluster " + std::to_string(cluster + 1) +
                    " is empty");
  }
  const std::size_t m = term_matrix.cols();
  const Vector row_sums = term_matrix.row_sums();
  const Vector col_sums = term_matrix.col_sums();
  // Summed the same way as cluster_rows, so a cluster of everyone scores 1.
  const double total =
      std::accumulate(row_sums.begin(), row_sums.end(), 0.0);
  double cluster_rows = 0.0;
  std::vector<double> observed(m, 0.0);
  const auto rp = term_matrix.row_ptr();
  const auto ci = term_matrix.col_index();
  const auto v = term_matrix.values();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != cluster) continue;
    cluster_rows += row_sums[i];
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) observed[ci[p]] += v[p];
  }
  KeywordTable table;
  table.cluster = cluster;
  for (std::size_t j = 0; j < m; ++j) {
    KeywordScore s;
    s.term = terms[j];
    s.column = j;
    s.observed = observed[j];
    s.expected = total > 0.0 ? (cluster_rows / total) * col_sums[j] : 0.0;
    if (s.expected > 0.0) {
      s.score = s.observed / s.expected;
      table.ranked.push_back(s);
    } else {
      s.score = kNaN;
      table.zero_expected.push_back(j);
    }
    table.all.push_back(std::move(s));
  }
  std::sort(table.ranked.begin(), table.ranked.end(),
            [](const KeywordScore& a, const KeywordScore& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.term < b.term;
            });
  if (table.ranked.size() > top_n) table.ranked.resize(top_n);
  return table;
}

}  // namespace pairgt
