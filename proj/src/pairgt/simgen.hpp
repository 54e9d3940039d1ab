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

// Synthetic data: NC-ScBM and degree-corrected document generators, the
// population similarity matrix, and the mis-clustering rate.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pairgt/sparse.hpp"

namespace pairgt {

enum class CovariateLaw {
  kGaussian,   // mean plus noise·N(0, 1)
  kBernoulli,  // E entries are probabilities; sampled sparsely
};

struct BlockModelSpec {
  std::size_t n_c = 0;
  std::size_t n_p = 0;
  DenseMatrix b;    // K_C x K_P link probabilities
  DenseMatrix e_c;  // K_C x M_C covariate means
  DenseMatrix e_p;  // K_P x M_P
  /// Explicit labels (0-based); when empty they are drawn from the block
  /// probabilities, uniform if those are empty too.
  std::vector<std::size_t> citizen_labels;
  std::vector<std::size_t> post_labels;
  std::vector<double> citizen_block_prob;
  std::vector<double> post_block_prob;
  double noise = 1.0;
  CovariateLaw covariates = CovariateLaw::kGaussian;
  /// Optional degree parameters; link probability θ_i θ_j B.
  std::vector<double> theta_c;
  std::vector<double> theta_p;

  std::size_t k_c() const { return b.rows(); }
  std::size_t k_p() const { return b.cols(); }
};

struct NcScbmSample {
  SparseMatrix a;
  SparseMatrix x;
  SparseMatrix y;
  std::vector<std::size_t> citizen_labels;
  std::vector<std::size_t> post_labels;
};

/// Square K-block spec: B = p_out·J + (p_in − p_out)·I, and block a has
/// covariate mean `mean_in` on columns j with j mod K = a, `mean_out`
/// elsewhere. Labels are drawn uniformly.
BlockModelSpec planted_block_model(std::size_t n_c, std::size_t n_p,
                                   std::size_t k, double p_in, double p_out,
                                   std::size_t m_c, std::size_t m_p,
                                   double mean_in, double mean_out,
                                   double noise);

/// Numerical rank of B (singular values above 1e-10 · σ₁).
std::size_t block_rank(const DenseMatrix& b);

/// Throws Error(kInvalidArgument) naming the offending cell when a link or
/// covariate probability leaves [0, 1], or when shapes disagree.
void validate_spec(const BlockModelSpec& spec);

NcScbmSample sample_ncscbm(const BlockModelSpec& spec, std::uint64_t seed);

enum class ThetaLaw { kOnes, kPowerLaw };

struct DcsbmDocsSpec {
  std::size_t n_docs = 1000;
  std::size_t n_words = 1000;
  double sig_g = 0.0;
  double sig_t = 0.0;
  double links_per_doc = 20.0;
  double words_per_doc = 200.0;
  ThetaLaw theta = ThetaLaw::kOnes;
  /// Tail exponent of the power-law θ (mean normalized to 1).
  double theta_exponent = 3.0;
};

struct DcsbmConstants {
  double c_g = 0.0;  // B = c_g (0.1 J + sig_g I)
  double c_t = 0.0;  // B_text = c_t (0.1 J + sig_t I)
  DenseMatrix b;
  DenseMatrix b_text;
};

/// Closed-form constants giving links_per_doc expected links and
/// words_per_doc expected words per document under uniform block labels.
DcsbmConstants dcsbm_constants(const DcsbmDocsSpec& spec);

struct DcsbmDocsSample {
  SparseMatrix a;  // symmetric n_docs x n_docs, no self loops
  SparseMatrix x;  // n_docs x n_words, 0/1
  std::vector<std::size_t> labels;
  std::vector<std::size_t> word_labels;
};

DcsbmDocsSample sample_dcsbm_docs(const DcsbmDocsSpec& spec,
                                  std::uint64_t seed);

/// 𝒮 = ℒ + h 𝒳 𝒲 𝒴ᵀ from the block means, with 𝒲 = 𝒳ᵀ ℒ 𝒴 and no
/// thresholding. τ defaults to the mean population degree. Refuses
/// n_c · n_p > 10⁶.
DenseMatrix population_similarity(const BlockModelSpec& spec,
                                  const std::vector<std::size_t>& citizen_labels,
                                  const std::vector<std::size_t>& post_labels,
                                  double h,
                                  std::optional<double> tau_c = std::nullopt,
                                  std::optional<double> tau_p = std::nullopt);

/// Fraction of nodes mislabelled under the best matching of estimated to
/// true clusters.
double misclustering_rate(const std::vector<std::size_t>& estimated,
                          const std::vector<std::size_t>& truth);

}  // namespace pairgt
