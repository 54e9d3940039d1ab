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

// End-to-end fitting: resolved run configuration, operator assembly with
// optional h calibration, spectral embedding and co-clustering.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "pairgt/cluster.hpp"
#include "pairgt/graph_context.hpp"
#include "pairgt/settings.hpp"
#include "pairgt/spectral.hpp"

namespace pairgt {

enum class Scaling { kPlain, kCenter, kRowColScale, kTfidf };
enum class HMode { kGraphOnly, kValue, kTextOnly, kAllOne };
enum class Calibration { kNone, kSigma1, kSigma2 };

struct RunConfig {
  // ingest
  std::string corpus;
  std::string stopwords;
  double citizen_cutoff = 0.001;
  double thread_cutoff = 0.001;
  std::string export_corpus;

  // locations
  std::string data_dir = "data";
  std::string output_dir = "out";
  std::string fit_dir = "out";

  // similarity
  Scaling scaling = Scaling::kCenter;
  HMode h_mode = HMode::kValue;
  double h = 0.035;
  Calibration calibration = Calibration::kSigma2;
  double alpha = 0.05;
  ThresholdOptions threshold;
  std::optional<double> tau_c;
  std::optional<double> tau_p;
  std::size_t block_width = 256;

  // clustering
  std::size_t k_c = 4;
  std::size_t k_p = 4;
  SvdMethod svd_method = SvdMethod::kRandomized;
  double svd_tol = 1e-10;
  std::size_t svd_max_iter = 300;
  std::size_t svd_oversample = 10;
  std::size_t svd_power_iters = 4;
  std::size_t kmeans_restarts = 50;
  std::size_t kmeans_max_iter = 300;
  double kmeans_tol = 1e-9;
  std::uint64_t seed = 1;

  // diagnose
  std::size_t top_n = 20;
  std::size_t scree_k = 10;
  double attention_min_degree = 10.0;
  std::size_t histogram_bins = 20;

  /// Every field as a key; keys starting with "benchmark." or "simulate."
  /// are ignored, any other unknown key is an error.
  static RunConfig from_settings(const Settings& s);
  Settings to_settings() const;

  /// K = min(k_c, k_p), the embedding dimension.
  std::size_t k() const { return k_c < k_p ? k_c : k_p; }
  SvdOptions svd_options() const;
  KMeansOptions kmeans_options() const;
  /// The effective weight mode after folding h = 0 / h = ∞ values.
  SimilarityMode mode() const;
};

const char* to_string(Scaling s);
const char* to_string(HMode m);
const char* to_string(Calibration c);

/// Raw inputs to a fit. X and Y are only read when text is used.
struct FitInputs {
  SparseMatrix a;
  SparseMatrix x;
  SparseMatrix y;
};

struct PreparedOperator {
  std::shared_ptr<const RegularizedLaplacian> laplacian;
  std::shared_ptr<const CenteredMatrix> x;
  std::shared_ptr<const CenteredMatrix> y;
  std::shared_ptr<const SparseMatrix> thresholded;  // T_ω(W), null if unused
  double omega = 0.0;
  std::size_t threshold_population = 0;
  bool response_all_zero = false;
  /// User-facing h and the weight actually applied.
  double h_user = 0.0;
  double h_internal = 0.0;
  double sigma_ref_l = 0.0;
  double sigma_ref_text = 0.0;
  std::unique_ptr<SimilarityOperator> op;
};

/// Builds L, the transformed X/Y, T_ω(W) and S according to `config`.
PreparedOperator build_operator(const FitInputs& inputs,
                                const RunConfig& config);

struct FitResult {
  PreparedOperator prepared;
  SpectralEmbedding embedding;
  CoClustering clusters;
};

FitResult fit(const FitInputs& inputs, const RunConfig& config);

/// Graph-only co-clustering straight from L; must agree label for label
/// with fit() at h = 0.
FitResult fit_disim(const SparseMatrix& a, const RunConfig& config);

/// Applies the configured column transform (plain, center, scale then
/// center; TF-IDF inputs are centered).
CenteredMatrix transform_covariates(const SparseMatrix& m, Scaling scaling);

}  // namespace pairgt
