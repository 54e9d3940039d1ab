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

#include "pairgt/spectral.hpp"

namespace pairgt {

struct KMeansOptions {
  std::size_t restarts = 50;
  std::uint64_t seed = 1;
  std::size_t max_iter = 300;
  /// Stop once no centroid moves farther than this.
  double tol = 1e-9;
};

struct KMeansResult {
  std::vector<std::size_t> labels;  // 0-based
  DenseMatrix centroids;            // k x d
  double inertia = 0.0;
  std::size_t best_restart = 0;
};

/// Lloyd iterations from k-means++ seeds, best of `restarts` by inertia
/// (ties to the lower restart index). Restart r draws from
/// derive_seed(seed, r), so the result does not depend on thread count.
KMeansResult kmeans(const DenseMatrix& rows, std::size_t k,
                    const KMeansOptions& options = {});

enum class Side { kCitizen, kPost };

struct CoClustering {
  std::vector<std::size_t> citizen_labels;  // 0-based
  std::vector<std::size_t> post_labels;
  DenseMatrix citizen_centroids;
  DenseMatrix post_centroids;
  std::vector<double> citizen_centrality;
  std::vector<double> post_centrality;
  /// Zero embedding rows, assigned to the centroid nearest the origin.
  std::vector<bool> citizen_low_confidence;
  std::vector<bool> post_low_confidence;
  double citizen_inertia = 0.0;
  double post_inertia = 0.0;
  std::size_t n_restarts = 0;
  std::uint64_t seed = 0;

  std::size_t k_c() const { return citizen_centroids.rows(); }
  std::size_t k_p() const { return post_centroids.rows(); }
};

/// Independent k-means on the normalized citizen and post rows.
CoClustering fit_clusters(const SpectralEmbedding& embedding, std::size_t k_c,
                          std::size_t k_p, const KMeansOptions& options);

/// Up to top_n members of `cluster` (0-based) ordered by centrality
/// descending, ties by node index.
std::vector<std::size_t> central_members(const CoClustering& cc, Side side,
                                         std::size_t cluster,
                                         std::size_t top_n);

}  // namespace pairgt
