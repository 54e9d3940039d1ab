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

#include "pairgt/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"
#include "pairgt/parallel.hpp"

namespace pairgt {

namespace {

double squared_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

struct Run {
  std::vector<std::size_t> labels;
  RowBlock centroids;
  double inertia = 0.0;
};

// Nearest centroid for every point; ties go to the lower index.
double assign(const RowBlock& x, const RowBlock& c,
              std::vector<std::size_t>& labels, std::vector<double>& dist) {
  const std::size_t n = x.rows();
  const std::size_t k = c.rows();
  const std::size_t d = x.cols();
  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.data() + i * d;
    std::size_t best = 0;
    double best_d = squared_distance(xi, c.data(), d);
    for (std::size_t j = 1; j < k; ++j) {
      const double dj = squared_distance(xi, c.data() + j * d, d);
      if (dj < best_d) {
        best_d = dj;
        best = j;
      }
    }
    labels[i] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

RowBlock seed_plus_plus(const RowBlock& x, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  RowBlock c(k, d);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t first = pick(rng);
  c.row(0) = x.row(first);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(x.data() + i * d, c.data(), d);
  }
  for (std::size_t j = 1; j < k; ++j) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      chosen = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        chosen = i;
        if (acc > target) break;
      }
    } else {
      chosen = pick(rng);
    }
    c.row(j) = x.row(chosen);
    const double* cj = c.data() + j * d;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x.data() + i * d, cj, d));
    }
  }
  return c;
}

Run lloyd(const RowBlock& x, std::size_t k, const KMeansOptions& options,
          std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  std::mt19937_64 rng(seed);
  Run run;
  run.centroids = seed_plus_plus(x, k, rng);
  run.labels.assign(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> counts(k);
  RowBlock next(k, d);
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    assign(x, run.centroids, run.labels, dist);
    next.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      next.row(run.labels[i]) += x.row(i);
      ++counts[run.labels[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] > 0) next.row(j) /= static_cast<double>(counts[j]);
    }
    // Empty clusters move to the point farthest from its own centroid.
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[run.labels[i]] > 1 && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far_d <= 0.0) {
        next.row(j) = run.centroids.row(j);
        continue;
      }
      next.row(j) = x.row(far);
      const std::size_t old = run.labels[far];
      --counts[old];
      next.row(old) = (next.row(old) * static_cast<double>(counts[old] + 1) -
                       x.row(far)) /
                      static_cast<double>(counts[old]);
      run.labels[far] = j;
      counts[j] = 1;
      dist[far] = 0.0;
    }
    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      shift = std::max(shift, (next.row(j) - run.centroids.row(j)).norm());
    }
    run.centroids = next;
    if (shift < options.tol) break;
  }
  run.inertia = assign(x, run.centroids, run.labels, dist);
  return run;
}

}  // namespace

KMeansResult kmeans(const DenseMatrix& rows, std::size_t k,
                    const KMeansOptions& options) {
  const std::size_t n = rows.rows();
  if (k == 0 || k > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "kmeans: k = " + std::to_string(k) + " must lie in [1, " +
                    std::to_string(n) + "]");
  }
  if (!rows.allFinite()) {
    throw Error(ErrorCode::kNumeric, "kmeans: input rows contain NaN or inf");
  }
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  const RowBlock x = rows;
  std::vector<Run> runs(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    runs[r] = lloyd(x, k, options, derive_seed(options.seed, r));
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  KMeansResult result;
  result.labels = std::move(runs[best].labels);
  result.centroids = runs[best].centroids;
  result.inertia = runs[best].inertia;
  result.best_restart = best;
  return result;
}

namespace {

struct SideFit {
  std::vector<std::size_t> labels;
  DenseMatrix centroids;
  std::vector<double> centrality;
  std::vector<bool> low_confidence;
  double inertia = 0.0;
};

SideFit fit_side(const DenseMatrix& rows,
                 const std::vector<std::size_t>& zero_rows, std::size_t k,
                 const KMeansOptions& options, const char* name) {
  const std::size_t n = rows.rows();
  std::vector<bool> zero(n, false);
  for (std::size_t i : zero_rows) zero[i] = true;
  std::vector<std::size_t> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!zero[i]) kept.push_back(i);
  }
  if (kept.size() < k) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("fit: ") + name + " side has " +
                    std::to_string(kept.size()) +
                    " nonzero embedding rows, fewer than k = " +
                    std::to_string(k));
  }
  DenseMatrix sub(kept.size(), rows.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) sub.row(i) = rows.row(kept[i]);
  KMeansResult km = kmeans(sub, k, options);

  SideFit fit;
  fit.centroids = km.centroids;
  fit.inertia = km.inertia;
  fit.labels.assign(n, 0);
  fit.centrality.assign(n, 0.0);
  fit.low_confidence = zero;
  std::size_t origin_cluster = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (km.centroids.row(j).squaredNorm() <
        km.centroids.row(origin_cluster).squaredNorm()) {
      origin_cluster = j;
    }
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    fit.labels[kept[i]] = km.labels[i];
    fit.centrality[kept[i]] =
        rows.row(kept[i]).dot(km.centroids.row(km.labels[i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (zero[i]) fit.labels[i] = origin_cluster;
  }
  return fit;
}

}  // namespace

CoClustering fit_clusters(const SpectralEmbedding& embedding, std::size_t k_c,
                          std::size_t k_p, const KMeansOptions& options) {
  if (embedding.u_c_star.rows() != embedding.u_c.rows() ||
      embedding.u_p_star.rows() != embedding.u_p.rows()) {
    throw Error(ErrorCode::kInvalidArgument,
                "fit: embedding rows are not normalized");
  }
  KMeansOptions citizen_opts = options;
  citizen_opts.seed = derive_seed(options.seed, "kmeans/citizens");
  KMeansOptions post_opts = options;
  post_opts.seed = derive_seed(options.seed, "kmeans/posts");
  SideFit c = fit_side(embedding.u_c_star, embedding.zero_rows_c, k_c,
                       citizen_opts, "citizen");
  SideFit p = fit_side(embedding.u_p_star, embedding.zero_rows_p, k_p,
                       post_opts, "post");
  CoClustering cc;
  cc.citizen_labels = std::move(c.labels);
  cc.post_labels = std::move(p.labels);
  cc.citizen_centroids = std::move(c.centroids);
  cc.post_centroids = std::move(p.centroids);
  cc.citizen_centrality = std::move(c.centrality);
  cc.post_centrality = std::move(p.centrality);
  cc.citizen_low_confidence = std::move(c.low_confidence);
  cc.post_low_confidence = std::move(p.low_confidence);
  cc.citizen_inertia = c.inertia;
  cc.post_inertia = p.inertia;
  cc.n_restarts = std::max<std::size_t>(1, options.restarts);
  cc.seed = options.seed;
  return cc;
}

std::vector<std::size_t> central_members(const CoClustering& cc, Side side,
                                         std::size_t cluster,
                                         std::size_t top_n) {
  const bool citizens = side == Side::kCitizen;
  const auto& labels = citizens ? cc.citizen_labels : cc.post_labels;
  const auto& rho = citizens ? cc.citizen_centrality : cc.post_centrality;
  const std::size_t k = citizens ? cc.k_c() : cc.k_p();
  if (cluster >= k) {
    throw Error(ErrorCode::kInvalidArgument,
                "central_members: unknown cluster " +
                    std::to_string(cluster + 1) + " (have " +
                    std::to_string(k) + ")");
  }
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cluster) members.push_back(i);
  }
  std::stable_sort(members.begin(), members.end(),
                   [&](std::size_t a, std::size_t b) { return rho[a] > rho[b]; });
  if (members.size() > top_n) members.resize(top_n);
  return members;
}

}  // namespace pairgt
