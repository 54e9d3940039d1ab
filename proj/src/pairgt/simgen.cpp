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

#include "pairgt/simgen.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

namespace {

// Calls emit(t) for every success among m independent Bernoulli(p) trials,
// jumping between successes with geometric gaps.
template <typename Emit>
void bernoulli_run(std::size_t m, double p, std::mt19937_64& rng, Emit&& emit) {
  if (m == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::size_t t = 0; t < m; ++t) emit(t);
    return;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_q = std::log1p(-p);
  double pos = -1.0;
  const double limit = static_cast<double>(m);
  for (;;) {
    const double skip = std::floor(std::log1p(-unit(rng)) / log_q);
    pos += skip + 1.0;
    if (!(pos < limit)) return;
    emit(static_cast<std::size_t>(pos));
  }
}

std::vector<std::size_t> draw_labels(std::size_t n, std::size_t k,
                                      const std::vector<double>& probs,
                                      std::mt19937_64& rng) {
  std::vector<double> w = probs;
  if (w.empty()) w.assign(k, 1.0);
  if (w.size() != k) {
    throw Error(ErrorCode::kInvalidArgument,
                "simulate: " + std::to_string(w.size()) +
                    " block probabilities for " + std::to_string(k) +
                    " blocks");
  }
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = dist(rng);
  return labels;
}

void check_labels(const std::vector<std::size_t>& labels, std::size_t n,
                  std::size_t k, const char* side) {
  if (labels.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string("simulate: ") + side + " labels have length " +
                    std::to_string(labels.size()) + ", expected " +
                    std::to_string(n));
  }
  std::vector<bool> seen(k, false);
  for (std::size_t l : labels) {
    if (l >= k) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("simulate: ") + side + " label " +
                      std::to_string(l) + " is not below " + std::to_string(k));
    }
    seen[l] = true;
  }
  for (std::size_t b = 0; b < k; ++b) {
    if (!seen[b]) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("simulate: ") + side + " block " +
                      std::to_string(b) + " is empty");
    }
  }
}

std::vector<std::vector<std::size_t>> members(
    const std::vector<std::size_t>& labels, std::size_t k) {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

double max_theta(const std::vector<double>& theta,
                 const std::vector<std::size_t>& idx) {
  double m = 0.0;
  for (std::size_t i : idx) m = std::max(m, theta.empty() ? 1.0 : theta[i]);
  return m;
}

// Bernoulli(p_base · θ_t) over the listed targets, by thinning a run at
// p_base · max θ.
template <typename Emit>
void thinned_run(const std::vector<std::size_t>& targets, std::size_t begin,
                 double p_base, const std::vector<double>& theta,
                 double theta_max, std::mt19937_64& rng, Emit&& emit) {
  const std::size_t m = targets.size() - begin;
  if (theta.empty()) {
    bernoulli_run(m, p_base, rng, [&](std::size_t t) { emit(targets[begin + t]); });
    return;
  }
  if (theta_max <= 0.0) return;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bernoulli_run(m, p_base * theta_max, rng, [&](std::size_t t) {
    const std::size_t j = targets[begin + t];
    if (unit(rng) * theta_max < theta[j]) emit(j);
  });
}

void check_theta(const std::vector<double>& theta, std::size_t n,
                 const char* side) {
  if (theta.empty()) return;
  if (theta.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string("simulate: ") + side + " theta has length " +
                    std::to_string(theta.size()) + ", expected " +
                    std::to_string(n));
  }
  for (double t : theta) {
    if (!std::isfinite(t) || t < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("simulate: ") + side +
                      " theta must be finite and nonnegative");
    }
  }
}

}  // namespace

BlockModelSpec planted_block_model(std::size_t n_c, std::size_t n_p,
                                   std::size_t k, double p_in, double p_out,
                                   std::size_t m_c, std::size_t m_p,
                                   double mean_in, double mean_out,
                                   double noise) {
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "simulate: k must be positive");
  }
  BlockModelSpec spec;
  spec.n_c = n_c;
  spec.n_p = n_p;
  spec.b = DenseMatrix::Constant(k, k, p_out);
  spec.b.diagonal().setConstant(p_in);
  auto means = [&](std::size_t m) {
    DenseMatrix e(k, m);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t j = 0; j < m; ++j) {
        e(a, j) = j % k == a ? mean_in : mean_out;
      }
    }
    return e;
  };
  spec.e_c = means(m_c);
  spec.e_p = means(m_p);
  spec.noise = noise;
  return spec;
}

std::size_t block_rank(const DenseMatrix& b) {
  if (b.size() == 0) return 0;
  Eigen::JacobiSVD<DenseMatrix> svd(b);
  const Vector& s = svd.singularValues();
  if (s[0] <= 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > 1e-10 * s[0]) ++r;
  }
  return r;
}

void validate_spec(const BlockModelSpec& spec) {
  const std::size_t kc = spec.k_c();
  const std::size_t kp = spec.k_p();
  if (kc == 0 || kp == 0) {
    throw Error(ErrorCode::kInvalidArgument, "simulate: B is empty");
  }
  if (static_cast<std::size_t>(spec.e_c.rows()) != kc ||
      static_cast<std::size_t>(spec.e_p.rows()) != kp) {
    throw Error(ErrorCode::kDimensionMismatch,
                "simulate: E_C needs " + std::to_string(kc) +
                    " rows and E_P needs " + std::to_string(kp));
  }
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw Error(ErrorCode::kInvalidArgument,
                "simulate: noise must be finite and nonnegative");
  }
  check_theta(spec.theta_c, spec.n_c, "citizen");
  check_theta(spec.theta_p, spec.n_p, "post");
  const double tc = spec.theta_c.empty()
                        ? 1.0
                        : *std::max_element(spec.theta_c.begin(),
                                            spec.theta_c.end());
  const double tp = spec.theta_p.empty()
                        ? 1.0
                        : *std::max_element(spec.theta_p.begin(),
                                            spec.theta_p.end());
  for (std::size_t a = 0; a < kc; ++a) {
    for (std::size_t b = 0; b < kp; ++b) {
      const double p = spec.b(a, b);
      const double scaled = p * tc * tp;
      if (!std::isfinite(p) || p < 0.0 || scaled > 1.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "simulate: link probability in cell (" +
                        std::to_string(a) + ", " + std::to_string(b) +
                        ") is " + format_double(scaled) +
                        ", outside [0, 1]");
      }
    }
  }
  auto check_e = [&](const DenseMatrix& e, const char* name) {
    for (Eigen::Index a = 0; a < e.rows(); ++a) {
      for (Eigen::Index j = 0; j < e.cols(); ++j) {
        const double v = e(a, j);
        const bool bad = !std::isfinite(v) ||
                         (spec.covariates == CovariateLaw::kBernoulli &&
                          (v < 0.0 || v > 1.0));
        if (bad) {
          throw Error(ErrorCode::kInvalidArgument,
                      std::string("simulate: ") + name + " cell (" +
                          std::to_string(a) + ", " + std::to_string(j) +
                          ") is " + format_double(v));
        }
      }
    }
  };
  check_e(spec.e_c, "E_C");
  check_e(spec.e_p, "E_P");
}

NcScbmSample sample_ncscbm(const BlockModelSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  const std::size_t kc = spec.k_c();
  const std::size_t kp = spec.k_p();
  NcScbmSample s;
  {
    std::mt19937_64 rng(derive_seed(seed, "labels"));
    s.citizen_labels = spec.citizen_labels.empty()
                           ? draw_labels(spec.n_c, kc, spec.citizen_block_prob, rng)
                           : spec.citizen_labels;
    s.post_labels = spec.post_labels.empty()
                        ? draw_labels(spec.n_p, kp, spec.post_block_prob, rng)
                        : spec.post_labels;
  }
  check_labels(s.citizen_labels, spec.n_c, kc, "citizen");
  check_labels(s.post_labels, spec.n_p, kp, "post");

  const auto post_blocks = members(s.post_labels, kp);
  std::vector<double> theta_max(kp);
  for (std::size_t b = 0; b < kp; ++b) {
    theta_max[b] = max_theta(spec.theta_p, post_blocks[b]);
  }
  std::vector<Triplet> edges;
  {
    std::mt19937_64 rng(derive_seed(seed, "adjacency"));
    for (std::size_t i = 0; i < spec.n_c; ++i) {
      const double ti = spec.theta_c.empty() ? 1.0 : spec.theta_c[i];
      for (std::size_t b = 0; b < kp; ++b) {
        const double p = spec.b(s.citizen_labels[i], b) * ti;
        thinned_run(post_blocks[b], 0, p, spec.theta_p, theta_max[b], rng,
                    [&](std::size_t j) { edges.push_back({i, j, 1.0}); });
      }
    }
  }
  s.a = build_sparse(std::move(edges), spec.n_c, spec.n_p);

  auto covariates = [&](const DenseMatrix& e,
                        const std::vector<std::size_t>& labels,
                        const char* tag) {
    std::mt19937_64 rng(derive_seed(seed, tag));
    std::vector<Triplet> t;
    const std::size_t m = e.cols();
    if (spec.covariates == CovariateLaw::kGaussian) {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          double v = e(labels[i], j);
          if (spec.noise > 0.0) v += spec.noise * normal(rng);
          if (v != 0.0) t.push_back({i, j, v});
        }
      }
    } else {
      std::vector<std::size_t> cols(m);
      std::iota(cols.begin(), cols.end(), 0);
      std::vector<std::vector<double>> probs(e.rows());
      std::vector<double> p_max(e.rows(), 0.0);
      for (Eigen::Index a = 0; a < e.rows(); ++a) {
        probs[a].reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
          probs[a].push_back(e(a, j));
          p_max[a] = std::max(p_max[a], e(a, j));
        }
      }
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t a = labels[i];
        thinned_run(cols, 0, 1.0, probs[a], p_max[a], rng,
                    [&](std::size_t j) { t.push_back({i, j, 1.0}); });
      }
    }
    return build_sparse(std::move(t), labels.size(), m);
  };
  s.x = covariates(spec.e_c, s.citizen_labels, "citizen_covariates");
  s.y = covariates(spec.e_p, s.post_labels, "post_covariates");
  return s;
}

DcsbmConstants dcsbm_constants(const DcsbmDocsSpec& spec) {
  if (spec.n_docs < 2 || spec.n_words < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "dcsbm: need at least 2 documents and 1 word");
  }
  if (!(spec.sig_g >= 0.0) || !(spec.sig_t >= 0.0) ||
      !std::isfinite(spec.sig_g) || !std::isfinite(spec.sig_t)) {
    throw Error(ErrorCode::kInvalidArgument,
                "dcsbm: signals must be finite and nonnegative");
  }
  DcsbmConstants c;
  // Under uniform labels a random pair shares a block with probability 1/2,
  // so the mean template entry is 0.1 + sig/2.
  c.c_g = spec.links_per_doc /
          (static_cast<double>(spec.n_docs - 1) * (0.1 + spec.sig_g / 2.0));
  c.c_t = spec.words_per_doc /
          (static_cast<double>(spec.n_words) * (0.1 + spec.sig_t / 2.0));
  c.b = c.c_g * (DenseMatrix::Constant(2, 2, 0.1) +
                 spec.sig_g * DenseMatrix::Identity(2, 2));
  c.b_text = c.c_t * (DenseMatrix::Constant(2, 2, 0.1) +
                      spec.sig_t * DenseMatrix::Identity(2, 2));
  return c;
}

DcsbmDocsSample sample_dcsbm_docs(const DcsbmDocsSpec& spec,
                                  std::uint64_t seed) {
  const DcsbmConstants c = dcsbm_constants(spec);
  const std::size_t n = spec.n_docs;
  const std::size_t w = spec.n_words;
  DcsbmDocsSample s;
  std::vector<double> theta_doc;
  std::vector<double> theta_word;
  {
    std::mt19937_64 rng(derive_seed(seed, "labels"));
    s.labels = draw_labels(n, 2, {}, rng);
    s.word_labels = draw_labels(w, 2, {}, rng);
  }
  if (spec.theta == ThetaLaw::kPowerLaw) {
    if (!(spec.theta_exponent > 2.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dcsbm: power-law theta needs an exponent above 2");
    }
    std::mt19937_64 rng(derive_seed(seed, "theta"));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](std::size_t count) {
      std::vector<double> t(count);
      for (auto& v : t) {
        v = std::pow(1.0 - unit(rng), -1.0 / (spec.theta_exponent - 1.0));
      }
      const double mean = std::accumulate(t.begin(), t.end(), 0.0) /
                          static_cast<double>(count);
      for (auto& v : t) v /= mean;
      return t;
    };
    theta_doc = draw(n);
    theta_word = draw(w);
  }
  const auto doc_blocks = members(s.labels, 2);
  const auto word_blocks = members(s.word_labels, 2);
  double doc_theta_max[2];
  double word_theta_max[2];
  for (std::size_t b = 0; b < 2; ++b) {
    doc_theta_max[b] = max_theta(theta_doc, doc_blocks[b]);
    word_theta_max[b] = max_theta(theta_word, word_blocks[b]);
  }
  const double top_doc = std::max(doc_theta_max[0], doc_theta_max[1]);
  const double top_word = std::max(word_theta_max[0], word_theta_max[1]);
  const double p_link = c.b.maxCoeff() * top_doc * top_doc;
  const double p_word = c.b_text.maxCoeff() * top_doc * top_word;
  if (p_link > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "dcsbm: link probability " + format_double(p_link) +
                    " exceeds 1 at sig_g = " + format_double(spec.sig_g));
  }
  if (p_word > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "dcsbm: word probability " + format_double(p_word) +
                    " exceeds 1 at sig_t = " + format_double(spec.sig_t));
  }

  std::vector<Triplet> edges;
  {
    std::mt19937_64 rng(derive_seed(seed, "adjacency"));
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = theta_doc.empty() ? 1.0 : theta_doc[i];
      for (std::size_t b = 0; b < 2; ++b) {
        const auto& list = doc_blocks[b];
        const std::size_t begin = static_cast<std::size_t>(
            std::upper_bound(list.begin(), list.end(), i) - list.begin());
        thinned_run(list, begin, c.b(s.labels[i], b) * ti, theta_doc,
                    doc_theta_max[b], rng, [&](std::size_t j) {
                      edges.push_back({i, j, 1.0});
                      edges.push_back({j, i, 1.0});
                    });
      }
    }
  }
  s.a = build_sparse(std::move(edges), n, n);

  std::vector<Triplet> words;
  {
    std::mt19937_64 rng(derive_seed(seed, "words"));
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = theta_doc.empty() ? 1.0 : theta_doc[i];
      for (std::size_t v = 0; v < 2; ++v) {
        thinned_run(word_blocks[v], 0, c.b_text(s.labels[i], v) * ti,
                    theta_word, word_theta_max[v], rng,
                    [&](std::size_t j) { words.push_back({i, j, 1.0}); });
      }
    }
  }
  s.x = build_sparse(std::move(words), n, w);
  return s;
}

DenseMatrix population_similarity(const BlockModelSpec& spec,
                                  const std::vector<std::size_t>& citizen_labels,
                                  const std::vector<std::size_t>& post_labels,
                                  double h, std::optional<double> tau_c,
                                  std::optional<double> tau_p) {
  validate_spec(spec);
  const std::size_t nc = spec.n_c;
  const std::size_t np = spec.n_p;
  if (static_cast<double>(nc) * static_cast<double>(np) > 1e6) {
    throw Error(ErrorCode::kResourceLimit,
                "population_similarity: n_c * n_p = " +
                    std::to_string(nc * np) + " exceeds 1e6");
  }
  if (std::isnan(h) || h < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "population_similarity: h must be nonnegative");
  }
  check_labels(citizen_labels, nc, spec.k_c(), "citizen");
  check_labels(post_labels, np, spec.k_p(), "post");
  DenseMatrix a(nc, np);
  for (std::size_t i = 0; i < nc; ++i) {
    const double ti = spec.theta_c.empty() ? 1.0 : spec.theta_c[i];
    for (std::size_t j = 0; j < np; ++j) {
      const double tj = spec.theta_p.empty() ? 1.0 : spec.theta_p[j];
      a(i, j) = ti * tj * spec.b(citizen_labels[i], post_labels[j]);
    }
  }
  const Vector rows = a.rowwise().sum();
  const Vector cols = a.colwise().sum().transpose();
  const double tc = tau_c.value_or(rows.mean());
  const double tp = tau_p.value_or(cols.mean());
  auto inv_sqrt = [](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; };
  DenseMatrix l = a;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      l(i, j) *= inv_sqrt(rows[i] + tc) * inv_sqrt(cols[j] + tp);
    }
  }
  if (h == 0.0) return l;
  DenseMatrix x(nc, spec.e_c.cols());
  for (std::size_t i = 0; i < nc; ++i) x.row(i) = spec.e_c.row(citizen_labels[i]);
  DenseMatrix y(np, spec.e_p.cols());
  for (std::size_t j = 0; j < np; ++j) y.row(j) = spec.e_p.row(post_labels[j]);
  const DenseMatrix w = x.transpose() * l * y;
  const DenseMatrix text = x * w * y.transpose();
  if (std::isinf(h)) return text;
  return l + h * text;
}

namespace {

// Maximum-weight perfect matching on a square matrix (Hungarian method on
// the negated weights). Returns the matched total.
double hungarian_max(const DenseMatrix& weight) {
  const std::size_t n = weight.rows();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) total += weight(p[j] - 1, j - 1);
  return total;
}

}  // namespace

double misclustering_rate(const std::vector<std::size_t>& estimated,
                          const std::vector<std::size_t>& truth) {
  if (estimated.size() != truth.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "misclustering_rate: " + std::to_string(estimated.size()) +
                    " estimated labels vs " + std::to_string(truth.size()) +
                    " true labels");
  }
  const std::size_t n = truth.size();
  if (n == 0) return 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    k = std::max({k, estimated[i] + 1, truth[i] + 1});
  }
  DenseMatrix confusion = DenseMatrix::Zero(k, k);
  for (std::size_t i = 0; i < n; ++i) confusion(estimated[i], truth[i]) += 1.0;
  double matched = 0.0;
  if (k <= 6) {
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double s = 0.0;
      for (std::size_t a = 0; a < k; ++a) s += confusion(a, perm[a]);
      matched = std::max(matched, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    matched = hungarian_max(confusion);
  }
  return (static_cast<double>(n) - matched) / static_cast<double>(n);
}

}  // namespace pairgt
