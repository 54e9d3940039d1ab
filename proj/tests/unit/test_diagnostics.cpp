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

#include <doctest.h>

#include <cmath>
#include <random>

#include "pairgt/diagnostics.hpp"
#include "pairgt/error.hpp"
#include "test_util.hpp"

using namespace pairgt;
using pairgt::testing::random_sparse;

namespace {

// Citizen i commented `count` times on post j.
SparseMatrix comments(std::vector<Triplet> t, std::size_t n_c, std::size_t n_p) {
  return build_sparse(std::move(t), n_c, n_p);
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("attention ratio examples") {
  // Posts 0,1 on wall 0; post 2 on wall 1; post 3 on wall 2.
  const std::vector<std::size_t> wall{0, 0, 1, 2};
  const SparseMatrix a = comments(
      {{0, 0, 4}, {0, 1, 3},                // 7 comments, one wall
       {1, 0, 3}, {1, 2, 3},                // tie between two walls
       {2, 1, 6}, {2, 2, 3}, {2, 3, 1}},    // zeta = (6, 3, 1)
      4, 4);
  const AttentionRatio ar = attention_ratio(a, wall, 3, 1);
  CHECK(ar.ratio[0] == 1.0);
  CHECK(ar.focus[0] == 0);
  CHECK(ar.ratio[1] == 0.5);
  CHECK((ar.focus[1] == 0 || ar.focus[1] == 1));
  CHECK(ar.ratio[2] == 0.6);
  CHECK(ar.focus[2] == 0);
  CHECK(ar.undefined[3]);
  CHECK(std::isnan(ar.ratio[3]));
  CHECK(ar.degree[2] == 10.0);
}

TEST_CASE("attention ratio ties follow the seed") {
  const std::vector<std::size_t> wall{0, 1};
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 64; ++i) {
    t.push_back({i, 0, 2});
    t.push_back({i, 1, 2});
  }
  const SparseMatrix a = comments(t, 64, 2);
  const AttentionRatio x = attention_ratio(a, wall, 2, 5);
  const AttentionRatio y = attention_ratio(a, wall, 2, 5);
  CHECK(x.focus == y.focus);
  std::size_t first = 0;
  for (auto f : x.focus) first += (f == 0);
  CHECK(first > 10);
  CHECK(first < 54);
}

TEST_CASE("attention ratio bounds") {
  const SparseMatrix a = random_sparse(200, 40, 0.05, 3, 0, 1, true);
  std::vector<std::size_t> wall(40);
  for (std::size_t j = 0; j < 40; ++j) wall[j] = j % 6;
  const AttentionRatio ar = attention_ratio(a, wall, 6, 1);
  const DenseMatrix d = a.to_dense();
  for (std::size_t i = 0; i < 200; ++i) {
    if (ar.undefined[i]) {
      CHECK(d.row(i).sum() == 0.0);
      continue;
    }
    CHECK(ar.ratio[i] > 0.0);
    CHECK(ar.ratio[i] <= 1.0);
    std::vector<double> zeta(6, 0.0);
    for (std::size_t j = 0; j < 40; ++j) zeta[wall[j]] += d(i, j);
    std::size_t used = 0;
    for (double z : zeta) used += (z > 0);
    CHECK((ar.ratio[i] == 1.0) == (used == 1));
    const double want = *std::max_element(zeta.begin(), zeta.end()) / d.row(i).sum();
    CHECK(std::abs(ar.ratio[i] - want) <= 1e-12);
  }
}

TEST_CASE("attention histogram bins") {
  AttentionRatio ar;
  ar.ratio = {1.0, 0.5, 0.25, 0.6, 0.9};
  ar.degree = {20, 20, 20, 5, 20};
  ar.undefined = {false, false, false, false, false};
  ar.focus = {0, 0, 0, 0, 0};
  const Histogram h = attention_histogram(ar, 10, 4);
  CHECK(h.n_included == 4);
  CHECK(h.counts == std::vector<std::size_t>{1, 1, 0, 2});
}

TEST_CASE("psi_c examples") {
  SUBCASE("one cluster, one wall") {
    // 10 comments from 5 citizens over 2 posts.
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < 5; ++i) {
      t.push_back({i, 0, 1});
      t.push_back({i, 1, 1});
    }
    const InteractionMatrix m =
        psi_c(comments(t, 5, 2), {0, 0, 0, 0, 0}, 1, {0, 0}, names(1));
    CHECK(m.values(0, 0) == 1.0);
  }
  SUBCASE("no comments between a pair") {
    const InteractionMatrix m = psi_c(comments({{0, 0, 3}}, 2, 2), {0, 1}, 2,
                                      {0, 1}, names(2));
    CHECK(m.values(1, 1) == 0.0);
    CHECK(m.values(0, 0) == 3.0);  // 3 / (1 citizen x 1 post)
  }
  SUBCASE("empty cluster is flagged") {
    const InteractionMatrix m = psi_c(comments({{0, 0, 1}}, 1, 1), {0}, 2, {0}, names(1));
    CHECK(m.empty_rows[1]);
    CHECK(std::isnan(m.values(1, 0)));
  }
}

TEST_CASE("psi_p examples") {
  // Cluster 0 holds posts 0,1 both on wall 0; wall 0 has 4 posts.
  const std::vector<std::size_t> wall{0, 0, 0, 0, 1};
  const std::vector<std::size_t> labels{0, 0, 1, 1, 1};
  const InteractionMatrix m = psi_p(labels, 2, wall, names(2));
  CHECK(m.values(0, 0) == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
  CHECK(m.values(0, 1) == 0.0);
  CHECK(m.values(1, 0) == doctest::Approx(2.0 / 12.0).epsilon(1e-15));
  CHECK(m.values(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("interaction matrices match the formula oracle") {
  const std::size_t n_c = 60, n_p = 25, k_c = 3, k_p = 4, n_w = 5;
  const SparseMatrix a = random_sparse(n_c, n_p, 0.2, 8, 0, 1, true);
  std::mt19937_64 rng(4);
  std::vector<std::size_t> cl(n_c), pl(n_p), wall(n_p);
  for (auto& l : cl) l = rng() % k_c;
  for (auto& l : pl) l = rng() % k_p;
  for (auto& w : wall) w = rng() % n_w;
  const DenseMatrix d = a.to_dense();
  auto count = [](const std::vector<std::size_t>& v, std::size_t x) {
    double c = 0;
    for (auto y : v) c += (y == x);
    return c;
  };
  const InteractionMatrix pc = psi_c(a, cl, k_c, wall, names(n_w));
  const InteractionMatrix pp = psi_p(pl, k_p, wall, names(n_w));
  const InteractionMatrix ps = psi(a, cl, k_c, pl, k_p);
  for (std::size_t x = 0; x < k_c; ++x) {
    for (std::size_t w = 0; w < n_w; ++w) {
      double num = 0;
      for (std::size_t i = 0; i < n_c; ++i) {
        for (std::size_t j = 0; j < n_p; ++j) {
          if (cl[i] == x && wall[j] == w) num += d(i, j);
        }
      }
      const double want = num / (count(cl, x) * count(wall, w));
      CHECK(std::abs(pc.values(x, w) - want) <= 1e-12);
    }
    for (std::size_t b = 0; b < k_p; ++b) {
      double num = 0;
      for (std::size_t i = 0; i < n_c; ++i) {
        for (std::size_t j = 0; j < n_p; ++j) {
          if (cl[i] == x && pl[j] == b) num += d(i, j);
        }
      }
      const double want = num / (count(cl, x) * count(pl, b));
      CHECK(std::abs(ps.values(x, b) - want) <= 1e-12);
    }
  }
  for (std::size_t b = 0; b < k_p; ++b) {
    for (std::size_t w = 0; w < n_w; ++w) {
      double num = 0;
      for (std::size_t j = 0; j < n_p; ++j) num += (pl[j] == b && wall[j] == w);
      CHECK(std::abs(pp.values(b, w) - num / (count(pl, b) * count(wall, w))) <= 1e-12);
    }
  }

  SUBCASE("relabeling clusters permutes the values") {
    std::vector<std::size_t> relabeled(cl);
    for (auto& l : relabeled) l = (l + 1) % k_c;
    const InteractionMatrix q = psi_c(a, relabeled, k_c, wall, names(n_w));
    for (std::size_t x = 0; x < k_c; ++x) {
      CHECK((q.values.row((x + 1) % k_c) - pc.values.row(x)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("one cluster gives global rates") {
  const SparseMatrix a = random_sparse(30, 12, 0.3, 2, 0, 1, true);
  std::vector<std::size_t> wall(12);
  for (std::size_t j = 0; j < 12; ++j) wall[j] = j % 3;
  const InteractionMatrix m =
      psi_c(a, std::vector<std::size_t>(30, 0), 1, wall, names(3));
  CHECK(m.values.rows() == 1);
  CHECK(m.values.cols() == 3);
  const DenseMatrix d = a.to_dense();
  for (std::size_t w = 0; w < 3; ++w) {
    double num = 0;
    for (std::size_t j = 0; j < 12; ++j) {
      if (wall[j] == w) num += d.col(j).sum();
    }
    CHECK(std::abs(m.values(0, w) - num / (30.0 * 4.0)) <= 1e-12);
  }
}

TEST_CASE("keyword score examples") {
  const std::vector<std::string> terms{"a", "b"};
  SUBCASE("2x2 toy") {
    const SparseMatrix x = build_sparse({{0, 0, 4}, {1, 1, 4}}, 2, 2);
    const KeywordTable t = keyword_scores(x, {0, 1}, 0, terms, 10);
    CHECK(t.all[0].expected == 2.0);
    CHECK(t.all[0].score == 2.0);
    CHECK(t.all[1].score == 0.0);  // never used in the cluster
    CHECK(t.ranked.front().term == "a");
  }
  SUBCASE("everyone in one cluster scores exactly 1") {
    const SparseMatrix x = random_sparse(40, 15, 0.3, 6, 0.1, 3.7);
    std::vector<std::string> t15;
    for (int j = 0; j < 15; ++j) t15.push_back("t" + std::to_string(j));
    const KeywordTable t = keyword_scores(x, std::vector<std::size_t>(40, 0), 0, t15, 50);
    for (const auto& s : t.all) {
      if (s.expected > 0) CHECK(s.score == 1.0);
    }
  }
  SUBCASE("zero-expected terms are flagged") {
    const SparseMatrix x = build_sparse({{0, 0, 1}, {1, 0, 1}}, 2, 2);
    const KeywordTable t = keyword_scores(x, {0, 1}, 0, terms, 10);
    CHECK(t.zero_expected == std::vector<std::size_t>{1});
    CHECK(t.ranked.size() == 1);
  }
  SUBCASE("errors") {
    const SparseMatrix x = build_sparse({{0, 0, 1}}, 2, 2);
    CHECK_THROWS_AS(keyword_scores(x, {0, 0}, 1, terms, 10), Error);
    CHECK_THROWS_AS(keyword_scores(build_sparse({{0, 0, -1}}, 2, 2), {0, 1}, 0, terms, 10), Error);
  }
}

TEST_CASE("keyword scores match the formula oracle") {
  const SparseMatrix x = random_sparse(50, 20, 0.25, 12, 0, 1, true);
  std::vector<std::string> terms;
  for (int j = 0; j < 20; ++j) terms.push_back("t" + std::to_string(j));
  std::vector<std::size_t> labels(50);
  for (std::size_t i = 0; i < 50; ++i) labels[i] = (i * 7) % 3;
  const DenseMatrix d = x.to_dense();
  const Vector rs = d.rowwise().sum();
  const Vector cs = d.colwise().sum();
  const double total = d.sum();
  for (std::size_t k = 0; k < 3; ++k) {
    const KeywordTable t = keyword_scores(x, labels, k, terms, 5);
    double weighted = 0, observed_total = 0;
    for (int j = 0; j < 20; ++j) {
      double obs = 0, exp = 0;
      for (int i = 0; i < 50; ++i) {
        if (labels[i] != k) continue;
        obs += d(i, j);
        exp += rs[i] * cs[j] / total;
      }
      if (exp > 0) {
        CHECK(std::abs(t.all[j].score - obs / exp) <= 1e-12 * std::max(1.0, obs / exp));
        weighted += t.all[j].score * t.all[j].expected;
      }
      observed_total += obs;
    }
    CHECK(weighted == doctest::Approx(observed_total).epsilon(1e-12));
    CHECK(t.ranked.size() == 5);
    for (std::size_t r = 0; r + 1 < t.ranked.size(); ++r) {
      CHECK(t.ranked[r].score >= t.ranked[r + 1].score);
    }
  }
}

TEST_CASE("keyword ranking breaks ties by term") {
  const SparseMatrix x = build_sparse({{0, 0, 1}, {0, 1, 1}, {0, 2, 1}, {1, 0, 1}, {1, 1, 1}, {1, 2, 1}}, 2, 3);
  const KeywordTable t = keyword_scores(x, {0, 1}, 0, {"zeta", "alpha", "mid"}, 3);
  CHECK(t.ranked[0].term == "alpha");
  CHECK(t.ranked[1].term == "mid");
  CHECK(t.ranked[2].term == "zeta");
}
