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

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dense_oracle.hpp"
#include "pairgt/error.hpp"
#include "pairgt/linear_operator.hpp"
#include "pairgt/simgen.hpp"
#include "pairgt/spectral.hpp"

using namespace pairgt;

namespace {

BlockModelSpec two_block(std::size_t n_c, std::size_t n_p, double p_in,
                         double p_out) {
  return planted_block_model(n_c, n_p, 2, p_in, p_out, 4, 4, 1.0, 0.0, 1.0);
}

double brute_force_rate(const std::vector<std::size_t>& est,
                        const std::vector<std::size_t>& truth, std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < est.size(); ++i) agree += perm[est[i]] == truth[i];
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 1.0 - static_cast<double>(best) / static_cast<double>(est.size());
}

}  // namespace

TEST_CASE("ncscbm sampler examples") {
  SUBCASE("B all zero gives an empty graph") {
    const NcScbmSample s = sample_ncscbm(two_block(30, 20, 0.0, 0.0), 1);
    CHECK(s.a.nnz() == 0);
  }
  SUBCASE("B all one gives the complete bipartite graph") {
    const NcScbmSample s = sample_ncscbm(two_block(30, 20, 1.0, 1.0), 1);
    CHECK(s.a.nnz() == 600);
    CHECK(s.a.min_value() == 1.0);
  }
  SUBCASE("noise 0 gives the block means") {
    BlockModelSpec spec = two_block(30, 20, 0.3, 0.1);
    spec.noise = 0.0;
    spec.e_c(0, 1) = 2.5;
    const NcScbmSample s = sample_ncscbm(spec, 4);
    const DenseMatrix x = s.x.to_dense();
    for (std::size_t i = 0; i < 30; ++i) {
      CHECK(x.row(i) == spec.e_c.row(s.citizen_labels[i]));
    }
    const DenseMatrix y = s.y.to_dense();
    for (std::size_t j = 0; j < 20; ++j) {
      CHECK(y.row(j) == spec.e_p.row(s.post_labels[j]));
    }
  }
  SUBCASE("probability above one is an error naming the cell") {
    BlockModelSpec spec = two_block(10, 10, 0.5, 0.1);
    spec.b(1, 0) = 1.2;
    try {
      sample_ncscbm(spec, 1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("(1, 0)") != std::string::npos);
    }
  }
  SUBCASE("explicit labels are kept") {
    BlockModelSpec spec = two_block(4, 2, 0.5, 0.1);
    spec.citizen_labels = {1, 0, 1, 0};
    spec.post_labels = {0, 1};
    const NcScbmSample s = sample_ncscbm(spec, 1);
    CHECK(s.citizen_labels == spec.citizen_labels);
    spec.citizen_labels = {1, 1, 1, 1};  // block 0 empty
    CHECK_THROWS_AS(sample_ncscbm(spec, 1), Error);
  }
  SUBCASE("same seed, same sample") {
    const NcScbmSample a = sample_ncscbm(two_block(50, 40, 0.2, 0.05), 9);
    const NcScbmSample b = sample_ncscbm(two_block(50, 40, 0.2, 0.05), 9);
    CHECK(a.a == b.a);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
  }
}

TEST_CASE("block-pair link frequencies converge to B") {
  BlockModelSpec spec = planted_block_model(40, 30, 3, 0.3, 0.05, 2, 2, 1, 0, 1);
  spec.b(0, 1) = 0.15;
  spec.b(2, 0) = 0.6;
  DenseMatrix links = DenseMatrix::Zero(3, 3);
  DenseMatrix pairs = DenseMatrix::Zero(3, 3);
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const NcScbmSample s = sample_ncscbm(spec, 1000 + rep);
    std::vector<double> nc(3, 0), np(3, 0);
    for (auto l : s.citizen_labels) nc[l] += 1;
    for (auto l : s.post_labels) np[l] += 1;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) pairs(a, b) += nc[a] * np[b];
    }
    for (const Triplet& t : s.a.triplets()) {
      links(s.citizen_labels[t.row], s.post_labels[t.col]) += 1;
    }
  }
  double chi2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double p = spec.b(a, b);
      const double expect = p * pairs(a, b);
      const double var = pairs(a, b) * p * (1 - p);
      chi2 += (links(a, b) - expect) * (links(a, b) - expect) / var;
    }
  }
  // 9 degrees of freedom; the 0.999 quantile is 27.9.
  CHECK(chi2 < 27.9);
}

TEST_CASE("bernoulli covariates follow their means") {
  BlockModelSpec spec = planted_block_model(400, 300, 2, 0.1, 0.02, 50, 50, 0.3, 0.05, 0);
  spec.covariates = CovariateLaw::kBernoulli;
  const NcScbmSample s = sample_ncscbm(spec, 3);
  double in = 0, in_n = 0, out = 0, out_n = 0;
  const DenseMatrix x = s.x.to_dense();
  for (std::size_t i = 0; i < 400; ++i) {
    for (std::size_t j = 0; j < 50; ++j) {
      if (j % 2 == s.citizen_labels[i]) {
        in += x(i, j);
        in_n += 1;
      } else {
        out += x(i, j);
        out_n += 1;
      }
    }
  }
  CHECK(in / in_n == doctest::Approx(0.3).epsilon(0.05));
  CHECK(out / out_n == doctest::Approx(0.05).epsilon(0.1));
  spec.e_c(0, 0) = 1.5;
  CHECK_THROWS_AS(sample_ncscbm(spec, 3), Error);
}

TEST_CASE("dcsbm calibration") {
  DcsbmDocsSpec spec;
  spec.sig_g = 1.0;
  spec.sig_t = 1.0;
  const DcsbmConstants c = dcsbm_constants(spec);
  // Expected links per document: (n - 1) * c_g * (0.1 + sig_g / 2).
  CHECK((spec.n_docs - 1) * c.c_g * (0.1 + 0.5) == doctest::Approx(20.0));
  CHECK(spec.n_words * c.c_t * (0.1 + 0.5) == doctest::Approx(200.0));
  CHECK(c.b(0, 0) == doctest::Approx(c.c_g * 1.1));
  CHECK(c.b(0, 1) == doctest::Approx(c.c_g * 0.1));

  double links = 0, words = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const DcsbmDocsSample s = sample_dcsbm_docs(spec, rep + 1);
    links += s.a.total() / static_cast<double>(spec.n_docs);
    words += s.x.total() / static_cast<double>(spec.n_docs);
    if (rep == 0) {
      CHECK(s.a == build_sparse(s.a.triplets(), 1000, 1000));
      const DenseMatrix d = s.a.to_dense();
      CHECK(d == d.transpose());
      CHECK(d.diagonal().isZero());
    }
  }
  CHECK(links / 100 == doctest::Approx(20.0).epsilon(0.05));
  CHECK(words / 100 == doctest::Approx(200.0).epsilon(0.05));
}

TEST_CASE("dcsbm rejects probabilities above one") {
  DcsbmDocsSpec spec;
  spec.n_docs = 30;
  spec.n_words = 30;
  spec.sig_g = 1e3;
  spec.links_per_doc = 25.0;
  try {
    sample_dcsbm_docs(spec, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("1000") != std::string::npos);
  }
}

TEST_CASE("dcsbm block sizes are binomial") {
  DcsbmDocsSpec spec;
  const DcsbmDocsSample s = sample_dcsbm_docs(spec, 7);
  const auto ones = std::count(s.labels.begin(), s.labels.end(), 1u);
  CHECK(ones > 400);
  CHECK(ones < 600);
  CHECK(ones != 500);  // not forced to balance (holds for this seed)
}

TEST_CASE("misclustering rate examples") {
  CHECK(misclustering_rate({0, 0, 1, 1}, {0, 0, 1, 1}) == 0.0);
  CHECK(misclustering_rate({1, 1, 0, 0}, {0, 0, 1, 1}) == 0.0);
  CHECK(misclustering_rate({0, 1, 1, 1}, {0, 0, 1, 1}) == 0.25);
  CHECK_THROWS_AS(misclustering_rate({0, 1}, {0, 1, 1}), Error);
}

TEST_CASE("misclustering rate is a permutation-invariant pseudometric") {
  std::mt19937_64 rng(12);
  for (std::size_t k : {2u, 3u, 5u, 7u, 8u}) {
    std::vector<std::size_t> a(60), b(60), c(60);
    for (auto& x : a) x = rng() % k;
    for (auto& x : b) x = rng() % 3 == 0 ? rng() % k : 0;
    for (std::size_t i = 0; i < 60; ++i) {
      b[i] = rng() % 4 == 0 ? rng() % k : a[i];
      c[i] = rng() % 4 == 0 ? rng() % k : b[i];
    }
    const double ab = misclustering_rate(a, b);
    CHECK(ab == doctest::Approx(brute_force_rate(a, b, k)).epsilon(1e-15));
    CHECK(ab == misclustering_rate(b, a));
    CHECK(misclustering_rate(a, a) == 0.0);
    CHECK(misclustering_rate(a, c) <= ab + misclustering_rate(b, c) + 1e-15);
    std::vector<std::size_t> relabeled(a);
    for (auto& x : relabeled) x = (x + 1) % k;
    CHECK(misclustering_rate(relabeled, b) == ab);
  }
}

TEST_CASE("population similarity") {
  BlockModelSpec spec = planted_block_model(60, 45, 3, 0.4, 0.1, 9, 6, 1.0, 0.2, 1.0);
  std::vector<std::size_t> zc(60), zp(45);
  for (std::size_t i = 0; i < 60; ++i) zc[i] = i % 3;
  for (std::size_t j = 0; j < 45; ++j) zp[j] = (j / 3) % 3;

  SUBCASE("h = 0 is the population Laplacian") {
    DenseMatrix a(60, 45);
    for (int i = 0; i < 60; ++i) {
      for (int j = 0; j < 45; ++j) a(i, j) = spec.b(zc[i], zp[j]);
    }
    const DenseMatrix want = oracle::laplacian(a, a.sum() / 60.0, a.sum() / 45.0);
    CHECK((population_similarity(spec, zc, zp, 0.0) - want).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("rank and block structure of the embedding") {
    const DenseMatrix s = population_similarity(spec, zc, zp, 0.5);
    Eigen::JacobiSVD<DenseMatrix> svd(s, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-10 * sv[0];
    CHECK(rank == 3);
    const DenseMatrix u = svd.matrixU().leftCols(3);
    // Rows of one block coincide; rows of different blocks differ.
    for (int i = 0; i < 60; ++i) {
      const double within = (u.row(i) - u.row(zc[i])).norm();
      CHECK(within < 1e-10);
    }
    CHECK((u.row(0) - u.row(1)).norm() > 1e-3);
    CHECK((u.row(0) - u.row(2)).norm() > 1e-3);
    CHECK((u.row(1) - u.row(2)).norm() > 1e-3);
  }
  SUBCASE("scree of the population operator has K values above the floor") {
    const DenseOperator op(population_similarity(spec, zc, zp, 0.5));
    SvdOptions o;
    const Scree sc = scree(op, 6, o);
    for (int i = 0; i < 3; ++i) CHECK(sc.sigma[i] > 1e-8);
    for (int i = 3; i < 6; ++i) CHECK(sc.sigma[i] < 1e-10 * sc.sigma[0]);
  }
  SUBCASE("size guard") {
    BlockModelSpec big = planted_block_model(2000, 1000, 2, 0.1, 0.05, 2, 2, 1, 0, 1);
    std::vector<std::size_t> bc(2000), bp(1000);
    for (std::size_t i = 0; i < 2000; ++i) bc[i] = i % 2;
    for (std::size_t j = 0; j < 1000; ++j) bp[j] = j % 2;
    CHECK_THROWS_AS(population_similarity(big, bc, bp, 0.0), Error);
  }
}

TEST_CASE("block rank") {
  DenseMatrix b(2, 3);
  b << 0.5, 0.1, 0.1,
       1.0, 0.2, 0.2;
  CHECK(block_rank(b) == 1);
  b(1, 1) = 0.7;
  CHECK(block_rank(b) == 2);
}
