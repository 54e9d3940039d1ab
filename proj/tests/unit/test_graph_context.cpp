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

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "dense_oracle.hpp"
#include "pairgt/error.hpp"
#include "pairgt/graph_context.hpp"
#include "test_util.hpp"

using namespace pairgt;
using pairgt::testing::densify;
using pairgt::testing::random_dense;
using pairgt::testing::random_sparse;

namespace {

double max_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

CallResponse from_values(std::vector<double> v, Eigen::Index rows,
                         Eigen::Index cols) {
  CallResponse w;
  w.values = Eigen::Map<DenseMatrix>(v.data(), rows, cols);
  return w;
}

struct Instance {
  SparseMatrix a, x, y;
};

Instance random_instance(std::uint64_t seed, std::size_t n_c = 50,
                         std::size_t n_p = 30, std::size_t m_c = 10,
                         std::size_t m_p = 12) {
  return {random_sparse(n_c, n_p, 0.15, seed, 0, 1, true),
          random_sparse(n_c, m_c, 0.3, seed + 1, 0, 1, true),
          random_sparse(n_p, m_p, 0.3, seed + 2, 0, 1, true)};
}

struct Built {
  std::shared_ptr<const RegularizedLaplacian> l;
  std::shared_ptr<const CenteredMatrix> x, y;
  std::shared_ptr<const SparseMatrix> tw;
  double omega;
};

Built build(const Instance& in, double alpha) {
  Built b;
  b.l = std::make_shared<RegularizedLaplacian>(in.a);
  b.x = std::make_shared<CenteredMatrix>(center_columns(in.x));
  b.y = std::make_shared<CenteredMatrix>(center_columns(in.y));
  const ThresholdedResponse t = threshold(call_response(*b.x, *b.l, *b.y), alpha);
  b.tw = std::make_shared<SparseMatrix>(t.values);
  b.omega = t.omega;
  return b;
}

}  // namespace

TEST_CASE("laplacian examples") {
  SUBCASE("1x1") {
    const RegularizedLaplacian l(build_sparse({{0, 0, 1}}, 1, 1), 0.0, 0.0);
    CHECK(l.matrix().to_dense()(0, 0) == 1.0);
  }
  SUBCASE("2x2 by hand") {
    const RegularizedLaplacian l(
        build_sparse({{0, 0, 1}, {0, 1, 1}, {1, 1, 1}}, 2, 2), 0.0, 0.0);
    const DenseMatrix d = l.matrix().to_dense();
    CHECK(d(0, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(d(0, 1) == doctest::Approx(1 / std::sqrt(4.0)).epsilon(1e-15));
    CHECK(d(1, 0) == 0.0);
    CHECK(d(1, 1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("default regularizers are mean degrees") {
    const RegularizedLaplacian l(
        build_sparse({{0, 0, 3}, {1, 0, 2}, {1, 1, 2}, {2, 1, 1}}, 3, 2));
    CHECK(l.tau_c() == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(l.tau_p() == doctest::Approx(4.0).epsilon(1e-15));
  }
  SUBCASE("negative entry") {
    CHECK_THROWS_AS(RegularizedLaplacian(build_sparse({{0, 0, -1}}, 1, 1)), Error);
  }
}

TEST_CASE("laplacian matches the dense formula") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SparseMatrix a = random_sparse(40, 25, 0.2, seed, 0, 1, true);
    const RegularizedLaplacian l(a);
    const DenseMatrix want = oracle::laplacian(a.to_dense(), l.tau_c(), l.tau_p());
    CHECK(max_diff(l.matrix().to_dense(), want) < 1e-15);
    CHECK(max_diff(densify(l), want) < 1e-15);
  }
}

TEST_CASE("call_response examples") {
  SUBCASE("scalar") {
    // A = 1 with tau = 1 gives L = 1 / sqrt(2 * 2).
    const RegularizedLaplacian half(build_sparse({{0, 0, 1}}, 1, 1), 1.0, 1.0);
    REQUIRE(std::abs(half.matrix().to_dense()(0, 0) - 0.5) < 1e-15);
    const CallResponse w =
        call_response(CenteredMatrix(build_sparse({{0, 0, 2}}, 1, 1)), half,
                      CenteredMatrix(build_sparse({{0, 0, 3}}, 1, 1)));
    CHECK(std::abs(w.values(0, 0) - 3.0) < 1e-14);
  }
  SUBCASE("identity L and a shared indicator column") {
    std::vector<Triplet> eye;
    for (std::size_t i = 0; i < 6; ++i) eye.push_back({i, i, 1.0});
    const RegularizedLaplacian l(build_sparse(eye, 6, 6), 0.0, 0.0);
    const SparseMatrix ind = build_sparse({{0, 0, 1}, {2, 0, 1}, {5, 0, 1}}, 6, 1);
    const CenteredMatrix c = center_columns(ind);
    const CallResponse w = call_response(c, l, c);
    const double sq = c.to_dense().col(0).squaredNorm();  // 6 * 0.25
    CHECK(w.values(0, 0) == doctest::Approx(sq).epsilon(1e-14));
    CHECK(sq == doctest::Approx(1.5));
  }
  SUBCASE("dimension mismatch") {
    const RegularizedLaplacian l(random_sparse(5, 4, 0.5, 1));
    CHECK_THROWS_AS(call_response(CenteredMatrix(random_sparse(4, 2, 0.5, 2)), l,
                                  CenteredMatrix(random_sparse(4, 2, 0.5, 3))),
                    Error);
  }
}

TEST_CASE("uninformative covariate gives a zero-mean response") {
  const RegularizedLaplacian l(random_sparse(80, 60, 0.1, 99, 0, 1, true));
  const CenteredMatrix y = center_columns(random_sparse(60, 1, 0.5, 98, 0, 1, true));
  std::vector<double> samples;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const SparseMatrix xs = random_sparse(80, 1, 0.5, 1000 + trial, 0, 1, true);
    samples.push_back(call_response(center_columns(xs), l, y).values(0, 0));
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / 100.0;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  const double sd = std::sqrt(var / 99.0);
  CHECK(std::abs(mean) < 4.0 * sd / 10.0);
}

TEST_CASE("call_response is independent of the block width") {
  const Instance in = random_instance(5, 60, 40, 30, 20);
  const RegularizedLaplacian l(in.a);
  const CenteredMatrix x = center_columns(scale_rows_cols(in.x));
  const CenteredMatrix y = center_columns(in.y);
  const DenseMatrix want = x.to_dense().transpose() * l.matrix().to_dense() * y.to_dense();
  for (std::size_t bw : {1, 3, 7, 256}) {
    CHECK(max_diff(call_response(x, l, y, bw).values, want) < 1e-12);
  }
}

TEST_CASE("threshold examples") {
  SUBCASE("distinct magnitudes 1..100, alpha 0.05") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    const ThresholdedResponse t = threshold(from_values(v, 10, 10), 0.05);
    CHECK(t.omega == 95.0);
    CHECK(t.values.nnz() == 5);
    CHECK(t.values.min_value() == 96.0);
  }
  SUBCASE("alpha 1 keeps everything above the minimum") {
    std::vector<double> v{3, -1, 2, 5};
    const ThresholdedResponse t = threshold(from_values(v, 2, 2), 1.0);
    CHECK(t.omega == 1.0);
    CHECK(t.values.nnz() == 3);
  }
  SUBCASE("ties: strict inequality drops everything") {
    const ThresholdedResponse t = threshold(from_values({2, 2, 2, 2}, 2, 2), 0.5);
    CHECK(t.omega == 2.0);
    CHECK(t.values.nnz() == 0);
  }
  SUBCASE("all zero") {
    const ThresholdedResponse t = threshold(from_values({0, 0, 0, 0}, 2, 2), 0.05);
    CHECK(t.all_zero);
    CHECK(t.omega == 0.0);
    CHECK(t.values.nnz() == 0);
  }
  SUBCASE("zeros are excluded from the population") {
    std::vector<double> v(200, 0.0);
    for (int k = 0; k < 100; ++k) v[2 * k] = k + 1.0;
    const ThresholdedResponse t = threshold(from_values(v, 20, 10), 0.05);
    CHECK(t.population_size == 100);
    CHECK(t.values.nnz() == 5);
    ThresholdOptions all;
    all.population = ThresholdPopulation::kAll;
    const ThresholdedResponse u = threshold(from_values(v, 20, 10), 0.05, all);
    CHECK(u.population_size == 200);
    CHECK(u.values.nnz() == 10);
  }
  SUBCASE("negative entries survive by magnitude unless the signed test is asked") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    v[99] = -100.0;
    CHECK(threshold(from_values(v, 10, 10), 0.05).values.nnz() == 5);
    ThresholdOptions signed_test;
    signed_test.test = ThresholdTest::kSigned;
    CHECK(threshold(from_values(v, 10, 10), 0.05, signed_test).values.nnz() == 4);
  }
  SUBCASE("alpha outside (0, 1]") {
    CHECK_THROWS_AS(threshold(from_values({1}, 1, 1), 0.0), Error);
    CHECK_THROWS_AS(threshold(from_values({1}, 1, 1), 1.5), Error);
  }
}

TEST_CASE("decreasing alpha never adds survivors") {
  const DenseMatrix w = random_dense(30, 20, 77);
  CallResponse cr{w};
  std::size_t prev = w.size() + 1;
  for (double alpha : {1.0, 0.5, 0.2, 0.1, 0.05, 0.01, 0.001}) {
    const std::size_t n = threshold(cr, alpha).values.nnz();
    CHECK(n <= prev);
    prev = n;
  }
}

TEST_CASE("similarity operator reductions") {
  const Instance in = random_instance(17);
  const Built b = build(in, 0.1);
  const RowBlock v = random_dense(30, 4, 3);
  const RowBlock u = random_dense(50, 4, 4);

  SUBCASE("h = 0 is L") {
    const SimilarityOperator s(b.l, b.x, b.y, b.tw, 0.0);
    CHECK(s.mode() == SimilarityMode::kGraphOnly);
    CHECK(max_diff(s.apply(v), b.l->apply(v)) < 1e-14);
    CHECK(max_diff(s.apply_transpose(u), b.l->apply_transpose(u)) < 1e-14);
  }
  SUBCASE("h = inf is the text part") {
    const SimilarityOperator s(b.l, b.x, b.y, b.tw, kInfiniteWeight);
    CHECK(s.mode() == SimilarityMode::kTextOnly);
    const DenseMatrix text =
        b.x->to_dense() * b.tw->to_dense() * b.y->to_dense().transpose();
    CHECK(max_diff(s.apply(v), text * v) < 1e-10);
    CHECK(max_diff(s.apply_transpose(u), text.transpose() * u) < 1e-10);
  }
  SUBCASE("all-one kernel") {
    const SimilarityOperator s(b.l, b.x, b.y, nullptr, 0.5, TextKernel::kAllOne);
    CHECK(s.mode() == SimilarityMode::kAllOne);
    const DenseMatrix j = DenseMatrix::Ones(b.x->cols(), b.y->cols());
    const DenseMatrix want = b.l->matrix().to_dense() +
                             0.5 * b.x->to_dense() * j * b.y->to_dense().transpose();
    CHECK(max_diff(densify(s), want) < 1e-10);
  }
  SUBCASE("negative h") {
    CHECK_THROWS_AS(SimilarityOperator(b.l, b.x, b.y, b.tw, -1.0), Error);
  }
}

TEST_CASE("similarity operator equals the dense oracle") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Instance in = random_instance(seed * 31);
    const Built b = build(in, 0.05);
    for (double h : {0.0, 0.01, 1.0, kInfiniteWeight}) {
      const oracle::Dense d = oracle::pipeline(
          in.a.to_dense(), in.x.to_dense(), in.y.to_dense(), 0.05, h);
      CHECK(b.omega == doctest::Approx(d.omega).epsilon(1e-12));
      const SimilarityOperator s(b.l, b.x, b.y, b.tw, h);
      const double scale = std::max(1.0, d.s.cwiseAbs().maxCoeff());
      CHECK(max_diff(densify(s), d.s) / scale < 1e-10);
      const DenseMatrix st = densify(s).transpose();
      RowBlock eye = RowBlock::Identity(50, 50);
      CHECK(max_diff(DenseMatrix(s.apply_transpose(eye)), st) / scale < 1e-10);
    }
  }
}

TEST_CASE("similarity operator is linear") {
  const Instance in = random_instance(8);
  const Built b = build(in, 0.1);
  const SimilarityOperator s(b.l, b.x, b.y, b.tw, 0.3);
  const Vector v = pairgt::testing::random_vector(30, 1);
  const Vector w = pairgt::testing::random_vector(30, 2);
  const Vector lhs = s.apply(Vector(2.5 * v - 1.5 * w));
  const Vector rhs = 2.5 * s.apply(v) - 1.5 * s.apply(w);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("permuting citizens permutes every derived object") {
  const Instance in = random_instance(23);
  std::vector<std::size_t> perm(50);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  auto permute_rows = [&](const SparseMatrix& m) {
    std::vector<Triplet> t = m.triplets();
    for (auto& e : t) e.row = perm[e.row];
    return build_sparse(t, m.rows(), m.cols());
  };
  const Instance pin{permute_rows(in.a), permute_rows(in.x), in.y};
  const Built b = build(in, 0.05);
  const Built pb = build(pin, 0.05);
  CHECK(pb.omega == doctest::Approx(b.omega).epsilon(1e-12));
  CHECK(max_diff(pb.tw->to_dense(), b.tw->to_dense()) < 1e-10);
  const DenseMatrix s = densify(SimilarityOperator(b.l, b.x, b.y, b.tw, 0.2));
  const DenseMatrix ps = densify(SimilarityOperator(pb.l, pb.x, pb.y, pb.tw, 0.2));
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK((ps.row(perm[i]) - s.row(i)).cwiseAbs().maxCoeff() < 1e-12);
  }
}
