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

// Shared helpers for the unit and acceptance tests.

#pragma once

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pairgt/linear_operator.hpp"
#include "pairgt/sparse.hpp"

namespace pairgt::testing {

/// Random sparse matrix with roughly `density` of its entries set to
/// values drawn from [lo, hi].
inline SparseMatrix random_sparse(std::size_t rows, std::size_t cols,
                                  double density, std::uint64_t seed,
                                  double lo = 0.0, double hi = 1.0,
                                  bool integer = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> v(lo, hi);
  std::uniform_int_distribution<int> n(1, 5);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (u(rng) < density) {
        t.push_back({i, j, integer ? static_cast<double>(n(rng)) : v(rng)});
      }
    }
  }
  return build_sparse(std::move(t), rows, cols);
}

inline Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = g(rng);
  return v;
}

inline DenseMatrix random_dense(std::size_t rows, std::size_t cols,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = g(rng);
  }
  return m;
}

/// Applies an operator to the identity to recover its dense form.
inline DenseMatrix densify(const LinearOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.cols());
  RowBlock eye = RowBlock::Identity(n, n);
  return DenseMatrix(op.apply(eye));
}

/// Largest principal angle (radians) between the column spans of a and b,
/// both with orthonormal columns.
inline double max_principal_angle(const DenseMatrix& a, const DenseMatrix& b) {
  Eigen::JacobiSVD<DenseMatrix> svd(a.transpose() * b);
  const double smallest = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smallest, -1.0, 1.0));
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pairgt_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pairgt::testing
