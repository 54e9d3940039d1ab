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
#include <utility>

#include "pairgt/sparse.hpp"

namespace pairgt {

/// Matrix-free rectangular operator: all the SVD solvers ever see.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  /// S * V for a cols() x b block.
  virtual RowBlock apply(const RowBlock& v) const = 0;
  /// Sᵀ * U for a rows() x b block.
  virtual RowBlock apply_transpose(const RowBlock& u) const = 0;

  Vector apply(const Vector& v) const {
    RowBlock b(v.size(), 1);
    b.col(0) = v;
    return apply(b).col(0);
  }
  Vector apply_transpose(const Vector& u) const {
    RowBlock b(u.size(), 1);
    b.col(0) = u;
    return apply_transpose(b).col(0);
  }
};

/// Wraps an explicit dense matrix; used by oracles and small problems.
class DenseOperator final : public LinearOperator {
 public:
  using LinearOperator::apply;
  using LinearOperator::apply_transpose;

  explicit DenseOperator(DenseMatrix m) : m_(std::move(m)) {}
  std::size_t rows() const override { return m_.rows(); }
  std::size_t cols() const override { return m_.cols(); }
  RowBlock apply(const RowBlock& v) const override { return m_ * v; }
  RowBlock apply_transpose(const RowBlock& u) const override {
    return m_.transpose() * u;
  }
  const DenseMatrix& matrix() const { return m_; }

 private:
  DenseMatrix m_;
};

}  // namespace pairgt
