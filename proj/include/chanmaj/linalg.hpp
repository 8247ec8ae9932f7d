// Copyright 2026 The chanmaj Authors
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

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <complex>
#include <numeric>
#include <vector>

namespace chanmaj {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Indices that order `v` non-increasingly; ties keep the lower index first.
inline std::vector<Index> descending_order(const Vector& v) {
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&v](Index a, Index b) { return v(a) > v(b); });
  return idx;
}

inline Vector sorted_descending(const Vector& v) {
  Vector out(v.size());
  const auto order = descending_order(v);
  for (Index i = 0; i < v.size(); ++i) out(i) = v(order[static_cast<std::size_t>(i)]);
  return out;
}

/// Partial sums of the sorted vector: entry k-1 holds the k'th Ky-Fan norm.
inline Vector ky_fan_profile(const Vector& v) {
  Vector s = sorted_descending(v);
  for (Index i = 1; i < s.size(); ++i) s(i) += s(i - 1);
  return s;
}

/// Zero-pads `v` to length `n` (no-op when already that long).
inline Vector zero_padded(const Vector& v, Index n) {
  if (v.size() >= n) return v;
  Vector out = Vector::Zero(n);
  out.head(v.size()) = v;
  return out;
}

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::kroneckerProduct(a.derived(), b.derived());
  return out;
}

}  // namespace chanmaj
