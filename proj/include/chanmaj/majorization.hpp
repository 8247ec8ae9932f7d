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

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "chanmaj/errors.hpp"
#include "chanmaj/linalg.hpp"
#include "chanmaj/tolerance.hpp"

namespace chanmaj {

/// A finite probability distribution. Construction validates the entries:
/// values in [-kNumericalEps, 0) are clamped to zero and the total must be
/// within kNormalizationTol of one.
class ProbVector {
 public:
  explicit ProbVector(Vector entries) : p_(std::move(entries)) {
    if (p_.size() == 0) throw DomainError("probability vector must be non-empty");
    for (Index i = 0; i < p_.size(); ++i) {
      if (!std::isfinite(p_(i))) throw DomainError("probability vector has a non-finite entry");
      if (p_(i) < -kNumericalEps) {
        throw DomainError("probability vector has a negative entry at index " + std::to_string(i));
      }
      if (p_(i) < 0.0) p_(i) = 0.0;
    }
    if (std::abs(p_.sum() - 1.0) > kNormalizationTol) {
      throw DomainError("probability vector does not sum to one");
    }
  }

  ProbVector(std::initializer_list<double> entries)
      : ProbVector(Vector(Eigen::Map<const Vector>(entries.begin(), static_cast<Index>(entries.size())))) {}

  static ProbVector uniform(Index n) {
    if (n < 1) throw DomainError("dimension must be positive");
    return ProbVector(Vector::Constant(n, 1.0 / static_cast<double>(n)));
  }

  static ProbVector point_mass(Index n, Index at = 0) {
    if (n < 1 || at < 0 || at >= n) throw DomainError("point mass index out of range");
    Vector v = Vector::Zero(n);
    v(at) = 1.0;
    return ProbVector(std::move(v));
  }

  Index dim() const { return p_.size(); }
  double operator[](Index i) const { return p_(i); }
  const Vector& entries() const { return p_; }

  ProbVector sorted() const { return ProbVector(sorted_descending(p_)); }
  ProbVector padded(Index n) const { return ProbVector(zero_padded(p_, n)); }

  /// Tensor product p ⊗ q with p as the major index.
  ProbVector tensor(const ProbVector& other) const { return ProbVector(kron(p_, other.p_)); }

 private:
  Vector p_;
};

/// Square matrix with non-negative entries whose rows and columns each sum
/// to one.
class DoublyStochasticMatrix {
 public:
  explicit DoublyStochasticMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw DomainError("doubly stochastic matrix must be square and non-empty");
    }
    for (Index i = 0; i < m_.rows(); ++i) {
      for (Index j = 0; j < m_.cols(); ++j) {
        if (m_(i, j) < -kNumericalEps) throw DomainError("doubly stochastic matrix has a negative entry");
        if (m_(i, j) < 0.0) m_(i, j) = 0.0;
      }
    }
    if (!is_doubly_stochastic(m_)) throw DomainError("rows or columns do not sum to one");
  }

  static DoublyStochasticMatrix identity(Index n) { return DoublyStochasticMatrix(Matrix::Identity(n, n)); }

  static bool is_doubly_stochastic(const Matrix& m, double tol = kNormalizationTol) {
    if (m.rows() != m.cols()) return false;
    if ((m.array() < -kNumericalEps).any()) return false;
    return ((m.rowwise().sum().array() - 1.0).abs() <= tol).all() &&
           ((m.colwise().sum().array() - 1.0).abs() <= tol).all();
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Vector apply(const Vector& v) const { return m_ * v; }

 private:
  Matrix m_;
};

/// Sum of the k largest entries of p.
inline double ky_fan_norm(const ProbVector& p, Index k) {
  if (k < 1 || k > p.dim()) {
    throw DomainError("Ky-Fan index " + std::to_string(k) + " outside [1, " + std::to_string(p.dim()) + "]");
  }
  return ky_fan_profile(p.entries())(k - 1);
}

namespace detail {

// Majorization between arbitrary non-negative vectors of possibly different
// length (the shorter one is zero-padded). Used for mixtures and scaled
// vectors that are not exactly normalized.
inline bool majorizes_raw(const Vector& p, const Vector& q, double tol) {
  const Index n = std::max(p.size(), q.size());
  const Vector fp = ky_fan_profile(zero_padded(p, n));
  const Vector fq = ky_fan_profile(zero_padded(q, n));
  for (Index k = 0; k < n; ++k) {
    if (fp(k) < fq(k) - tol) return false;
  }
  return true;
}

}  // namespace detail

/// p ≻ q: every Ky-Fan norm of p dominates the one of q up to the comparison
/// tolerance. Vectors of different dimension are compared after zero-padding.
inline bool majorizes_vector(const ProbVector& p, const ProbVector& q) {
  return detail::majorizes_raw(p.entries(), q.entries(), comparison_tolerance());
}

/// Builds a doubly stochastic D with D·p = q out of a chain of at most
/// dim-1 T-transforms between the sorted vectors, sandwiched by the sorting
/// permutations of p and q.
inline DoublyStochasticMatrix transfer_matrix(const ProbVector& p, const ProbVector& q) {
  if (p.dim() != q.dim()) throw DomainError("transfer_matrix requires equal dimensions");
  if (!majorizes_vector(p, q)) throw PreconditionError("transfer_matrix: p does not majorize q");
  const Index n = p.dim();
  const auto order_p = descending_order(p.entries());
  const auto order_q = descending_order(q.entries());

  Vector cur(n), target(n);
  for (Index i = 0; i < n; ++i) {
    cur(i) = p[order_p[static_cast<std::size_t>(i)]];
    target(i) = q[order_q[static_cast<std::size_t>(i)]];
  }

  // Residual mass below this is treated as already transferred.
  constexpr double kSettled = 1e-14;
  Matrix chain = Matrix::Identity(n, n);
  for (Index step = 0; step < 2 * n; ++step) {
    // Largest surplus index that still has a deficit after it; surpluses
    // with nothing to their right are tolerance-level leftovers.
    Index j = -1;
    Index k = -1;
    for (Index i = n - 1; i >= 0 && k < 0; --i) {
      if (cur(i) - target(i) <= kSettled) continue;
      for (Index l = i + 1; l < n; ++l) {
        if (target(l) - cur(l) > kSettled) {
          j = i;
          k = l;
          break;
        }
      }
    }
    if (k < 0) break;
    const double delta = std::min(cur(j) - target(j), target(k) - cur(k));
    const double gap = cur(j) - cur(k);
    if (gap <= 0.0) break;
    const double lambda = std::clamp(1.0 - delta / gap, 0.0, 1.0);
    Matrix t = Matrix::Identity(n, n);
    t(j, j) = lambda;
    t(k, k) = lambda;
    t(j, k) = 1.0 - lambda;
    t(k, j) = 1.0 - lambda;
    cur = t * cur;
    chain = t * chain;
  }

  Matrix sort_p = Matrix::Zero(n, n);
  Matrix sort_q = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    sort_p(i, order_p[static_cast<std::size_t>(i)]) = 1.0;
    sort_q(i, order_q[static_cast<std::size_t>(i)]) = 1.0;
  }
  Matrix d = sort_q.transpose() * chain * sort_p;
  const double residual = (d * p.entries() - q.entries()).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw InternalError("transfer_matrix residual " + std::to_string(residual) + " exceeds 1e-8");
  }
  return DoublyStochasticMatrix(std::move(d));
}

/// Pointwise maximum of the Ky-Fan profiles over a set, with a leading zero:
/// entry k holds max_p ||p||_(k) for k = 0..n.
inline Vector max_ky_fan_profile(std::span<const ProbVector> set) {
  if (set.empty()) throw DomainError("optimal_upper_bound of an empty set");
  const Index n = set.front().dim();
  Vector best = Vector::Zero(n + 1);
  for (const auto& p : set) {
    if (p.dim() != n) throw DomainError("optimal_upper_bound requires a common dimension");
    best.tail(n) = best.tail(n).cwiseMax(ky_fan_profile(p.entries()));
  }
  return best;
}

/// Least element of Prob↓(n) whose Ky-Fan profile dominates `f` (given
/// with a leading zero, f(0) = 0 and f(n) = 1).
///
/// Walks the breakpoints k_0 = 0 < k_1 < ... < k_J = n of the least concave
/// majorant of f: each k_j is the largest index attaining the steepest
/// slope from k_{j-1}, and the entries between consecutive breakpoints share
/// that slope.
inline ProbVector upper_bound_from_profile(const Vector& f) {
  const Index n = f.size() - 1;
  if (n < 1) throw DomainError("profile must cover at least one level");
  Vector w(n);
  Index prev = 0;
  while (prev < n) {
    Index next = prev + 1;
    double best = f(next) - f(prev);
    for (Index l = prev + 2; l <= n; ++l) {
      const double slope = (f(l) - f(prev)) / static_cast<double>(l - prev);
      if (slope >= best - 1e-15) {
        if (slope > best) best = slope;
        next = l;
      }
    }
    const double value = (f(next) - f(prev)) / static_cast<double>(next - prev);
    for (Index k = prev; k < next; ++k) w(k) = value < kNumericalEps ? 0.0 : value;
    prev = next;
  }
  return ProbVector(std::move(w));
}

/// Least element of Prob↓(n) that majorizes every member of `set`.
inline ProbVector optimal_upper_bound(std::span<const ProbVector> set) {
  return upper_bound_from_profile(max_ky_fan_profile(set));
}

inline ProbVector optimal_upper_bound(std::initializer_list<ProbVector> set) {
  return optimal_upper_bound(std::span<const ProbVector>(set.begin(), set.size()));
}

}  // namespace chanmaj
