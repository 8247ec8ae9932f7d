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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "chanmaj/errors.hpp"
#include "chanmaj/linalg.hpp"

namespace chanmaj::lp {

enum class Sense { LessEqual, Equal };

/// { x : A x (≤|=) b, x ≥ 0 if nonneg }.
struct FeasibilityProblem {
  Matrix A;
  Vector b;
  std::vector<Sense> sense;
  bool nonneg = true;

  Index rows() const { return A.rows(); }
  Index vars() const { return A.cols(); }

  void validate() const {
    if (A.rows() != b.size() || static_cast<Index>(sense.size()) != b.size()) {
      throw DomainError("feasibility problem: A, b and sense disagree on the row count");
    }
    if (!A.allFinite() || !b.allFinite()) throw DomainError("feasibility problem has non-finite data");
    if (A.cols() > 50 || A.rows() > 200) {
      throw ResourceError("feasibility problem exceeds 50 variables or 200 rows");
    }
  }
};

enum class Status { Feasible, Infeasible };

struct FeasibilityResult {
  Status status = Status::Infeasible;
  std::optional<Vector> witness;
  std::optional<Vector> farkas_certificate;

  bool feasible() const { return status == Status::Feasible; }
};

inline constexpr double kPivotTol = 1e-11;
inline constexpr double kFeasibilityTol = 1e-8;
inline constexpr double kCertificateSlack = 1e-10;

/// Worst violation of the constraints by x (0 when x is feasible).
inline double max_violation(const FeasibilityProblem& prob, const Vector& x) {
  if (x.size() != prob.vars()) return INFINITY;
  double worst = 0.0;
  if (prob.nonneg) worst = std::max(worst, -x.minCoeff());
  const Vector ax = prob.A * x;
  for (Index i = 0; i < prob.rows(); ++i) {
    const double r = ax(i) - prob.b(i);
    worst = std::max(worst, prob.sense[static_cast<std::size_t>(i)] == Sense::Equal ? std::abs(r) : r);
  }
  return worst;
}

inline bool is_witness(const FeasibilityProblem& prob, const Vector& x) {
  return max_violation(prob, x) <= kFeasibilityTol;
}

/// Farkas alternative: y ≥ 0 on inequality rows, yᵀA ≥ 0 (= 0 for free
/// variables), and yᵀb < 0.
inline bool is_farkas_certificate(const FeasibilityProblem& prob, const Vector& y) {
  if (y.size() != prob.rows()) return false;
  for (Index i = 0; i < y.size(); ++i) {
    if (prob.sense[static_cast<std::size_t>(i)] == Sense::LessEqual && y(i) < -kCertificateSlack) return false;
  }
  const Vector ya = prob.A.transpose() * y;
  for (Index j = 0; j < ya.size(); ++j) {
    if (ya(j) < -kCertificateSlack) return false;
    if (!prob.nonneg && ya(j) > kCertificateSlack) return false;
  }
  return y.dot(prob.b) < -kFeasibilityTol;
}

namespace detail {

// Dense phase-1 tableau. Columns: structural variables, then per row either a
// slack, or a surplus followed by an artificial.
class PhaseOneTableau {
 public:
  explicit PhaseOneTableau(const FeasibilityProblem& prob) : prob_(prob) {
    const Index m = prob.rows();
    const Index n = prob.vars();
    structural_ = prob.nonneg ? n : 2 * n;
    flipped_.assign(static_cast<std::size_t>(m), false);
    identity_col_.assign(static_cast<std::size_t>(m), 0);

    Index extra = 0;
    for (Index i = 0; i < m; ++i) {
      const bool flip = prob.b(i) < 0.0;
      flipped_[static_cast<std::size_t>(i)] = flip;
      const bool le = prob.sense[static_cast<std::size_t>(i)] == Sense::LessEqual;
      extra += (le && !flip) ? 1 : (le ? 2 : 1);
    }
    cols_ = structural_ + extra;
    t_ = Matrix::Zero(m, cols_ + 1);
    cost_ = Vector::Zero(cols_);
    basis_.assign(static_cast<std::size_t>(m), 0);

    Index col = structural_;
    for (Index i = 0; i < m; ++i) {
      const double s = flipped_[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
      t_.row(i).head(n) = s * prob.A.row(i);
      if (!prob.nonneg) t_.row(i).segment(n, n) = -s * prob.A.row(i);
      t_(i, cols_) = s * prob.b(i);
      const bool le = prob.sense[static_cast<std::size_t>(i)] == Sense::LessEqual;
      if (le && !flipped_[static_cast<std::size_t>(i)]) {
        t_(i, col) = 1.0;
        identity_col_[static_cast<std::size_t>(i)] = col;
        basis_[static_cast<std::size_t>(i)] = col++;
      } else {
        if (le) t_(i, col++) = -1.0;  // surplus
        t_(i, col) = 1.0;
        cost_(col) = 1.0;
        identity_col_[static_cast<std::size_t>(i)] = col;
        basis_[static_cast<std::size_t>(i)] = col++;
      }
    }
    reduced_ = cost_;
    for (Index i = 0; i < m; ++i) {
      const double cb = cost_(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) reduced_ -= cb * t_.row(i).head(cols_).transpose();
    }
  }

  // Bland's rule: lowest-index improving column, lowest-index leaving basis
  // variable among ratio ties.
  void run() {
    const Index m = t_.rows();
    const int max_iter = 50000;
    for (int iter = 0; iter < max_iter; ++iter) {
      Index enter = -1;
      for (Index j = 0; j < cols_; ++j) {
        if (reduced_(j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Index leave = -1;
      double best_ratio = INFINITY;
      for (Index i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t_(i, cols_) / a;
        if (ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) {
        throw SolverError("phase-1 simplex found no pivot above tolerance 1e-11");
      }
      pivot(leave, enter);
    }
    throw SolverError("phase-1 simplex exceeded its iteration limit");
  }

  double objective() const {
    double w = 0.0;
    for (Index i = 0; i < t_.rows(); ++i) w += cost_(basis_[static_cast<std::size_t>(i)]) * t_(i, cols_);
    return w;
  }

  Vector primal() const {
    Vector z = Vector::Zero(cols_);
    for (Index i = 0; i < t_.rows(); ++i) z(basis_[static_cast<std::size_t>(i)]) = t_(i, cols_);
    const Index n = prob_.vars();
    Vector x = z.head(n);
    if (!prob_.nonneg) x -= z.segment(n, n);
    if (prob_.nonneg) x = x.cwiseMax(0.0);
    return x;
  }

  // Simplex multipliers of the phase-1 optimum, mapped back to the
  // original row orientation and negated into a Farkas ray.
  Vector farkas_ray() const {
    const Index m = t_.rows();
    Vector y(m);
    for (Index i = 0; i < m; ++i) {
      const Index c = identity_col_[static_cast<std::size_t>(i)];
      const double pi = cost_(c) - reduced_(c);
      y(i) = flipped_[static_cast<std::size_t>(i)] ? pi : -pi;
      if (prob_.sense[static_cast<std::size_t>(i)] == Sense::LessEqual && y(i) < 0.0 && y(i) > -1e-12) y(i) = 0.0;
    }
    return y;
  }

 private:
  void pivot(Index r, Index c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    for (Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    const double f = reduced_(c);
    reduced_ -= f * t_.row(r).head(cols_).transpose();
    basis_[static_cast<std::size_t>(r)] = c;
  }

  const FeasibilityProblem& prob_;
  Index structural_ = 0;
  Index cols_ = 0;
  Matrix t_;
  Vector cost_;
  Vector reduced_;
  std::vector<Index> basis_;
  std::vector<Index> identity_col_;
  std::vector<bool> flipped_;
};

}  // namespace detail

/// Decides feasibility with a phase-1 simplex (Bland's rule). Every returned
/// result carries either a verified witness or a verified Farkas
/// certificate; anything else raises SolverError.
inline FeasibilityResult solve_feasibility(const FeasibilityProblem& prob) {
  prob.validate();
  FeasibilityResult result;
  if (prob.rows() == 0) {
    result.status = Status::Feasible;
    result.witness = Vector::Zero(prob.vars());
    return result;
  }
  detail::PhaseOneTableau tableau(prob);
  tableau.run();

  if (tableau.objective() <= kFeasibilityTol) {
    Vector x = tableau.primal();
    if (is_witness(prob, x)) {
      result.status = Status::Feasible;
      result.witness = std::move(x);
      return result;
    }
  }
  Vector y = tableau.farkas_ray();
  if (is_farkas_certificate(prob, y)) {
    result.status = Status::Infeasible;
    result.farkas_certificate = std::move(y);
    return result;
  }
  throw SolverError("simplex ended with neither a valid witness nor a valid Farkas certificate (phase-1 value " +
                    std::to_string(tableau.objective()) + ")");
}

}  // namespace chanmaj::lp
