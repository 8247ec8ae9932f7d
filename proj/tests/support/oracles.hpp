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


// Random instance generators and independent reference computations shared
// by the unit tests and the acceptance binary. Nothing here calls into the
// routine it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include "chanmaj/chanmaj.hpp"

namespace chanmaj::testing {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline Index uniform_int(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

/// Random distribution; with probability `zero_rate` an entry is forced to
/// zero (at least one entry stays positive).
inline Vector random_prob(Rng& rng, Index n, double zero_rate = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = (uniform01(rng) < zero_rate) ? 0.0 : expo(rng);
  if (v.sum() <= 0.0) v(uniform_int(rng, 0, n - 1)) = 1.0;
  return v / v.sum();
}

/// Distribution with entries on the lattice 1/denominator, which produces
/// exact ties and repeated columns.
inline Vector random_lattice_prob(Rng& rng, Index n, Index denominator) {
  Vector v = Vector::Zero(n);
  for (Index k = 0; k < denominator; ++k) v(uniform_int(rng, 0, n - 1)) += 1.0;
  return v / static_cast<double>(denominator);
}

inline Matrix random_stochastic(Rng& rng, Index n, Index m, double zero_rate = 0.0) {
  Matrix t(n, m);
  for (Index x = 0; x < m; ++x) t.col(x) = random_prob(rng, n, zero_rate);
  return t;
}

inline ClassicalChannel random_channel(Rng& rng, Index n, Index m, double zero_rate = 0.0) {
  return ClassicalChannel(random_stochastic(rng, n, m, zero_rate));
}

/// Convex combination of random permutation matrices.
inline Matrix random_doubly_stochastic(Rng& rng, Index n, int terms = 3) {
  Matrix d = Matrix::Zero(n, n);
  const Vector w = random_prob(rng, terms);
  for (int t = 0; t < terms; ++t) {
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Index i = 0; i < n; ++i) d(i, perm[static_cast<std::size_t>(i)]) += w(t);
  }
  return d;
}

/// Least concave majorant on k = 0..n evaluated pointwise as the best chord
/// between two sample points bracketing k.
inline Vector concave_majorant(const Vector& f) {
  const Index n = f.size() - 1;
  Vector out(n + 1);
  for (Index k = 0; k <= n; ++k) {
    double best = f(k);
    for (Index i = 0; i <= k; ++i) {
      for (Index j = k; j <= n; ++j) {
        if (i == j) continue;
        const double lam = static_cast<double>(j - k) / static_cast<double>(j - i);
        best = std::max(best, lam * f(i) + (1.0 - lam) * f(j));
      }
    }
    out(k) = best;
  }
  return out;
}

/// Partial sums of the entries sorted with std::sort (leading zero).
inline Vector reference_profile(const Vector& p) {
  std::vector<double> s(p.data(), p.data() + p.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  Vector f = Vector::Zero(p.size() + 1);
  for (std::size_t i = 0; i < s.size(); ++i) f(static_cast<Index>(i) + 1) = f(static_cast<Index>(i)) + s[i];
  return f;
}

inline bool reference_majorizes(const Vector& p, const Vector& q, double tol = 1e-9) {
  const Index n = std::max(p.size(), q.size());
  Vector pp = Vector::Zero(n), qq = Vector::Zero(n);
  pp.head(p.size()) = p;
  qq.head(q.size()) = q;
  const Vector fp = reference_profile(pp), fq = reference_profile(qq);
  for (Index k = 0; k <= n; ++k) {
    if (fp(k) < fq(k) - tol) return false;
  }
  return true;
}

/// Predictability comparison P_N(s) ≥ P_M(s) over every non-increasing s
/// on the lattice 1/grid, enumerated by an odometer over all compositions.
inline bool grid_predictability_majorizes(const Matrix& n_mat, const Matrix& m_mat, Index grid, double tol = 1e-9) {
  const Index n = n_mat.rows();
  auto predict = [](const Matrix& ch, const std::vector<Index>& parts, Index grid_) {
    double best = -1.0;
    for (Index x = 0; x < ch.cols(); ++x) {
      std::vector<double> col(ch.col(x).data(), ch.col(x).data() + ch.rows());
      std::sort(col.begin(), col.end(), std::greater<>());
      double v = 0.0;
      for (std::size_t i = 0; i < col.size(); ++i) v += static_cast<double>(parts[i]) / static_cast<double>(grid_) * col[i];
      best = std::max(best, v);
    }
    return best;
  };
  std::vector<Index> parts(static_cast<std::size_t>(n), 0);
  while (true) {
    Index total = std::accumulate(parts.begin(), parts.end(), Index{0});
    bool descending = std::is_sorted(parts.begin(), parts.end(), std::greater<>());
    if (total == grid && descending) {
      if (predict(n_mat, parts, grid) < predict(m_mat, parts, grid) - tol) return false;
    }
    std::size_t i = 0;
    while (i < parts.size() && parts[i] == grid) parts[i++] = 0;
    if (i == parts.size()) break;
    ++parts[i];
  }
  return true;
}

/// Feasibility of {A x (≤|=) b, x ≥ 0} by enumerating basic solutions of the
/// slack-augmented system.
inline bool vertex_enumeration_feasible(const lp::FeasibilityProblem& prob, double tol = 1e-9) {
  const Index rows = prob.A.rows();
  const Index vars = prob.A.cols();
  Index slacks = 0;
  for (auto s : prob.sense) slacks += (s == lp::Sense::LessEqual) ? 1 : 0;
  Matrix full = Matrix::Zero(rows, vars + slacks);
  full.leftCols(vars) = prob.A;
  Index k = vars;
  for (Index r = 0; r < rows; ++r) {
    if (prob.sense[static_cast<std::size_t>(r)] == lp::Sense::LessEqual) full(r, k++) = 1.0;
  }
  const Index cols = full.cols();
  Eigen::FullPivLU<Matrix> lu(full);
  const Index rank = lu.rank();
  if (rank == 0) return prob.b.cwiseAbs().maxCoeff() <= tol;
  std::vector<bool> pick(static_cast<std::size_t>(cols), false);
  std::fill(pick.end() - rank, pick.end(), true);
  do {
    Matrix basis(rows, rank);
    std::vector<Index> idx;
    for (Index c = 0; c < cols; ++c) {
      if (pick[static_cast<std::size_t>(c)]) {
        basis.col(static_cast<Index>(idx.size())) = full.col(c);
        idx.push_back(c);
      }
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(basis);
    if (qr.rank() < rank) continue;
    const Vector xb = qr.solve(prob.b);
    if ((basis * xb - prob.b).cwiseAbs().maxCoeff() > tol) continue;
    if (xb.minCoeff() >= -tol) return true;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return false;
}

inline ComplexMatrix random_gaussian_complex(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

/// Haar-like random isometry (rows ≥ cols) from the QR of a Gaussian matrix.
inline ComplexMatrix random_isometry(Rng& rng, Index rows, Index cols) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian_complex(rng, rows, cols));
  return qr.householderQ() * ComplexMatrix::Identity(rows, cols);
}

/// Random channel with at least `env` Kraus operators (raised to ⌈in/out⌉ so
/// the Stinespring isometry exists).
inline QuantumChannel random_quantum_channel(Rng& rng, Index in, Index out, Index env) {
  env = std::max(env, (in + out - 1) / out);
  const ComplexMatrix w = random_isometry(rng, out * env, in);
  std::vector<ComplexMatrix> kraus;
  for (Index e = 0; e < env; ++e) {
    ComplexMatrix k(out, in);
    for (Index b = 0; b < out; ++b) k.row(b) = w.row(b * env + e);
    kraus.push_back(std::move(k));
  }
  return QuantumChannel::from_kraus(std::move(kraus));
}

inline ComplexMatrix random_density(Rng& rng, Index d) {
  const ComplexMatrix g = random_gaussian_complex(rng, d, d);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

/// -log2(t*/|B|) with t* the least t such that t·I/|B| - J is positive
/// semidefinite, located by bisection with Cholesky as the PSD test.
inline double hmin_psd_oracle(const ComplexMatrix& choi, Index out_dim) {
  const Index d = choi.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d) / static_cast<double>(out_dim);
  double lo = 0.0;
  double hi = std::max(1.0, choi.trace().real()) * static_cast<double>(out_dim) * 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    Eigen::LLT<ComplexMatrix> llt(mid * id - choi);
    if (llt.info() == Eigen::Success) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return -std::log2(hi / static_cast<double>(out_dim));
}

/// Shannon entropy in bits evaluated in long double.
inline double shannon_long_double(const std::vector<long double>& p) {
  long double s = 0.0L;
  for (long double v : p) {
    if (v > 0.0L) s -= v * std::log2(v);
  }
  return static_cast<double>(s);
}

}  // namespace chanmaj::testing
