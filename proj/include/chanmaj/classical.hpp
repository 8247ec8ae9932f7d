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
#include <utility>
#include <vector>

#include "chanmaj/errors.hpp"
#include "chanmaj/linalg.hpp"
#include "chanmaj/lp.hpp"
#include "chanmaj/majorization.hpp"
#include "chanmaj/tolerance.hpp"

namespace chanmaj {

namespace detail {

inline bool is_column_stochastic(const Matrix& m, double tol = kNormalizationTol) {
  if (m.rows() == 0 || m.cols() == 0) return false;
  if (!m.allFinite() || (m.array() < -kNumericalEps).any()) return false;
  return ((m.colwise().sum().array() - 1.0).abs() <= tol).all();
}

inline Matrix clamp_small_negatives(Matrix m) {
  for (Index i = 0; i < m.size(); ++i) {
    if (m.data()[i] < 0.0 && m.data()[i] >= -kNumericalEps) m.data()[i] = 0.0;
  }
  return m;
}

// Permutation matrix P with P·v = v sorted non-increasingly.
inline Matrix sorting_permutation(const Vector& v) {
  const auto order = descending_order(v);
  Matrix p = Matrix::Zero(v.size(), v.size());
  for (Index i = 0; i < v.size(); ++i) p(i, order[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

}  // namespace detail

/// Classical channel stored as its n×m column-stochastic transition matrix;
/// column x is the output distribution p_x on input x.
class ClassicalChannel {
 public:
  explicit ClassicalChannel(Matrix transition) : n_(detail::clamp_small_negatives(std::move(transition))) {
    if (n_.rows() == 0 || n_.cols() == 0) throw DomainError("channel must have positive dimensions");
    if (!detail::is_column_stochastic(n_)) throw DomainError("transition matrix is not column stochastic");
  }

  static ClassicalChannel from_columns(const std::vector<ProbVector>& columns) {
    if (columns.empty()) throw DomainError("channel needs at least one column");
    Matrix m(columns.front().dim(), static_cast<Index>(columns.size()));
    for (std::size_t x = 0; x < columns.size(); ++x) {
      if (columns[x].dim() != m.rows()) throw DomainError("columns have different dimensions");
      m.col(static_cast<Index>(x)) = columns[x].entries();
    }
    return ClassicalChannel(std::move(m));
  }

  /// The channel R that outputs the uniform distribution on every input.
  static ClassicalChannel uniform(Index n, Index m) {
    if (n < 1 || m < 1) throw DomainError("channel must have positive dimensions");
    return ClassicalChannel(Matrix::Constant(n, m, 1.0 / static_cast<double>(n)));
  }

  static ClassicalChannel identity(Index n) { return ClassicalChannel(Matrix::Identity(n, n)); }

  Index output_dim() const { return n_.rows(); }
  Index input_dim() const { return n_.cols(); }
  const Matrix& transition() const { return n_; }

  ProbVector column(Index x) const { return ProbVector(n_.col(x)); }

  std::vector<ProbVector> columns() const {
    std::vector<ProbVector> out;
    out.reserve(static_cast<std::size_t>(input_dim()));
    for (Index x = 0; x < input_dim(); ++x) out.push_back(column(x));
    return out;
  }

  ClassicalChannel tensor(const ClassicalChannel& other) const { return ClassicalChannel(kron(n_, other.n_)); }

  bool operator==(const ClassicalChannel& other) const { return n_ == other.n_; }

 private:
  Matrix n_;
};

/// Superchannel in the pre/post standard form: pre-processing S = (s_{x|w})
/// of shape m×m' and post-processing channels E_{xw} of shape n'×n, stored
/// as post[x][w].
class ClassicalSuperchannel {
 public:
  ClassicalSuperchannel(Matrix pre, std::vector<std::vector<Matrix>> post)
      : pre_(detail::clamp_small_negatives(std::move(pre))), post_(std::move(post)) {
    if (!detail::is_column_stochastic(pre_)) throw DomainError("superchannel pre-processing is not column stochastic");
    if (static_cast<Index>(post_.size()) != pre_.rows()) {
      throw DomainError("superchannel post-processing must have one row per pre-processing output");
    }
    for (auto& row : post_) {
      if (static_cast<Index>(row.size()) != pre_.cols()) {
        throw DomainError("superchannel post-processing must have one entry per pre-processing input");
      }
      for (auto& e : row) {
        e = detail::clamp_small_negatives(std::move(e));
        if (!detail::is_column_stochastic(e)) throw DomainError("post-processing channel is not column stochastic");
        if (e.rows() != post_[0][0].rows() || e.cols() != post_[0][0].cols()) {
          throw DomainError("post-processing channels have inconsistent shapes");
        }
      }
    }
  }

  /// S = I and every E_{xw} = I.
  static ClassicalSuperchannel identity(Index m, Index n) {
    std::vector<std::vector<Matrix>> post(static_cast<std::size_t>(m),
                                          std::vector<Matrix>(static_cast<std::size_t>(m), Matrix::Identity(n, n)));
    return ClassicalSuperchannel(Matrix::Identity(m, m), std::move(post));
  }

  /// Every E_{xw} outputs the uniform distribution on n' symbols.
  static ClassicalSuperchannel replace_by_uniform(Matrix pre, Index n, Index n_out) {
    const auto m = static_cast<std::size_t>(pre.rows());
    const auto mp = static_cast<std::size_t>(pre.cols());
    std::vector<std::vector<Matrix>> post(
        m, std::vector<Matrix>(mp, Matrix::Constant(n_out, n, 1.0 / static_cast<double>(n_out))));
    return ClassicalSuperchannel(std::move(pre), std::move(post));
  }

  const Matrix& pre() const { return pre_; }
  const Matrix& post(Index x, Index w) const {
    return post_[static_cast<std::size_t>(x)][static_cast<std::size_t>(w)];
  }
  Index input_channel_inputs() const { return pre_.rows(); }    // m
  Index output_channel_inputs() const { return pre_.cols(); }   // m'
  Index input_channel_outputs() const { return post_[0][0].cols(); }  // n
  Index output_channel_outputs() const { return post_[0][0].rows(); } // n'

 private:
  Matrix pre_;
  std::vector<std::vector<Matrix>> post_;
};

enum class Relation { Holds, Fails };

/// Evidence for a channel-majorization verdict: the stochastic matrix S of
/// the convex-combination characterization when it holds, or a
/// non-increasing separating vector when it fails.
struct MajorizationCertificate {
  Relation relation = Relation::Fails;
  std::optional<Matrix> S;
  std::optional<ProbVector> separating_s;
  std::optional<Index> failing_column;

  bool holds() const { return relation == Relation::Holds; }
};

/// Zero rows appended until the output dimension reaches n_target.
inline ClassicalChannel embed_output(const ClassicalChannel& N, Index n_target) {
  if (n_target < N.output_dim()) {
    throw DomainError("embed_output: target dimension " + std::to_string(n_target) + " below output dimension " +
                      std::to_string(N.output_dim()));
  }
  Matrix m = Matrix::Zero(n_target, N.input_dim());
  m.topRows(N.output_dim()) = N.transition();
  return ClassicalChannel(std::move(m));
}

namespace detail {

// LP for "some convex combination of the (sorted) columns majorizes q":
//   -L N s ≤ -L q + tol,   1ᵀ s ≤ 1,   s ≥ 0.
inline lp::FeasibilityProblem mixture_problem(const Matrix& sorted_columns, const Vector& q_sorted, double tol) {
  const Index n = sorted_columns.rows();
  const Index m = sorted_columns.cols();
  const Matrix lower = Matrix::Ones(n, n).triangularView<Eigen::Lower>();
  lp::FeasibilityProblem prob;
  prob.A = Matrix::Zero(n + 1, m);
  prob.A.topRows(n) = -lower * sorted_columns;
  prob.A.row(n).setOnes();
  prob.b = Vector::Zero(n + 1);
  prob.b.head(n) = -lower * q_sorted + Vector::Constant(n, tol);
  prob.b(n) = 1.0;
  prob.sense.assign(static_cast<std::size_t>(n + 1), lp::Sense::LessEqual);
  return prob;
}

inline Matrix sorted_columns(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Index x = 0; x < m.cols(); ++x) out.col(x) = sorted_descending(m.col(x));
  return out;
}

// Strictly greater in lexicographic Ky-Fan order, with the comparison
// tolerance applied at each level.
inline bool lex_greater(const Vector& a, const Vector& b, double tol) {
  const Vector fa = ky_fan_profile(a);
  const Vector fb = ky_fan_profile(b);
  for (Index k = 0; k < fa.size(); ++k) {
    if (fa(k) > fb(k) + tol) return true;
    if (fa(k) < fb(k) - tol) return false;
  }
  return false;
}

inline bool mixture_majorizes(const Matrix& sorted_cols, const Vector& q) {
  return lp::solve_feasibility(mixture_problem(sorted_cols, sorted_descending(q), comparison_tolerance())).feasible();
}

}  // namespace detail

/// Canonical representative of N's equivalence class: columns sorted
/// non-increasingly, ordered decreasing-lexicographically, and every column
/// majorized by a mixture of the remaining ones removed (scanning last to
/// first, one removal per pass, until nothing changes).
inline ClassicalChannel standard_form(const ClassicalChannel& N) {
  const double tol = comparison_tolerance();
  std::vector<Vector> cols;
  for (Index x = 0; x < N.input_dim(); ++x) cols.push_back(sorted_descending(N.transition().col(x)));

  // Stable insertion sort; the tolerant comparison is not a strict weak order.
  for (std::size_t i = 1; i < cols.size(); ++i) {
    for (std::size_t j = i; j > 0 && detail::lex_greater(cols[j], cols[j - 1], tol); --j) {
      std::swap(cols[j], cols[j - 1]);
    }
  }

  bool removed = true;
  while (removed && cols.size() > 1) {
    removed = false;
    for (std::size_t c = cols.size(); c-- > 0;) {
      Matrix others(N.output_dim(), static_cast<Index>(cols.size() - 1));
      Index k = 0;
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (j != c) others.col(k++) = cols[j];
      }
      if (detail::mixture_majorizes(others, cols[c])) {
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(c));
        removed = true;
        break;
      }
    }
  }

  Matrix out(N.output_dim(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = cols[j];
  return ClassicalChannel(std::move(out));
}

/// Decides N ≻ M by one LP per column of M over the sorted columns of N.
/// A feasible column yields the corresponding column of S; the first
/// infeasible one yields the separating vector Lᵀt (normalized) read off
/// its Farkas certificate (t, λ).
inline MajorizationCertificate channel_majorizes(const ClassicalChannel& N, const ClassicalChannel& M) {
  if (N.output_dim() != M.output_dim()) {
    throw DomainError("channel_majorizes requires equal output dimensions (pad with embed_output)");
  }
  const Index n = N.output_dim();
  const Index m = N.input_dim();
  const Matrix cols = detail::sorted_columns(N.transition());
  const double tol = comparison_tolerance();

  MajorizationCertificate cert;
  Matrix S(m, M.input_dim());
  for (Index w = 0; w < M.input_dim(); ++w) {
    const auto prob = detail::mixture_problem(cols, sorted_descending(M.transition().col(w)), tol);
    const auto res = lp::solve_feasibility(prob);
    if (res.feasible()) {
      Vector s = res.witness->cwiseMax(0.0);
      const double total = s.sum();
      if (!(total > 0.0)) throw SolverError("mixture witness has zero mass");
      S.col(w) = s / total;
      continue;
    }
    const Vector& y = *res.farkas_certificate;
    Vector sep(n);
    double acc = 0.0;
    for (Index j = n - 1; j >= 0; --j) {
      acc += std::max(0.0, y(j));
      sep(j) = acc;
    }
    const double total = sep.sum();
    if (!(total > 0.0)) throw SolverError("Farkas certificate has an empty separating part");
    cert.relation = Relation::Fails;
    cert.separating_s = ProbVector(sep / total);
    cert.failing_column = w;
    return cert;
  }
  cert.relation = Relation::Holds;
  cert.S = std::move(S);
  return cert;
}

/// Output column w equals Σ_x s_{x|w} E_{xw} p_x.
inline ClassicalChannel apply_superchannel(const ClassicalSuperchannel& T, const ClassicalChannel& N) {
  if (T.input_channel_inputs() != N.input_dim() || T.input_channel_outputs() != N.output_dim()) {
    throw DomainError("superchannel and channel dimensions are incompatible");
  }
  Matrix out = Matrix::Zero(T.output_channel_outputs(), T.output_channel_inputs());
  for (Index w = 0; w < T.output_channel_inputs(); ++w) {
    for (Index x = 0; x < T.input_channel_inputs(); ++x) {
      const double s = T.pre()(x, w);
      if (s != 0.0) out.col(w) += s * (T.post(x, w) * N.transition().col(x));
    }
  }
  return ClassicalChannel(std::move(out));
}

/// (T ⊗ id_Z) applied to a channel X·Z0 → Y·Z1. Inputs are indexed
/// x·|Z0| + z0 and outputs y·|Z1| + z1.
inline ClassicalChannel apply_superchannel_extended(const ClassicalSuperchannel& T, const ClassicalChannel& N,
                                                    Index z_in, Index z_out) {
  if (z_in < 1 || z_out < 1 || N.input_dim() != T.input_channel_inputs() * z_in ||
      N.output_dim() != T.input_channel_outputs() * z_out) {
    throw DomainError("extended channel dimensions do not match the superchannel");
  }
  const Matrix id_z = Matrix::Identity(z_out, z_out);
  Matrix out = Matrix::Zero(T.output_channel_outputs() * z_out, T.output_channel_inputs() * z_in);
  for (Index w = 0; w < T.output_channel_inputs(); ++w) {
    for (Index x = 0; x < T.input_channel_inputs(); ++x) {
      const double s = T.pre()(x, w);
      if (s == 0.0) continue;
      const Matrix e = kron(T.post(x, w), id_z);
      for (Index z = 0; z < z_in; ++z) out.col(w * z_in + z) += s * (e * N.transition().col(x * z_in + z));
    }
  }
  return ClassicalChannel(std::move(out));
}

/// Marginally uniform with respect to Y for a channel X → Y·Z (outputs
/// indexed y·|Z| + z): every output column factors as u^Y ⊗ (its Z-marginal).
inline bool is_marginally_uniform(const ClassicalChannel& N, Index dim_y, double tol = 1e-8) {
  if (dim_y < 1 || N.output_dim() % dim_y != 0) throw DomainError("output dimension is not divisible by |Y|");
  const Index dim_z = N.output_dim() / dim_y;
  for (Index c = 0; c < N.input_dim(); ++c) {
    for (Index z = 0; z < dim_z; ++z) {
      double marginal = 0.0;
      for (Index y = 0; y < dim_y; ++y) marginal += N.transition()(y * dim_z + z, c);
      for (Index y = 0; y < dim_y; ++y) {
        if (std::abs(N.transition()(y * dim_z + z, c) - marginal / static_cast<double>(dim_y)) > tol) return false;
      }
    }
  }
  return true;
}

/// Superchannel realizing N → M from a holds-certificate: pre = S and
/// E_{xw} = D_w·P_x, where P_x sorts p_x and D_w is the transfer matrix from
/// Σ_x s_{x|w} p_x↓ to q_w.
inline ClassicalSuperchannel realize_mixing(const ClassicalChannel& N, const ClassicalChannel& M,
                                            const MajorizationCertificate& cert) {
  if (!cert.holds() || !cert.S) throw PreconditionError("realize_mixing needs a holds-certificate");
  const Matrix& S = *cert.S;
  if (S.rows() != N.input_dim() || S.cols() != M.input_dim() || N.output_dim() != M.output_dim()) {
    throw PreconditionError("certificate shape does not match the channels");
  }
  if (!detail::is_column_stochastic(S)) throw PreconditionError("certificate matrix is not stochastic");
  const Matrix sorted = detail::sorted_columns(N.transition());
  std::vector<Matrix> sorters;
  for (Index x = 0; x < N.input_dim(); ++x) sorters.push_back(detail::sorting_permutation(N.transition().col(x)));

  std::vector<std::vector<Matrix>> post(static_cast<std::size_t>(N.input_dim()),
                                        std::vector<Matrix>(static_cast<std::size_t>(M.input_dim())));
  for (Index w = 0; w < M.input_dim(); ++w) {
    const Vector mixture = sorted * S.col(w);
    DoublyStochasticMatrix d = [&] {
      try {
        return transfer_matrix(ProbVector(mixture / mixture.sum()), M.column(w));
      } catch (const PreconditionError&) {
        throw PreconditionError("certificate column " + std::to_string(w) + " does not witness majorization");
      }
    }();
    for (Index x = 0; x < N.input_dim(); ++x) {
      post[static_cast<std::size_t>(x)][static_cast<std::size_t>(w)] =
          d.matrix() * sorters[static_cast<std::size_t>(x)];
    }
  }
  ClassicalSuperchannel theta(S, std::move(post));
  const Matrix produced = apply_superchannel(theta, N).transition();
  if ((produced - M.transition()).cwiseAbs().maxCoeff() > 1e-7) {
    throw InternalError("realized superchannel does not reproduce the target channel");
  }
  return theta;
}

/// Every post-processing channel that is actually reached (s_{x|w} > 1e-12)
/// is doubly stochastic.
inline bool is_mixing_superchannel(const ClassicalSuperchannel& T) {
  for (Index x = 0; x < T.input_channel_inputs(); ++x) {
    for (Index w = 0; w < T.output_channel_inputs(); ++w) {
      if (T.pre()(x, w) <= 1e-12) continue;
      if (!DoublyStochasticMatrix::is_doubly_stochastic(T.post(x, w))) return false;
    }
  }
  return true;
}

/// Θ[R] = R' for the uniform channels of the matching shapes.
inline bool is_uniformity_preserving(const ClassicalSuperchannel& T) {
  const auto out = apply_superchannel(T, ClassicalChannel::uniform(T.input_channel_outputs(), T.input_channel_inputs()));
  const double target = 1.0 / static_cast<double>(T.output_channel_outputs());
  return ((out.transition().array() - target).abs() <= kNormalizationTol).all();
}

/// Closed-form decision when N has exactly two (standard-form) columns: for
/// each column q_w of M the interval [μ_w, ν_w] of admissible mixing
/// weights must meet [0, 1], and on levels where the two Ky-Fan profiles of
/// N coincide p_2 must already dominate q_w.
inline bool two_column_analytic(const ClassicalChannel& N, const ClassicalChannel& M) {
  if (N.input_dim() != 2) throw DomainError("two_column_analytic requires exactly two input symbols");
  if (N.output_dim() != M.output_dim()) throw DomainError("two_column_analytic requires equal output dimensions");
  const double tol = comparison_tolerance();
  const Vector f1 = ky_fan_profile(N.transition().col(0));
  const Vector f2 = ky_fan_profile(N.transition().col(1));
  const Index n = N.output_dim();
  constexpr double kLevelTie = 1e-12;

  for (Index w = 0; w < M.input_dim(); ++w) {
    const Vector fq = ky_fan_profile(M.transition().col(w));
    double mu = 0.0;
    double nu = 1.0;
    bool has_plus = false;
    bool has_minus = false;
    for (Index k = 0; k < n; ++k) {
      const double diff = f1(k) - f2(k);
      if (diff > kLevelTie) {
        const double r = (fq(k) - tol - f2(k)) / diff;
        mu = has_plus ? std::max(mu, r) : r;
        has_plus = true;
      } else if (diff < -kLevelTie) {
        const double r = (f2(k) - fq(k) + tol) / (f2(k) - f1(k));
        nu = has_minus ? std::min(nu, r) : r;
        has_minus = true;
      } else if (f2(k) < fq(k) - tol) {
        return false;
      }
    }
    if (!(nu >= mu && mu <= 1.0 && nu >= 0.0)) return false;
  }
  return true;
}

/// p ≻ M iff p majorizes the optimal upper bound of M's columns.
inline bool single_column_analytic(const ProbVector& p, const ClassicalChannel& M) {
  const Index n = std::max(p.dim(), M.output_dim());
  const auto cols = embed_output(M, n).columns();
  return majorizes_vector(p.padded(n), optimal_upper_bound(cols));
}

struct ConditionalBridge {
  bool holds = false;
  std::optional<ProbVector> p;  // over the standard-form inputs of N
  std::optional<ProbVector> q;  // uniform over the standard-form inputs of M
  std::optional<Matrix> S;      // r̃_{x|w} between the standard forms
};

/// Builds the conditional-majorization data from a channel-majorization
/// witness between the standard forms: q uniform and p_x = Σ_w r̃_{x|w} q_w.
inline ConditionalBridge conditional_majorization_bridge(const ClassicalChannel& N, const ClassicalChannel& M) {
  if (N.output_dim() != M.output_dim()) throw DomainError("conditional bridge requires equal output dimensions");
  const ClassicalChannel n_sf = standard_form(N);
  const ClassicalChannel m_sf = standard_form(M);
  const auto cert = channel_majorizes(n_sf, m_sf);
  ConditionalBridge out;
  if (!cert.holds()) return out;
  const ProbVector q = ProbVector::uniform(m_sf.input_dim());
  out.holds = true;
  out.p = ProbVector(*cert.S * q.entries());
  out.q = q;
  out.S = cert.S;
  return out;
}

/// Checks Σ_x s_{w|x} p_x·p_x ≻ q_w·q_w for every w, where
/// s_{w|x} = r̃_{x|w} q_w / p_x and N, M are the standard forms the bridge
/// was built on. Vectors here are sub-normalized, so Ky-Fan profiles are
/// compared directly.
inline bool verify_conditional_bridge(const ClassicalChannel& n_sf, const ClassicalChannel& m_sf,
                                      const ConditionalBridge& bridge) {
  if (!bridge.holds) return false;
  const Matrix& r = *bridge.S;
  const auto& p = *bridge.p;
  const auto& q = *bridge.q;
  const Matrix sorted = detail::sorted_columns(n_sf.transition());
  for (Index w = 0; w < m_sf.input_dim(); ++w) {
    Vector lhs = Vector::Zero(n_sf.output_dim());
    for (Index x = 0; x < n_sf.input_dim(); ++x) {
      if (p[x] <= 0.0) continue;
      const double s_wx = r(x, w) * q[w] / p[x];
      lhs += s_wx * p[x] * sorted.col(x);
    }
    const Vector rhs = q[w] * m_sf.transition().col(w);
    if (!detail::majorizes_raw(lhs, rhs, comparison_tolerance())) return false;
  }
  return true;
}

}  // namespace chanmaj
