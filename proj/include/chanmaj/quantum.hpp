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
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "chanmaj/classical.hpp"
#include "chanmaj/errors.hpp"
#include "chanmaj/linalg.hpp"

namespace chanmaj {

//=========================================================================
// Spectral kernel
//=========================================================================

namespace detail {

struct SymmetricEigen {
  Vector values;  // unsorted, aligned with the columns of vectors
  Matrix vectors;
};

// Cyclic Jacobi sweeps on a real symmetric matrix.
inline SymmetricEigen jacobi_eigen(Matrix a, bool want_vectors) {
  const Index n = a.rows();
  Matrix v = want_vectors ? Matrix::Identity(n, n) : Matrix();
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        if (want_vectors) {
          for (Index k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  return {a.diagonal(), std::move(v)};
}

// [[Re, -Im], [Im, Re]]: each eigenvalue of H appears twice.
inline Matrix real_embedding(const ComplexMatrix& h) {
  const Index d = h.rows();
  Matrix s(2 * d, 2 * d);
  s.topLeftCorner(d, d) = h.real();
  s.topRightCorner(d, d) = -h.imag();
  s.bottomLeftCorner(d, d) = h.imag();
  s.bottomRightCorner(d, d) = h.real();
  return s;
}

inline double hermiticity_defect(const ComplexMatrix& h) { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }

inline void require_hermitian(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DomainError("matrix is not square");
  if (!h.allFinite()) throw DomainError("matrix has non-finite entries");
  if (h.rows() > 256) throw ResourceError("resource: Hermitian dimension exceeds 256");
  if (hermiticity_defect(h) > 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw DomainError("matrix is not Hermitian");
  }
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix in ascending order, from cyclic Jacobi
/// on its real-symmetric embedding.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  detail::require_hermitian(h);
  const Index d = h.rows();
  if (d == 0) return {};
  Vector ev = detail::jacobi_eigen(detail::real_embedding(h), false).values;
  std::sort(ev.data(), ev.data() + ev.size());
  std::vector<double> out(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = 0.5 * (ev(2 * i) + ev(2 * i + 1));
  return out;
}

inline double max_eigenvalue(const ComplexMatrix& h) { return hermitian_eigenvalues(h).back(); }

/// f(H) for Hermitian H through f(embed(H)) = embed(f(H)).
inline ComplexMatrix hermitian_function(const ComplexMatrix& h, const std::function<double(double)>& f) {
  detail::require_hermitian(h);
  const Index d = h.rows();
  const auto eig = detail::jacobi_eigen(detail::real_embedding(h), true);
  Vector fv(eig.values.size());
  for (Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  const Matrix fs = eig.vectors * fv.asDiagonal() * eig.vectors.transpose();
  ComplexMatrix out(d, d);
  out.real() = fs.topLeftCorner(d, d);
  out.imag() = fs.bottomLeftCorner(d, d);
  return out;
}

//=========================================================================
// Choi calculus
//=========================================================================

/// J = Σ_{x,y} |x⟩⟨y| ⊗ N(|x⟩⟨y|), indexed (x, b) ↦ x·|B| + b.
inline ComplexMatrix choi_matrix(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw DomainError("choi_matrix needs at least one Kraus operator");
  const Index out = kraus.front().rows();
  const Index in = kraus.front().cols();
  if (out == 0 || in == 0) throw DomainError("Kraus operators must be non-empty");
  ComplexMatrix j = ComplexMatrix::Zero(in * out, in * out);
  for (const auto& k : kraus) {
    if (k.rows() != out || k.cols() != in) throw DomainError("Kraus operators have inconsistent shapes");
    ComplexVector v(in * out);
    for (Index x = 0; x < in; ++x) v.segment(x * out, out) = k.col(x);
    j += v * v.adjoint();
  }
  return j;
}

/// Traces out the second factor of an operator on d1 ⊗ d2.
inline ComplexMatrix partial_trace_second(const ComplexMatrix& m, Index d1, Index d2) {
  ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
  for (Index i = 0; i < d1; ++i) {
    for (Index j = 0; j < d1; ++j) out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
  }
  return out;
}

/// Traces out the first factor of an operator on d1 ⊗ d2.
inline ComplexMatrix partial_trace_first(const ComplexMatrix& m, Index d1, Index d2) {
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

/// Completely positive trace-preserving map A → B held as its (unnormalized)
/// Choi matrix, with the Kraus list kept when the channel was built from one.
class QuantumChannel {
 public:
  static QuantumChannel from_choi(ComplexMatrix choi, Index in_dim, Index out_dim) {
    return QuantumChannel(std::move(choi), in_dim, out_dim, std::nullopt);
  }

  static QuantumChannel from_kraus(std::vector<ComplexMatrix> kraus) {
    if (kraus.empty()) throw DomainError("channel needs at least one Kraus operator");
    const Index in = kraus.front().cols();
    const Index out = kraus.front().rows();
    ComplexMatrix gram = ComplexMatrix::Zero(in, in);
    for (const auto& k : kraus) {
      if (k.rows() != out || k.cols() != in) throw DomainError("Kraus operators have inconsistent shapes");
      gram += k.adjoint() * k;
    }
    if ((gram - ComplexMatrix::Identity(in, in)).cwiseAbs().maxCoeff() > 1e-9) {
      throw DomainError("Kraus operators are not trace preserving");
    }
    ComplexMatrix j = choi_matrix(kraus);
    return QuantumChannel(std::move(j), in, out, std::move(kraus));
  }

  static QuantumChannel identity(Index d) { return from_kraus({ComplexMatrix::Identity(d, d)}); }

  /// ρ ↦ V ρ V† for an isometry V (B×A).
  static QuantumChannel isometry(const ComplexMatrix& v) { return from_kraus({v}); }

  /// R^{A→B}: trace and replace by the maximally mixed state.
  static QuantumChannel uniform(Index in, Index out) {
    return from_choi(ComplexMatrix::Identity(in * out, in * out) / static_cast<double>(out), in, out);
  }

  /// Trace and replace by the fixed state ρ.
  static QuantumChannel replacement(Index in, const ComplexMatrix& rho) {
    return from_choi(kron(ComplexMatrix::Identity(in, in), rho), in, rho.rows());
  }

  /// Diagonal embedding of a classical channel: Kraus √p(y|x)|y⟩⟨x|.
  static QuantumChannel from_classical(const ClassicalChannel& n) {
    std::vector<ComplexMatrix> kraus;
    for (Index x = 0; x < n.input_dim(); ++x) {
      for (Index y = 0; y < n.output_dim(); ++y) {
        const double p = n.transition()(y, x);
        if (p <= 0.0) continue;
        ComplexMatrix k = ComplexMatrix::Zero(n.output_dim(), n.input_dim());
        k(y, x) = std::sqrt(p);
        kraus.push_back(std::move(k));
      }
    }
    return from_kraus(std::move(kraus));
  }

  Index in_dim() const { return in_; }
  Index out_dim() const { return out_; }
  const ComplexMatrix& choi() const { return choi_; }
  const std::optional<std::vector<ComplexMatrix>>& kraus() const { return kraus_; }

  /// N(|x⟩⟨y|).
  ComplexMatrix block(Index x, Index y) const { return choi_.block(x * out_, y * out_, out_, out_); }

  ComplexMatrix apply(const ComplexMatrix& rho) const {
    if (rho.rows() != in_ || rho.cols() != in_) throw DomainError("input operator has the wrong dimension");
    ComplexMatrix out = ComplexMatrix::Zero(out_, out_);
    for (Index x = 0; x < in_; ++x) {
      for (Index y = 0; y < in_; ++y) {
        if (rho(x, y) != Complex(0.0, 0.0)) out += rho(x, y) * block(x, y);
      }
    }
    return out;
  }

  QuantumChannel tensor(const QuantumChannel& other) const {
    if (kraus_ && other.kraus_) {
      std::vector<ComplexMatrix> ks;
      for (const auto& a : *kraus_) {
        for (const auto& b : *other.kraus_) ks.push_back(kron(a, b));
      }
      return from_kraus(std::move(ks));
    }
    const Index a1 = in_, b1 = out_, a2 = other.in_, b2 = other.out_;
    const Index dim = a1 * a2 * b1 * b2;
    ComplexMatrix j(dim, dim);
    auto idx = [&](Index x1, Index x2, Index y1, Index y2) { return ((x1 * a2 + x2) * b1 + y1) * b2 + y2; };
    for (Index x1 = 0; x1 < a1; ++x1)
      for (Index x2 = 0; x2 < a2; ++x2)
        for (Index y1 = 0; y1 < b1; ++y1)
          for (Index y2 = 0; y2 < b2; ++y2)
            for (Index u1 = 0; u1 < a1; ++u1)
              for (Index u2 = 0; u2 < a2; ++u2)
                for (Index v1 = 0; v1 < b1; ++v1)
                  for (Index v2 = 0; v2 < b2; ++v2)
                    j(idx(x1, x2, y1, y2), idx(u1, u2, v1, v2)) =
                        choi_(x1 * b1 + y1, u1 * b1 + v1) * other.choi_(x2 * b2 + y2, u2 * b2 + v2);
    return from_choi(std::move(j), a1 * a2, b1 * b2);
  }

 private:
  QuantumChannel(ComplexMatrix choi, Index in, Index out, std::optional<std::vector<ComplexMatrix>> kraus)
      : in_(in), out_(out), choi_(std::move(choi)), kraus_(std::move(kraus)) {
    if (in_ < 1 || out_ < 1) throw DomainError("channel dimensions must be positive");
    if (choi_.rows() != in_ * out_ || choi_.cols() != in_ * out_) {
      throw DomainError("Choi matrix size does not match |A||B|");
    }
    detail::require_hermitian(choi_);
    choi_ = 0.5 * (choi_ + choi_.adjoint()).eval();
    const double trace = choi_.trace().real();
    if (hermitian_eigenvalues(choi_).front() < -1e-9 * std::max(1.0, trace)) {
      throw DomainError("Choi matrix is not positive semidefinite (map is not completely positive)");
    }
    const ComplexMatrix marg = partial_trace_second(choi_, in_, out_);
    if ((marg - ComplexMatrix::Identity(in_, in_)).cwiseAbs().maxCoeff() > 1e-9) {
      throw DomainError("partial trace of the Choi matrix is not the identity (map is not trace preserving)");
    }
  }

  Index in_;
  Index out_;
  ComplexMatrix choi_;
  std::optional<std::vector<ComplexMatrix>> kraus_;
};

//=========================================================================
// Min-entropy
//=========================================================================

/// log|B| - D_max(N‖R) = -log2 λ_max(J_N).
inline double h_min_channel(const QuantumChannel& n) { return -std::log2(max_eigenvalue(n.choi())); }

namespace detail {

// Output of id_R ⊗ N on |ψ⟩⟨ψ| with |ψ⟩ = Σ A_{ra} |r⟩|a⟩.
inline ComplexMatrix apply_to_purification(const QuantumChannel& n, const ComplexMatrix& amp) {
  const Index dr = amp.rows();
  const Index db = n.out_dim();
  ComplexMatrix rho = ComplexMatrix::Zero(dr * db, dr * db);
  for (Index a = 0; a < n.in_dim(); ++a) {
    for (Index b = 0; b < n.in_dim(); ++b) {
      const ComplexMatrix outer = amp.col(a) * amp.col(b).adjoint();
      rho += kron(outer, n.block(a, b));
    }
  }
  return rho;
}

// D_max(N(ψ) ‖ ψ_R ⊗ I_B) in bits, inverse square root taken on the support of ψ_R.
inline double dmax_against_marginal(const QuantumChannel& n, const ComplexMatrix& amp) {
  const ComplexMatrix sigma = amp * amp.adjoint();
  const double top = std::max(max_eigenvalue(sigma), 1e-300);
  const ComplexMatrix inv_sqrt =
      hermitian_function(sigma, [top](double v) { return v > 1e-10 * top ? 1.0 / std::sqrt(v) : 0.0; });
  const ComplexMatrix w = kron(inv_sqrt, ComplexMatrix::Identity(n.out_dim(), n.out_dim()));
  ComplexMatrix x = w * apply_to_purification(n, amp) * w;
  x = 0.5 * (x + x.adjoint()).eval();
  return std::log2(max_eigenvalue(x));
}

}  // namespace detail

struct StateFormResult {
  double value = 0.0;          // min over ψ of H_min(B|R), in bits
  ComplexMatrix best_amplitudes;  // A with |ψ⟩ = Σ A_{ra}|r⟩|a⟩ at the optimum
};

struct StateFormOptions {
  int restarts = 20;
  int steps = 500;
  double step = 0.05;
  std::uint64_t seed = 0x5eed;
};

/// -max_ψ D_max(N(ψ)‖ψ_R⊗I) over pure states on R ⊗ A with R ≅ A, by
/// multi-start projected gradient ascent on the unit sphere of amplitude
/// matrices (finite-difference gradients). The maximally entangled state is
/// always one of the starts.
inline StateFormResult h_min_state_form(const QuantumChannel& n, const StateFormOptions& opts = {}) {
  const Index m = n.in_dim();
  if (m > 6) throw ResourceError("resource: h_min_state_form supports |A| <= 6");
  const Index params = 2 * m * m;
  auto unpack = [m](const Vector& z) {
    ComplexMatrix a(m, m);
    for (Index i = 0; i < m * m; ++i) a.data()[i] = Complex(z(2 * i), z(2 * i + 1));
    return a;
  };
  auto objective = [&](const Vector& z) { return detail::dmax_against_marginal(n, unpack(z)); };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  std::vector<Vector> starts;
  Vector phi = Vector::Zero(params);
  for (Index r = 0; r < m; ++r) phi(2 * (r + r * m)) = 1.0 / std::sqrt(static_cast<double>(m));
  starts.push_back(phi);
  for (int i = 0; i < opts.restarts; ++i) {
    Vector z(params);
    for (Index k = 0; k < params; ++k) z(k) = gauss(rng);
    starts.push_back(z.normalized());
  }

  double best = -INFINITY;
  Vector best_z = phi;
  for (Vector z : starts) {
    double f = objective(z);
    double step = opts.step;
    for (int it = 0; it < opts.steps && step > 1e-8; ++it) {
      Vector grad(params);
      constexpr double h = 1e-6;
      for (Index k = 0; k < params; ++k) {
        Vector zp = z, zm = z;
        zp(k) += h;
        zm(k) -= h;
        grad(k) = (objective(zp.normalized()) - objective(zm.normalized())) / (2.0 * h);
      }
      grad -= grad.dot(z) * z;  // tangent to the sphere
      if (grad.norm() < 1e-9) break;
      bool improved = false;
      while (step > 1e-8) {
        const Vector trial = (z + step * grad.normalized()).normalized();
        const double ft = objective(trial);
        if (ft > f) {
          z = trial;
          f = ft;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (f > best) {
      best = f;
      best_z = z;
    }
  }
  return {-best, unpack(best_z)};
}

//=========================================================================
// Uniformity and superchannels
//=========================================================================

namespace detail {

// Hermitian basis of operators on a d-dimensional system turned into density
// matrices: the maximally mixed state plus each generalized Gell-Mann matrix
// shifted by a multiple of the identity that keeps it positive.
inline std::vector<ComplexMatrix> density_basis(Index d) {
  std::vector<ComplexMatrix> out;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  out.push_back(id / static_cast<double>(d));
  auto shifted = [&](const ComplexMatrix& g) {
    // Generalized Gell-Mann matrices have spectral radius below √2.
    ComplexMatrix rho = id + 0.5 * g;
    return ComplexMatrix(rho / rho.trace());
  };
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      out.push_back(shifted(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(d, d);
      anti(j, k) = Complex(0.0, -1.0);
      anti(k, j) = Complex(0.0, 1.0);
      out.push_back(shifted(anti));
    }
  }
  for (Index l = 1; l < d; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Index j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    out.push_back(shifted(diag));
  }
  return out;
}

// Applies the channel given by `choi` (din → dout) to the first factor of an
// operator on din ⊗ rest.
inline ComplexMatrix apply_on_first(const ComplexMatrix& choi, Index din, Index dout, const ComplexMatrix& x,
                                    Index rest) {
  ComplexMatrix out = ComplexMatrix::Zero(dout * rest, dout * rest);
  for (Index a = 0; a < din; ++a) {
    for (Index b = 0; b < din; ++b) {
      const ComplexMatrix blk = x.block(a * rest, b * rest, rest, rest);
      if (blk.cwiseAbs().maxCoeff() == 0.0) continue;
      out += kron(ComplexMatrix(choi.block(a * dout, b * dout, dout, dout)), blk);
    }
  }
  return out;
}

// Applies the channel given by `choi` (din → dout) to the second factor of an
// operator on first ⊗ din.
inline ComplexMatrix apply_on_second(const ComplexMatrix& choi, Index first, Index din, Index dout,
                                     const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(first * dout, first * dout);
  for (Index r = 0; r < first; ++r) {
    for (Index s = 0; s < first; ++s) {
      const ComplexMatrix blk = x.block(r * din, s * din, din, din);
      ComplexMatrix img = ComplexMatrix::Zero(dout, dout);
      for (Index a = 0; a < din; ++a) {
        for (Index b = 0; b < din; ++b) {
          if (blk(a, b) != Complex(0.0, 0.0)) img += blk(a, b) * choi.block(a * dout, b * dout, dout, dout);
        }
      }
      out.block(r * dout, s * dout, dout, dout) = img;
    }
  }
  return out;
}

}  // namespace detail

/// E(τ ⊗ u^B) = u^{B'} for every state τ on R, where E : R⊗B → B'. Checked
/// on a spanning set of density matrices, which suffices by linearity.
inline bool is_conditionally_unital(const QuantumChannel& e, Index dim_r, Index dim_b, double tol = 1e-8) {
  if (dim_r < 1 || dim_b < 1 || e.in_dim() != dim_r * dim_b) {
    throw DomainError("is_conditionally_unital: channel input must be R⊗B");
  }
  const Index dout = e.out_dim();
  const ComplexMatrix u = ComplexMatrix::Identity(dim_b, dim_b) / static_cast<double>(dim_b);
  const ComplexMatrix u_out = ComplexMatrix::Identity(dout, dout) / static_cast<double>(dout);
  for (const auto& tau : detail::density_basis(dim_r)) {
    if ((e.apply(kron(tau, u)) - u_out).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

/// For N : A → B⊗C, J_N equals u^B inserted into Tr_B J_N.
inline bool is_marginally_uniform(const QuantumChannel& n, Index dim_b, double tol = 1e-8) {
  if (dim_b < 1 || n.out_dim() % dim_b != 0) throw DomainError("output dimension is not divisible by |B|");
  const Index da = n.in_dim();
  const Index dc = n.out_dim() / dim_b;
  const ComplexMatrix& j = n.choi();
  auto idx = [&](Index a, Index b, Index c) { return (a * dim_b + b) * dc + c; };
  for (Index a = 0; a < da; ++a)
    for (Index c = 0; c < dc; ++c)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index c2 = 0; c2 < dc; ++c2) {
          Complex reduced(0.0, 0.0);
          for (Index b = 0; b < dim_b; ++b) reduced += j(idx(a, b, c), idx(a2, b, c2));
          reduced /= static_cast<double>(dim_b);
          for (Index b = 0; b < dim_b; ++b) {
            for (Index b2 = 0; b2 < dim_b; ++b2) {
              const Complex expected = (b == b2) ? reduced : Complex(0.0, 0.0);
              if (std::abs(j(idx(a, b, c), idx(a2, b2, c2)) - expected) > tol) return false;
            }
          }
        }
  return true;
}

/// u^B ⊗ id^{A→C}: discards nothing, appends a maximally mixed B in front.
inline QuantumChannel uniform_tensor_identity(Index dim_b, Index dim_a) {
  std::vector<ComplexMatrix> kraus;
  for (Index b = 0; b < dim_b; ++b) {
    ComplexMatrix k = ComplexMatrix::Zero(dim_b * dim_a, dim_a);
    k.block(b * dim_a, 0, dim_a, dim_a) = ComplexMatrix::Identity(dim_a, dim_a) / std::sqrt(static_cast<double>(dim_b));
    kraus.push_back(std::move(k));
  }
  return QuantumChannel::from_kraus(std::move(kraus));
}

/// Θ[N] = E ∘ (id_R ⊗ N) ∘ V with V : A' → R⊗A an isometry and
/// E : R⊗B → B'.
struct QuantumSuperchannelPieces {
  ComplexMatrix V;  // (|R||A|) × |A'|
  Index dim_r = 1;
  Index dim_a = 1;
  QuantumChannel E;

  Index dim_a_prime() const { return V.cols(); }
  Index dim_b() const { return E.in_dim() / dim_r; }
  Index dim_b_prime() const { return E.out_dim(); }

  void validate() const {
    if (dim_r < 1 || dim_a < 1 || V.rows() != dim_r * dim_a) throw DomainError("V must map A' into R⊗A");
    if ((V.adjoint() * V - ComplexMatrix::Identity(V.cols(), V.cols())).cwiseAbs().maxCoeff() > 1e-9) {
      throw DomainError("V is not an isometry");
    }
    if (E.in_dim() % dim_r != 0) throw DomainError("E must act on R⊗B");
  }
};

/// (Θ ⊗ id_C)[N] for N : A → B⊗C; returns a channel A' → B'⊗C.
inline QuantumChannel apply_superchannel_q(const QuantumSuperchannelPieces& pieces, const QuantumChannel& n,
                                           Index dim_c = 1) {
  pieces.validate();
  const Index db = pieces.dim_b();
  if (n.in_dim() != pieces.dim_a || dim_c < 1 || n.out_dim() != db * dim_c) {
    throw DomainError("channel does not match the superchannel's A and B systems");
  }
  const Index dap = pieces.dim_a_prime();
  const Index dbo = pieces.E.out_dim();
  const Index out_dim = dbo * dim_c;
  ComplexMatrix j = ComplexMatrix::Zero(dap * out_dim, dap * out_dim);
  for (Index x = 0; x < dap; ++x) {
    for (Index y = 0; y < dap; ++y) {
      const ComplexMatrix in = pieces.V.col(x) * pieces.V.col(y).adjoint();  // on R⊗A
      const ComplexMatrix mid = detail::apply_on_second(n.choi(), pieces.dim_r, pieces.dim_a, n.out_dim(), in);
      const ComplexMatrix img = detail::apply_on_first(pieces.E.choi(), pieces.dim_r * db, dbo, mid, dim_c);
      j.block(x * out_dim, y * out_dim, out_dim, out_dim) = img;
    }
  }
  return QuantumChannel::from_choi(std::move(j), dap, out_dim);
}

/// Mixing iff E is conditionally unital. The equivalent single-channel test
/// (Θ applied to u^B ⊗ id must be marginally uniform) is evaluated as well;
/// a disagreement between the two raises InternalError.
inline bool is_mixing_superchannel_q(const QuantumSuperchannelPieces& pieces) {
  pieces.validate();
  const bool unital = is_conditionally_unital(pieces.E, pieces.dim_r, pieces.dim_b());
  const auto probe = uniform_tensor_identity(pieces.dim_b(), pieces.dim_a);
  const auto image = apply_superchannel_q(pieces, probe, pieces.dim_a);
  const bool marginal = is_marginally_uniform(image, pieces.dim_b_prime());
  if (unital != marginal) {
    throw InternalError("conditional unitality and marginal uniformity of Θ[u⊗id] disagree");
  }
  return unital;
}

/// Quantum realization of a classical superchannel: V|w⟩ = Σ_x √s_{x|w}
/// |x,w⟩_R|x⟩_A and E reads R in the computational basis before applying
/// the classical E_{xw}.
inline QuantumSuperchannelPieces embed_classical_superchannel(const ClassicalSuperchannel& t) {
  const Index m = t.input_channel_inputs();
  const Index mp = t.output_channel_inputs();
  const Index n = t.input_channel_outputs();
  const Index n_out = t.output_channel_outputs();
  const Index dr = m * mp;
  ComplexMatrix v = ComplexMatrix::Zero(dr * m, mp);
  for (Index w = 0; w < mp; ++w) {
    for (Index x = 0; x < m; ++x) v((x * mp + w) * m + x, w) = std::sqrt(t.pre()(x, w));
  }
  std::vector<ComplexMatrix> kraus;
  for (Index x = 0; x < m; ++x) {
    for (Index w = 0; w < mp; ++w) {
      const Matrix& e = t.post(x, w);
      for (Index y = 0; y < n; ++y) {
        for (Index yo = 0; yo < n_out; ++yo) {
          if (e(yo, y) <= 0.0) continue;
          ComplexMatrix k = ComplexMatrix::Zero(n_out, dr * n);
          k(yo, (x * mp + w) * n + y) = std::sqrt(e(yo, y));
          kraus.push_back(std::move(k));
        }
      }
    }
  }
  return {std::move(v), dr, m, QuantumChannel::from_kraus(std::move(kraus))};
}

//=========================================================================
// Isometry maximality
//=========================================================================

/// Measure-prepare superchannel sending the isometry channel V (A → B) to an
/// arbitrary channel M (C → D):
///
///   Θ[N] = Tr[Λ₁ J_N]·M + Tr[Λ₂ J_N]·(mn·R' − M)/(mn − 1),
///   Λ₁ = J_V/m²,  Λ₂ = (n/m)·J_R − J_V/m²,
///
/// with m = |A|, n = |B| and R' the uniform channel C → D. Requires
/// |A||B| ≥ |C||D| so that the second preparation is a channel.
class IsometryMaximalitySuperchannel {
 public:
  IsometryMaximalitySuperchannel(QuantumChannel v, QuantumChannel target)
      : v_(std::move(v)), target_(std::move(target)) {
    const Index m = v_.in_dim();
    const Index n = v_.out_dim();
    const double purity = (v_.choi() * v_.choi()).trace().real();
    if (std::abs(purity - static_cast<double>(m * m)) > 1e-9 * static_cast<double>(m * m)) {
      throw DomainError("first argument is not an isometry channel");
    }
    if (m * n < target_.in_dim() * target_.out_dim()) {
      throw DomainError("isometry maximality needs |A||B| >= |C||D|");
    }
    if (m * n < 2) throw DomainError("isometry maximality needs |A||B| >= 2");
    const double mn = static_cast<double>(m * n);
    const Index cd = target_.in_dim() * target_.out_dim();
    const ComplexMatrix j_uniform =
        ComplexMatrix::Identity(cd, cd) / static_cast<double>(target_.out_dim());
    complement_ = QuantumChannel::from_choi((mn * j_uniform - target_.choi()) / (mn - 1.0), target_.in_dim(),
                                           target_.out_dim());
    lambda_v_ = v_.choi() / static_cast<double>(m * m);
    lambda_r_ = ComplexMatrix::Identity(m * n, m * n) / static_cast<double>(m) - lambda_v_;
  }

  /// (Tr[Λ₁ J_N], Tr[Λ₂ J_N]) for N : A → B.
  std::pair<double, double> coefficients(const QuantumChannel& n) const {
    require_input(n, 1);
    return {(lambda_v_ * n.choi()).trace().real(), (lambda_r_ * n.choi()).trace().real()};
  }

  /// (Θ ⊗ id_E)[N] for N : A → B⊗E; the result maps C → D⊗E.
  QuantumChannel operator()(const QuantumChannel& n, Index ext = 1) const {
    require_input(n, ext);
    const Index ab = v_.in_dim() * v_.out_dim();
    ComplexMatrix w1 = ComplexMatrix::Zero(ext, ext);
    ComplexMatrix w2 = ComplexMatrix::Zero(ext, ext);
    for (Index e = 0; e < ext; ++e) {
      for (Index f = 0; f < ext; ++f) {
        Complex s1(0.0, 0.0), s2(0.0, 0.0);
        for (Index i = 0; i < ab; ++i) {
          for (Index k = 0; k < ab; ++k) {
            const Complex jn = n.choi()(k * ext + e, i * ext + f);
            s1 += lambda_v_(i, k) * jn;
            s2 += lambda_r_(i, k) * jn;
          }
        }
        w1(e, f) = s1;
        w2(e, f) = s2;
      }
    }
    ComplexMatrix j = kron(target_.choi(), w1) + kron(complement_.choi(), w2);
    return QuantumChannel::from_choi(std::move(j), target_.in_dim(), target_.out_dim() * ext);
  }

  const QuantumChannel& target() const { return target_; }

  /// The same map written as pre/post-processing: V|c⟩ = |c⟩ ⊗ |φ⟩ with φ
  /// the normalized maximally entangled state on A_ref ⊗ A (so R = C⊗A_ref),
  /// and E measures {mΛ₁, mΛ₂} on A_ref ⊗ B before applying M or its
  /// complement to the C register.
  QuantumSuperchannelPieces pieces() const {
    const Index m = v_.in_dim();
    const Index n = v_.out_dim();
    const Index dc = target_.in_dim();
    const Index dd = target_.out_dim();
    ComplexMatrix iso = ComplexMatrix::Zero(dc * m * m, dc);
    for (Index c = 0; c < dc; ++c) {
      for (Index a = 0; a < m; ++a) iso((c * m + a) * m + a, c) = 1.0 / std::sqrt(static_cast<double>(m));
    }
    // J_E[(c,ab,d), (c',a'b',d')] = M(|c⟩⟨c'|)_{dd'}·mΛ₁[a'b', ab] + (same with the complement and Λ₂).
    const Index ab = m * n;
    const Index in = dc * ab;
    ComplexMatrix j = ComplexMatrix::Zero(in * dd, in * dd);
    const double md = static_cast<double>(m);
    for (Index c = 0; c < dc; ++c)
      for (Index c2 = 0; c2 < dc; ++c2) {
        const ComplexMatrix b1 = target_.block(c, c2);
        const ComplexMatrix b2 = complement_.block(c, c2);
        for (Index i = 0; i < ab; ++i)
          for (Index i2 = 0; i2 < ab; ++i2) {
            const ComplexMatrix blk = md * lambda_v_(i2, i) * b1 + md * lambda_r_(i2, i) * b2;
            j.block((c * ab + i) * dd, (c2 * ab + i2) * dd, dd, dd) = blk;
          }
      }
    return {std::move(iso), dc * m, m, QuantumChannel::from_choi(std::move(j), in, dd)};
  }

 private:
  void require_input(const QuantumChannel& n, Index ext) const {
    if (ext < 1 || n.in_dim() != v_.in_dim() || n.out_dim() != v_.out_dim() * ext) {
      throw DomainError("input channel does not act on the isometry's systems");
    }
  }

  QuantumChannel v_;
  QuantumChannel target_;
  QuantumChannel complement_ = QuantumChannel::uniform(1, 1);
  ComplexMatrix lambda_v_;
  ComplexMatrix lambda_r_;
};

inline IsometryMaximalitySuperchannel isometry_maximality_superchannel(const QuantumChannel& v,
                                                                       const QuantumChannel& m) {
  return IsometryMaximalitySuperchannel(v, m);
}

}  // namespace chanmaj
