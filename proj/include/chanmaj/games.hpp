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
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "chanmaj/classical.hpp"
#include "chanmaj/errors.hpp"
#include "chanmaj/linalg.hpp"
#include "chanmaj/majorization.hpp"
#include "chanmaj/tolerance.hpp"

namespace chanmaj {

/// Joint distribution t_{kw} over the number of guesses k ∈ [n] (row) and
/// the signal w ∈ [ℓ] (column).
class TGame {
 public:
  explicit TGame(Matrix t) : t_(detail::clamp_small_negatives(std::move(t))) {
    if (t_.rows() == 0 || t_.cols() == 0) throw DomainError("game must have positive dimensions");
    if (!t_.allFinite() || (t_.array() < 0.0).any()) throw DomainError("game has negative or non-finite weights");
    if (std::abs(t_.sum() - 1.0) > kNormalizationTol) throw DomainError("game weights do not sum to one");
  }

  /// k guesses with certainty and no signal.
  static TGame deterministic(Index n, Index k) {
    if (k < 1 || k > n) throw DomainError("deterministic game needs 1 <= k <= n");
    Matrix t = Matrix::Zero(n, 1);
    t(k - 1, 0) = 1.0;
    return TGame(std::move(t));
  }

  /// Signal w = k revealed before the input is chosen.
  static TGame learn_before(const ProbVector& tk) {
    return TGame(Matrix(tk.entries().asDiagonal()));
  }

  /// No signal: the input is chosen before k is known.
  static TGame learn_after(const ProbVector& tk) { return TGame(Matrix(tk.entries())); }

  Index n() const { return t_.rows(); }
  Index signals() const { return t_.cols(); }
  const Matrix& t() const { return t_; }
  double signal_weight(Index w) const { return t_.col(w).sum(); }

 private:
  Matrix t_;
};

/// Best single-input chance of the true outcome landing among k guesses.
inline double pr_k(const ClassicalChannel& N, Index k) {
  if (k < 1 || k > N.output_dim()) throw DomainError("pr_k: k outside [1, n]");
  double best = 0.0;
  for (Index x = 0; x < N.input_dim(); ++x) best = std::max(best, ky_fan_profile(N.transition().col(x))(k - 1));
  return best;
}

namespace detail {

// Ky-Fan profiles of all columns, one column per input.
inline Matrix profiles(const ClassicalChannel& N) {
  Matrix f(N.output_dim(), N.input_dim());
  for (Index x = 0; x < N.input_dim(); ++x) f.col(x) = ky_fan_profile(N.transition().col(x));
  return f;
}

// Optimal input per signal: argmax_x Σ_k t_{kw} ||p_x||_(k), lowest index on ties.
inline std::vector<Index> best_inputs(const Matrix& profiles, const TGame& g) {
  std::vector<Index> best(static_cast<std::size_t>(g.signals()), 0);
  for (Index w = 0; w < g.signals(); ++w) {
    double top = -1.0;
    for (Index x = 0; x < profiles.cols(); ++x) {
      const double v = g.t().col(w).dot(profiles.col(x));
      if (v > top) {
        top = v;
        best[static_cast<std::size_t>(w)] = x;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Optimal winning probability Σ_w max_x Σ_k t_{kw} ||p_x||_(k).
inline double pr_t(const ClassicalChannel& N, const TGame& g) {
  if (g.n() != N.output_dim()) throw DomainError("game size does not match the channel output dimension");
  const Matrix f = detail::profiles(N);
  double total = 0.0;
  for (Index w = 0; w < g.signals(); ++w) {
    if (g.signal_weight(w) <= 0.0) continue;
    total += (g.t().col(w).transpose() * f).maxCoeff();
  }
  return total;
}

/// P_N(s) = max_x s·p_x↓.
inline double predictability(const ClassicalChannel& N, const Vector& s) {
  if (s.size() != N.output_dim()) throw DomainError("predictability: vector size mismatch");
  double best = -INFINITY;
  for (Index x = 0; x < N.input_dim(); ++x) best = std::max(best, s.dot(sorted_descending(N.transition().col(x))));
  return best;
}

/// Calls visit(s) for every s ∈ Prob↓(n) whose entries are multiples of
/// 1/grid.
inline void for_each_descending_grid_point(Index n, Index grid, const std::function<void(const Vector&)>& visit) {
  if (n < 1 || grid < 1) throw DomainError("grid enumeration needs positive n and grid");
  std::vector<Index> parts(static_cast<std::size_t>(n), 0);
  Vector s(n);
  // Fills parts[i..] with a non-increasing sequence bounded by cap summing to remaining.
  std::function<void(Index, Index, Index)> rec = [&](Index i, Index remaining, Index cap) {
    if (i == n - 1) {
      if (remaining > cap) return;
      parts[static_cast<std::size_t>(i)] = remaining;
      for (Index j = 0; j < n; ++j) s(j) = static_cast<double>(parts[static_cast<std::size_t>(j)]) / static_cast<double>(grid);
      visit(s);
      return;
    }
    const Index slots = n - i;
    for (Index v = std::min(cap, remaining); v >= 0; --v) {
      if (v * slots < remaining) break;
      parts[static_cast<std::size_t>(i)] = v;
      rec(i + 1, remaining - v, v);
    }
  };
  rec(0, grid, grid);
}

/// Predictability comparison on the grid of non-increasing vectors with
/// denominator `grid` (grid = 20 is a 0.05 step).
inline bool operational_majorizes(const ClassicalChannel& N, const ClassicalChannel& M, Index grid) {
  if (N.output_dim() != M.output_dim()) throw DomainError("operational_majorizes requires equal output dimensions");
  const double tol = comparison_tolerance();
  const Matrix fn = detail::sorted_columns(N.transition());
  const Matrix fm = detail::sorted_columns(M.transition());
  bool ok = true;
  for_each_descending_grid_point(N.output_dim(), grid, [&](const Vector& s) {
    if (!ok) return;
    const double pn = (s.transpose() * fn).maxCoeff();
    const double pm = (s.transpose() * fm).maxCoeff();
    if (pn < pm - tol) ok = false;
  });
  return ok;
}

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline Index sample_index(std::mt19937_64& rng, const std::vector<double>& cumulative) {
  const double u = unit_interval(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<Index>(it - cumulative.begin());
  return std::min(idx, static_cast<Index>(cumulative.size()) - 1);
}

inline std::vector<double> cumulative(const Vector& weights) {
  std::vector<double> c(static_cast<std::size_t>(weights.size()));
  double acc = 0.0;
  for (Index i = 0; i < weights.size(); ++i) c[static_cast<std::size_t>(i)] = acc += weights(i);
  return c;
}

// Shard RNG: mt19937_64 seeded through seed_seq over (seed halves, shard).
inline std::mt19937_64 shard_rng(std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

/// Monte-Carlo play of the t-game with the optimal strategy. Rounds are
/// split into `workers` contiguous shards, shard i drawing from its own
/// stream; the result depends only on (seed, rounds, workers).
inline double simulate_game(const ClassicalChannel& N, const TGame& g, std::uint64_t rounds, std::uint64_t seed,
                            unsigned workers = 1) {
  if (rounds < 1) throw DomainError("simulate_game needs at least one round");
  if (g.n() != N.output_dim()) throw DomainError("game size does not match the channel output dimension");
  if (workers < 1) workers = 1;
  const Index n = N.output_dim();
  const Index signals = g.signals();

  const Matrix f = detail::profiles(N);
  const auto best = detail::best_inputs(f, g);
  // Joint (k, w) draw with index w·n + k.
  Vector joint(n * signals);
  for (Index w = 0; w < signals; ++w) joint.segment(w * n, n) = g.t().col(w);
  const auto joint_cdf = detail::cumulative(joint);

  // rank[x][y] = position of outcome y among p_x sorted non-increasingly.
  std::vector<std::vector<Index>> rank(static_cast<std::size_t>(N.input_dim()));
  std::vector<std::vector<double>> outcome_cdf(static_cast<std::size_t>(N.input_dim()));
  for (Index x = 0; x < N.input_dim(); ++x) {
    const auto order = descending_order(N.transition().col(x));
    auto& r = rank[static_cast<std::size_t>(x)];
    r.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) r[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    outcome_cdf[static_cast<std::size_t>(x)] = detail::cumulative(N.transition().col(x));
  }

  std::vector<std::uint64_t> wins(workers, 0);
  auto play = [&](unsigned shard, std::uint64_t count) {
    auto rng = detail::shard_rng(seed, shard);
    std::uint64_t local = 0;
    for (std::uint64_t r = 0; r < count; ++r) {
      const Index kw = detail::sample_index(rng, joint_cdf);
      const Index w = kw / n;
      const Index k = kw % n + 1;
      const Index x = best[static_cast<std::size_t>(w)];
      const Index y = detail::sample_index(rng, outcome_cdf[static_cast<std::size_t>(x)]);
      if (rank[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] < k) ++local;
    }
    wins[shard] = local;
  };

  const std::uint64_t base = rounds / workers;
  const std::uint64_t extra = rounds % workers;
  if (workers == 1) {
    play(0, rounds);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(play, i, base + (i < extra ? 1 : 0));
    for (auto& t : pool) t.join();
  }
  std::uint64_t total = 0;
  for (auto v : wins) total += v;
  return static_cast<double>(total) / static_cast<double>(rounds);
}

}  // namespace chanmaj
