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

#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "chanmaj/classical.hpp"
#include "chanmaj/errors.hpp"
#include "chanmaj/linalg.hpp"
#include "chanmaj/majorization.hpp"
#include "chanmaj/tolerance.hpp"

namespace chanmaj {

/// Entropy of probability vectors, in bits.
class EntropyFunction {
 public:
  enum class Kind { Shannon, Renyi, Min };

  static EntropyFunction shannon() { return EntropyFunction(Kind::Shannon, 1.0); }
  static EntropyFunction min() { return EntropyFunction(Kind::Min, INFINITY); }
  static EntropyFunction renyi(double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0) throw DomainError("Renyi order must be finite and non-negative");
    if (alpha == 1.0) throw DomainError("Renyi order 1 is the Shannon entropy; use the shannon kind");
    return EntropyFunction(Kind::Renyi, alpha);
  }

  /// "shannon", "min" or "renyi:<alpha>".
  static EntropyFunction parse(std::string_view name) {
    if (name == "shannon") return shannon();
    if (name == "min") return min();
    constexpr std::string_view prefix = "renyi:";
    if (name.substr(0, prefix.size()) == prefix) {
      const auto tail = name.substr(prefix.size());
      double alpha = 0.0;
      const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), alpha);
      if (ec != std::errc{} || ptr != tail.data() + tail.size()) {
        throw DomainError("cannot parse Renyi order '" + std::string(tail) + "'");
      }
      return renyi(alpha);
    }
    throw DomainError("unknown entropy '" + std::string(name) + "' (expected shannon, min or renyi:<alpha>)");
  }

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }

 private:
  EntropyFunction(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  Kind kind_;
  double alpha_;
};

namespace detail {

inline double entropy_bits(const EntropyFunction& h, const Vector& p) {
  switch (h.kind()) {
    case EntropyFunction::Kind::Shannon: {
      double s = 0.0;
      for (Index i = 0; i < p.size(); ++i) {
        if (p(i) > 0.0) s -= p(i) * std::log2(p(i));
      }
      return std::max(0.0, s);
    }
    case EntropyFunction::Kind::Min:
      return std::max(0.0, -std::log2(p.maxCoeff()));
    case EntropyFunction::Kind::Renyi: {
      const double a = h.alpha();
      double s = 0.0;
      for (Index i = 0; i < p.size(); ++i) {
        if (a == 0.0) {
          if (p(i) > kNumericalEps) s += 1.0;
        } else if (p(i) > 0.0) {
          s += std::pow(p(i), a);
        }
      }
      return std::max(0.0, std::log2(s) / (1.0 - a));
    }
  }
  return 0.0;
}

}  // namespace detail

inline double state_entropy(const EntropyFunction& h, const ProbVector& p) {
  return detail::entropy_bits(h, p.entries());
}

/// Largest entropy consistent with channel majorization: the least output
/// entropy over inputs.
inline double max_extension(const EntropyFunction& h, const ClassicalChannel& N) {
  double best = INFINITY;
  for (Index x = 0; x < N.input_dim(); ++x) best = std::min(best, detail::entropy_bits(h, N.transition().col(x)));
  return best;
}

/// Smallest entropy consistent with channel majorization: the entropy of the
/// optimal upper bound of the output columns.
inline double min_extension(const EntropyFunction& h, const ClassicalChannel& N) {
  return state_entropy(h, optimal_upper_bound(N.columns()));
}

inline constexpr double kMaxTensorOutput = 1e6;

/// (1/k)·min_extension(N^{⊗k}) for k = 1..k_max. Columns of N^{⊗k} that
/// share a type (multiset of inputs) are permutations of one another, so
/// only one representative per type enters the Ky-Fan envelope.
inline std::vector<double> regularized_min_extension(const EntropyFunction& h, const ClassicalChannel& N,
                                                     Index k_max) {
  if (k_max < 1) throw DomainError("k_max must be positive");
  const double size = std::pow(static_cast<double>(N.output_dim()), static_cast<double>(k_max));
  if (size > kMaxTensorOutput) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), size, std::chars_format::general, 6);
    throw ResourceError("resource: n^k_max = " + std::string(buf, res.ptr) + " exceeds 1e6");
  }
  const Index m = N.input_dim();
  std::vector<double> out;
  for (Index k = 1; k <= k_max; ++k) {
    Index dim = 1;
    for (Index i = 0; i < k; ++i) dim *= N.output_dim();
    Vector envelope = Vector::Zero(dim + 1);
    // Non-decreasing input sequences x_1 <= ... <= x_k, carrying the running product.
    std::function<void(Index, Index, const Vector&)> visit = [&](Index depth, Index start, const Vector& prefix) {
      if (depth == k) {
        envelope.tail(dim) = envelope.tail(dim).cwiseMax(ky_fan_profile(prefix));
        return;
      }
      for (Index x = start; x < m; ++x) visit(depth + 1, x, kron(prefix, N.transition().col(x)));
    };
    visit(0, 0, Vector::Ones(1));
    out.push_back(state_entropy(h, upper_bound_from_profile(envelope)) / static_cast<double>(k));
  }
  return out;
}

struct EntropyBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Every entropy of classical channels reducing to h on vectors lies in
/// [min_extension, max_extension].
inline EntropyBounds channel_entropy_bounds(const EntropyFunction& h, const ClassicalChannel& N) {
  return {min_extension(h, N), max_extension(h, N)};
}

}  // namespace chanmaj
