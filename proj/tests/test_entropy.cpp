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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "chanmaj/entropy.hpp"
#include "support/oracles.hpp"

namespace chanmaj {
namespace {

using testing::Rng;

Matrix mat(Index rows, Index cols, std::initializer_list<double> row_major) {
  Matrix m(rows, cols);
  auto it = row_major.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

std::vector<EntropyFunction> all_kinds() {
  return {EntropyFunction::shannon(), EntropyFunction::min(), EntropyFunction::renyi(0.0),
          EntropyFunction::renyi(0.5), EntropyFunction::renyi(2.0), EntropyFunction::renyi(7.5)};
}

TEST(EntropyFunction, Parsing) {
  EXPECT_EQ(EntropyFunction::parse("shannon").kind(), EntropyFunction::Kind::Shannon);
  EXPECT_EQ(EntropyFunction::parse("min").kind(), EntropyFunction::Kind::Min);
  EXPECT_EQ(EntropyFunction::parse("renyi:2.5").alpha(), 2.5);
  EXPECT_THROW(EntropyFunction::parse("renyi:1"), DomainError);
  EXPECT_THROW(EntropyFunction::parse("renyi:-1"), DomainError);
  EXPECT_THROW(EntropyFunction::parse("renyi:abc"), DomainError);
  EXPECT_THROW(EntropyFunction::parse("tsallis"), DomainError);
}

TEST(StateEntropy, Examples) {
  EXPECT_NEAR(state_entropy(EntropyFunction::shannon(), ProbVector{0.5, 0.5}), 1.0, 1e-15);
  for (const auto& h : all_kinds()) EXPECT_EQ(state_entropy(h, ProbVector::point_mass(4, 2)), 0.0);
  const double h = state_entropy(EntropyFunction::shannon(), ProbVector{0.75, 0.25});
  EXPECT_NEAR(h, testing::shannon_long_double({0.75L, 0.25L}), 1e-14);
  EXPECT_NEAR(h, 0.8112781244591328, 1e-12);
  EXPECT_NEAR(state_entropy(EntropyFunction::renyi(0.0), ProbVector{0.5, 0.5, 0.0}), 1.0, 1e-15);
  EXPECT_NEAR(state_entropy(EntropyFunction::min(), ProbVector{0.5, 0.25, 0.25}), 1.0, 1e-15);
  EXPECT_NEAR(state_entropy(EntropyFunction::renyi(2.0), ProbVector{0.5, 0.5}), 1.0, 1e-15);
}

TEST(StateEntropy, SchurConcaveAndAdditive) {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = testing::uniform_int(rng, 1, 5);
    const Vector p = testing::random_prob(rng, n, 0.2);
    const Vector q = testing::random_doubly_stochastic(rng, n) * p;
    const Vector r = testing::random_prob(rng, testing::uniform_int(rng, 1, 4), 0.2);
    for (const auto& h : all_kinds()) {
      const double hp = state_entropy(h, ProbVector(p));
      EXPECT_LE(hp, state_entropy(h, ProbVector(q)) + 1e-9);
      EXPECT_GE(hp, 0.0);
      EXPECT_LE(hp, std::log2(static_cast<double>(n)) + 1e-12);
      EXPECT_NEAR(state_entropy(h, ProbVector(p).tensor(ProbVector(r))), hp + state_entropy(h, ProbVector(r)), 1e-9);
    }
  }
}

TEST(Extensions, Examples) {
  const auto h = EntropyFunction::shannon();
  EXPECT_NEAR(max_extension(h, ClassicalChannel::uniform(4, 3)), 2.0, 1e-12);
  EXPECT_EQ(max_extension(h, ClassicalChannel(mat(3, 2, {1, 0.3, 0, 0.3, 0, 0.4}))), 0.0);
  const double h91 = max_extension(h, ClassicalChannel(mat(2, 2, {0.9, 0.5, 0.1, 0.5})));
  EXPECT_NEAR(h91, testing::shannon_long_double({0.9L, 0.1L}), 1e-14);
  EXPECT_NEAR(h91, 0.4689955935892812, 1e-12);

  const auto p = ProbVector{0.2, 0.5, 0.3};
  EXPECT_NEAR(min_extension(h, ClassicalChannel(Matrix(p.entries()))), state_entropy(h, p), 1e-15);
  EXPECT_EQ(min_extension(h, ClassicalChannel::identity(3)), 0.0);
  const double h64 = min_extension(h, ClassicalChannel(mat(3, 2, {0.6, 0.5, 0.4, 0.25, 0.0, 0.25})));
  EXPECT_NEAR(h64, testing::shannon_long_double({0.6L, 0.4L}), 1e-12);
  EXPECT_NEAR(h64, 0.9709505944546686, 1e-12);
}

TEST(Extensions, BoundsAndAdditivity) {
  Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = testing::random_channel(rng, testing::uniform_int(rng, 1, 3), testing::uniform_int(rng, 1, 3), 0.2);
    const auto m = testing::random_channel(rng, testing::uniform_int(rng, 1, 3), testing::uniform_int(rng, 1, 3), 0.2);
    for (const auto& h : all_kinds()) {
      const auto b = channel_entropy_bounds(h, n);
      EXPECT_GE(b.lower, 0.0);
      EXPECT_LE(b.lower, b.upper + 1e-9);
      EXPECT_NEAR(max_extension(h, n.tensor(m)), max_extension(h, n) + max_extension(h, m), 1e-8);
      EXPECT_GE(min_extension(h, n.tensor(m)), min_extension(h, n) + min_extension(h, m) - 1e-8);
    }
  }
  const auto single = channel_entropy_bounds(EntropyFunction::shannon(), ClassicalChannel(mat(2, 1, {0.3, 0.7})));
  EXPECT_EQ(single.lower, single.upper);
  const auto uni = channel_entropy_bounds(EntropyFunction::shannon(), ClassicalChannel::uniform(8, 2));
  EXPECT_NEAR(uni.lower, 3.0, 1e-12);
  EXPECT_NEAR(uni.upper, 3.0, 1e-12);
}

TEST(Regularized, Examples) {
  const auto h = EntropyFunction::shannon();
  const ProbVector p{0.6, 0.3, 0.1};
  for (double v : regularized_min_extension(h, ClassicalChannel(Matrix(p.entries())), 3)) {
    EXPECT_NEAR(v, state_entropy(h, p), 1e-12);
  }
  for (double v : regularized_min_extension(h, ClassicalChannel::identity(3), 3)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(regularized_min_extension(h, ClassicalChannel::identity(101), 3), ResourceError);
  EXPECT_THROW(regularized_min_extension(h, ClassicalChannel::identity(2), 0), DomainError);
}

TEST(Regularized, MatchesExplicitTensorPower) {
  Rng rng(63);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = testing::random_channel(rng, testing::uniform_int(rng, 2, 3), testing::uniform_int(rng, 1, 3));
    const auto h = EntropyFunction::shannon();
    const auto seq = regularized_min_extension(h, n, 3);
    ClassicalChannel power = n;
    for (Index k = 1; k <= 3; ++k) {
      EXPECT_NEAR(seq[static_cast<std::size_t>(k - 1)], min_extension(h, power) / static_cast<double>(k), 1e-12);
      power = power.tensor(n);
    }
  }
}

TEST(Regularized, SandwichedAndNonAdditiveInstanceExists) {
  Rng rng(64);
  const auto h = EntropyFunction::shannon();
  double best_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = testing::random_channel(rng, testing::uniform_int(rng, 2, 3), testing::uniform_int(rng, 2, 3));
    const auto seq = regularized_min_extension(h, n, 3);
    const double lo = min_extension(h, n);
    const double hi = max_extension(h, n);
    for (double v : seq) {
      EXPECT_GE(v, lo - 1e-9);
      EXPECT_LE(v, hi + 1e-9);
    }
    best_gap = std::max(best_gap, min_extension(h, n.tensor(n)) - 2.0 * lo);
  }
  EXPECT_GT(best_gap, 1e-3);
}

}  // namespace
}  // namespace chanmaj
