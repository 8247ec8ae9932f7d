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

#include "chanmaj/classical.hpp"
#include "chanmaj/lp.hpp"
#include "support/oracles.hpp"

namespace chanmaj::lp {
namespace {

using testing::Rng;

FeasibilityProblem make(Matrix a, Vector b, std::vector<Sense> sense) {
  FeasibilityProblem p;
  p.A = std::move(a);
  p.b = std::move(b);
  p.sense = std::move(sense);
  return p;
}

TEST(SolveFeasibility, SimplexVertex) {
  Matrix a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  const auto prob = make(a, Eigen::Vector3d(1, 1, 1), {Sense::LessEqual, Sense::LessEqual, Sense::Equal});
  const auto res = solve_feasibility(prob);
  ASSERT_TRUE(res.feasible());
  EXPECT_TRUE(is_witness(prob, *res.witness));
}

TEST(SolveFeasibility, ContradictoryBounds) {
  Matrix a(2, 1);
  a << -1, 1;
  const auto prob = make(a, Eigen::Vector2d(-2, 1), {Sense::LessEqual, Sense::LessEqual});
  const auto res = solve_feasibility(prob);
  ASSERT_FALSE(res.feasible());
  ASSERT_TRUE(res.farkas_certificate.has_value());
  EXPECT_TRUE(is_farkas_certificate(prob, *res.farkas_certificate));
}

TEST(SolveFeasibility, IdentityChannelOverUniformColumn) {
  // Mixture system of the identity-2 channel against the uniform column.
  const Matrix sorted = chanmaj::detail::sorted_columns(Matrix::Identity(2, 2));
  const auto prob = chanmaj::detail::mixture_problem(sorted, Eigen::Vector2d(0.5, 0.5), 1e-9);
  const auto res = solve_feasibility(prob);
  ASSERT_TRUE(res.feasible());
  EXPECT_TRUE(is_witness(prob, *res.witness));
  EXPECT_TRUE(testing::grid_predictability_majorizes(Matrix::Identity(2, 2), Matrix::Constant(2, 2, 0.5), 20));
}

TEST(SolveFeasibility, FreeVariables) {
  // x1 - x2 = -3 with free variables is feasible; with x >= 0 and x1 + x2 <= 1 it is not.
  Matrix a(1, 2);
  a << 1, -1;
  auto prob = make(a, Vector::Constant(1, -3.0), {Sense::Equal});
  prob.nonneg = false;
  auto res = solve_feasibility(prob);
  ASSERT_TRUE(res.feasible());
  EXPECT_TRUE(is_witness(prob, *res.witness));

  Matrix a2(2, 2);
  a2 << 1, -1, 1, 1;
  const auto bounded = make(a2, Eigen::Vector2d(-3, 1), {Sense::Equal, Sense::LessEqual});
  res = solve_feasibility(bounded);
  ASSERT_FALSE(res.feasible());
  EXPECT_TRUE(is_farkas_certificate(bounded, *res.farkas_certificate));
}

TEST(SolveFeasibility, ValidationErrors) {
  EXPECT_THROW(solve_feasibility(make(Matrix::Zero(2, 2), Vector::Zero(3), {Sense::Equal, Sense::Equal})),
               DomainError);
  Matrix bad = Matrix::Zero(1, 1);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(solve_feasibility(make(bad, Vector::Zero(1), {Sense::Equal})), DomainError);
  EXPECT_THROW(solve_feasibility(make(Matrix::Zero(1, 51), Vector::Zero(1), {Sense::Equal})), ResourceError);
  EXPECT_THROW(solve_feasibility(make(Matrix::Zero(201, 1), Vector::Zero(201),
                                      std::vector<Sense>(201, Sense::LessEqual))),
               ResourceError);
}

TEST(SolveFeasibility, AgreesWithVertexEnumeration) {
  Rng rng(21);
  int feasible = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index rows = testing::uniform_int(rng, 1, 4);
    const Index vars = testing::uniform_int(rng, 1, 4);
    Matrix a(rows, vars);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < vars; ++j) a(i, j) = std::round((2.0 * testing::uniform01(rng) - 1.0) * 4.0) / 2.0;
    std::vector<Sense> sense;
    for (Index i = 0; i < rows; ++i) sense.push_back(testing::uniform01(rng) < 0.3 ? Sense::Equal : Sense::LessEqual);
    Vector b(rows);
    if (trial % 2 == 0) {
      // Planted solution on a coarse lattice.
      Vector x0(vars);
      for (Index j = 0; j < vars; ++j) x0(j) = std::round(testing::uniform01(rng) * 4.0) / 2.0;
      b = a * x0;
      for (Index i = 0; i < rows; ++i) {
        if (sense[static_cast<std::size_t>(i)] == Sense::LessEqual) b(i) += std::round(testing::uniform01(rng) * 2.0);
      }
    } else {
      for (Index i = 0; i < rows; ++i) b(i) = std::round((2.0 * testing::uniform01(rng) - 1.0) * 4.0) / 2.0;
    }
    const auto prob = make(a, b, sense);
    const bool expected = testing::vertex_enumeration_feasible(prob);
    const auto res = solve_feasibility(prob);
    ASSERT_EQ(res.feasible(), expected) << "trial " << trial << "\nA=\n" << a << "\nb=" << b.transpose();
    if (res.feasible()) {
      ++feasible;
      EXPECT_TRUE(is_witness(prob, *res.witness));
    } else {
      ++infeasible;
      EXPECT_TRUE(is_farkas_certificate(prob, *res.farkas_certificate));
    }
  }
  EXPECT_GT(feasible, 100);
  EXPECT_GT(infeasible, 100);
}

TEST(SolveFeasibility, DegenerateProblemsTerminate) {
  // Many redundant copies of the same constraint exercise Bland's rule.
  Matrix a = Matrix::Ones(12, 3);
  Vector b = Vector::Zero(12);
  const auto prob = make(a, b, std::vector<Sense>(12, Sense::LessEqual));
  const auto res = solve_feasibility(prob);
  ASSERT_TRUE(res.feasible());
  EXPECT_TRUE(is_witness(prob, *res.witness));
}

}  // namespace
}  // namespace chanmaj::lp
