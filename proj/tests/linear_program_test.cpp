#include <random>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "thickening/filtration.hpp"
#include "thickening/linear_program.hpp"

namespace thk {
namespace {

using Rational = boost::multiprecision::cpp_rational;

TEST(DenseSimplex, TextbookOptimum) {
  const auto r = maximize<double>({{1, 1}, {1, 3}, {1, 0}}, {4, 6, 3}, {3, 2});
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.value, 11.0, 1e-12);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.x[1], 1.0, 1e-12);
}

TEST(DenseSimplex, NegativeRightHandSide) {
  const auto r = maximize<double>({{1, 1}, {-1, 0}}, {2, -1}, {1, 1});
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_GE(r.x[0], 1.0 - 1e-12);
}

TEST(DenseSimplex, InfeasibleAndUnbounded) {
  EXPECT_EQ(maximize<double>({{1}, {-1}}, {1, -2}, {1}).status, LpStatus::infeasible);
  EXPECT_EQ(maximize<double>({{-1, 1}}, {1}, {1, 0}).status, LpStatus::unbounded);
}

// Beale's example cycles under the largest-coefficient rule; Bland's rule
// must terminate at the optimum 5/4.
TEST(DenseSimplex, DegenerateBealeExampleTerminates) {
  const std::vector<std::vector<Rational>> A{
      {Rational(1, 4), -8, -1, 9}, {Rational(1, 2), -12, Rational(-1, 2), 3}, {0, 0, 1, 0}};
  const std::vector<Rational> b{0, 0, 1};
  const std::vector<Rational> c{Rational(3, 4), -20, Rational(1, 2), -6};
  const auto exact = maximize(A, b, c);
  ASSERT_EQ(exact.status, LpStatus::optimal);
  EXPECT_EQ(exact.value, Rational(5, 4));

  std::vector<std::vector<double>> Ad;
  for (const auto& row : A) {
    Ad.emplace_back();
    for (const auto& v : row) Ad.back().push_back(static_cast<double>(v));
  }
  const auto r = maximize<double>(Ad, {0, 0, 1}, {0.75, -20, 0.5, -6});
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.value, 1.25, 1e-12);
}

TEST(CechProgram, ExactRationalValues) {
  // Z_3 full face at p = 1: uniform weights, optimum 2/3
  const std::vector<std::vector<Rational>> z3{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  EXPECT_EQ(detail::cech_program(z3).value, Rational(2, 3));
  // edge of Z_2 at p = 1
  EXPECT_EQ(detail::cech_program(std::vector<std::vector<Rational>>{{0, 1}, {1, 0}}).value, Rational(1, 2));
}

// Integer distance matrices with integer p: the floating program must agree
// with the exact rational one to 1e-9 on every face.
TEST(CechProgram, FloatMatchesExactArithmetic) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dist(5, 9);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 5);
    Matrix d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = dist(rng);
    const auto X = from_distance_matrix(d);
    for (int p : {1, 2, 3}) {
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> verts;
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (1u << i)) verts.push_back(i);
        if (verts.size() > 4) continue;
        std::vector<std::vector<Rational>> cost(verts.size(), std::vector<Rational>(n));
        for (std::size_t a = 0; a < verts.size(); ++a)
          for (std::size_t j = 0; j < n; ++j) {
            Rational v = 1;
            for (int e = 0; e < p; ++e) v *= static_cast<int>(d[verts[a]][j]);
            cost[a][j] = v;
          }
        const Rational exact = detail::cech_program(cost).value;
        const double root = std::pow(static_cast<double>(exact), 1.0 / p);
        EXPECT_NEAR(cech_value(X, Simplex(verts), PValue(p)), root, 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace thk
