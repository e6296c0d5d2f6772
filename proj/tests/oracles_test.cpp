#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "thickening/oracles.hpp"
#include "thickening/persistence.hpp"

namespace thk {
namespace {

TEST(ZnDiagram, Examples) {
  const auto a = zn_diagram(2, PValue(1)).diagram;
  EXPECT_EQ(a.intervals(0), (std::vector<Interval>{{0, 0.5}, {0, 0.5}, {0, kInfinity}}));
  ASSERT_EQ(a.intervals(1).size(), 1u);
  EXPECT_DOUBLE_EQ(a.intervals(1)[0].birth, 0.5);
  EXPECT_DOUBLE_EQ(a.intervals(1)[0].death, 2.0 / 3.0);

  const auto b = zn_diagram(3, PValue(2)).diagram;
  ASSERT_EQ(b.intervals(1).size(), 3u);
  for (const auto& iv : b.intervals(1)) {
    EXPECT_DOUBLE_EQ(iv.birth, std::sqrt(0.5));
    EXPECT_DOUBLE_EQ(iv.death, std::sqrt(2.0 / 3.0));
  }
  EXPECT_EQ(b.intervals(2).size(), 1u);
  EXPECT_EQ(b.degrees(), (std::vector<int>{0, 1, 2}));

  for (double p : {1.0, 2.0, 5.0}) {
    const auto c = zn_diagram(1, PValue(p)).diagram;
    EXPECT_EQ(c.degrees(), (std::vector<int>{0}));
    ASSERT_EQ(c.intervals(0).size(), 2u);
    EXPECT_DOUBLE_EQ(c.intervals(0)[0].death, std::pow(0.5, 1.0 / p));
  }
  const auto inf = zn_diagram(4, PValue::infinity()).diagram;
  EXPECT_EQ(inf.intervals(0).size(), 5u);
  EXPECT_EQ(inf.intervals(0)[0].death, 1.0);
  for (int k = 1; k < 4; ++k) EXPECT_TRUE(inf.intervals(k).empty());
  EXPECT_THROW(zn_diagram(0, PValue(1)), Error);
}

TEST(ZnDiagram, MatchesComputedDiagrams) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto p : {PValue(1), PValue(2.5), PValue::infinity()})
      for (auto kind : {FiltrationKind::cech, FiltrationKind::vietoris_rips}) {
        const auto got = compute_diagram(build_complex(equilateral_space(n + 1), p, kind, static_cast<int>(n)));
        const auto want = zn_diagram(n, p).diagram;
        for (int k = 0; k <= static_cast<int>(n); ++k) {
          ASSERT_EQ(got.intervals(k).size(), want.intervals(k).size());
          EXPECT_LT(bottleneck(got, want, k).value, 1e-12);
        }
      }
}

TEST(SingleLinkage, Examples) {
  {
    const auto z2 = single_linkage_h0(equilateral_space(2), 1.0);
    EXPECT_EQ(z2.intervals(0), (std::vector<Interval>{{0, 1}, {0, kInfinity}}));
  }
  const auto path = from_distance_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  EXPECT_EQ(single_linkage_h0(path, 0.5).intervals(0), (std::vector<Interval>{{0, 0.5}, {0, 0.5}, {0, kInfinity}}));
  std::mt19937_64 rng(1);
  const auto X = testing::random_euclidean_space(8, 3, rng);
  const auto unit = single_linkage_h0(X, 1.0).intervals(0);
  const auto scaled = single_linkage_h0(X, 3.0).intervals(0);
  ASSERT_EQ(unit.size(), scaled.size());
  for (std::size_t i = 0; i + 1 < unit.size(); ++i) EXPECT_DOUBLE_EQ(scaled[i].death, 3.0 * unit[i].death);
  EXPECT_THROW(single_linkage_h0(X, 0.0), Error);
}

TEST(EdgeDeathScale, IsRootOfOneHalf) {
  for (double p : {1.0, 2.0, 3.0, 4.5}) EXPECT_NEAR(edge_death_scale(PValue(p)), std::pow(0.5, 1.0 / p), 1e-15);
  EXPECT_EQ(edge_death_scale(PValue::infinity()), 1.0);
}

TEST(SingleLinkage, MatchesDegreeZero) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto X = t % 2 ? testing::random_euclidean_space(8, 2, rng) : testing::random_bounded_space(8, 1, 2, rng);
    for (double p : {1.0, 2.0, 3.0}) {
      const auto oracle = single_linkage_h0(X, edge_death_scale(PValue(p)));
      for (auto kind : {FiltrationKind::cech, FiltrationKind::vietoris_rips}) {
        const auto dgm = compute_diagram(build_complex(X, PValue(p), kind, 1));
        EXPECT_LT(bottleneck(dgm, oracle, 0).value, 1e-9);
        EXPECT_EQ(dgm.intervals(0).size(), oracle.intervals(0).size());
      }
    }
  }
}

TEST(GridMaximize, Examples) {
  const auto pair = equilateral_space(2);
  EXPECT_NEAR(grid_maximize(pair, Simplex{0, 1}, Functional::diam_p, PValue(2), 1e-3), std::sqrt(0.5), 1e-3);
  EXPECT_EQ(grid_maximize(pair, Simplex{1}, Functional::rad_p, PValue(2), 1e-2), 0.0);
  EXPECT_NEAR(grid_maximize(equilateral_space(3), Simplex{0, 1, 2}, Functional::rad_p, PValue(1), 1e-3), 2.0 / 3.0,
              1e-3);
  EXPECT_THROW(grid_maximize(equilateral_space(5), Simplex{0, 1, 2, 3, 4}, Functional::rad_p, PValue(1), 1e-2), Error);
  EXPECT_THROW(grid_maximize(pair, Simplex{0, 1}, Functional::rad_p, PValue(1), 0.05), Error);
}

TEST(GridMaximize, RefinementNeverLowersTheMaximum) {
  std::mt19937_64 rng(3);
  const auto X = testing::random_euclidean_space(5, 2, rng);
  const Simplex S{0, 2, 4};
  for (auto f : {Functional::diam_p, Functional::rad_p}) {
    const double coarse = grid_maximize(X, S, f, PValue(1.5), 1e-2);
    const double fine = grid_maximize(X, S, f, PValue(1.5), 1e-2, 2);
    EXPECT_GE(fine, coarse);
  }
}

TEST(TransportVertices, Examples) {
  const auto X = equilateral_space(3);
  const auto dirac = Measure::dirac(X, 1);
  const auto single = enumerate_transport_vertices(dirac, dirac);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0](1, 1), 1.0);

  const auto pair = equilateral_space(2);
  const Measure half(pair, {0.5, 0.5});
  const auto plans = enumerate_transport_vertices(half, half);
  ASSERT_EQ(plans.size(), 2u);
  bool identity = false, swap = false;
  for (const auto& pl : plans) {
    identity |= pl(0, 0) == 0.5 && pl(1, 1) == 0.5;
    swap |= pl(0, 1) == 0.5 && pl(1, 0) == 0.5;
  }
  EXPECT_TRUE(identity && swap);

  const auto big = Measure::uniform(equilateral_space(4));
  try {
    enumerate_transport_vertices(big, big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SupportTooLarge);
  }
}

}  // namespace
}  // namespace thk
