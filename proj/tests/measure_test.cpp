#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "thickening/measure.hpp"
#include "thickening/metric.hpp"

namespace thk {
namespace {

const PValue kOne(1.0), kTwo(2.0), kInf = PValue::infinity();

TEST(PValueTest, ParseAndOrder) {
  EXPECT_TRUE(PValue::parse("inf").is_infinite());
  EXPECT_TRUE(PValue::parse("Infinity").is_infinite());
  EXPECT_EQ(PValue::parse("2.5").value(), 2.5);
  EXPECT_THROW(PValue::parse("0.5"), Error);
  EXPECT_THROW(PValue::parse("abc"), Error);
  EXPECT_THROW(PValue(std::nan("")), Error);
  EXPECT_LT(PValue(3.0), kInf);
  EXPECT_FALSE(kInf < PValue(3.0));
}

TEST(MeasureTest, Validation) {
  auto z3 = equilateral_space(3);
  EXPECT_THROW(Measure(z3, {0.5, 0.5}), Error);
  EXPECT_THROW(Measure(z3, {0.5, 0.7, -0.2}), Error);
  EXPECT_THROW(Measure(z3, {0.5, 0.5, 0.5}), Error);
  Measure noisy(z3, {0.5, 0.5 + 5e-10, 0.0});
  EXPECT_NEAR(noisy[0] + noisy[1], 1.0, 1e-15);
  EXPECT_EQ(noisy.support(), (std::vector<std::size_t>{0, 1}));
}

TEST(Frechet, Examples) {
  auto z3 = equilateral_space(3);
  for (auto p : {kOne, kTwo, kInf}) EXPECT_EQ(frechet(Measure::dirac(z3, 1), p, 1), 0.0);
  const auto u = Measure::uniform(z3);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(frechet(u, kTwo, c), std::sqrt(2.0 / 3.0), 1e-15);
  auto antipodal = euclidean_metric(PointCloud({{1, 0}, {-1, 0}}));
  EXPECT_NEAR(frechet(Measure::uniform(antipodal), kTwo, 0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(frechet(u, kInf, 0), 1.0, 0.0);
}

TEST(DiamP, Examples) {
  auto z3 = equilateral_space(3);
  for (auto p : {kOne, kTwo, kInf}) EXPECT_EQ(diam_p(Measure::dirac(z3, 2), p), 0.0);
  for (std::size_t n = 1; n <= 5; ++n) {
    auto Z = equilateral_space(n + 1);
    for (double p : {1.0, 2.0, 3.0, 4.5}) {
      const double expected = std::pow(double(n) / double(n + 1), 1.0 / p);
      EXPECT_NEAR(diam_p(Measure::uniform(Z), PValue(p)), expected, 1e-14);
    }
  }
  const double d = 1.7;
  auto pair = from_distance_matrix({{0, d}, {d, 0}});
  for (double t : {0.1, 0.25, 0.5, 0.9})
    for (double p : {1.0, 2.0, 3.5}) {
      Measure a(pair, {t, 1 - t});
      EXPECT_NEAR(diam_p(a, PValue(p)), std::pow(2 * t * (1 - t), 1.0 / p) * d, 1e-14);
    }
  EXPECT_EQ(diam_p(Measure(pair, {0.3, 0.7}), kInf), d);
}

TEST(RadP, Examples) {
  auto z4 = equilateral_space(4);
  EXPECT_EQ(rad_p(Measure::dirac(z4, 0), kTwo), 0.0);
  for (std::size_t n = 1; n <= 5; ++n)
    for (double p : {1.0, 2.0, 3.0}) {
      auto Z = equilateral_space(n + 1);
      EXPECT_NEAR(rad_p(Measure::uniform(Z), PValue(p)), std::pow(double(n) / double(n + 1), 1.0 / p), 1e-14);
    }
  auto z2 = equilateral_space(2);
  EXPECT_NEAR(rad_p(Measure::uniform(z2), kOne), 0.5, 1e-15);
}

TEST(RadP, MinimizesOverWholeSpaceNotJustSupport) {
  // center 2 is off the support and closer to both support points
  auto X = from_distance_matrix({{0, 2, 1}, {2, 0, 1}, {1, 1, 0}});
  Measure a(X, {0.5, 0.5, 0.0});
  EXPECT_NEAR(rad_p(a, kTwo), 1.0, 1e-15);
  EXPECT_NEAR(frechet(a, kTwo, 0), std::sqrt(2.0), 1e-15);
}

TEST(RadPAmbient, Examples) {
  std::mt19937_64 rng(1);
  auto X = testing::random_euclidean_space(6, 2, rng);
  auto self = Embedding::prefix(X, X);
  const auto a = testing::random_measure(X, rng);
  EXPECT_EQ(rad_p_ambient(a, self, kTwo), rad_p(a, kTwo));

  auto square = euclidean_metric(sample_sphere(1, 4, SampleMode::grid));
  auto pair = square.subspace(std::vector<std::size_t>{0, 2});
  Embedding in_square(pair, square, {0, 2});
  EXPECT_NEAR(rad_p_ambient(Measure::uniform(pair), in_square, kTwo), std::sqrt(2.0), 1e-12);

  // Z_2 plus a center O at distance 1/2 from both points
  auto z2 = equilateral_space(2);
  auto with_center = from_distance_matrix({{0, 1, 0.5}, {1, 0, 0.5}, {0.5, 0.5, 0}});
  auto e = Embedding::prefix(z2, with_center);
  for (double p : {1.0, 2.0, 3.0}) {
    EXPECT_NEAR(rad_p_ambient(Measure::uniform(z2), e, PValue(p)), 0.5, 1e-15);
    EXPECT_NEAR(rad_p(Measure::uniform(z2), PValue(p)), std::pow(0.5, 1.0 / p), 1e-15);
  }
}

TEST(RadPAmbient, EmbeddingMismatch) {
  auto z2 = equilateral_space(2);
  auto other = from_distance_matrix({{0, 2}, {2, 0}});
  EXPECT_THROW(Embedding::prefix(z2, other), Error);
  EXPECT_THROW(Embedding(z2, other, {0, 5}), Error);
}

TEST(Iqp, Examples) {
  std::mt19937_64 rng(2);
  auto X = testing::random_euclidean_space(7, 3, rng);
  for (int t = 0; t < 20; ++t) {
    const auto a = testing::random_measure(X, rng);
    for (double p : {1.0, 2.0, 3.7}) EXPECT_NEAR(i_qp(a, PValue(p), PValue(p)), diam_p(a, PValue(p)), 1e-12);
    EXPECT_NEAR(i_qp(a, kInf, kInf), diam_p(a, kInf), 1e-12);
  }
  EXPECT_EQ(i_qp(Measure::dirac(X, 3), kOne, kTwo), 0.0);
  EXPECT_NEAR(i_qp(Measure::uniform(equilateral_space(3)), kOne, kTwo), 2.0 / 3.0, 1e-15);
}

TEST(EuclideanMean, Examples) {
  PointCloud pc({{0, 0}, {4, 0}});
  auto X = euclidean_metric(pc);
  EXPECT_EQ(euclidean_mean(Measure::dirac(X, 1), pc), (std::vector<double>{4, 0}));
  const auto m = euclidean_mean(Measure(X, {0.25, 0.75}), pc);
  EXPECT_NEAR(m[0], 3.0, 1e-15);
  EXPECT_NEAR(m[1], 0.0, 1e-15);
  PointCloud antipodal({{1, 0}, {-1, 0}});
  const auto z = euclidean_mean(Measure::uniform(euclidean_metric(antipodal)), antipodal);
  EXPECT_NEAR(z[0], 0.0, 1e-15);
  EXPECT_THROW(euclidean_mean(Measure::uniform(equilateral_space(3)), pc), Error);
}

TEST(SphereClosedForms, Examples) {
  PointCloud antipodal({{1, 0}, {-1, 0}});
  auto X = euclidean_metric(antipodal);
  EXPECT_NEAR(sphere_diam2_closed_form(Measure::dirac(X, 0), antipodal), 0.0, 1e-12);
  EXPECT_NEAR(sphere_rad2_closed_form(Measure::dirac(X, 0), antipodal), 0.0, 1e-12);
  EXPECT_NEAR(sphere_diam2_closed_form(Measure::uniform(X), antipodal), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(sphere_rad2_closed_form(Measure::uniform(X), antipodal), std::sqrt(2.0), 1e-15);
  PointCloud off({{2, 0}, {-1, 0}});
  EXPECT_THROW(sphere_diam2_closed_form(Measure::uniform(euclidean_metric(off)), off), Error);
}

TEST(SphereClosedForms, AgreeWithGenericFunctionals) {
  std::mt19937_64 rng(4);
  for (int n_dim : {1, 2, 3}) {
    auto pc = sample_sphere(n_dim, 12, SampleMode::seeded_uniform, 99 + n_dim);
    auto X = euclidean_metric(pc);
    for (int t = 0; t < 50; ++t) {
      const auto a = testing::random_measure(X, rng);
      EXPECT_NEAR(sphere_diam2_closed_form(a, pc), diam_p(a, kTwo), 1e-9);
      EXPECT_LE(sphere_rad2_closed_form(a, pc), rad_p(a, kTwo) + 1e-12);
    }
  }
  // dense circle: the sample-restricted radius exceeds the closed form by at
  // most the Hausdorff distance to the circle
  auto pc = sample_sphere(1, 60, SampleMode::grid);
  auto X = euclidean_metric(pc);
  const double slack = circle_sample_hausdorff(pc);
  for (int t = 0; t < 50; ++t) {
    const auto a = testing::random_measure(X, rng);
    const double gap = rad_p(a, kTwo) - sphere_rad2_closed_form(a, pc);
    EXPECT_GE(gap, -1e-12);
    EXPECT_LE(gap, slack + 1e-12);
  }
}

TEST(MeasureProperties, NestingAndHolder) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 300; ++t) {
    auto X = t % 2 ? testing::random_euclidean_space(6, 2, rng) : testing::random_bounded_space(6, 1, 2, rng);
    const auto a = testing::random_measure(X, rng);
    const auto p = testing::random_p(rng);
    const double r = rad_p(a, p), d = diam_p(a, p);
    EXPECT_LE(r, d + 1e-12);
    EXPECT_LE(d, 2 * r + 1e-12);
    const auto lower = testing::random_p(rng, false);
    if (lower <= p) {
      EXPECT_LE(diam_p(a, lower), d + 1e-12);
      EXPECT_LE(rad_p(a, lower), r + 1e-12);
    }
  }
}

TEST(MeasureProperties, AmbientRadiusNeverExceedsIntrinsic) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    auto cloud = testing::random_cloud(9, 2, rng);
    auto M = euclidean_metric(cloud);
    std::vector<std::size_t> idx{0, 1, 2, 3, 4};
    auto X = M.subspace(idx);
    Embedding e(X, M, idx);
    const auto a = testing::random_measure(X, rng);
    const auto p = testing::random_p(rng);
    EXPECT_LE(rad_p_ambient(a, e, p), rad_p(a, p) + 1e-15);
  }
}

TEST(MeasureProperties, FrechetDecompositionAndMeanProximity) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    auto pc = testing::random_cloud(8, 3, rng);
    auto X = euclidean_metric(pc);
    const auto a = testing::random_measure(X, rng);
    const auto m = euclidean_mean(a, pc);
    double f2_at_mean = 0.0;
    for (std::size_t i : a.support()) {
      const double d = euclidean_distance(pc[i], m);
      f2_at_mean += a[i] * d * d;
    }
    for (std::size_t x = 0; x < X.size(); ++x) {
      const double lhs = std::pow(frechet(a, kTwo, x), 2);
      const double gap = euclidean_distance(pc[x], m);
      EXPECT_NEAR(lhs, gap * gap + f2_at_mean, 1e-9);
    }
    const auto p = testing::random_p(rng);
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t z : a.support()) nearest = std::min(nearest, euclidean_distance(pc[z], m));
    EXPECT_LE(nearest, diam_p(a, p) + 1e-12);
  }
}

TEST(MeasureProperties, PushforwardBound) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 200; ++t) {
    auto X = testing::random_euclidean_space(7, 2, rng);
    auto Y = testing::random_euclidean_space(4, 2, rng);
    std::uniform_int_distribution<std::size_t> pick(0, 3);
    std::vector<std::size_t> f(7);
    for (auto& v : f) v = pick(rng);
    const double dis = distortion(X, Y, f);
    const auto a = testing::random_measure(X, rng);
    const auto b = pushforward(a, f, Y);
    const auto p = testing::random_p(rng), q = testing::random_p(rng);
    EXPECT_LE(diam_p(b, p), diam_p(a, p) + dis + 1e-12);
    EXPECT_LE(i_qp(b, q, p), i_qp(a, q, p) + dis + 1e-12);
    EXPECT_LE(rad_p(b, p), rad_p(a, p) + dis + 1e-12);
  }
}

}  // namespace
}  // namespace thk
