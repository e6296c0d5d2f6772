#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "thickening/measure.hpp"
#include "thickening/metric.hpp"

namespace thk::testing {

/// Distances drawn uniformly from [lo, hi]; a metric whenever hi <= 2 lo.
inline FiniteMetricSpace random_bounded_space(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = u(rng);
  return from_distance_matrix(d);
}

inline PointCloud random_cloud(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& x : p) x = u(rng);
  return PointCloud(pts);
}

inline FiniteMetricSpace random_euclidean_space(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
  return euclidean_metric(random_cloud(n, dim, rng));
}

/// Random measure; with probability 1/2 some weights are zeroed so that
/// supports vary.
inline Measure random_measure(const FiniteMetricSpace& X, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(X.size());
  const bool sparse = u(rng) < 0.5;
  double total = 0.0;
  for (auto& x : w) {
    x = (sparse && u(rng) < 0.5) ? 0.0 : u(rng);
    total += x;
  }
  if (total == 0.0) {
    w[std::uniform_int_distribution<std::size_t>(0, X.size() - 1)(rng)] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return Measure(X, w);
}

/// Random p in [1, 6], or infinity one time in five.
inline PValue random_p(std::mt19937_64& rng, bool allow_infinite = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (allow_infinite && u(rng) < 0.2) return PValue::infinity();
  return PValue(1.0 + 5.0 * u(rng));
}

/// Entrywise perturbation by at most eps of a space whose distances lie in
/// [1, 1.8]; the result stays a metric for eps <= 0.05.
inline FiniteMetricSpace perturb(const FiniteMetricSpace& X, double eps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-eps, eps);
  auto d = X.to_rows();
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) d[i][j] = d[j][i] = d[i][j] + u(rng);
  return from_distance_matrix(d);
}

}  // namespace thk::testing
