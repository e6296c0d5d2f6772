#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "thickening/errors.hpp"
#include "thickening/metric.hpp"
#include "thickening/pvalue.hpp"

namespace thk {

/// Weight-sum slack tolerated (and renormalized away) by Measure.
inline constexpr double kWeightSumTolerance = 1e-9;

/// Finitely supported probability measure on a FiniteMetricSpace.
class Measure {
 public:
  Measure(FiniteMetricSpace space, std::vector<double> weights)
      : space_(std::move(space)), w_(std::move(weights)) {
    if (w_.size() != space_.size()) {
      throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(space_.size()) + " weights, got " +
                                                    std::to_string(w_.size()));
    }
    double sum = 0.0;
    for (double x : w_) {
      if (!std::isfinite(x)) throw Error(ErrorKind::ParseError, "non-finite weight");
      if (x < 0.0) throw Error(ErrorKind::NegativeWeight, "weights must be nonnegative");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
      throw Error(ErrorKind::NotNormalized, "weights sum to " + std::to_string(sum));
    }
    for (double& x : w_) x /= sum;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] > 0.0) support_.push_back(i);
  }

  static Measure dirac(const FiniteMetricSpace& space, std::size_t i) {
    std::vector<double> w(space.size(), 0.0);
    w.at(i) = 1.0;
    return Measure(space, std::move(w));
  }

  static Measure uniform(const FiniteMetricSpace& space) {
    return Measure(space, std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size())));
  }

  static Measure uniform_on(const FiniteMetricSpace& space, std::span<const std::size_t> indices) {
    if (indices.empty()) throw Error(ErrorKind::EmptySubset, "uniform measure needs a nonempty support");
    std::vector<double> w(space.size(), 0.0);
    for (std::size_t i : indices) w.at(i) = 1.0 / static_cast<double>(indices.size());
    return Measure(space, std::move(w));
  }

  const FiniteMetricSpace& space() const { return space_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<std::size_t>& support() const { return support_; }

 private:
  FiniteMetricSpace space_;
  std::vector<double> w_;
  std::vector<std::size_t> support_;
};

namespace detail {

inline double root(double s, const PValue& p) { return p.value() == 1.0 ? s : std::pow(s, 1.0 / p.value()); }
inline double power(double d, const PValue& p) { return p.value() == 1.0 ? d : std::pow(d, p.value()); }

}  // namespace detail

/// Frechet function F_{alpha,p}(x_c) with an arbitrary distance-to-center column.
template <class DistanceToCenter>
double frechet_with(const Measure& alpha, const PValue& p, DistanceToCenter&& dist) {
  if (p.is_infinite()) {
    double worst = 0.0;
    for (std::size_t i : alpha.support()) worst = std::max(worst, dist(i));
    return worst;
  }
  double s = 0.0;
  for (std::size_t i : alpha.support()) s += alpha[i] * detail::power(dist(i), p);
  return detail::root(s, p);
}

/// (sum_i w_i d(x_i, x_c)^p)^{1/p}; max over the support when p = inf.
inline double frechet(const Measure& alpha, const PValue& p, std::size_t center) {
  const auto& X = alpha.space();
  if (center >= X.size()) throw Error(ErrorKind::InvalidArgument, "center index out of range");
  return frechet_with(alpha, p, [&](std::size_t i) { return X(i, center); });
}

inline double diam_p(const Measure& alpha, const PValue& p) {
  const auto& X = alpha.space();
  const auto& supp = alpha.support();
  if (p.is_infinite()) {
    double worst = 0.0;
    for (std::size_t i : supp)
      for (std::size_t j : supp) worst = std::max(worst, X(i, j));
    return worst;
  }
  double s = 0.0;
  for (std::size_t i : supp)
    for (std::size_t j : supp) s += alpha[i] * alpha[j] * detail::power(X(i, j), p);
  return detail::root(s, p);
}

/// Minimum of the Frechet function over every point of the space.
inline double rad_p(const Measure& alpha, const PValue& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < alpha.space().size(); ++c) best = std::min(best, frechet(alpha, p, c));
  return best;
}

/// A space X placed inside a larger space M: X's point i is M's point
/// `index[i]`, and distances agree.
class Embedding {
 public:
  Embedding(FiniteMetricSpace X, FiniteMetricSpace M, std::vector<std::size_t> index)
      : X_(std::move(X)), M_(std::move(M)), index_(std::move(index)) {
    if (index_.size() != X_.size()) throw Error(ErrorKind::EmbeddingMismatch, "index map length differs from |X|");
    for (std::size_t m : index_)
      if (m >= M_.size()) throw Error(ErrorKind::EmbeddingMismatch, "index map points outside M");
    for (std::size_t i = 0; i < X_.size(); ++i)
      for (std::size_t j = 0; j < X_.size(); ++j) {
        const double a = X_(i, j), b = M_(index_[i], index_[j]);
        if (std::abs(a - b) > kMetricTolerance * std::max(1.0, std::max(a, b))) {
          throw Error(ErrorKind::EmbeddingMismatch,
                      "d_X(" + std::to_string(i) + "," + std::to_string(j) + ") differs from d_M");
        }
      }
  }

  /// X is the first |X| points of M.
  static Embedding prefix(FiniteMetricSpace X, FiniteMetricSpace M) {
    std::vector<std::size_t> idx(X.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return Embedding(std::move(X), std::move(M), std::move(idx));
  }

  const FiniteMetricSpace& inner() const { return X_; }
  const FiniteMetricSpace& ambient() const { return M_; }
  std::size_t operator[](std::size_t i) const { return index_[i]; }

 private:
  FiniteMetricSpace X_;
  FiniteMetricSpace M_;
  std::vector<std::size_t> index_;
};

/// Minimum of the Frechet function over all points of the ambient space.
inline double rad_p_ambient(const Measure& alpha, const Embedding& e, const PValue& p) {
  if (!alpha.space().same_as(e.inner())) throw Error(ErrorKind::SpaceMismatch, "measure lives on another space");
  const auto& M = e.ambient();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < M.size(); ++m)
    best = std::min(best, frechet_with(alpha, p, [&](std::size_t i) { return M(e[i], m); }));
  return best;
}

/// (sum_x w_x F_{alpha,q}(x)^p)^{1/p}, using W_q(alpha, delta_x) = F_{alpha,q}(x).
inline double i_qp(const Measure& alpha, const PValue& q, const PValue& p) {
  if (p.is_infinite()) {
    double worst = 0.0;
    for (std::size_t x : alpha.support()) worst = std::max(worst, frechet(alpha, q, x));
    return worst;
  }
  double s = 0.0;
  for (std::size_t x : alpha.support()) s += alpha[x] * detail::power(frechet(alpha, q, x), p);
  return detail::root(s, p);
}

/// Pushforward along an index map f from alpha's space into `target`.
inline Measure pushforward(const Measure& alpha, std::span<const std::size_t> f, const FiniteMetricSpace& target) {
  if (f.size() != alpha.size()) throw Error(ErrorKind::DimensionMismatch, "map length differs from space size");
  std::vector<double> w(target.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= target.size()) throw Error(ErrorKind::InvalidArgument, "map image out of range");
    w[f[i]] += alpha[i];
  }
  return Measure(target, std::move(w));
}

/// sum_k c_k alpha_k over a common space.
inline Measure mixture(std::span<const Measure> parts, std::span<const double> coeffs) {
  if (parts.empty() || parts.size() != coeffs.size()) {
    throw Error(ErrorKind::InvalidArgument, "mixture needs matching nonempty parts and coefficients");
  }
  std::vector<double> w(parts.front().size(), 0.0);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k].space().same_as(parts.front().space())) throw Error(ErrorKind::SpaceMismatch, "mixed spaces");
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += coeffs[k] * parts[k][i];
  }
  return Measure(parts.front().space(), std::move(w));
}

/// Weighted average of the cloud's coordinates.
inline std::vector<double> euclidean_mean(const Measure& alpha, const PointCloud& pc) {
  if (pc.size() != alpha.size()) throw Error(ErrorKind::DimensionMismatch, "cloud size differs from measure size");
  std::vector<double> m(pc.dim(), 0.0);
  for (std::size_t i : alpha.support())
    for (std::size_t k = 0; k < pc.dim(); ++k) m[k] += alpha[i] * pc[i][k];
  return m;
}

namespace detail {

inline double unit_sphere_mean_norm(const Measure& alpha, const PointCloud& pc) {
  for (std::size_t i = 0; i < pc.size(); ++i) {
    double s = 0.0;
    for (double x : pc[i]) s += x * x;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-9) {
      throw Error(ErrorKind::NotOnUnitSphere, "point " + std::to_string(i) + " is not unit norm");
    }
  }
  const auto m = euclidean_mean(alpha, pc);
  double s = 0.0;
  for (double x : m) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

/// diam_2 on the unit sphere: sqrt(2 - 2 |m(alpha)|^2).
inline double sphere_diam2_closed_form(const Measure& alpha, const PointCloud& pc) {
  const double m = detail::unit_sphere_mean_norm(alpha, pc);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * m * m));
}

/// rad_2 on the unit sphere with centers anywhere on the sphere: sqrt(2 - 2 |m(alpha)|).
/// Never exceeds rad_p computed with centers restricted to the sample.
inline double sphere_rad2_closed_form(const Measure& alpha, const PointCloud& pc) {
  const double m = detail::unit_sphere_mean_norm(alpha, pc);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * m));
}

}  // namespace thk
