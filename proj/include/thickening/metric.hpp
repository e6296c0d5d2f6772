#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "thickening/errors.hpp"

namespace thk {

/// Relative tolerance used when validating symmetry and the triangle inequality.
inline constexpr double kMetricTolerance = 1e-9;

/// Largest space for which metric_spread is computed exactly.
inline constexpr std::size_t kSpreadExactCap = 20;

using Matrix = std::vector<std::vector<double>>;

/// Immutable finite metric space stored as a dense row-major distance matrix.
/// Copies share the underlying storage.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() : data_(std::make_shared<const Storage>()) {}

  std::size_t size() const { return data_->n; }

  double operator()(std::size_t i, std::size_t j) const { return data_->d[i * data_->n + j]; }
  double distance(std::size_t i, std::size_t j) const { return (*this)(i, j); }

  std::span<const double> row(std::size_t i) const {
    return {data_->d.data() + i * data_->n, data_->n};
  }

  Matrix to_rows() const {
    Matrix rows(size(), std::vector<double>(size()));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) rows[i][j] = (*this)(i, j);
    return rows;
  }

  /// True when both handles refer to the same storage or to equal matrices.
  bool same_as(const FiniteMetricSpace& other) const {
    return data_ == other.data_ || (data_->n == other.data_->n && data_->d == other.data_->d);
  }

  /// Metric restricted to the listed indices, in the listed order.
  FiniteMetricSpace subspace(std::span<const std::size_t> indices) const {
    Storage s;
    s.n = indices.size();
    s.d.resize(s.n * s.n);
    for (std::size_t a = 0; a < s.n; ++a)
      for (std::size_t b = 0; b < s.n; ++b) s.d[a * s.n + b] = (*this)(indices[a], indices[b]);
    return FiniteMetricSpace(std::move(s));
  }

  double diameter() const {
    return data_->d.empty() ? 0.0 : *std::max_element(data_->d.begin(), data_->d.end());
  }

  /// Intrinsic radius: min over centers of the eccentricity.
  double radius() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < size(); ++c) {
      auto r = row(c);
      best = std::min(best, *std::max_element(r.begin(), r.end()));
    }
    return size() == 0 ? 0.0 : best;
  }

  friend FiniteMetricSpace from_distance_matrix(const Matrix& rows);

 private:
  struct Storage {
    std::size_t n = 0;
    std::vector<double> d;
  };

  explicit FiniteMetricSpace(Storage s) : data_(std::make_shared<const Storage>(std::move(s))) {}

  std::shared_ptr<const Storage> data_;
};

/// Validates and builds a metric space. Entries that are symmetric up to the
/// relative tolerance are averaged.
inline FiniteMetricSpace from_distance_matrix(const Matrix& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw Error(ErrorKind::EmptySpace, "distance matrix has no rows");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorKind::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(n));
    }
  }
  auto tol = [](double scale) { return kMetricTolerance * std::max(1.0, std::abs(scale)); };
  FiniteMetricSpace::Storage s;
  s.n = n;
  s.d.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i][i] != 0.0) {
      throw Error(ErrorKind::NonZeroDiagonal, "d[" + std::to_string(i) + "][" + std::to_string(i) + "] != 0");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double a = rows[i][j];
      if (!std::isfinite(a)) throw Error(ErrorKind::ParseError, "non-finite distance");
      if (a < 0.0) {
        throw Error(ErrorKind::NegativeDistance, "d[" + std::to_string(i) + "][" + std::to_string(j) + "] < 0");
      }
      if (i == j) continue;
      const double b = rows[j][i];
      if (std::abs(a - b) > tol(std::max(a, b))) {
        throw Error(ErrorKind::AsymmetricMatrix,
                    "d[" + std::to_string(i) + "][" + std::to_string(j) + "] != d[" + std::to_string(j) + "][" +
                        std::to_string(i) + "]");
      }
      if (a == 0.0) {
        throw Error(ErrorKind::ZeroOffDiagonal, "points " + std::to_string(i) + " and " + std::to_string(j) +
                                                    " coincide");
      }
      s.d[i * n + j] = 0.5 * (a + b);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double via = s.d[i * n + k] + s.d[k * n + j];
        if (s.d[i * n + j] > via + tol(via)) {
          throw Error(ErrorKind::TriangleViolation, "d(" + std::to_string(i) + "," + std::to_string(j) +
                                                        ") > d(" + std::to_string(i) + "," + std::to_string(k) +
                                                        ") + d(" + std::to_string(k) + "," + std::to_string(j) + ")");
        }
      }
  return FiniteMetricSpace(std::move(s));
}

/// Points in R^m, all of the same dimension.
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(Matrix points) : points_(std::move(points)) {
    if (points_.empty()) throw Error(ErrorKind::EmptySpace, "point cloud is empty");
    const std::size_t m = points_.front().size();
    if (m == 0) throw Error(ErrorKind::DimensionMismatch, "points must have dimension >= 1");
    for (const auto& p : points_) {
      if (p.size() != m) throw Error(ErrorKind::DimensionMismatch, "points have unequal dimensions");
    }
  }

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.empty() ? 0 : points_.front().size(); }
  const std::vector<double>& operator[](std::size_t i) const { return points_[i]; }
  const Matrix& points() const { return points_; }

 private:
  Matrix points_;
};

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline FiniteMetricSpace euclidean_metric(const PointCloud& pc) {
  Matrix d(pc.size(), std::vector<double>(pc.size(), 0.0));
  for (std::size_t i = 0; i < pc.size(); ++i)
    for (std::size_t j = i + 1; j < pc.size(); ++j) d[i][j] = d[j][i] = euclidean_distance(pc[i], pc[j]);
  return from_distance_matrix(d);
}

enum class SampleMode { grid, seeded_uniform };

/// Unit-norm samples of S^n_dim in R^{n_dim+1}. Grid mode gives the regular
/// count-gon for the circle and a Fibonacci lattice for S^2.
inline PointCloud sample_sphere(int n_dim, std::size_t count, SampleMode mode, std::uint64_t seed = 0) {
  if (n_dim < 1) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be >= 1");
  if (count < static_cast<std::size_t>(n_dim) + 2) {
    throw Error(ErrorKind::InvalidArgument, "need at least n_dim + 2 sample points");
  }
  Matrix pts;
  pts.reserve(count);
  if (mode == SampleMode::grid) {
    if (n_dim == 1) {
      for (std::size_t k = 0; k < count; ++k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        pts.push_back({std::cos(t), std::sin(t)});
      }
    } else if (n_dim == 2) {
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (std::size_t k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double t = golden * static_cast<double>(k);
        pts.push_back({r * std::cos(t), r * std::sin(t), z});
      }
    } else {
      throw Error(ErrorKind::InvalidArgument, "grid sampling supports only S^1 and S^2");
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (pts.size() < count) {
      std::vector<double> v(static_cast<std::size_t>(n_dim) + 1);
      double norm = 0.0;
      for (auto& x : v) {
        x = gauss(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      if (norm < 1e-12) continue;
      for (auto& x : v) x /= norm;
      pts.push_back(std::move(v));
    }
  }
  return PointCloud(std::move(pts));
}

/// Hausdorff distance (Euclidean chord) from a sample of the unit circle to
/// the whole circle: half the largest angular gap, converted to a chord.
inline double circle_sample_hausdorff(const PointCloud& pc) {
  if (pc.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "expected points in R^2");
  std::vector<double> angles;
  for (std::size_t i = 0; i < pc.size(); ++i) angles.push_back(std::atan2(pc[i][1], pc[i][0]));
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return 2.0 * std::sin(gap / 4.0);
}

/// Regular count-gon on the circle of circumference 2*pi with arc-length distances.
inline FiniteMetricSpace geodesic_circle_metric(std::size_t count) {
  if (count < 3) throw Error(ErrorKind::InvalidArgument, "geodesic circle needs at least 3 points");
  Matrix d(count, std::vector<double>(count, 0.0));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t steps = i > j ? i - j : j - i;
      const std::size_t hops = std::min(steps, count - steps);
      d[i][j] = 2.0 * std::numbers::pi * static_cast<double>(hops) / static_cast<double>(count);
    }
  return from_distance_matrix(d);
}

/// Space with n points at mutual distance `scale`.
inline FiniteMetricSpace equilateral_space(std::size_t n, double scale = 1.0) {
  Matrix d(n, std::vector<double>(n, scale));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  return from_distance_matrix(d);
}

/// max over x of min over u in U of d(x, u).
inline double hausdorff_subset(const FiniteMetricSpace& X, std::span<const std::size_t> U) {
  if (U.empty()) throw Error(ErrorKind::EmptySubset, "subset must be nonempty");
  double worst = 0.0;
  for (std::size_t x = 0; x < X.size(); ++x) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t u : U) {
      if (u >= X.size()) throw Error(ErrorKind::InvalidArgument, "subset index out of range");
      nearest = std::min(nearest, X(x, u));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

/// Farthest-point net: starts at point 0 and keeps adding the point farthest
/// from the current net (lowest index on ties) while that distance is >= eps.
/// Every point ends up strictly within eps of the net.
inline std::vector<std::size_t> epsilon_net(const FiniteMetricSpace& X, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  std::vector<std::size_t> net{0};
  std::vector<double> gap(X.row(0).begin(), X.row(0).end());
  for (;;) {
    std::size_t far = 0;
    for (std::size_t x = 1; x < X.size(); ++x)
      if (gap[x] > gap[far]) far = x;
    if (gap[far] < eps) break;
    net.push_back(far);
    for (std::size_t x = 0; x < X.size(); ++x) gap[x] = std::min(gap[x], X(x, far));
  }
  std::sort(net.begin(), net.end());
  return net;
}

/// Pair of maps X -> Y and Y -> X.
struct Correspondence {
  std::vector<std::size_t> phi;
  std::vector<std::size_t> psi;

  static Correspondence identity(std::size_t n) {
    Correspondence c;
    for (std::size_t i = 0; i < n; ++i) {
      c.phi.push_back(i);
      c.psi.push_back(i);
    }
    return c;
  }
};

/// max |d_X(x, x') - d_Y(f x, f x')|.
inline double distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, std::span<const std::size_t> f) {
  if (f.size() != X.size()) throw Error(ErrorKind::InvalidCorrespondence, "map length differs from source size");
  for (std::size_t v : f)
    if (v >= Y.size()) throw Error(ErrorKind::InvalidCorrespondence, "map image out of range");
  double worst = 0.0;
  for (std::size_t a = 0; a < X.size(); ++a)
    for (std::size_t b = a + 1; b < X.size(); ++b) worst = std::max(worst, std::abs(X(a, b) - Y(f[a], f[b])));
  return worst;
}

/// max |d_X(x, psi y) - d_Y(phi x, y)|.
inline double codistortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Correspondence& c) {
  double worst = 0.0;
  for (std::size_t x = 0; x < X.size(); ++x)
    for (std::size_t y = 0; y < Y.size(); ++y)
      worst = std::max(worst, std::abs(X(x, c.psi[y]) - Y(c.phi[x], y)));
  return worst;
}

/// Half the maximum of dis(phi), dis(psi) and codis(phi, psi); an upper bound
/// for the Gromov-Hausdorff distance.
inline double gh_upper_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const Correspondence& c) {
  const double dphi = distortion(X, Y, c.phi);
  const double dpsi = distortion(Y, X, c.psi);
  return 0.5 * std::max({dphi, dpsi, codistortion(X, Y, c)});
}

struct SpreadResult {
  double value = 0.0;
  bool exact = true;
};

namespace detail {

using Mask = std::uint64_t;

// Bron-Kerbosch with pivoting; stops at the first maximal clique whose
// closed neighbourhood covers every point.
inline bool dominating_clique(const std::vector<Mask>& closed, Mask r, Mask p, Mask x, Mask all) {
  if (p == 0 && x == 0) {
    Mask cover = 0;
    for (Mask m = r; m; m &= m - 1) cover |= closed[static_cast<std::size_t>(std::countr_zero(m))];
    return cover == all;
  }
  const Mask px = p | x;
  const std::size_t pivot = static_cast<std::size_t>(std::countr_zero(px));
  Mask candidates = p & ~(closed[pivot] & ~(Mask{1} << pivot));
  while (candidates) {
    const std::size_t v = static_cast<std::size_t>(std::countr_zero(candidates));
    const Mask bit = Mask{1} << v;
    const Mask nbr = closed[v] & ~bit;
    if (dominating_clique(closed, r | bit, p & nbr, x & nbr, all)) return true;
    p &= ~bit;
    x |= bit;
    candidates &= ~bit;
  }
  return false;
}

}  // namespace detail

/// Metric spread: inf over nonempty U of max(d_H(U, X), diam U).
///
/// The optimum is always an attained distance. For each candidate threshold
/// v (ascending) we look for a clique of the graph {d <= v} that dominates
/// every point; only maximal cliques need checking because enlarging U
/// never increases d_H. Above kSpreadExactCap points a greedy clique search
/// gives a certified upper bound flagged inexact.
inline SpreadResult metric_spread(const FiniteMetricSpace& X) {
  const std::size_t n = X.size();
  if (n <= 1) return {0.0, true};
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) values.push_back(X(i, j));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  auto closed_masks = [&](double v) {
    std::vector<detail::Mask> closed(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (X(i, j) <= v) closed[i] |= detail::Mask{1} << j;
    return closed;
  };

  if (n <= kSpreadExactCap) {
    const detail::Mask all = (detail::Mask{1} << n) - 1;
    for (double v : values) {
      if (detail::dominating_clique(closed_masks(v), 0, all, 0, all)) return {v, true};
    }
    return {values.back(), true};
  }

  // Greedy: grow a clique from each start vertex, adding the vertex that
  // covers the most uncovered points.
  auto greedy_covers = [&](double v) {
    for (std::size_t start = 0; start < n; ++start) {
      std::vector<std::size_t> clique{start};
      std::vector<bool> covered(n, false);
      std::size_t uncovered = n;
      auto absorb = [&](std::size_t u) {
        for (std::size_t x = 0; x < n; ++x)
          if (!covered[x] && X(x, u) <= v) {
            covered[x] = true;
            --uncovered;
          }
      };
      absorb(start);
      while (uncovered > 0) {
        std::size_t best = n, best_gain = 0;
        for (std::size_t u = 0; u < n; ++u) {
          bool ok = std::all_of(clique.begin(), clique.end(), [&](std::size_t c) { return c != u && X(c, u) <= v; });
          if (!ok) continue;
          std::size_t gain = 0;
          for (std::size_t x = 0; x < n; ++x)
            if (!covered[x] && X(x, u) <= v) ++gain;
          if (gain > best_gain) {
            best_gain = gain;
            best = u;
          }
        }
        if (best == n) break;
        clique.push_back(best);
        absorb(best);
      }
      if (uncovered == 0) return true;
    }
    return false;
  };
  for (double v : values)
    if (greedy_covers(v)) return {v, false};
  return {values.back(), false};
}

}  // namespace thk
