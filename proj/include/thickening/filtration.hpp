#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "thickening/errors.hpp"
#include "thickening/linear_program.hpp"
#include "thickening/measure.hpp"
#include "thickening/metric.hpp"
#include "thickening/parallel.hpp"
#include "thickening/pvalue.hpp"

namespace thk {

/// Largest face handled by the exact p-diameter maximization.
inline constexpr std::size_t kQpExactCap = 16;

/// Relative slack allowed between a simplex's own optimum and its faces'
/// optima before the complex is declared non-monotone.
inline constexpr double kMonotoneTolerance = 1e-9;

/// Sorted, duplicate-free list of vertex indices.
class Simplex {
 public:
  Simplex() = default;
  Simplex(std::initializer_list<std::size_t> v) : Simplex(std::vector<std::size_t>(v)) {}
  explicit Simplex(std::vector<std::size_t> v) : v_(std::move(v)) {
    if (v_.empty()) throw Error(ErrorKind::InvalidSimplex, "simplex needs at least one vertex");
    for (std::size_t i = 1; i < v_.size(); ++i)
      if (v_[i] <= v_[i - 1]) throw Error(ErrorKind::InvalidSimplex, "vertices must be strictly increasing");
  }

  std::size_t size() const { return v_.size(); }
  int dim() const { return static_cast<int>(v_.size()) - 1; }
  std::size_t operator[](std::size_t i) const { return v_[i]; }
  const std::vector<std::size_t>& vertices() const { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  /// Codimension-one faces, the i-th omitting vertex i.
  std::vector<Simplex> facets() const {
    std::vector<Simplex> out;
    if (v_.size() < 2) return out;
    for (std::size_t skip = 0; skip < v_.size(); ++skip) {
      std::vector<std::size_t> f;
      for (std::size_t i = 0; i < v_.size(); ++i)
        if (i != skip) f.push_back(v_[i]);
      out.emplace_back(std::move(f));
    }
    return out;
  }

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex& a, const Simplex& b) { return a.v_ <=> b.v_; }

 private:
  std::vector<std::size_t> v_;
};

enum class FiltrationKind { vietoris_rips, cech, ambient_cech, classical_vr, classical_cech };

inline std::string_view kind_name(FiltrationKind k) {
  switch (k) {
    case FiltrationKind::vietoris_rips: return "vr";
    case FiltrationKind::cech: return "cech";
    case FiltrationKind::ambient_cech: return "ambient_cech";
    case FiltrationKind::classical_vr: return "classical_vr";
    case FiltrationKind::classical_cech: return "classical_cech";
  }
  return "unknown";
}

enum class ClassicalKind { vr_inf, cech_inf };

struct FiltrationEntry {
  Simplex simplex;
  double value = 0.0;
};

/// Every simplex of dimension <= max_dim on the space's points, each with
/// the parameter value at which it enters. Entries are sorted by
/// (value, dimension, vertices). A simplex counts as present for every
/// parameter strictly above its value.
struct FilteredComplex {
  FiniteMetricSpace space;
  int max_dim = 0;
  FiltrationKind kind = FiltrationKind::cech;
  PValue p = PValue::infinity();
  std::vector<FiltrationEntry> entries;
  /// Set for finite-p Vietoris-Rips skeleton filtrations: degree >= 1
  /// agreement with the thickening is not established.
  bool conjectural_higher_degrees = false;

  /// Degrees whose homology is fully determined by the stored skeleton.
  int reliable_max_degree() const {
    return max_dim >= static_cast<int>(space.size()) - 1 ? max_dim : max_dim - 1;
  }
};

namespace detail {

/// Optimum of the max-min program
///   maximize t  s.t.  t <= sum_i a_i cost[i][j] for every center j,
///                     sum_i a_i <= 1, a >= 0.
/// With nonnegative costs the optimum puts all mass on the simplex, so this
/// is max over the face of min_j sum_i a_i cost[i][j].
template <class Scalar>
LpResult<Scalar> cech_tableau(const std::vector<std::vector<Scalar>>& cost) {
  const std::size_t s = cost.size();
  const std::size_t centers = s == 0 ? 0 : cost.front().size();
  std::vector<std::vector<Scalar>> A;
  std::vector<Scalar> b;
  A.reserve(centers + 1);
  for (std::size_t j = 0; j < centers; ++j) {
    std::vector<Scalar> row(s + 1, Scalar(0));
    for (std::size_t i = 0; i < s; ++i) row[i] = -cost[i][j];
    row[s] = Scalar(1);
    A.push_back(std::move(row));
    b.push_back(Scalar(0));
  }
  std::vector<Scalar> simplex_row(s + 1, Scalar(1));
  simplex_row[s] = Scalar(0);
  A.push_back(std::move(simplex_row));
  b.push_back(Scalar(1));
  std::vector<Scalar> c(s + 1, Scalar(0));
  c[s] = Scalar(1);
  return maximize(A, b, c);
}

/// Largest relative gap between the floating optimum's primal and dual
/// bounds that is accepted without an exact re-solve.
inline constexpr double kLpCertificateGap = 1e-12;

/// Costs are divided by their maximum before solving. For double, the
/// tableau's primal weights a and center multipliers y are normalized into
/// a lower bound min_j (C^T a)_j and an upper bound max_i (C y)_i on the
/// optimum; if they differ by more than kLpCertificateGap times the upper
/// bound, the program is re-solved in exact rational arithmetic on the same
/// (exactly converted) costs. The returned value is the certified lower bound.
template <class Scalar>
LpResult<Scalar> cech_program(const std::vector<std::vector<Scalar>>& cost) {
  const std::size_t s = cost.size();
  const std::size_t centers = s == 0 ? 0 : cost.front().size();
  Scalar top(0);
  for (const auto& row : cost)
    for (const auto& v : row) top = std::max(top, v);
  if (!(top > Scalar(0))) {
    LpResult<Scalar> zero;
    zero.x.assign(s + 1, Scalar(0));
    if (s > 0) zero.x[0] = Scalar(1);
    return zero;
  }
  std::vector<std::vector<Scalar>> unit = cost;
  for (auto& row : unit)
    for (auto& v : row) v /= top;
  auto res = cech_tableau(unit);

  if constexpr (std::is_floating_point_v<Scalar>) {
    auto lower_bound = [&](std::vector<double> a) {
      double total = 0.0;
      for (auto& v : a) total += (v = std::max(0.0, v));
      if (!(total > 0.0)) return 0.0;
      double low = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < centers; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < s; ++i) v += a[i] * unit[i][j];
        low = std::min(low, v / total);
      }
      return low;
    };
    const std::vector<double> a(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(s));
    double low = lower_bound(a), high = std::numeric_limits<double>::infinity();
    double ysum = 0.0;
    for (std::size_t j = 0; j < centers; ++j) ysum += std::max(0.0, res.dual[j]);
    if (ysum > 0.0) {
      high = 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < centers; ++j) v += unit[i][j] * std::max(0.0, res.dual[j]);
        high = std::max(high, v / ysum);
      }
    }
    if (res.status != LpStatus::optimal || !(high - low <= kLpCertificateGap * high)) {
      using Rational = boost::multiprecision::cpp_rational;
      std::vector<std::vector<Rational>> exact(s, std::vector<Rational>(centers));
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < centers; ++j) exact[i][j] = Rational(unit[i][j]);
      const auto ex = cech_tableau(exact);
      res.x.assign(s + 1, 0.0);
      for (std::size_t i = 0; i <= s; ++i) res.x[i] = static_cast<double>(ex.x[i]);
      res.status = ex.status;
      low = static_cast<double>(ex.value);
    }
    res.value = low;
  }
  res.value *= top;
  res.x.back() = res.value;
  return res;
}

/// Value of a^T Q a at the relative-interior stationary point of the face,
/// i.e. the solution of Q a = lambda 1, sum a = 1, when it exists and is
/// nonnegative. Singular systems are skipped: the quadratic is then
/// constant along a line through the face and its maximum is attained on a
/// proper face.
template <class Scalar>
std::optional<Scalar> stationary_value(const std::vector<std::vector<Scalar>>& Q) {
  const std::size_t k = Q.size();
  if (k == 1) return Q[0][0];
  const std::size_t N = k + 1;
  std::vector<std::vector<Scalar>> M(N, std::vector<Scalar>(N + 1, Scalar(0)));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) M[i][j] = Q[i][j];
    M[i][k] = Scalar(-1);
    M[k][i] = Scalar(1);
  }
  M[k][N] = Scalar(1);
  Scalar scale(0);
  for (const auto& row : Q)
    for (const auto& v : row) scale = std::max(scale, v < Scalar(0) ? Scalar(-v) : v);
  Scalar pivot_floor = lp_epsilon<Scalar>() * 100 * std::max(Scalar(1), scale);
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t best = col;
    auto mag = [](const Scalar& v) { return v < Scalar(0) ? Scalar(-v) : v; };
    for (std::size_t r = col + 1; r < N; ++r)
      if (mag(M[r][col]) > mag(M[best][col])) best = r;
    if (!(mag(M[best][col]) > pivot_floor)) return std::nullopt;
    std::swap(M[col], M[best]);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col || M[r][col] == Scalar(0)) continue;
      const Scalar f = M[r][col] / M[col][col];
      for (std::size_t c = col; c <= N; ++c) M[r][c] -= f * M[col][c];
    }
  }
  std::vector<Scalar> a(k);
  Scalar total(0);
  for (std::size_t i = 0; i < k; ++i) {
    a[i] = M[i][N] / M[i][i];
    if (a[i] < Scalar(0)) {
      if constexpr (std::is_floating_point_v<Scalar>) {
        if (a[i] < Scalar(-1e-12)) return std::nullopt;
        a[i] = Scalar(0);
      } else {
        return std::nullopt;
      }
    }
    total += a[i];
  }
  if (!(total > Scalar(0))) return std::nullopt;
  Scalar value(0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) value += a[i] * a[j] * Q[i][j] / (total * total);
  return value;
}

inline void check_simplex(const FiniteMetricSpace& X, const Simplex& S) {
  if (S.size() == 0) throw Error(ErrorKind::InvalidSimplex, "empty simplex");
  if (S.vertices().back() >= X.size()) throw Error(ErrorKind::InvalidSimplex, "vertex index out of range");
}

// Distances divided by `scale` before powering, so large p neither
// overflows nor underflows.
inline std::vector<std::vector<double>> powered_block(const FiniteMetricSpace& X, const Simplex& S,
                                                      const PValue& p, double scale) {
  std::vector<std::vector<double>> Q(S.size(), std::vector<double>(S.size()));
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = 0; b < S.size(); ++b) Q[a][b] = power(X(S[a], S[b]) / scale, p);
  return Q;
}

// Cech value for finite p, centers drawn from `centers` via dist(i, j).
template <class Dist>
double cech_finite_value(const Simplex& S, std::size_t centers, const PValue& p, Dist&& dist) {
  double scale = 0.0;
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t j = 0; j < centers; ++j) scale = std::max(scale, dist(S[a], j));
  if (scale == 0.0) return 0.0;
  std::vector<std::vector<double>> cost(S.size(), std::vector<double>(centers));
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t j = 0; j < centers; ++j) cost[a][j] = power(dist(S[a], j) / scale, p);
  const auto res = cech_program(cost);
  return scale * root(std::max(0.0, res.value), p);
}

inline double max_pairwise(const FiniteMetricSpace& X, const Simplex& S) {
  double scale = 0.0;
  for (std::size_t a : S)
    for (std::size_t b : S) scale = std::max(scale, X(a, b));
  return scale;
}

// Root of the interior stationary value of the face alone (0 if none).
inline double vr_interior_value(const FiniteMetricSpace& X, const Simplex& S, const PValue& p) {
  const double scale = max_pairwise(X, S);
  if (scale == 0.0) return 0.0;
  const auto v = stationary_value(powered_block(X, S, p, scale));
  return v ? scale * root(std::max(0.0, *v), p) : 0.0;
}

}  // namespace detail

/// Maximum over the face of rad_p, as the p-th root of the max-min program
/// whose centers range over every point of X.
inline double cech_value(const FiniteMetricSpace& X, const Simplex& S, const PValue& p) {
  detail::check_simplex(X, S);
  if (p.is_infinite()) return rad_p(Measure::uniform_on(X, S.vertices()), p);
  return detail::cech_finite_value(S, X.size(), p, [&](std::size_t i, std::size_t j) { return X(i, j); });
}

/// Same program as cech_value with centers ranging over the ambient space.
inline double ambient_cech_value(const Embedding& e, const Simplex& S, const PValue& p) {
  detail::check_simplex(e.inner(), S);
  if (p.is_infinite()) return rad_p_ambient(Measure::uniform_on(e.inner(), S.vertices()), e, p);
  const auto& M = e.ambient();
  return detail::cech_finite_value(S, M.size(), p, [&](std::size_t i, std::size_t m) { return M(e[i], m); });
}

/// Maximum over the face of diam_p. The quadratic a^T D^p a is maximized
/// exactly by visiting every sub-face and keeping its interior stationary
/// point when feasible.
inline double vr_value(const FiniteMetricSpace& X, const Simplex& S, const PValue& p) {
  detail::check_simplex(X, S);
  if (p.is_infinite()) return diam_p(Measure::uniform_on(X, S.vertices()), p);
  if (S.size() > kQpExactCap) {
    throw Error(ErrorKind::FaceTooLarge, "face has " + std::to_string(S.size()) + " vertices, cap is " +
                                             std::to_string(kQpExactCap));
  }
  const double scale = detail::max_pairwise(X, S);
  if (scale == 0.0) return 0.0;
  const auto Q = detail::powered_block(X, S, p, scale);
  double best = 0.0;
  const std::uint32_t subsets = std::uint32_t{1} << S.size();
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < S.size(); ++i)
      if (mask & (std::uint32_t{1} << i)) idx.push_back(i);
    std::vector<std::vector<double>> sub(idx.size(), std::vector<double>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) sub[a][b] = Q[idx[a]][idx[b]];
    if (auto v = detail::stationary_value(sub)) best = std::max(best, *v);
  }
  return scale * detail::root(best, p);
}

/// The classical complexes: vr_inf is the largest pairwise distance,
/// cech_inf the smallest eccentricity of the face over centers in X.
inline double classical_value(const FiniteMetricSpace& X, const Simplex& S, ClassicalKind kind) {
  detail::check_simplex(X, S);
  if (kind == ClassicalKind::vr_inf) {
    double worst = 0.0;
    for (std::size_t a : S)
      for (std::size_t b : S) worst = std::max(worst, X(a, b));
    return worst;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < X.size(); ++c) {
    double ecc = 0.0;
    for (std::size_t a : S) ecc = std::max(ecc, X(c, a));
    best = std::min(best, ecc);
  }
  return best;
}

namespace detail {

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Colexicographic rank of a sorted vertex list among subsets of equal size.
inline std::uint64_t colex_rank(std::span<const std::size_t> v) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < v.size(); ++i) r += binomial(v[i], i + 1);
  return r;
}

inline std::vector<std::vector<Simplex>> all_simplices(std::size_t n, int max_dim) {
  std::vector<std::vector<Simplex>> levels(static_cast<std::size_t>(max_dim) + 1);
  for (int d = 0; d <= max_dim; ++d) {
    const std::size_t k = static_cast<std::size_t>(d) + 1;
    auto& out = levels[static_cast<std::size_t>(d)];
    out.resize(binomial(n, k));
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    for (;;) {
      out[colex_rank(comb)] = Simplex(comb);
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return levels;
}

}  // namespace detail

/// Assembles a filtered complex given per-simplex "own" values. `own(S)`
/// returns the optimum of the functional on the closed face S, except for
/// finite-p Vietoris-Rips where it is the interior stationary value only
/// and faces are folded in here. Values of faces never exceed those of
/// their cofaces; a violation beyond kMonotoneTolerance raises
/// NonMonotoneComplex.
template <class OwnValue>
FilteredComplex assemble_complex(const FiniteMetricSpace& X, int max_dim, FiltrationKind kind, const PValue& p,
                                 bool fold_faces, OwnValue&& own) {
  if (max_dim < 0) throw Error(ErrorKind::InvalidArgument, "max_dim must be >= 0");
  if (max_dim > static_cast<int>(X.size()) - 1) {
    throw Error(ErrorKind::InvalidArgument, "max_dim exceeds n - 1");
  }
  auto levels = detail::all_simplices(X.size(), max_dim);
  std::vector<std::vector<double>> values(levels.size());
  for (std::size_t d = 0; d < levels.size(); ++d) {
    auto& vals = values[d];
    vals.assign(levels[d].size(), 0.0);
    if (d == 0) continue;
    parallel_for(levels[d].size(), [&](std::size_t i) { vals[i] = own(levels[d][i]); });
    for (std::size_t i = 0; i < levels[d].size(); ++i) {
      double faces = 0.0;
      for (const auto& f : levels[d][i].facets()) faces = std::max(faces, values[d - 1][detail::colex_rank(f.vertices())]);
      if (fold_faces) {
        vals[i] = std::max(vals[i], faces);
      } else {
        if (vals[i] < faces - kMonotoneTolerance * std::max(1.0, faces)) {
          throw Error(ErrorKind::NonMonotoneComplex, "face value exceeds coface value");
        }
        vals[i] = std::max(vals[i], faces);
      }
    }
  }
  FilteredComplex fc;
  fc.space = X;
  fc.max_dim = max_dim;
  fc.kind = kind;
  fc.p = p;
  for (std::size_t d = 0; d < levels.size(); ++d)
    for (std::size_t i = 0; i < levels[d].size(); ++i)
      fc.entries.push_back({std::move(levels[d][i]), values[d][i]});
  std::sort(fc.entries.begin(), fc.entries.end(), [](const FiltrationEntry& a, const FiltrationEntry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.simplex.dim() != b.simplex.dim()) return a.simplex.dim() < b.simplex.dim();
    return a.simplex < b.simplex;
  });
  return fc;
}

/// p-Vietoris-Rips or p-Cech filtration of X. At p = inf the values come
/// from the measure functionals evaluated on each face's barycenter.
inline FilteredComplex build_complex(const FiniteMetricSpace& X, const PValue& p, FiltrationKind kind, int max_dim) {
  switch (kind) {
    case FiltrationKind::vietoris_rips: {
      if (p.is_infinite()) {
        return assemble_complex(X, max_dim, kind, p, false, [&](const Simplex& S) { return vr_value(X, S, p); });
      }
      if (static_cast<std::size_t>(max_dim) + 1 > kQpExactCap) {
        throw Error(ErrorKind::FaceTooLarge, "max_dim + 1 exceeds the exact maximization cap");
      }
      // the closed-face maximum is the largest interior value over sub-faces
      auto fc = assemble_complex(X, max_dim, kind, p, true,
                                 [&](const Simplex& S) { return detail::vr_interior_value(X, S, p); });
      fc.conjectural_higher_degrees = true;
      return fc;
    }
    case FiltrationKind::cech:
      return assemble_complex(X, max_dim, kind, p, false, [&](const Simplex& S) { return cech_value(X, S, p); });
    case FiltrationKind::classical_vr:
      return assemble_complex(X, max_dim, kind, PValue::infinity(), false,
                              [&](const Simplex& S) { return classical_value(X, S, ClassicalKind::vr_inf); });
    case FiltrationKind::classical_cech:
      return assemble_complex(X, max_dim, kind, PValue::infinity(), false,
                              [&](const Simplex& S) { return classical_value(X, S, ClassicalKind::cech_inf); });
    case FiltrationKind::ambient_cech:
      throw Error(ErrorKind::InvalidArgument, "ambient Cech needs an embedding; use build_ambient_cech_complex");
  }
  throw Error(ErrorKind::InvalidArgument, "unknown filtration kind");
}

inline FilteredComplex build_ambient_cech_complex(const Embedding& e, const PValue& p, int max_dim) {
  return assemble_complex(e.inner(), max_dim, FiltrationKind::ambient_cech, p, false,
                          [&](const Simplex& S) { return ambient_cech_value(e, S, p); });
}

}  // namespace thk
