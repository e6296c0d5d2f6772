#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <bit>
#include <numeric>
#include <optional>
#include <span>
#include <set>
#include <vector>

#include "thickening/errors.hpp"
#include "thickening/filtration.hpp"
#include "thickening/measure.hpp"
#include "thickening/metric.hpp"
#include "thickening/persistence.hpp"
#include "thickening/pvalue.hpp"
#include "thickening/transport.hpp"

namespace thk {

struct ClosedFormDiagram {
  std::size_t n = 0;
  PValue p;
  PersistenceDiagram diagram;
};

/// Closed-form diagram of both filtrations of the (n+1)-point equilateral
/// space: degree 0 has n intervals (0, (1/2)^{1/p}) and one (0, inf);
/// degree k in [1, n-1] has C(n, k+1) copies of
/// ((k/(k+1))^{1/p}, ((k+1)/(k+2))^{1/p}). At p = inf only degree 0
/// survives, with deaths at 1.
inline ClosedFormDiagram zn_diagram(std::size_t n, const PValue& p) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  ClosedFormDiagram out{n, p, {}};
  auto level = [&](double ratio) { return p.is_infinite() ? 1.0 : std::pow(ratio, 1.0 / p.value()); };
  for (std::size_t i = 0; i < n; ++i) out.diagram.add(0, {0.0, level(0.5)});
  out.diagram.add(0, {0.0, kInfinity});
  for (std::size_t k = 1; k < n; ++k) {
    out.diagram.touch(static_cast<int>(k));
    if (p.is_infinite()) continue;
    const double kk = static_cast<double>(k);
    const Interval iv{level(kk / (kk + 1.0)), level((kk + 1.0) / (kk + 2.0))};
    for (std::uint64_t m = 0; m < detail::binomial(n, k + 1); ++m) out.diagram.add(static_cast<int>(k), iv);
  }
  return out;
}

/// Degree-0 diagram of single-linkage clustering: minimum spanning tree
/// edge lengths times `scale` as deaths, plus one infinite interval.
inline PersistenceDiagram single_linkage_h0(const FiniteMetricSpace& X, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
  const std::size_t n = X.size();
  std::vector<bool> in_tree(n, false);
  std::vector<double> reach(n, kInfinity);
  PersistenceDiagram dgm;
  dgm.touch(0);
  reach[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && (next == n || reach[v] < reach[next])) next = v;
    in_tree[next] = true;
    if (step > 0) dgm.add(0, {0.0, scale * reach[next]});
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v]) reach[v] = std::min(reach[v], X(next, v));
  }
  dgm.add(0, {0.0, kInfinity});
  return dgm;
}

/// Scale at which an edge of unit length enters, measured directly on a
/// two-point space with both the p-diameter and p-radius programs. The two
/// must agree; the common value rescales single-linkage heights.
inline double edge_death_scale(const PValue& p) {
  const auto pair = equilateral_space(2, 1.0);
  const Simplex edge{0, 1};
  const double vr = vr_value(pair, edge, p);
  const double cech = cech_value(pair, edge, p);
  if (std::abs(vr - cech) > 1e-12) {
    throw Error(ErrorKind::CertificationFailure, "edge entry values disagree between diameter and radius");
  }
  return vr;
}

enum class Functional { diam_p, rad_p };

/// Brute-force maximum of diam_p or rad_p over the barycentric grid of
/// mesh `step` on the face S (|S| <= 4). Grid weights are integer
/// compositions, so coordinates are exact k/N fractions. Each refinement
/// re-grids a window of one coarse cell around the incumbent at a tenth
/// of the mesh.
inline double grid_maximize(const FiniteMetricSpace& X, const Simplex& S, Functional functional, const PValue& p,
                            double step, int refinements = 0) {
  if (S.size() > 4) throw Error(ErrorKind::FaceTooLarge, "grid search supports faces of at most 4 vertices");
  if (!(step > 0.0) || step > 1e-2 + 1e-15) throw Error(ErrorKind::InvalidArgument, "step must be in (0, 1e-2]");
  if (S.vertices().back() >= X.size()) throw Error(ErrorKind::InvalidSimplex, "vertex index out of range");
  const std::size_t k = S.size();
  if (k == 1) return 0.0;

  auto evaluate = [&](const std::vector<std::int64_t>& counts, std::int64_t denom) {
    std::vector<double> w(X.size(), 0.0);
    for (std::size_t i = 0; i < k; ++i) w[S[i]] = static_cast<double>(counts[i]) / static_cast<double>(denom);
    const Measure alpha(X, std::move(w));
    return functional == Functional::diam_p ? diam_p(alpha, p) : rad_p(alpha, p);
  };

  std::int64_t denom = static_cast<std::int64_t>(std::llround(1.0 / step));
  std::vector<std::int64_t> lo(k, 0), hi(k, denom), best_counts;
  double best = -1.0;
  for (int pass = 0; pass <= refinements; ++pass) {
    // enumerate compositions of denom with counts[i] in [lo[i], hi[i]]
    std::vector<std::int64_t> counts(k, 0);
    auto recurse = [&](auto&& self, std::size_t i, std::int64_t remaining) -> void {
      if (i + 1 == k) {
        if (remaining < lo[i] || remaining > hi[i]) return;
        counts[i] = remaining;
        const double v = evaluate(counts, denom);
        if (v > best) {
          best = v;
          best_counts = counts;
        }
        return;
      }
      for (std::int64_t c = lo[i]; c <= std::min(hi[i], remaining); ++c) {
        counts[i] = c;
        self(self, i + 1, remaining - c);
      }
    };
    recurse(recurse, 0, denom);
    if (pass == refinements) break;
    denom *= 10;
    for (std::size_t i = 0; i < k; ++i) {
      best_counts[i] *= 10;
      lo[i] = std::max<std::int64_t>(0, best_counts[i] - 10);
      hi[i] = std::min<std::int64_t>(denom, best_counts[i] + 10);
    }
  }
  return best;
}

namespace detail {

// Solves the transportation equalities restricted to a candidate basis (a
// spanning tree of the bipartite support graph) by peeling leaves.
inline std::optional<std::vector<std::vector<double>>> solve_on_tree(
    std::span<const double> supply, std::span<const double> demand,
    const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
  const std::size_t m = supply.size(), k = demand.size();
  std::vector<double> row(supply.begin(), supply.end()), col(demand.begin(), demand.end());
  std::vector<std::vector<double>> x(m, std::vector<double>(k, 0.0));
  std::vector<bool> done(cells.size(), false);
  std::vector<std::size_t> row_deg(m, 0), col_deg(k, 0);
  for (const auto& [i, j] : cells) {
    ++row_deg[i];
    ++col_deg[j];
  }
  for (std::size_t solved = 0; solved < cells.size(); ++solved) {
    std::size_t pick = cells.size();
    bool by_row = false;
    for (std::size_t c = 0; c < cells.size() && pick == cells.size(); ++c) {
      if (done[c]) continue;
      if (row_deg[cells[c].first] == 1) {
        pick = c;
        by_row = true;
      } else if (col_deg[cells[c].second] == 1) {
        pick = c;
      }
    }
    if (pick == cells.size()) return std::nullopt;  // contains a cycle
    const auto [i, j] = cells[pick];
    const double v = by_row ? row[i] : col[j];
    x[i][j] = v;
    row[i] -= v;
    col[j] -= v;
    done[pick] = true;
    --row_deg[i];
    --col_deg[j];
  }
  for (double r : row)
    if (std::abs(r) > 1e-12) return std::nullopt;
  for (double c : col)
    if (std::abs(c) > 1e-12) return std::nullopt;
  return x;
}

}  // namespace detail

/// Every vertex of the transportation polytope between the two supports
/// (each of size <= 3), found by trying all candidate bases of
/// |supp alpha| + |supp beta| - 1 cells and keeping the nonnegative,
/// distinct solutions.
inline std::vector<TransportPlan> enumerate_transport_vertices(const Measure& alpha, const Measure& beta) {
  if (!alpha.space().same_as(beta.space())) throw Error(ErrorKind::SpaceMismatch, "measures on different spaces");
  const auto& rows = alpha.support();
  const auto& cols = beta.support();
  if (rows.size() > 3 || cols.size() > 3) throw Error(ErrorKind::SupportTooLarge, "supports must have size <= 3");
  const std::size_t m = rows.size(), k = cols.size(), cells = m * k, basis = m + k - 1;
  std::vector<double> supply, demand;
  for (std::size_t i : rows) supply.push_back(alpha[i]);
  for (std::size_t j : cols) demand.push_back(beta[j]);

  std::vector<TransportPlan> out;
  std::vector<std::vector<double>> seen;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << cells); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != basis) continue;
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    for (std::size_t c = 0; c < cells; ++c)
      if (mask & (std::uint32_t{1} << c)) chosen.emplace_back(c / k, c % k);
    auto x = detail::solve_on_tree(supply, demand, chosen);
    if (!x) continue;
    bool nonnegative = true;
    std::vector<double> flat;
    for (const auto& r : *x)
      for (double v : r) {
        if (v < -1e-12) nonnegative = false;
        flat.push_back(std::max(0.0, v));
      }
    if (!nonnegative) continue;
    const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const std::vector<double>& other) {
      for (std::size_t t = 0; t < flat.size(); ++t)
        if (std::abs(flat[t] - other[t]) > 1e-12) return false;
      return true;
    });
    if (duplicate) continue;
    seen.push_back(flat);
    TransportPlan plan(alpha.size());
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < k; ++b) plan(rows[a], cols[b]) = flat[a * k + b];
    if (plan.marginal_error(alpha, beta) > 1e-9) {
      throw Error(ErrorKind::CertificationFailure, "enumerated vertex is not a coupling");
    }
    out.push_back(std::move(plan));
  }
  return out;
}

}  // namespace thk
