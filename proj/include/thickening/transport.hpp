#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "thickening/errors.hpp"
#include "thickening/measure.hpp"
#include "thickening/metric.hpp"
#include "thickening/pvalue.hpp"

namespace thk {

/// Coupling of two measures on the same n-point space, stored as an n x n
/// row-major matrix.
class TransportPlan {
 public:
  TransportPlan() = default;
  explicit TransportPlan(std::size_t n) : n_(n), mass_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return mass_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return mass_[i * n_ + j]; }

  /// Largest violation of the coupling constraints against alpha and beta.
  double marginal_error(const Measure& alpha, const Measure& beta) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        row += (*this)(i, j);
        col += (*this)(j, i);
        if ((*this)(i, j) < 0.0) worst = std::max(worst, -(*this)(i, j));
      }
      worst = std::max({worst, std::abs(row - alpha[i]), std::abs(col - beta[i])});
    }
    return worst;
  }

  /// sum mu_ij d_ij^q.
  double cost(const FiniteMetricSpace& X, const PValue& q) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if ((*this)(i, j) > 0.0) s += (*this)(i, j) * detail::power(X(i, j), q);
    return s;
  }

  /// Largest distance carried by a positive entry.
  double max_displacement(const FiniteMetricSpace& X) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if ((*this)(i, j) > 0.0) worst = std::max(worst, X(i, j));
    return worst;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> mass_;
};

struct TransportResult {
  double value = 0.0;
  TransportPlan plan;
};

namespace detail {

inline constexpr double kFlowTolerance = 1e-14;

inline void require_same_space(const Measure& a, const Measure& b) {
  if (!a.space().same_as(b.space())) throw Error(ErrorKind::SpaceMismatch, "measures live on different spaces");
}

// Successive shortest paths on the bipartite transportation network between
// the two supports. Bellman-Ford scans in index order, so the plan is
// reproducible. Returns flows indexed [source][sink] over the supports.
inline std::vector<std::vector<double>> min_cost_transport(std::span<const double> supply,
                                                           std::span<const double> demand,
                                                           const std::vector<std::vector<double>>& cost) {
  const std::size_t m = supply.size(), k = demand.size();
  std::vector<std::vector<double>> flow(m, std::vector<double>(k, 0.0));
  std::vector<double> left(supply.begin(), supply.end()), need(demand.begin(), demand.end());
  const double inf = std::numeric_limits<double>::infinity();
  // nodes: sources 0..m-1, sinks m..m+k-1
  // relaxations must beat rounding noise, else residual cycles of length
  // ~1e-16 * cost close the parent pointers into a loop
  double top = 0.0;
  for (const auto& row : cost)
    for (double c : row) top = std::max(top, c);
  const double slack = 1e-12 * std::max(1.0, top);
  std::vector<double> dist(m + k);
  std::vector<std::ptrdiff_t> parent(m + k);
  auto walk_limit_hit = [&](std::size_t steps) {
    if (steps > m + k) throw Error(ErrorKind::CertificationFailure, "cyclic augmenting path in transport solver");
  };
  for (std::size_t guard = 0; guard < 64 * (m + k) * (m + k) + 64; ++guard) {
    double remaining = 0.0;
    for (double x : left) remaining += x;
    if (remaining <= 1e-13) break;
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent.begin(), parent.end(), -1);
    for (std::size_t i = 0; i < m; ++i)
      if (left[i] > kFlowTolerance) dist[i] = 0.0;
    for (std::size_t round = 0; round < m + k; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (dist[i] == inf) continue;
        for (std::size_t j = 0; j < k; ++j) {
          const double nd = dist[i] + cost[i][j];
          if (nd < dist[m + j] - slack) {
            dist[m + j] = nd;
            parent[m + j] = static_cast<std::ptrdiff_t>(i);
            changed = true;
          }
        }
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (dist[m + j] == inf) continue;
        for (std::size_t i = 0; i < m; ++i) {
          if (flow[i][j] <= kFlowTolerance) continue;
          const double nd = dist[m + j] - cost[i][j];
          if (nd < dist[i] - slack) {
            dist[i] = nd;
            parent[i] = static_cast<std::ptrdiff_t>(m + j);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::size_t target = m + k;
    for (std::size_t j = 0; j < k; ++j)
      if (need[j] > kFlowTolerance && dist[m + j] < inf && (target == m + k || dist[m + j] < dist[target])) {
        target = m + j;
      }
    if (target == m + k) break;
    // bottleneck along the path
    double push = need[target - m];
    std::size_t v = target;
    for (std::size_t steps = 0; parent[v] >= 0; ++steps) {
      walk_limit_hit(steps);
      const std::size_t u = static_cast<std::size_t>(parent[v]);
      if (v < m) push = std::min(push, flow[v][u - m]);  // backward edge sink u -> source v
      v = u;
    }
    push = std::min(push, left[v]);
    if (push <= 0.0) break;
    left[v] -= push;
    need[target - m] -= push;
    v = target;
    while (parent[v] >= 0) {
      const std::size_t u = static_cast<std::size_t>(parent[v]);
      if (v >= m) {
        flow[u][v - m] += push;
      } else {
        flow[v][u - m] -= push;
      }
      v = u;
    }
  }
  return flow;
}

// Edmonds-Karp on source -> supports -> sink with only the allowed pairs.
// Returns the flow matrix and the total routed mass.
inline std::pair<std::vector<std::vector<double>>, double> max_flow_transport(
    std::span<const double> supply, std::span<const double> demand, const std::vector<std::vector<bool>>& allowed) {
  const std::size_t m = supply.size(), k = demand.size();
  std::vector<std::vector<double>> flow(m, std::vector<double>(k, 0.0));
  std::vector<double> left(supply.begin(), supply.end()), need(demand.begin(), demand.end());
  double total = 0.0;
  for (;;) {
    // BFS over sources (0..m-1) and sinks (m..m+k-1) from sources with residual supply
    std::vector<std::ptrdiff_t> parent(m + k, -2);
    std::queue<std::size_t> q;
    for (std::size_t i = 0; i < m; ++i)
      if (left[i] > kFlowTolerance) {
        parent[i] = -1;
        q.push(i);
      }
    std::size_t target = m + k;
    while (!q.empty() && target == m + k) {
      const std::size_t u = q.front();
      q.pop();
      if (u < m) {
        for (std::size_t j = 0; j < k; ++j)
          if (allowed[u][j] && parent[m + j] == -2) {
            parent[m + j] = static_cast<std::ptrdiff_t>(u);
            if (need[j] > kFlowTolerance) {
              target = m + j;
              break;
            }
            q.push(m + j);
          }
      } else {
        for (std::size_t i = 0; i < m; ++i)
          if (flow[i][u - m] > kFlowTolerance && parent[i] == -2) {
            parent[i] = static_cast<std::ptrdiff_t>(u);
            q.push(i);
          }
      }
    }
    if (target == m + k) break;
    double push = need[target - m];
    std::size_t v = target;
    while (parent[v] >= 0) {
      const std::size_t u = static_cast<std::size_t>(parent[v]);
      if (v < m) push = std::min(push, flow[v][u - m]);
      v = u;
    }
    push = std::min(push, left[v]);
    left[v] -= push;
    need[target - m] -= push;
    total += push;
    v = target;
    while (parent[v] >= 0) {
      const std::size_t u = static_cast<std::size_t>(parent[v]);
      if (v >= m) {
        flow[u][v - m] += push;
      } else {
        flow[v][u - m] -= push;
      }
      v = u;
    }
  }
  return {std::move(flow), total};
}

inline TransportPlan expand_plan(std::size_t n, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                                 const std::vector<std::vector<double>>& flow) {
  TransportPlan plan(n);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) plan(rows[a], cols[b]) = std::max(0.0, flow[a][b]);
  return plan;
}

inline std::vector<double> support_weights(const Measure& m) {
  std::vector<double> w;
  for (std::size_t i : m.support()) w.push_back(m[i]);
  return w;
}

}  // namespace detail

/// Exact q-Wasserstein distance (1 <= q < inf) with an optimal plan. The
/// transportation problem between the two supports is solved as a
/// min-cost flow; zero-weight points reappear as zero rows and columns.
inline TransportResult wasserstein(const Measure& alpha, const Measure& beta, const PValue& q) {
  detail::require_same_space(alpha, beta);
  if (q.is_infinite()) throw Error(ErrorKind::InvalidArgument, "use wasserstein_inf for q = inf");
  const auto& X = alpha.space();
  const auto& rows = alpha.support();
  const auto& cols = beta.support();
  std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) cost[a][b] = detail::power(X(rows[a], cols[b]), q);
  const auto flow = detail::min_cost_transport(detail::support_weights(alpha), detail::support_weights(beta), cost);
  TransportResult out;
  out.plan = detail::expand_plan(X.size(), rows, cols, flow);
  double total = 0.0;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) total += std::max(0.0, flow[a][b]) * cost[a][b];
  out.value = detail::root(std::max(0.0, total), q);
  return out;
}

/// inf-Wasserstein distance: the smallest attained distance t such that a
/// coupling exists using only pairs at distance <= t. Feasibility of each
/// threshold is a max-flow; the search runs over the sorted distinct
/// distances, so the result is always an attained distance.
inline TransportResult wasserstein_inf(const Measure& alpha, const Measure& beta) {
  detail::require_same_space(alpha, beta);
  const auto& X = alpha.space();
  const auto& rows = alpha.support();
  const auto& cols = beta.support();
  std::vector<double> thresholds;
  for (std::size_t i : rows)
    for (std::size_t j : cols) thresholds.push_back(X(i, j));
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const auto supply = detail::support_weights(alpha);
  const auto demand = detail::support_weights(beta);
  auto attempt = [&](double t) {
    std::vector<std::vector<bool>> allowed(rows.size(), std::vector<bool>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) allowed[a][b] = X(rows[a], cols[b]) <= t;
    return detail::max_flow_transport(supply, demand, allowed);
  };
  auto feasible = [](double routed) { return routed >= 1.0 - 1e-10; };

  std::size_t lo = 0, hi = thresholds.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(attempt(thresholds[mid]).second)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  auto [flow, routed] = attempt(thresholds[lo]);
  (void)routed;
  return {thresholds[lo], detail::expand_plan(X.size(), rows, cols, flow)};
}

/// Dispatches on q.
inline double wasserstein_distance(const Measure& alpha, const Measure& beta, const PValue& q) {
  return q.is_infinite() ? wasserstein_inf(alpha, beta).value : wasserstein(alpha, beta, q).value;
}

/// Pushes alpha onto the delta-net U with the partition of unity
/// zeta_u(x) proportional to max(0, delta - d(x, u)). The result is within
/// inf-Wasserstein distance < delta of alpha; this is re-checked.
inline Measure project_to_net(const Measure& alpha, std::span<const std::size_t> U, double delta) {
  const auto& X = alpha.space();
  if (U.empty() || !(hausdorff_subset(X, U) < delta)) {
    throw Error(ErrorKind::NotANet, "subset is not a delta-net of the space");
  }
  std::vector<double> w(X.size(), 0.0);
  for (std::size_t x : alpha.support()) {
    double total = 0.0;
    for (std::size_t u : U) total += std::max(0.0, delta - X(x, u));
    for (std::size_t u : U) w[u] += alpha[x] * std::max(0.0, delta - X(x, u)) / total;
  }
  Measure out(X, std::move(w));
  const double w_inf = wasserstein_inf(alpha, out).value;
  const double w_1 = wasserstein(alpha, out, PValue(1.0)).value;
  if (!(w_inf < delta) || !(w_1 < delta)) {
    throw Error(ErrorKind::CertificationFailure, "projection moved mass by delta or more");
  }
  return out;
}

}  // namespace thk
