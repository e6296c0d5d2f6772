#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "thickening/errors.hpp"
#include "thickening/filtration.hpp"

namespace thk {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Intervals shorter than this (relative to their endpoints) count as zero
/// length and are dropped.
inline constexpr double kZeroLengthTolerance = 1e-10;

struct Interval {
  double birth = 0.0;
  double death = kInfinity;

  bool finite() const { return std::isfinite(death); }
  double length() const { return death - birth; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend bool operator<(const Interval& a, const Interval& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  }
};

/// Multiset of intervals per homology degree, each degree kept sorted.
class PersistenceDiagram {
 public:
  void add(int degree, Interval iv) {
    auto& list = degrees_[degree];
    list.insert(std::upper_bound(list.begin(), list.end(), iv), iv);
  }

  /// Ensures the degree is listed even when it has no intervals.
  void touch(int degree) { degrees_[degree]; }

  const std::vector<Interval>& intervals(int degree) const {
    static const std::vector<Interval> empty;
    auto it = degrees_.find(degree);
    return it == degrees_.end() ? empty : it->second;
  }

  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& [k, v] : degrees_) out.push_back(k);
    return out;
  }

  /// Keeps only degrees <= max_degree.
  PersistenceDiagram truncated(int max_degree) const {
    PersistenceDiagram out;
    for (const auto& [k, v] : degrees_)
      if (k <= max_degree) out.degrees_[k] = v;
    return out;
  }

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

 private:
  std::map<int, std::vector<Interval>> degrees_;
};

/// Persistent homology over Z/2 by standard column reduction, simplices in
/// the complex's (value, dimension, vertices) order. Degrees 0..max_dim are
/// listed; the top degree of a truncated skeleton may carry infinite
/// intervals that a larger skeleton would close (see
/// FilteredComplex::reliable_max_degree).
inline PersistenceDiagram compute_diagram(const FilteredComplex& fc) {
  const auto& entries = fc.entries;
  const std::size_t N = entries.size();
  std::map<std::vector<std::size_t>, std::size_t> position;
  for (std::size_t i = 0; i < N; ++i) position.emplace(entries[i].simplex.vertices(), i);
  for (std::size_t i = 1; i < N; ++i) {
    const auto& a = entries[i - 1];
    const auto& b = entries[i];
    if (a.value > b.value || (a.value == b.value && (a.simplex.dim() > b.simplex.dim() ||
                                                     (a.simplex.dim() == b.simplex.dim() && b.simplex < a.simplex)))) {
      throw Error(ErrorKind::NonMonotoneComplex, "entries are not in filtration order");
    }
  }

  std::vector<std::vector<std::size_t>> columns(N);
  for (std::size_t j = 0; j < N; ++j) {
    for (const auto& f : entries[j].simplex.facets()) {
      auto it = position.find(f.vertices());
      if (it == position.end()) throw Error(ErrorKind::NonMonotoneComplex, "missing face");
      if (it->second >= j) throw Error(ErrorKind::NonMonotoneComplex, "face enters after its coface");
      columns[j].push_back(it->second);
    }
    std::sort(columns[j].begin(), columns[j].end());
  }

  std::unordered_map<std::size_t, std::size_t> pivot_of;  // low row -> column
  std::vector<bool> paired(N, false);
  PersistenceDiagram dgm;
  for (int k = 0; k <= fc.max_dim; ++k) dgm.touch(k);

  auto keep = [](double b, double d) {
    return d - b > kZeroLengthTolerance * std::max({1.0, std::abs(b), std::abs(d)});
  };

  std::vector<std::size_t> scratch;
  for (std::size_t j = 0; j < N; ++j) {
    auto& col = columns[j];
    while (!col.empty()) {
      auto it = pivot_of.find(col.back());
      if (it == pivot_of.end()) break;
      const auto& other = columns[it->second];
      scratch.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(scratch));
      col.swap(scratch);
    }
    if (col.empty()) continue;
    const std::size_t low = col.back();
    pivot_of.emplace(low, j);
    paired[low] = paired[j] = true;
    const double b = entries[low].value, d = entries[j].value;
    if (keep(b, d)) dgm.add(entries[low].simplex.dim(), {b, d});
  }
  for (std::size_t i = 0; i < N; ++i)
    if (!paired[i]) dgm.add(entries[i].simplex.dim(), {entries[i].value, kInfinity});
  return dgm;
}

/// A realizing partial matching: `pairs` index intervals of the two
/// diagrams' degree lists; the rest are matched to the diagonal.
struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_first;
  std::vector<std::size_t> unmatched_second;
};

struct BottleneckResult {
  double value = 0.0;
  Matching matching;
};

namespace detail {

// Hopcroft-Karp on a dense bipartite graph with equal sides.
class HopcroftKarp {
 public:
  explicit HopcroftKarp(std::vector<std::vector<std::size_t>> adj, std::size_t right)
      : adj_(std::move(adj)), left_(adj_.size()), right_(right), match_l_(left_, kNone), match_r_(right, kNone),
        dist_(left_) {}

  std::size_t run() {
    std::size_t size = 0;
    while (bfs())
      for (std::size_t u = 0; u < left_; ++u)
        if (match_l_[u] == kNone && dfs(u)) ++size;
    return size;
  }

  const std::vector<std::size_t>& match_left() const { return match_l_; }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

 private:
  bool bfs() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t u = 0; u < left_; ++u) {
      if (match_l_[u] == kNone) {
        dist_[u] = 0;
        q.push(u);
      } else {
        dist_[u] = kNone;
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj_[u]) {
        const std::size_t w = match_r_[v];
        if (w == kNone) {
          found = true;
        } else if (dist_[w] == kNone) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      const std::size_t w = match_r_[v];
      if (w == kNone || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_l_[u] = v;
        match_r_[v] = u;
        return true;
      }
    }
    dist_[u] = kNone;
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::size_t left_, right_;
  std::vector<std::size_t> match_l_, match_r_, dist_;
};

}  // namespace detail

/// Bottleneck distance in one degree. Finite intervals are matched by
/// threshold search over the candidate costs (pairwise sup-norm distances
/// and half-lengths) with a perfect-matching test on the usual graph that
/// adds one diagonal copy per opposite interval. Infinite intervals match
/// only each other, by sorted birth; unequal counts give +inf.
inline BottleneckResult bottleneck(const PersistenceDiagram& D1, const PersistenceDiagram& D2, int degree) {
  const auto& A = D1.intervals(degree);
  const auto& B = D2.intervals(degree);
  std::vector<std::size_t> fa, fb, ia, ib;
  for (std::size_t i = 0; i < A.size(); ++i) (A[i].finite() ? fa : ia).push_back(i);
  for (std::size_t j = 0; j < B.size(); ++j) (B[j].finite() ? fb : ib).push_back(j);

  BottleneckResult out;
  if (ia.size() != ib.size()) {
    out.value = kInfinity;
    out.matching.unmatched_first = ia;
    out.matching.unmatched_second = ib;
    return out;
  }
  // A and B are sorted by (birth, death) and all infinite deaths are equal,
  // so ia and ib are already in birth order.
  double inf_part = 0.0;
  for (std::size_t k = 0; k < ia.size(); ++k) {
    inf_part = std::max(inf_part, std::abs(A[ia[k]].birth - B[ib[k]].birth));
    out.matching.pairs.emplace_back(ia[k], ib[k]);
  }

  const std::size_t n1 = fa.size(), n2 = fb.size();
  auto pair_cost = [&](std::size_t a, std::size_t b) {
    return std::max(std::abs(A[fa[a]].birth - B[fb[b]].birth), std::abs(A[fa[a]].death - B[fb[b]].death));
  };
  auto diag_a = [&](std::size_t a) { return 0.5 * A[fa[a]].length(); };
  auto diag_b = [&](std::size_t b) { return 0.5 * B[fb[b]].length(); };

  std::vector<double> candidates{0.0};
  for (std::size_t a = 0; a < n1; ++a) {
    candidates.push_back(diag_a(a));
    for (std::size_t b = 0; b < n2; ++b) candidates.push_back(pair_cost(a, b));
  }
  for (std::size_t b = 0; b < n2; ++b) candidates.push_back(diag_b(b));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Left: A's finite intervals, then diagonal copies of B's. Right: B's
  // finite intervals, then diagonal copies of A's.
  auto solve = [&](double t) {
    std::vector<std::vector<std::size_t>> adj(n1 + n2);
    for (std::size_t a = 0; a < n1; ++a) {
      for (std::size_t b = 0; b < n2; ++b)
        if (pair_cost(a, b) <= t) adj[a].push_back(b);
      if (diag_a(a) <= t) adj[a].push_back(n2 + a);
    }
    for (std::size_t b = 0; b < n2; ++b) {
      if (diag_b(b) <= t) adj[n1 + b].push_back(b);
      for (std::size_t a = 0; a < n1; ++a) adj[n1 + b].push_back(n2 + a);
    }
    detail::HopcroftKarp hk(std::move(adj), n1 + n2);
    const std::size_t size = hk.run();
    return std::make_pair(size == n1 + n2, hk.match_left());
  };

  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (solve(candidates[mid]).first) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const auto [ok, match] = solve(candidates[lo]);
  (void)ok;
  std::vector<bool> b_used(n2, false);
  for (std::size_t a = 0; a < n1; ++a) {
    if (match[a] < n2) {
      out.matching.pairs.emplace_back(fa[a], fb[match[a]]);
      b_used[match[a]] = true;
    } else {
      out.matching.unmatched_first.push_back(fa[a]);
    }
  }
  for (std::size_t b = 0; b < n2; ++b)
    if (!b_used[b]) out.matching.unmatched_second.push_back(fb[b]);
  std::sort(out.matching.pairs.begin(), out.matching.pairs.end());
  out.value = std::max(inf_part, candidates[lo]);
  return out;
}

}  // namespace thk
