#pragma once

#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

namespace thk {

/// Pivot tolerance per scalar type; exact types use zero.
template <class Scalar>
Scalar lp_epsilon() {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return Scalar(1e-12);
  } else {
    return Scalar(0);
  }
}

enum class LpStatus { optimal, infeasible, unbounded };

template <class Scalar>
struct LpResult {
  LpStatus status = LpStatus::optimal;
  Scalar value{};
  std::vector<Scalar> x;
  std::vector<Scalar> dual;  // one multiplier per constraint row
};

/// Dense tableau simplex for
///
///     maximize c.x  subject to  A x <= b,  x >= 0.
///
/// Pivoting follows Bland's rule (lowest variable index enters, lowest basic
/// index breaks ratio ties), so runs are deterministic and never cycle.
/// Negative right-hand sides go through an auxiliary phase.
/// Works with double or an exact rational type.
template <class Scalar>
class DenseSimplex {
 public:
  using Row = std::vector<Scalar>;

  DenseSimplex(const std::vector<Row>& A, const Row& b, const Row& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        nonbasic_(static_cast<std::size_t>(n_ + 1)),
        basic_(static_cast<std::size_t>(m_)),
        t_(static_cast<std::size_t>(m_ + 2), Row(static_cast<std::size_t>(n_ + 2), Scalar(0))) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) at(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      basic_[static_cast<std::size_t>(i)] = n_ + i;
      at(i, n_) = Scalar(-1);
      at(i, n_ + 1) = b[static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[static_cast<std::size_t>(j)] = j;
      at(m_, j) = -c[static_cast<std::size_t>(j)];
    }
    nonbasic_[static_cast<std::size_t>(n_)] = -1;
    at(m_ + 1, n_) = Scalar(1);
  }

  LpResult<Scalar> solve() {
    LpResult<Scalar> out;
    const Scalar eps = lp_epsilon<Scalar>();
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    if (m_ > 0 && at(r, n_ + 1) < -eps) {
      pivot(r, n_);
      if (!run(2) || at(m_ + 1, n_ + 1) < -eps) {
        out.status = LpStatus::infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[static_cast<std::size_t>(i)] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j)
          if (better_entering(at(i, j), j, at(i, s), s)) s = j;
        pivot(i, s);
      }
    }
    const bool bounded = run(1);
    out.x.assign(static_cast<std::size_t>(n_), Scalar(0));
    for (int i = 0; i < m_; ++i)
      if (basic_[static_cast<std::size_t>(i)] >= 0 && basic_[static_cast<std::size_t>(i)] < n_) {
        out.x[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] = at(i, n_ + 1);
      }
    out.dual.assign(static_cast<std::size_t>(m_), Scalar(0));
    for (int j = 0; j <= n_; ++j)
      if (nonbasic_[static_cast<std::size_t>(j)] >= n_) {
        out.dual[static_cast<std::size_t>(nonbasic_[static_cast<std::size_t>(j)] - n_)] = at(m_, j);
      }
    out.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
    out.value = at(m_, n_ + 1);
    return out;
  }

 private:
  Scalar& at(int i, int j) { return t_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  static Scalar magnitude(const Scalar& v) { return v < Scalar(0) ? Scalar(-v) : v; }

  bool better_entering(const Scalar& a, int ja, const Scalar& b, int jb) const {
    return a < b || (a == b && nonbasic_[static_cast<std::size_t>(ja)] < nonbasic_[static_cast<std::size_t>(jb)]);
  }

  void pivot(int r, int s) {
    const Scalar eps = lp_epsilon<Scalar>();
    const Scalar inv = Scalar(1) / at(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || !(magnitude(at(i, s)) > eps)) continue;
      const Scalar factor = at(i, s) * inv;
      for (int j = 0; j < n_ + 2; ++j) at(i, j) -= at(r, j) * factor;
      at(i, s) = at(r, s) * factor;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) at(r, j) *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) at(i, s) *= -inv;
    at(r, s) = inv;
    std::swap(basic_[static_cast<std::size_t>(r)], nonbasic_[static_cast<std::size_t>(s)]);
  }

  // phase 1 optimizes the real objective row m_, phase 2 the auxiliary row.
  bool run(int phase) {
    const Scalar eps = lp_epsilon<Scalar>();
    const int obj = m_ + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[static_cast<std::size_t>(j)] == -phase) continue;
        if (!(at(obj, j) < -eps)) continue;
        if (s == -1 || nonbasic_[static_cast<std::size_t>(j)] < nonbasic_[static_cast<std::size_t>(s)]) s = j;
      }
      if (s == -1) return true;
      int r = -1;
      Scalar best_ratio{};
      for (int i = 0; i < m_; ++i) {
        if (!(at(i, s) > eps)) continue;
        const Scalar ratio = at(i, n_ + 1) / at(i, s);
        if (r == -1 || ratio < best_ratio ||
            (ratio == best_ratio && basic_[static_cast<std::size_t>(i)] < basic_[static_cast<std::size_t>(r)])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> nonbasic_, basic_;
  std::vector<Row> t_;
};

template <class Scalar>
LpResult<Scalar> maximize(const std::vector<std::vector<Scalar>>& A, const std::vector<Scalar>& b,
                          const std::vector<Scalar>& c) {
  return DenseSimplex<Scalar>(A, b, c).solve();
}

}  // namespace thk
