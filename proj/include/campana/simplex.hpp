#pragma once

#include <utility>
#include <vector>

#include "campana/core/linalg.hpp"

namespace campana {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
  LPStatus status = LPStatus::Infeasible;
  Rational optimum = 0;
  Vec x;       ///< primal point
  Vec y_ineq;  ///< multipliers >= 0 for A x <= b
  Vec y_eq;    ///< free multipliers for E x = e
};

namespace detail {

/// Tableau simplex for max c.z, A z <= b, z >= 0, with Bland's rule
/// throughout so exact arithmetic never cycles. Layout follows the usual
/// dictionary with an auxiliary column for phase one.
class Tableau {
 public:
  Tableau(const Mat& a, const Vec& b, const Vec& c)
      : m_(b.size()), n_(c.size()), nonbasic_(n_ + 1), basic_(m_), d_(m_ + 2, Vec(n_ + 2, Rational(0))) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      basic_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1;
      d_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasic_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1;
  }

  LPStatus solve() {
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    if (m_ > 0 && d_[r][n_ + 1] < 0) {
      pivot(r, n_);
      if (!run(2) || d_[m_ + 1][n_ + 1] < 0) return LPStatus::Infeasible;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        long best = -1;
        for (std::size_t j = 0; j < n_ + 1; ++j)
          if (d_[i][j] != 0 && (best < 0 || nonbasic_[j] < nonbasic_[static_cast<std::size_t>(best)]))
            best = static_cast<long>(j);
        if (best >= 0) pivot(i, static_cast<std::size_t>(best));
      }
    }
    return run(1) ? LPStatus::Optimal : LPStatus::Unbounded;
  }

  Rational value() const { return d_[m_][n_ + 1]; }

  Vec primal() const {
    Vec x(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) x[static_cast<std::size_t>(basic_[i])] = d_[i][n_ + 1];
    return x;
  }

  /// Reduced costs of the slack columns are the optimal dual values.
  Vec dual() const {
    Vec y(m_, Rational(0));
    for (std::size_t j = 0; j < n_ + 1; ++j)
      if (nonbasic_[j] >= static_cast<long>(n_)) y[static_cast<std::size_t>(nonbasic_[j]) - n_] = d_[m_][j];
    return y;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    const Rational inv = 1 / d_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || d_[i][s] == 0) continue;
      const Rational f = d_[i][s] * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j) d_[i][j] -= d_[r][j] * f;
      d_[i][s] = d_[r][s] * f;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (std::size_t i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool run(int phase) {
    const std::size_t x = m_ + static_cast<std::size_t>(phase) - 1;
    for (;;) {
      long s = -1;
      for (std::size_t j = 0; j < n_ + 1; ++j) {
        if (nonbasic_[j] == -phase || d_[x][j] >= 0) continue;
        if (s < 0 || nonbasic_[j] < nonbasic_[static_cast<std::size_t>(s)]) s = static_cast<long>(j);
      }
      if (s < 0) return true;
      const auto sc = static_cast<std::size_t>(s);
      long r = -1;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_[i][sc] <= 0) continue;
        const Rational ratio = d_[i][n_ + 1] / d_[i][sc];
        if (r < 0 || ratio < best || (ratio == best && basic_[i] < basic_[static_cast<std::size_t>(r)])) {
          r = static_cast<long>(i);
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(static_cast<std::size_t>(r), sc);
    }
  }

  std::size_t m_, n_;
  std::vector<long> nonbasic_, basic_;
  Mat d_;
};

}  // namespace detail

/// max c.x subject to A x <= b, E x = e with x free. The optimal dual is
/// checked against the primal value before returning.
inline SimplexResult simplex_solve(const Mat& a, const Vec& b, const Mat& e, const Vec& ev, const Vec& c) {
  const std::size_t n = c.size();
  Mat rows;
  Vec rhs;
  auto push = [&](const Vec& row, const Rational& v, bool negate) {
    Vec z(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      const Rational x = negate ? Rational(-row[j]) : row[j];
      z[j] = x;
      z[n + j] = -x;
    }
    rows.push_back(std::move(z));
    rhs.push_back(negate ? Rational(-v) : v);
  };
  for (std::size_t i = 0; i < a.size(); ++i) push(a[i], b[i], false);
  for (std::size_t i = 0; i < e.size(); ++i) {
    push(e[i], ev[i], false);
    push(e[i], ev[i], true);
  }
  Vec cz(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    cz[j] = c[j];
    cz[n + j] = -c[j];
  }
  detail::Tableau t(rows, rhs, cz);
  SimplexResult res;
  res.status = t.solve();
  if (res.status != LPStatus::Optimal) return res;
  res.optimum = t.value();
  const Vec z = t.primal();
  res.x.assign(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) res.x[j] = z[j] - z[n + j];
  const Vec y = t.dual();
  res.y_ineq.assign(y.begin(), y.begin() + static_cast<long>(a.size()));
  for (std::size_t i = 0; i < e.size(); ++i) res.y_eq.push_back(y[a.size() + 2 * i] - y[a.size() + 2 * i + 1]);

  Rational dual_value = 0;
  Vec grad(n, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (res.y_ineq[i] < 0) throw Error(ErrorKind::Internal, "negative dual multiplier");
    dual_value += res.y_ineq[i] * b[i];
    for (std::size_t j = 0; j < n; ++j) grad[j] += res.y_ineq[i] * a[i][j];
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    dual_value += res.y_eq[i] * ev[i];
    for (std::size_t j = 0; j < n; ++j) grad[j] += res.y_eq[i] * e[i][j];
  }
  if (grad != c || dual_value != res.optimum || dot(c, res.x) != res.optimum)
    throw Error(ErrorKind::Internal, "simplex certificate mismatch");
  return res;
}

}  // namespace campana
