#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "campana/core/rational.hpp"

namespace campana {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

inline Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Mat m) { return rref(m).size(); }

inline Rational det(Mat m) {
  const std::size_t n = m.size();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

/// Unique solution of a square or overdetermined consistent system, if any.
inline std::optional<Vec> solve(const Mat& a, const Vec& b) {
  if (a.empty()) return std::nullopt;
  const std::size_t n = a[0].size();
  Mat aug(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aug[i] = a[i];
    aug[i].push_back(b[i]);
  }
  const auto piv = rref(aug);
  if (piv.size() != n || (!piv.empty() && piv.back() == n)) return std::nullopt;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[piv[i]] = aug[i][n];
  return x;
}

inline std::optional<Mat> inverse(const Mat& a) {
  const std::size_t n = a.size();
  Mat aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = a[i];
    aug[i].resize(2 * n, Rational(0));
    aug[i][n + i] = 1;
  }
  const auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Mat inv(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

/// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
inline Mat nullspace(Mat m, std::size_t cols) {
  const auto piv = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : piv) is_pivot[c] = true;
  Mat basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Dimension of the affine hull of a point set (-1 when empty).
inline long affine_dim(const std::vector<Vec>& pts) {
  if (pts.empty()) return -1;
  Mat diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Vec d(pts[i].size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
    diffs.push_back(std::move(d));
  }
  return diffs.empty() ? 0 : static_cast<long>(rank(std::move(diffs)));
}

}  // namespace campana
