#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "campana/simplex.hpp"

namespace campana {

/// {t : A t <= b, E t = e} in R^dim. Constraints are scaled so the first
/// nonzero coefficient has absolute value one; parallel duplicates keep
/// the tighter bound.
class RationalPolytope {
 public:
  RationalPolytope() = default;

  RationalPolytope(std::size_t dim, const Mat& a, const Vec& b, const Mat& e = {}, const Vec& ev = {}) : dim_(dim) {
    std::map<Vec, Rational> ineq;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto [row, rhs] = normalise(a[i], b[i], true);
      if (row.empty()) {
        if (rhs < 0) throw Error(ErrorKind::Infeasible, "constraint 0 <= negative");
        continue;
      }
      auto it = ineq.find(row);
      if (it == ineq.end()) ineq.emplace(row, rhs);
      else it->second = std::min(it->second, rhs);
    }
    for (auto& [row, rhs] : ineq) {
      a_.push_back(row);
      b_.push_back(rhs);
    }
    std::set<std::pair<Vec, Rational>> eq;
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto [row, rhs] = normalise(e[i], ev[i], false);
      if (row.empty()) {
        if (rhs != 0) throw Error(ErrorKind::Infeasible, "constraint 0 = nonzero");
        continue;
      }
      eq.emplace(row, rhs);
    }
    for (auto& [row, rhs] : eq) {
      e_.push_back(row);
      ev_.push_back(rhs);
    }
  }

  std::size_t dim() const { return dim_; }
  const Mat& A() const { return a_; }
  const Vec& b() const { return b_; }
  const Mat& E() const { return e_; }
  const Vec& e() const { return ev_; }

  bool contains(const Vec& t) const {
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (dot(a_[i], t) > b_[i]) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (dot(e_[i], t) != ev_[i]) return false;
    return true;
  }

  RationalPolytope with_equality(const Vec& row, const Rational& rhs) const {
    Mat e = e_;
    Vec ev = ev_;
    e.push_back(row);
    ev.push_back(rhs);
    return RationalPolytope(dim_, a_, b_, e, ev);
  }

  /// Indices of inequalities tight at t.
  std::vector<std::size_t> tight_at(const Vec& t) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (dot(a_[i], t) == b_[i]) out.push_back(i);
    return out;
  }

 private:
  static std::pair<Vec, Rational> normalise(const Vec& row, Rational rhs, bool inequality) {
    std::size_t k = 0;
    while (k < row.size() && row[k] == 0) ++k;
    if (k == row.size()) return {{}, rhs};
    Rational scale = 1 / (row[k] < 0 ? Rational(-row[k]) : row[k]);
    if (!inequality && row[k] < 0) scale = -scale;
    Vec out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = row[j] * scale;
    return {out, rhs * scale};
  }

  std::size_t dim_ = 0;
  Mat a_, e_;
  Vec b_, ev_;
};

/// Exact vertex list by solving every square tight subsystem. Sized for
/// the small polytopes of this library.
inline std::vector<Vec> vertices(const RationalPolytope& p) {
  const std::size_t d = p.dim();
  const std::size_t q = p.E().empty() ? 0 : rank(p.E());
  std::vector<Vec> out;
  if (q > d) return out;
  const std::size_t need = d - q, m = p.A().size();
  if (need > m) return out;
  std::set<Vec> seen;
  std::vector<std::size_t> pick(need);
  for (std::size_t i = 0; i < need; ++i) pick[i] = i;
  for (;;) {
    Mat sys = p.E();
    Vec rhs = p.e();
    for (auto i : pick) {
      sys.push_back(p.A()[i]);
      rhs.push_back(p.b()[i]);
    }
    if (d == 0) {
      if (p.contains({})) out.push_back({});
      return out;
    }
    if (auto x = solve(sys, rhs); x && p.contains(*x) && seen.insert(*x).second) out.push_back(*x);
    std::size_t k = need;
    while (k > 0 && pick[k - 1] == m - need + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t j = k; j < need; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_bounded(const RationalPolytope& p) {
  for (std::size_t j = 0; j < p.dim(); ++j)
    for (int sign : {1, -1}) {
      Vec c(p.dim(), Rational(0));
      c[j] = sign;
      if (simplex_solve(p.A(), p.b(), p.E(), p.e(), c).status == LPStatus::Unbounded) return false;
    }
  return true;
}

struct LPSolution {
  Rational optimum;
  Vec witness_vertex;
  long optimal_face_dim = -1;
  Vec dual_witness;                    ///< multipliers for the inequalities
  Vec dual_witness_eq;                 ///< multipliers for the equalities
  std::vector<Vec> optimal_vertices;   ///< all vertices of the optimal face
};

/// Dimension of the face through t: dim minus the rank of the tight system.
inline long face_dim_at(const RationalPolytope& p, const Vec& t) {
  Mat rows = p.E();
  for (auto i : p.tight_at(t)) rows.push_back(p.A()[i]);
  return static_cast<long>(p.dim()) - (rows.empty() ? 0 : static_cast<long>(rank(rows)));
}

inline Vec barycenter(const std::vector<Vec>& pts) {
  Vec c(pts.at(0).size(), Rational(0));
  for (const auto& v : pts)
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += v[j];
  for (auto& x : c) x /= static_cast<long>(pts.size());
  return c;
}

inline LPSolution lp_maximize(const RationalPolytope& p, const Vec& objective) {
  const auto res = simplex_solve(p.A(), p.b(), p.E(), p.e(), objective);
  if (res.status == LPStatus::Infeasible) throw Error(ErrorKind::Infeasible, "empty polytope");
  if (res.status == LPStatus::Unbounded) throw Error(ErrorKind::UnboundedPolytope, "objective unbounded");
  LPSolution sol;
  sol.optimum = res.optimum;
  sol.dual_witness = res.y_ineq;
  sol.dual_witness_eq = res.y_eq;
  for (const auto& v : vertices(p))
    if (dot(objective, v) == res.optimum) sol.optimal_vertices.push_back(v);
  if (sol.optimal_vertices.empty()) throw Error(ErrorKind::UnboundedPolytope, "optimal face has no vertex");
  sol.witness_vertex = face_dim_at(p, res.x) == 0 ? res.x : sol.optimal_vertices.front();
  sol.optimal_face_dim = face_dim_at(p, barycenter(sol.optimal_vertices));
  return sol;
}

namespace detail {

inline Vec drop_axis(const Vec& v, std::size_t axis) {
  Vec out;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != axis) out.push_back(v[j]);
  return out;
}

/// Pulling triangulation: cone from the first point over every facet of
/// conv(S) avoiding it. Facets come from the tight sets of the
/// inequalities, restricted to S.
inline void triangulate(const std::vector<Vec>& pts, const std::vector<std::vector<std::size_t>>& tight,
                        const std::vector<std::size_t>& s, long d, std::vector<std::size_t>& prefix,
                        std::vector<std::vector<std::size_t>>& out) {
  if (d == 0) {
    auto simplex = prefix;
    simplex.push_back(s.front());
    out.push_back(std::move(simplex));
    return;
  }
  const std::size_t apex = s.front();
  std::set<std::vector<std::size_t>> done;
  for (const auto& t : tight) {
    std::vector<std::size_t> f;
    std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(f));
    if (static_cast<long>(f.size()) < d || std::binary_search(f.begin(), f.end(), apex) || done.count(f)) continue;
    std::vector<Vec> fp;
    for (auto i : f) fp.push_back(pts[i]);
    if (affine_dim(fp) != d - 1) continue;
    done.insert(f);
    prefix.push_back(apex);
    triangulate(pts, tight, f, d - 1, prefix, out);
    prefix.pop_back();
  }
}

inline Rational factorial(unsigned n) {
  Rational f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Exact (dim-1)-volume of P cut by normal.t = level, measured by the
/// coordinate projection that forgets measure_axis.
inline Rational slice_volume(const RationalPolytope& p, const Vec& normal, const Rational& level,
                             std::size_t measure_axis) {
  if (measure_axis >= p.dim() || normal.at(measure_axis) == 0)
    throw Error(ErrorKind::DegenerateProjection, "slice normal vanishes on the measure axis");
  const RationalPolytope q = p.with_equality(normal, level);
  const auto verts = vertices(q);
  if (verts.empty()) return 0;
  const long d = static_cast<long>(p.dim()) - 1;
  if (d == 0) return 1;
  std::vector<Vec> proj;
  for (const auto& v : verts) proj.push_back(detail::drop_axis(v, measure_axis));
  if (affine_dim(proj) < d) return 0;
  std::vector<std::vector<std::size_t>> tight(q.A().size());
  for (std::size_t v = 0; v < verts.size(); ++v)
    for (auto i : q.tight_at(verts[v])) tight[i].push_back(v);
  std::vector<std::size_t> all(verts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::size_t> prefix;
  detail::triangulate(proj, tight, all, d, prefix, simplices);
  Rational vol = 0;
  for (const auto& sx : simplices) {
    Mat m;
    for (std::size_t k = 1; k < sx.size(); ++k) {
      Vec row(static_cast<std::size_t>(d));
      for (long j = 0; j < d; ++j) row[j] = proj[sx[k]][j] - proj[sx[0]][j];
      m.push_back(std::move(row));
    }
    vol += abs(det(std::move(m)));
  }
  return vol / detail::factorial(static_cast<unsigned>(d));
}

/// Full-dimensional volume of a bounded polytope by the same triangulation.
inline Rational volume(const RationalPolytope& p) {
  const auto verts = vertices(p);
  const long d = static_cast<long>(p.dim());
  if (verts.empty() || affine_dim(verts) < d) return 0;
  if (d == 0) return 1;
  std::vector<std::vector<std::size_t>> tight(p.A().size());
  for (std::size_t v = 0; v < verts.size(); ++v)
    for (auto i : p.tight_at(verts[v])) tight[i].push_back(v);
  std::vector<std::size_t> all(verts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::size_t> prefix;
  detail::triangulate(verts, tight, all, d, prefix, simplices);
  Rational vol = 0;
  for (const auto& sx : simplices) {
    Mat m;
    for (std::size_t k = 1; k < sx.size(); ++k) {
      Vec row(static_cast<std::size_t>(d));
      for (long j = 0; j < d; ++j) row[j] = verts[sx[k]][j] - verts[sx[0]][j];
      m.push_back(std::move(row));
    }
    vol += abs(det(std::move(m)));
  }
  return vol / detail::factorial(static_cast<unsigned>(d));
}

struct SliceVolumeSeries {
  Rational a;                   ///< maximum of the objective
  long k = -1;                  ///< dimension of the optimal face
  std::size_t measure_axis = 0;
  std::vector<Rational> deltas;
  std::vector<Rational> volumes;
  std::vector<bool> retained;   ///< inside the asymptotic regime
  std::vector<Real> residuals;  ///< log-log fit residuals (retained rows)
  Real fitted_exponent = 0;
  Real fitted_coefficient = 0;  ///< Richardson estimate with exponent s-1-k
  long predicted_exponent = 0;
};

/// V(delta) on the ladder delta = 2^{-j} (max - min), j = j_lo..j_hi.
/// Rows past the first change of the touched facet set are discarded.
inline SliceVolumeSeries slice_volume_series(const RationalPolytope& p, const Vec& objective,
                                             std::size_t measure_axis, unsigned j_lo = 3, unsigned j_hi = 12) {
  SliceVolumeSeries out;
  const auto hi = lp_maximize(p, objective);
  Vec neg(objective.size());
  for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -objective[j];
  const auto lo = lp_maximize(p, neg);
  const Rational range = hi.optimum + lo.optimum;
  out.a = hi.optimum;
  out.k = hi.optimal_face_dim;
  out.measure_axis = measure_axis;
  out.predicted_exponent = static_cast<long>(p.dim()) - 1 - out.k;
  std::vector<std::set<std::size_t>> touched;
  for (unsigned j = j_lo; j <= j_hi; ++j) {
    const Rational delta = range / rpow(Rational(2), j);
    out.deltas.push_back(delta);
    out.volumes.push_back(slice_volume(p, objective, out.a - delta, measure_axis));
    std::set<std::size_t> t;
    for (const auto& v : vertices(p.with_equality(objective, out.a - delta)))
      for (auto i : p.tight_at(v)) t.insert(i);
    touched.push_back(std::move(t));
  }
  const std::size_t n = out.deltas.size();
  out.retained.assign(n, false);
  for (std::size_t i = n; i-- > 0;) {
    if (touched[i] != touched[n - 1]) break;
    out.retained[i] = true;
  }
  std::vector<Real> xs, ys;
  for (std::size_t i = 0; i < n; ++i)
    if (out.retained[i] && out.volumes[i] > 0) {
      xs.push_back(std::log(to_real(out.deltas[i])));
      ys.push_back(std::log(to_real(out.volumes[i])));
    }
  if (xs.size() >= 2) {
    Real mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    Real sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.fitted_exponent = sxy / sxx;
    const Real intercept = my - out.fitted_exponent * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) out.residuals.push_back(ys[i] - intercept - out.fitted_exponent * xs[i]);
  }
  const auto e = static_cast<unsigned>(std::max(0L, out.predicted_exponent));
  auto ratio = [&](std::size_t i) { return to_real(out.volumes[i] / rpow(out.deltas[i], e)); };
  out.fitted_coefficient = n >= 2 && out.retained[n - 2] ? 2 * ratio(n - 1) - ratio(n - 2) : ratio(n - 1);
  return out;
}

}  // namespace campana
