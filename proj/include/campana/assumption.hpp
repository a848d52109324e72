#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "campana/polytope.hpp"

namespace campana {

enum class Verdict { Satisfied, Unresolved };

struct JEntry {
  std::vector<std::size_t> J;
  bool resolved = false;
  std::string criterion;  ///< which rung settled it
};

struct AssumptionReport {
  Verdict verdict = Verdict::Unresolved;
  std::string witness;
  std::size_t s = 0;
  long k = -1;
  Rational a;
  std::vector<JEntry> log;
  std::vector<std::vector<std::size_t>> unresolved;
};

namespace detail {

using VSet = std::vector<std::size_t>;

inline VSet set_and(const VSet& x, const VSet& y) {
  VSet out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

inline std::vector<Vec> pick(const std::vector<Vec>& pts, const VSet& idx) {
  std::vector<Vec> out;
  for (auto i : idx) out.push_back(pts[i]);
  return out;
}

/// Facets as vertex-index sets, deduplicated.
inline std::vector<VSet> facet_sets(const RationalPolytope& p, const std::vector<Vec>& verts, long dim) {
  std::set<VSet> out;
  for (std::size_t i = 0; i < p.A().size(); ++i) {
    VSet t;
    for (std::size_t v = 0; v < verts.size(); ++v)
      if (dot(p.A()[i], verts[v]) == p.b()[i]) t.push_back(v);
    if (!t.empty() && affine_dim(pick(verts, t)) == dim - 1) out.insert(t);
  }
  return {out.begin(), out.end()};
}

/// All nonempty faces, the polytope itself included.
inline std::vector<VSet> all_faces(const std::vector<VSet>& facets, std::size_t nverts) {
  VSet whole(nverts);
  for (std::size_t i = 0; i < nverts; ++i) whole[i] = i;
  std::set<VSet> seen{whole};
  std::vector<VSet> order{whole};
  for (std::size_t q = 0; q < order.size(); ++q)
    for (const auto& f : facets) {
      VSet g = set_and(order[q], f);
      if (!g.empty() && seen.insert(g).second) order.push_back(g);
    }
  return order;
}

/// Is some w with G inside argmax_{P}(l_J + w . t_{J^c})?
inline bool is_upper_face(const std::vector<Vec>& verts, const VSet& g, const Vec& weights,
                          const std::vector<bool>& in_j) {
  std::vector<std::size_t> jc;
  for (std::size_t i = 0; i < in_j.size(); ++i)
    if (!in_j[i]) jc.push_back(i);
  auto lval = [&](const Vec& v) {
    Rational x = 0;
    for (std::size_t i = 0; i < in_j.size(); ++i)
      if (in_j[i]) x += weights[i] * v[i];
    return x;
  };
  const Vec& g0 = verts[g.front()];
  Mat a, e;
  Vec b, ev;
  for (std::size_t u = 0; u < verts.size(); ++u) {
    Vec row;
    for (auto i : jc) row.push_back(verts[u][i] - g0[i]);
    const Rational rhs = lval(g0) - lval(verts[u]);
    if (std::binary_search(g.begin(), g.end(), u)) {
      e.push_back(row);
      ev.push_back(rhs);
    } else {
      a.push_back(row);
      b.push_back(rhs);
    }
  }
  return simplex_solve(a, b, e, ev, Vec(jc.size(), Rational(0))).status == LPStatus::Optimal;
}

}  // namespace detail

/// Every vertex lies on exactly dim facets.
inline bool is_simple(const RationalPolytope& p) {
  const auto verts = vertices(p);
  const long dim = affine_dim(verts);
  const auto facets = detail::facet_sets(p, verts, dim);
  for (std::size_t v = 0; v < verts.size(); ++v) {
    long on = 0;
    for (const auto& f : facets) on += std::binary_search(f.begin(), f.end(), v);
    if (on != dim) return false;
  }
  return true;
}

/// Decides the fibre-dimension assumption for maximising weights.t on P.
/// Rungs: global s <= 2k+1; per J: |J| <= k, the optimal face avoids
/// {t_{J^c} = 0}, |J| >= s-k with contact; global simple polytope; then an
/// exact face-lattice check. Anything left is Unresolved, never refuted.
inline AssumptionReport check_assumption_polytopes(const RationalPolytope& p, const Vec& weights) {
  AssumptionReport rep;
  const std::size_t s = p.dim();
  rep.s = s;
  const auto verts = vertices(p);
  if (verts.empty()) throw Error(ErrorKind::Infeasible, "empty polytope");
  const long dim = affine_dim(verts);
  if (dim != static_cast<long>(s)) {
    rep.witness = "polytope is degenerate";
    return rep;
  }
  const auto lp = lp_maximize(p, weights);
  rep.a = lp.optimum;
  detail::VSet face;
  for (std::size_t v = 0; v < verts.size(); ++v)
    if (dot(weights, verts[v]) == lp.optimum) face.push_back(v);
  rep.k = affine_dim(detail::pick(verts, face));
  const std::size_t k = static_cast<std::size_t>(rep.k);

  for (const auto& x : barycenter(detail::pick(verts, face)))
    if (x <= 0) {
      rep.witness = "optimal face lies in a coordinate hyperplane";
      return rep;
    }

  const bool global_small = s <= 2 * k + 1;
  std::vector<std::size_t> pending;
  for (unsigned long mask = 1; mask + 1 < (1ul << s); ++mask) {
    JEntry e;
    std::vector<bool> in_j(s, false);
    for (std::size_t i = 0; i < s; ++i)
      if (mask >> i & 1ul) {
        e.J.push_back(i);
        in_j[i] = true;
      }
    bool meets = false;
    for (auto v : face) {
      bool zero = true;
      for (std::size_t i = 0; i < s; ++i)
        if (!in_j[i] && verts[v][i] != 0) zero = false;
      meets = meets || zero;
    }
    e.resolved = true;
    if (global_small) e.criterion = "s<=2k+1";
    else if (e.J.size() <= k) e.criterion = "|J|<=k";
    else if (!meets) e.criterion = "face-avoids-subspace";
    else if (e.J.size() + k >= s) e.criterion = "|J|>=s-k";
    else {
      e.resolved = false;
      pending.push_back(rep.log.size());
    }
    rep.log.push_back(std::move(e));
  }
  if (global_small) {
    rep.verdict = Verdict::Satisfied;
    rep.witness = "s<=2k+1";
    return rep;
  }
  if (pending.empty()) {
    rep.verdict = Verdict::Satisfied;
    rep.witness = "per-J criteria";
    return rep;
  }

  if (is_simple(p)) {
    for (auto i : pending) {
      rep.log[i].resolved = true;
      rep.log[i].criterion = "simple-polytope";
    }
    rep.verdict = Verdict::Satisfied;
    rep.witness = "simple-polytope";
    return rep;
  }

  const auto faces = detail::all_faces(detail::facet_sets(p, verts, dim), verts.size());
  for (auto i : pending) {
    auto& e = rep.log[i];
    std::vector<bool> in_j(s, false);
    for (auto j : e.J) in_j[j] = true;
    bool ok = true;
    for (const auto& g : faces) {
      bool touches = false;
      for (auto v : g) {
        bool zero = true;
        for (std::size_t c = 0; c < s; ++c)
          if (!in_j[c] && verts[v][c] != 0) zero = false;
        touches = touches || zero;
      }
      if (!touches) continue;
      std::vector<Vec> proj;
      for (auto v : g) {
        Vec x;
        for (std::size_t c = 0; c < s; ++c)
          if (!in_j[c]) x.push_back(verts[v][c]);
        proj.push_back(std::move(x));
      }
      const long fibre = affine_dim(detail::pick(verts, g)) - affine_dim(proj);
      if (fibre < static_cast<long>(k)) continue;
      if (detail::is_upper_face(verts, g, weights, in_j)) {
        ok = false;
        break;
      }
    }
    e.resolved = ok;
    e.criterion = ok ? "face-lattice" : "unresolved";
    if (!ok) rep.unresolved.push_back(e.J);
  }
  rep.verdict = rep.unresolved.empty() ? Verdict::Satisfied : Verdict::Unresolved;
  rep.witness = rep.unresolved.empty() ? "face-lattice" : "";
  return rep;
}

}  // namespace campana
