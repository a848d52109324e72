#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "campana/core/linalg.hpp"

namespace campana {

using Index = std::size_t;
using IndexSet = std::vector<Index>;

/// Smooth complete fan; ray indices are 0-based, each max cone is sorted.
struct Fan {
  std::size_t dim = 0;
  std::vector<std::vector<long long>> rays;
  std::vector<IndexSet> max_cones;

  std::size_t s() const { return rays.size(); }
  std::size_t r() const { return rays.size() - dim; }
};

struct ValidationReport {
  std::size_t n = 0, s = 0, r = 0;
  bool primitive = false, smooth = false, complete = false;
};

namespace detail {

inline Vec ray_vec(const Fan& f, Index i) {
  Vec v;
  for (auto x : f.rays.at(i)) v.emplace_back(x);
  return v;
}

inline Mat cone_matrix(const Fan& f, const IndexSet& cone) {
  Mat m;
  for (auto i : cone) m.push_back(ray_vec(f, i));
  return m;
}

inline std::string set_str(const IndexSet& c) {
  std::string s = "{";
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "," : "") + std::to_string(c[k] + 1);
  return s + "}";
}

inline void check_shape(const Fan& f) {
  if (f.dim == 0) throw Error(ErrorKind::MalformedFan, "dimension must be positive");
  if (f.rays.size() <= f.dim) throw Error(ErrorKind::MalformedFan, "need more rays than the dimension");
  for (std::size_t i = 0; i < f.rays.size(); ++i)
    if (f.rays[i].size() != f.dim)
      throw Error(ErrorKind::MalformedFan, "ray " + std::to_string(i + 1) + " has wrong length");
  std::vector<bool> used(f.rays.size(), false);
  std::set<IndexSet> seen;
  for (const auto& c : f.max_cones) {
    if (c.size() != f.dim) throw Error(ErrorKind::MalformedFan, "cone " + set_str(c) + " is not maximal-dimensional");
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] >= f.rays.size()) throw Error(ErrorKind::MalformedFan, "cone index out of range");
      if (k && c[k] <= c[k - 1]) throw Error(ErrorKind::MalformedFan, "cone " + set_str(c) + " not sorted or repeats a ray");
      used[c[k]] = true;
    }
    if (!seen.insert(c).second) throw Error(ErrorKind::MalformedFan, "duplicate cone " + set_str(c));
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw Error(ErrorKind::MalformedFan, "ray " + std::to_string(i + 1) + " lies in no cone");
}

}  // namespace detail

/// Builds a fan from rays and cones, sorting cone indices.
inline Fan make_fan(std::size_t dim, std::vector<std::vector<long long>> rays, std::vector<IndexSet> cones) {
  for (auto& c : cones) std::sort(c.begin(), c.end());
  return Fan{dim, std::move(rays), std::move(cones)};
}

/// Checks primitivity, smoothness and completeness. Throws on the first
/// violation; completeness is facet pairing with opposite sides plus a
/// generic point lying in exactly one cone.
inline ValidationReport validate_fan(const Fan& f) {
  detail::check_shape(f);
  ValidationReport rep;
  rep.n = f.dim;
  rep.s = f.s();
  rep.r = f.r();

  for (std::size_t i = 0; i < f.rays.size(); ++i) {
    long long g = 0;
    for (auto x : f.rays[i]) g = std::gcd(g, x < 0 ? -x : x);
    if (g != 1) throw Error(ErrorKind::NonPrimitiveRay, "ray " + std::to_string(i + 1) + " is not primitive");
  }
  rep.primitive = true;

  for (const auto& c : f.max_cones) {
    const Rational d = det(detail::cone_matrix(f, c));
    if (d != 1 && d != -1)
      throw Error(ErrorKind::NonSmoothCone, "cone " + detail::set_str(c) + " has |det| = " + to_string(abs(d)));
  }
  rep.smooth = true;

  std::map<IndexSet, std::vector<std::pair<Index, Index>>> facets;  // facet -> (cone, extra ray)
  for (Index ci = 0; ci < f.max_cones.size(); ++ci) {
    const auto& c = f.max_cones[ci];
    for (std::size_t k = 0; k < c.size(); ++k) {
      IndexSet tau;
      for (std::size_t j = 0; j < c.size(); ++j)
        if (j != k) tau.push_back(c[j]);
      facets[tau].emplace_back(ci, c[k]);
    }
  }
  for (const auto& [tau, owners] : facets) {
    if (owners.size() != 2)
      throw Error(ErrorKind::IncompleteFan, "facet " + detail::set_str(tau) + " lies in " +
                                                std::to_string(owners.size()) + " cones");
    const Mat normal = nullspace(detail::cone_matrix(f, tau), f.dim);
    const Rational a = dot(normal.at(0), detail::ray_vec(f, owners[0].second));
    const Rational b = dot(normal.at(0), detail::ray_vec(f, owners[1].second));
    if (a * b >= 0)
      throw Error(ErrorKind::IncompleteFan, "cones through facet " + detail::set_str(tau) + " overlap");
  }

  std::vector<Mat> inverses;
  for (const auto& c : f.max_cones) {
    Mat t = detail::cone_matrix(f, c);
    Mat tt(f.dim, Vec(f.dim));
    for (std::size_t i = 0; i < f.dim; ++i)
      for (std::size_t j = 0; j < f.dim; ++j) tt[i][j] = t[j][i];
    inverses.push_back(*inverse(tt));
  }
  for (long trial = 1;; ++trial) {
    if (trial > 64) throw Error(ErrorKind::Internal, "no generic point found");
    Vec v(f.dim);
    for (std::size_t j = 0; j < f.dim; ++j)
      v[j] = Rational(ipow(Integer(trial + 6), static_cast<unsigned>(j + 1)) * (j % 2 ? -1 : 1) + trial, 7);
    bool on_boundary = false;
    std::size_t hits = 0;
    for (const auto& inv : inverses) {
      bool inside = true;
      for (const auto& row : inv) {
        const Rational l = dot(row, v);
        if (l == 0) on_boundary = true;
        if (l <= 0) inside = false;
      }
      hits += inside;
    }
    if (on_boundary) continue;
    if (hits != 1)
      throw Error(ErrorKind::IncompleteFan, "a generic point lies in " + std::to_string(hits) + " cones");
    break;
  }
  rep.complete = true;
  return rep;
}

/// A fan with multiplicities m_i and a Q-divisor L = sum L_i D_i.
struct OrbifoldInstance {
  Fan fan;
  std::vector<unsigned> m;
  Vec L;

  std::size_t s() const { return fan.s(); }
  std::size_t r() const { return fan.r(); }
  Rational varpi(Index i) const { return Rational(1, m[i]); }
};

/// Validates the fan; L defaults to sum_i (1/m_i) D_i.
inline OrbifoldInstance make_instance(Fan fan, std::vector<unsigned> m, std::optional<Vec> L = std::nullopt) {
  validate_fan(fan);
  if (m.empty()) m.assign(fan.s(), 1);
  if (m.size() != fan.s()) throw Error(ErrorKind::ConfigError, "need one multiplicity per ray");
  for (auto x : m)
    if (x == 0) throw Error(ErrorKind::ConfigError, "multiplicities must be positive");
  Vec l;
  if (L) {
    if (L->size() != fan.s()) throw Error(ErrorKind::ConfigError, "need one L coefficient per ray");
    l = *L;
  } else {
    for (auto x : m) l.emplace_back(1, x);
  }
  return OrbifoldInstance{std::move(fan), std::move(m), std::move(l)};
}

struct ConeData {
  IndexSet sigma;       ///< I(sigma)
  IndexSet complement;  ///< Ic(sigma)
  Mat dual_basis;       ///< u_l for l in sigma, in order
  Mat beta;             ///< s x s, beta[i][j] = -u_{sigma,D_j}(n_i)
  Vec alpha;            ///< coefficients of L(sigma); zero on sigma
};

inline ConeData cone_data(const OrbifoldInstance& inst, Index cone) {
  const Fan& f = inst.fan;
  const std::size_t s = f.s(), n = f.dim;
  ConeData cd;
  cd.sigma = f.max_cones.at(cone);
  for (Index i = 0; i < s; ++i)
    if (!std::binary_search(cd.sigma.begin(), cd.sigma.end(), i)) cd.complement.push_back(i);
  const Mat inv = *inverse(detail::cone_matrix(f, cd.sigma));
  cd.dual_basis.assign(n, Vec(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) cd.dual_basis[k][j] = inv[j][k];
  cd.beta.assign(s, Vec(s, Rational(0)));
  for (std::size_t k = 0; k < n; ++k) {
    const Index j = cd.sigma[k];
    for (Index i = 0; i < s; ++i) cd.beta[i][j] = -dot(cd.dual_basis[k], detail::ray_vec(f, i));
  }
  cd.alpha.assign(s, Rational(0));
  for (Index i = 0; i < s; ++i) {
    Rational a = inst.L[i];
    for (auto l : cd.sigma) a += inst.L[l] * cd.beta[i][l];
    cd.alpha[i] = a;
  }
  return cd;
}

inline std::vector<ConeData> all_cone_data(const OrbifoldInstance& inst) {
  std::vector<ConeData> out;
  for (Index c = 0; c < inst.fan.max_cones.size(); ++c) out.push_back(cone_data(inst, c));
  return out;
}

/// beta_{s,i,j} = -sum_{l in I(s')} beta_{s',i,l} beta_{s,l,j} for all cone pairs.
inline bool check_beta_relation(const OrbifoldInstance& inst) {
  const auto cds = all_cone_data(inst);
  const std::size_t s = inst.s();
  for (const auto& a : cds)
    for (const auto& b : cds)
      for (Index i = 0; i < s; ++i)
        for (Index j = 0; j < s; ++j) {
          Rational rhs = 0;
          for (auto l : b.sigma) rhs -= b.beta[i][l] * a.beta[l][j];
          if (rhs != a.beta[i][j]) return false;
        }
  return true;
}

/// Every D_i has positive coefficient in some L(sigma).
inline bool assumption_L(const OrbifoldInstance& inst) {
  const auto cds = all_cone_data(inst);
  for (Index i = 0; i < inst.s(); ++i) {
    bool ok = false;
    for (const auto& cd : cds) ok = ok || cd.alpha[i] > 0;
    if (!ok) return false;
  }
  return true;
}

inline bool is_ample(const OrbifoldInstance& inst) {
  for (const auto& cd : all_cone_data(inst))
    for (auto i : cd.complement)
      if (cd.alpha[i] <= 0) return false;
  return true;
}

/// True when the index set lies in some maximal cone.
inline bool is_face(const Fan& f, const IndexSet& e) {
  for (const auto& c : f.max_cones)
    if (std::includes(c.begin(), c.end(), e.begin(), e.end())) return true;
  return false;
}

/// Inclusion-minimal index sets not contained in any cone.
inline std::vector<IndexSet> minimal_nonfaces(const Fan& f) {
  const std::size_t s = f.s();
  std::vector<IndexSet> out;
  for (unsigned long mask = 1; mask < (1ul << s); ++mask) {
    IndexSet e;
    for (Index i = 0; i < s; ++i)
      if (mask >> i & 1ul) e.push_back(i);
    if (is_face(f, e)) continue;
    bool minimal = true;
    for (std::size_t k = 0; k < e.size() && minimal; ++k) {
      IndexSet sub = e;
      sub.erase(sub.begin() + static_cast<long>(k));
      minimal = is_face(f, sub);
    }
    if (minimal) out.push_back(e);
  }
  return out;
}

/// Sum over cones of prod_{i in Ic(sigma)} varpi_i.
inline Rational cone_weight_sum(const OrbifoldInstance& inst) {
  Rational total = 0;
  for (const auto& cd : all_cone_data(inst)) {
    Rational p = 1;
    for (auto i : cd.complement) p *= inst.varpi(i);
    total += p;
  }
  return total;
}

namespace fans {

inline Fan projective_line() { return make_fan(1, {{1}, {-1}}, {{0}, {1}}); }
inline Fan projective_plane() { return make_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}); }
inline Fan p1xp1() {
  return make_fan(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}
inline Fan bl1p2() {
  return make_fan(2, {{1, 0}, {0, 1}, {-1, -1}, {1, 1}}, {{0, 3}, {1, 3}, {1, 2}, {0, 2}});
}
inline Fan dp7() {
  return make_fan(2, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}},
                  {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
}
inline Fan dp6() {
  return make_fan(2, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}},
                  {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
}
/// P^n with rays e_1..e_n, -(e_1+...+e_n).
inline Fan projective_space(std::size_t n) {
  std::vector<std::vector<long long>> rays(n + 1, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    rays[i][i] = 1;
    rays[n][i] = -1;
  }
  std::vector<IndexSet> cones;
  for (std::size_t skip = 0; skip <= n; ++skip) {
    IndexSet c;
    for (std::size_t i = 0; i <= n; ++i)
      if (i != skip) c.push_back(i);
    cones.push_back(c);
  }
  return make_fan(n, rays, cones);
}

}  // namespace fans

}  // namespace campana
