#pragma once

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "campana/core/primes.hpp"
#include "campana/core/rational.hpp"

namespace campana::mfull {

inline bool is_m_full(u64 y, unsigned m) {
  if (y == 0) return false;
  for (u64 p = 2; p * p <= y; ++p) {
    unsigned e = 0;
    while (y % p == 0) {
      y /= p;
      ++e;
    }
    if (e && e < m) return false;
  }
  return y == 1 || m <= 1;
}

/// Primes up to `limit`, extending a shared table as needed.
inline const std::vector<u64>& primes(u64 limit) {
  static std::vector<u64> table;
  static u64 covered = 0;
  if (limit > covered) {
    covered = std::max<u64>(limit, 2 * covered);
    table = primes_up_to(covered);
  }
  return table;
}

inline void require_squarefree(u64 d) {
  if (!is_squarefree(d)) throw Error(ErrorKind::NonSquarefree, std::to_string(d) + " is not squarefree");
}

namespace detail {

struct Walker {
  unsigned m;
  const std::vector<u64>& ps;
  const std::vector<u64>& excluded;  // prime divisors of d
  u64 nodes = 0, cap;

  bool skip(u64 p) const { return std::binary_search(excluded.begin(), excluded.end(), p); }

  // m-full numbers <= rem built from primes ps[i..] outside `excluded`
  template <class Visit>
  void walk(u64 rem, std::size_t i, u64 value, std::vector<u64>& stack, Visit&& visit) {
    if (++nodes > cap) throw Error(ErrorKind::BoundTooLarge, "m-full enumeration exceeded the work cap");
    visit(value, stack);
    for (; i < ps.size(); ++i) {
      const u64 p = ps[i];
      const u128 pm = sat_pow(p, m);
      if (pm > rem) break;
      if (skip(p)) continue;
      u64 q = static_cast<u64>(pm);
      stack.push_back(p);
      for (;;) {
        walk(rem / q, i + 1, value * q, stack, visit);
        if (q > rem / p) break;
        q *= p;
      }
      stack.pop_back();
    }
  }

  u64 count(u64 rem, std::size_t i) {
    if (++nodes > cap) throw Error(ErrorKind::BoundTooLarge, "m-full count exceeded the work cap");
    u64 total = 1;
    for (; i < ps.size(); ++i) {
      const u64 p = ps[i];
      const u128 pm = sat_pow(p, m);
      if (pm > rem) break;
      if (skip(p)) continue;
      u64 q = static_cast<u64>(pm);
      for (;;) {
        total += count(rem / q, i + 1);
        if (q > rem / p) break;
        q *= p;
      }
    }
    return total;
  }
};

inline u64 default_cap() { return 100'000'000ull; }

/// Calls visit(a) for every a = prod_{p|d} p^{e_p}, e_p >= m, a <= bound.
template <class Visit>
void required_part(unsigned m, const std::vector<u64>& dp, std::size_t k, u64 a, u64 bound, Visit&& visit) {
  if (k == dp.size()) {
    visit(a);
    return;
  }
  const u64 p = dp[k];
  u128 q = sat_pow(p, m);
  while (q <= bound / a) {
    required_part(m, dp, k + 1, a * static_cast<u64>(q), bound, visit);
    q *= p;
  }
}

}  // namespace detail

/// #{1 <= y <= B : y m-full, d | y}, d squarefree.
inline u64 count_F(unsigned m, u64 B, u64 d = 1, u64 work_cap = detail::default_cap()) {
  require_squarefree(d);
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "m must be positive");
  if (B == 0) return 0;
  if (m == 1) return B / d;
  const u64 root = iroot(B, m);
  const auto& ps = primes(std::max<u64>(root, 2));
  const auto dp = prime_divisors(d);
  detail::Walker w{m, ps, dp, 0, work_cap};
  u64 total = 0;
  detail::required_part(m, dp, 0, 1, B, [&](u64 a) { total += w.count(B / a, 0); });
  return total;
}

/// Direct scan, used as a test oracle.
inline u64 naive_count_F(unsigned m, u64 B, u64 d = 1) {
  u64 c = 0;
  for (u64 y = d; y <= B; y += d) c += is_m_full(y, m);
  return c;
}

/// Sorted m-full multiples of d up to B, with their prime supports.
struct MFullList {
  std::vector<u64> values;
  std::vector<std::vector<u64>> supports;
};

inline MFullList m_full_list(unsigned m, u64 B, u64 d = 1, u64 work_cap = detail::default_cap()) {
  require_squarefree(d);
  MFullList out;
  if (B == 0) return out;
  std::vector<std::pair<u64, std::vector<u64>>> items;
  const auto dp = prime_divisors(d);
  if (m == 1) {
    if (B / d > work_cap) throw Error(ErrorKind::BoundTooLarge, "list exceeds the work cap");
    const auto spf = spf_table(B);
    for (u64 y = d; y <= B; y += d) {
      std::vector<u64> sup;
      for (u64 z = y; z > 1;) {
        const u64 p = spf[z];
        sup.push_back(p);
        while (z % p == 0) z /= p;
      }
      items.emplace_back(y, std::move(sup));
    }
  } else {
    const auto& ps = primes(std::max<u64>(iroot(B, m), 2));
    detail::Walker w{m, ps, dp, 0, work_cap};
    detail::required_part(m, dp, 0, 1, B, [&](u64 a) {
      std::vector<u64> stack;
      w.walk(B / a, 0, 1, stack, [&](u64 v, const std::vector<u64>& st) {
        std::vector<u64> sup = st;
        sup.insert(sup.end(), dp.begin(), dp.end());
        std::sort(sup.begin(), sup.end());
        items.emplace_back(v * a, std::move(sup));
      });
    });
  }
  std::sort(items.begin(), items.end());
  for (auto& [v, s] : items) {
    out.values.push_back(v);
    out.supports.push_back(std::move(s));
  }
  return out;
}

/// Counting function backed by a materialised list; F(x) for x <= B.
class MFullCounter {
 public:
  MFullCounter(unsigned m, u64 B, u64 d = 1) : m_(m), d_(d), max_(B) {
    if (m > 1) values_ = m_full_list(m, B, d).values;
    else require_squarefree(d);
  }
  u64 operator()(u64 x) const {
    x = std::min(x, max_);
    if (m_ == 1) return x / d_;
    return static_cast<u64>(std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
  }
  u64 limit() const { return max_; }

 private:
  unsigned m_;
  u64 d_, max_;
  std::vector<u64> values_;
};

// ---- generating series --------------------------------------------------

/// rho_m(k, t) = #{1 <= k_i <= m-1, k_1+...+k_t = k}, as a table [t][k].
inline std::vector<std::vector<Integer>> rho_table(unsigned m, unsigned t_max, unsigned k_max) {
  std::vector<std::vector<Integer>> rho(t_max + 1, std::vector<Integer>(k_max + 1, 0));
  rho[0][0] = 1;
  for (unsigned t = 1; t <= t_max; ++t)
    for (unsigned k = 0; k <= k_max; ++k)
      for (unsigned j = 1; j + 1 <= m && j <= k; ++j) rho[t][k] += rho[t - 1][k - j];
  return rho;
}

/// a_m(mu) for 0 <= mu <= mu_max from the four rho-sums; zero for mu <= m.
inline std::vector<Integer> a_m_coefficients(unsigned m, unsigned mu_max) {
  std::vector<Integer> a(mu_max + 1, 0);
  if (m < 2) return a;
  const unsigned t_max = mu_max / m + 1;
  const auto rho = rho_table(m, t_max, mu_max);
  auto add = [&](unsigned t, unsigned base, int sign) {
    for (unsigned k = t; k <= t * (m - 1) && base + k <= mu_max; ++k) a[base + k] += sign * rho[t][k];
  };
  for (unsigned r = 1; 2 * r - 1 <= t_max; ++r) {
    if (2 * r <= t_max) {
      add(2 * r, (2 * r + 1) * m, 1);
      add(2 * r, 2 * r * m, -1);
    }
    add(2 * r - 1, (2 * r - 1) * m, 1);
    add(2 * r - 1, 2 * r * m, -1);
  }
  return a;
}

/// Taylor coefficients of G_m(x) = -x^{m+1}(x^{m-1}-1)/(x^m-x+1).
inline std::vector<Integer> taylor_G_m(unsigned m, unsigned mu_max) {
  std::vector<Integer> num(mu_max + 1, 0), g(mu_max + 1, 0);
  if (m < 2) return g;
  if (m + 1 <= mu_max) num[m + 1] += 1;
  if (2 * m <= mu_max) num[2 * m] -= 1;
  // g (1 - x + x^m) = num
  for (unsigned n = 0; n <= mu_max; ++n) {
    Integer v = num[n];
    if (n >= 1) v += g[n - 1];
    if (n >= m) v -= g[n - m];
    g[n] = v;
  }
  return g;
}

inline Real G_m(unsigned m, Real x) {
  if (m < 2) return 0;
  return -std::pow(x, m + 1) * (std::pow(x, m - 1) - 1) / (std::pow(x, m) - x + 1);
}

/// 1/(1 + p - p^{(m-1)/m}); equals 1/p + G_m(p^{-1/m}).
inline Real euler_factor(unsigned m, u64 p) {
  const Real pp = static_cast<Real>(p);
  return 1 / (1 + pp - std::pow(pp, static_cast<Real>(m - 1) / m));
}

/// Smallest modulus of a root of 1 - x + x^m (Durand-Kerner); the radius
/// of convergence of the G_m series.
inline Real series_radius(unsigned m) {
  if (m < 2) return INFINITY;
  using C = std::complex<Real>;
  auto poly = [&](C z) { return std::pow(z, static_cast<int>(m)) - z + C(1); };
  std::vector<C> z(m);
  for (unsigned i = 0; i < m; ++i) z[i] = std::pow(C(0.4L, 0.9L), static_cast<int>(i));
  for (int it = 0; it < 500; ++it)
    for (unsigned i = 0; i < m; ++i) {
      C den = 1;
      for (unsigned j = 0; j < m; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= poly(z[i]) / den;
    }
  Real r = INFINITY;
  for (const auto& w : z) r = std::min(r, std::abs(w));
  return r;
}

/// Sum of the G_m series at x, when x lies inside the radius of convergence.
inline std::optional<Real> G_m_series(unsigned m, Real x) {
  if (m < 2) return Real(0);
  if (x >= series_radius(m)) return std::nullopt;
  const unsigned n_max = 20000;
  std::vector<Real> g(n_max + 1, 0);
  Real sum = 0, xp = 1, last = 0;
  for (unsigned n = 0; n <= n_max; ++n) {
    Real v = (n == m + 1 ? 1 : 0) - (n == 2 * m ? 1 : 0);
    if (n >= 1) v += g[n - 1];
    if (n >= m) v -= g[n - m];
    g[n] = v;
    sum += v * xp;
    last = std::abs(v * xp);
    xp *= x;
    if (n > 4 * m && last < 1e-30L && std::abs(g[n - 1]) * xp < 1e-30L) break;
  }
  return sum;
}

/// K_m = 1 + sum |a_m(mu)| 2^{-(mu-m)/(m+1)}, or nullopt when the series diverges.
inline std::optional<Real> K_m(unsigned m) {
  if (m < 2) return Real(1);
  const Real x = std::pow(Real(2), -Real(1) / (m + 1));
  if (x >= series_radius(m)) return std::nullopt;
  const unsigned n_max = 20000;
  std::vector<Real> g(n_max + 1, 0);
  Real sum = 1;
  for (unsigned n = 0; n <= n_max; ++n) {
    Real v = (n == m + 1 ? 1 : 0) - (n == 2 * m ? 1 : 0);
    if (n >= 1) v += g[n - 1];
    if (n >= m) v -= g[n - m];
    g[n] = v;
    if (n > m) sum += std::abs(v) * std::pow(x, static_cast<Real>(n - m));
  }
  return sum;
}

// ---- constants ------------------------------------------------------------

struct EulerProduct {
  Real value = 0;
  Real tail_bound = 0;  ///< relative
  u64 cutoff = 0;
};

/// prod_{p <= X} (1 + sum_{j=m+1}^{2m-1} p^{-j/m}); the tail bound is
/// exp(sum_j sum_{p > X} p^{-j/m}) - 1.
inline EulerProduct constant_C_m(unsigned m, u64 cutoff) {
  EulerProduct out;
  out.cutoff = cutoff;
  out.value = 1;
  if (m < 2) return out;
  for (u64 p : primes(cutoff)) {
    if (p > cutoff) break;
    Real f = 1;
    for (unsigned j = m + 1; j <= 2 * m - 1; ++j) f += std::pow(static_cast<Real>(p), -static_cast<Real>(j) / m);
    out.value *= f;
  }
  Real t = 0;
  for (unsigned j = m + 1; j <= 2 * m - 1; ++j) t += prime_tail_bound(cutoff, static_cast<Real>(j) / m);
  out.tail_bound = std::expm1(t);
  return out;
}

namespace detail {

inline Integer binom_general(const Integer& c, unsigned j) {
  Integer num = 1, den = 1;
  for (unsigned i = 0; i < j; ++i) {
    num *= c - i;
    den *= i + 1;
  }
  return num / den;
}

/// c_k with f = prod_k (1 - x^k)^{-c_k} mod x^{N+1}.
inline std::vector<Integer> product_exponents(std::vector<Integer> g, unsigned n_max) {
  g.resize(n_max + 1, 0);
  std::vector<Integer> c(n_max + 1, 0);
  for (unsigned k = 1; k <= n_max; ++k) {
    c[k] = g[k];
    if (c[k] == 0) continue;
    // multiply by (1 - x^k)^{c_k}
    std::vector<Integer> h(n_max + 1, 0);
    for (unsigned j = 0; j * k <= n_max; ++j) {
      Integer b = binom_general(c[k], j);
      if (j % 2) b = -b;
      for (unsigned n = 0; n + j * k <= n_max; ++n) h[n + j * k] += b * g[n];
    }
    g = std::move(h);
  }
  return c;
}

}  // namespace detail

struct AcceleratedProduct : EulerProduct {
  std::vector<Integer> exponents;  ///< c_k, k = 0..N
  Real tail_estimate = 0;
};

/// C_m = prod_k zeta(k/m)^{c_k} * prod_p R(p) where R(p) = 1 + O(p^{-(N+1)/m});
/// the residual product is truncated at the cutoff.
inline AcceleratedProduct constant_C_m_accelerated(unsigned m, u64 cutoff) {
  AcceleratedProduct out;
  out.cutoff = cutoff;
  out.value = 1;
  if (m < 2) return out;
  const unsigned n_max = 8 * m;
  std::vector<Integer> f(n_max + 1, 0);
  f[0] = 1;
  for (unsigned j = m + 1; j <= 2 * m - 1; ++j) f[j] = 1;
  out.exponents = detail::product_exponents(f, n_max);
  Real log_v = 0;
  for (unsigned k = m + 1; k <= n_max; ++k) {
    const Real c = out.exponents[k].convert_to<Real>();
    if (c != 0) log_v += c * std::log(boost::math::zeta(static_cast<Real>(k) / m));
  }
  for (u64 p : primes(cutoff)) {
    if (p > cutoff) break;
    const Real x = std::pow(static_cast<Real>(p), -Real(1) / m);
    Real fx = 1;
    for (unsigned j = m + 1; j <= 2 * m - 1; ++j) fx += std::pow(x, static_cast<Real>(j));
    Real lr = std::log(fx);
    for (unsigned k = m + 1; k <= n_max; ++k) {
      const Real c = out.exponents[k].convert_to<Real>();
      if (c != 0) lr += c * std::log1p(-std::pow(x, static_cast<Real>(k)));
    }
    log_v += lr;
  }
  out.value = std::exp(log_v);
  // residual coefficients beyond N, up to 3N
  std::vector<Integer> r(3 * n_max + 1, 0);
  for (unsigned j = 0; j < f.size(); ++j) r[j] = f[j];
  for (unsigned k = 1; k <= n_max; ++k) {
    const Integer& c = out.exponents[k];
    if (c == 0) continue;
    std::vector<Integer> h(r.size(), 0);
    for (unsigned j = 0; j * k < r.size(); ++j) {
      Integer b = detail::binom_general(c, j);
      if (j % 2) b = -b;
      for (unsigned n = 0; n + j * k < r.size(); ++n) h[n + j * k] += b * r[n];
    }
    r = std::move(h);
  }
  Real t = 0;
  for (unsigned n = n_max + 1; n < r.size(); ++n)
    if (r[n] != 0) t += abs(r[n]).convert_to<Real>() * prime_tail_bound(cutoff, static_cast<Real>(n) / m);
  out.tail_estimate = t;
  out.tail_bound = std::expm1(t);
  return out;
}

/// c_{m,d} = C_m prod_{p | d} euler_factor(m, p).
inline Real c_md(unsigned m, u64 d, u64 cutoff = 100000) {
  require_squarefree(d);
  Real v = constant_C_m_accelerated(m, cutoff).value;
  for (u64 p : prime_divisors(d)) v *= euler_factor(m, p);
  return v;
}

// ---- exact identities -----------------------------------------------------

struct IdentityCheck {
  Integer lhs, rhs;
  bool holds() const { return lhs == rhs; }
};

namespace detail {

inline u64 shifted(u64 B, u64 p, unsigned e) {
  const u128 q = sat_pow(p, e);
  return q > B ? 0 : static_cast<u64>(B / static_cast<u64>(q));
}

inline unsigned log_floor(u64 B, u64 p) {
  unsigned e = 0;
  for (u128 q = p; q <= B; q *= p) ++e;
  return e;
}

}  // namespace detail

/// F_m(B,d) against the four rho-sums with d' = d/p on the right.
inline IdentityCheck verify_peeling(unsigned m, u64 d, u64 p, u64 B) {
  require_squarefree(d);
  if (m < 2 || d % p != 0 || !is_squarefree(p) || prime_divisors(p).size() != 1)
    throw Error(ErrorKind::InvalidArgument, "need m >= 2 and a prime p dividing d");
  const u64 dd = d / p;
  IdentityCheck out;
  out.lhs = count_F(m, B, d);
  const unsigned top = detail::log_floor(B, p);
  const auto rho = rho_table(m, top + 1, top + 1);
  auto F = [&](unsigned e) { return Integer(count_F(m, detail::shifted(B, p, e), dd)); };
  Integer rhs = F(m);
  for (unsigned r = 1; (2 * r - 1) * m + (2 * r - 1) <= top; ++r) {
    for (unsigned k = 2 * r - 1; k <= (2 * r - 1) * (m - 1) && k <= top; ++k) {
      rhs += rho[2 * r - 1][k] * F((2 * r - 1) * m + k);
      rhs -= rho[2 * r - 1][k] * F(2 * r * m + k);
    }
    if (2 * r > top + 1) continue;
    for (unsigned k = 2 * r; k <= 2 * r * (m - 1) && k <= top; ++k) {
      rhs += rho[2 * r][k] * F((2 * r + 1) * m + k);
      rhs -= rho[2 * r][k] * F(2 * r * m + k);
    }
  }
  out.rhs = rhs;
  return out;
}

/// The same identity in the form F(B p^{-m}, d') + sum_mu a_m(mu) F(B p^{-mu}, d').
inline IdentityCheck verify_peeling_mu_form(unsigned m, u64 d, u64 p, u64 B) {
  require_squarefree(d);
  IdentityCheck out;
  out.lhs = count_F(m, B, d);
  const u64 dd = d / p;
  const unsigned top = detail::log_floor(B, p);
  const auto a = a_m_coefficients(m, std::max(top, m + 1));
  Integer rhs = count_F(m, detail::shifted(B, p, m), dd);
  for (unsigned mu = m + 1; mu <= top; ++mu) rhs += a[mu] * count_F(m, detail::shifted(B, p, mu), dd);
  out.rhs = rhs;
  return out;
}

/// prod_i F_{m_i}(B_i, d_i).
inline Integer box_sum_f(const std::vector<unsigned>& m, const std::vector<u64>& B, const std::vector<u64>& d) {
  Integer v = 1;
  for (std::size_t i = 0; i < m.size(); ++i) v *= count_F(m[i], B[i], d[i]);
  return v;
}

}  // namespace campana::mfull
