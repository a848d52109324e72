#pragma once

#include <functional>
#include <type_traits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "campana/assumption.hpp"
#include "campana/mfull.hpp"
#include "campana/polytope.hpp"

namespace campana::hyperbola {

// ---- geometric sums -------------------------------------------------------

namespace detail {

template <class T>
T power(const T& x, u64 e) {
  T r = 1, b = x;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

/// m^l with 0^0 = 1.
inline Integer ipow_signed(long long m, unsigned l) { return ipow(Integer(m), l); }

template <class T>
T from_integer(const Integer& v) {
  if constexpr (std::is_same_v<T, Rational>) return Rational(v);
  else return v.convert_to<T>();
}

inline Integer binom(unsigned n, unsigned k) {
  Integer r = 1;
  for (unsigned i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace detail

/// g_l(M, theta) = sum_{0 <= m <= M} m^l theta^m with 0^0 = 1.
inline Rational geometric_sum_g(unsigned l, u64 M, const Rational& theta) {
  Rational sum = 0, tp = 1;
  for (u64 m = 0; m <= M; ++m) {
    sum += Rational(ipow(Integer(m), l)) * tp;
    tp *= theta;
  }
  return sum;
}

/// Neumaier-compensated floating version.
inline Real geometric_sum_g(unsigned l, u64 M, Real theta) {
  Real sum = 0, comp = 0, tp = 1;
  for (u64 m = 0; m <= M; ++m) {
    const Real term = (l == 0 ? 1 : std::pow(static_cast<Real>(m), static_cast<Real>(l))) * tp;
    const Real t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    tp *= theta;
  }
  return sum + comp;
}

/// Right-hand side of the closed form for (theta - 1)^{l+1} g_l(M).
template <class T>
T lemgl_rhs(unsigned l, u64 M, const T& theta) {
  T first = 0;
  for (unsigned m = 0; m < l + 1; ++m) {
    Integer inner = 0;
    for (unsigned h = 0; h <= m; ++h) {
      Integer term = detail::binom(l + 1, h) * detail::ipow_signed(static_cast<long long>(m) - h, l);
      inner += (l + 1 - h) % 2 ? Integer(-term) : term;
    }
    first += detail::power(theta, m) * detail::from_integer<T>(inner);
  }
  T second = 0;
  for (unsigned m = 1; m <= l + 1; ++m) {
    Integer inner = 0;
    for (unsigned h = m; h <= l + 1; ++h) {
      Integer poly = 0;
      for (unsigned k = 0; k <= l; ++k)
        poly += detail::binom(l, k) * ipow(Integer(M), k) * detail::ipow_signed(static_cast<long long>(m) - h, l - k);
      Integer term = detail::binom(l + 1, h) * poly;
      inner += (l + 1 - h) % 2 ? Integer(-term) : term;
    }
    second += detail::power(theta, m) * detail::from_integer<T>(inner);
  }
  return first + detail::power(theta, M) * second;
}

/// LHS - RHS of the closed form, exact.
inline Rational verify_lemgl(unsigned l, u64 M, const Rational& theta) {
  if (M <= l) throw Error(ErrorKind::InvalidArgument, "need M > l");
  return detail::power(Rational(theta - 1), l + 1) * geometric_sum_g(l, M, theta) - lemgl_rhs<Rational>(l, M, theta);
}

/// Relative residual in floating point.
inline Real verify_lemgl(unsigned l, u64 M, Real theta) {
  if (M <= l) throw Error(ErrorKind::InvalidArgument, "need M > l");
  const Real lhs = detail::power(theta - 1, l + 1) * geometric_sum_g(l, M, theta);
  const Real rhs = lemgl_rhs<Real>(l, M, theta);
  return std::abs(lhs - rhs) / std::max<Real>(1, std::abs(lhs));
}

/// sum_{h=0}^{l+1} C(l+1,h) (-1)^{l+1-h} h^alpha.
inline Integer verify_binomial_identity(unsigned l, unsigned alpha) {
  if (alpha > l) throw Error(ErrorKind::InvalidArgument, "need alpha <= l");
  Integer sum = 0;
  for (unsigned h = 0; h <= l + 1; ++h) {
    Integer term = detail::binom(l + 1, h) * ipow(Integer(h), alpha);
    sum += (l + 1 - h) % 2 ? Integer(-term) : term;
  }
  return sum;
}

/// (theta-1)^{l+1} g_l(M, theta) / ((-1)^{l+1} l!) at theta = 1 - 1/t, M = 10 t max(l, 1).
inline Real lemgl2_ratio(unsigned l, u64 t) {
  const Real theta = 1 - Real(1) / t;
  const u64 M = 10 * t * std::max(l, 1u);
  Real fact = 1;
  for (unsigned i = 2; i <= l; ++i) fact *= i;
  const Real lhs = std::pow(theta - 1, static_cast<Real>(l + 1)) * geometric_sum_g(l, M, theta);
  return lhs / ((l + 1) % 2 ? -fact : fact);
}

// ---- functions with box asymptotics ---------------------------------------

/// An arithmetic function on N^s with Property I/II constants.
class PropertyIFunction {
 public:
  virtual ~PropertyIFunction() = default;
  virtual std::size_t arity() const = 0;
  virtual Real eval(const std::vector<u64>& y) const = 0;
  /// sum over 1 <= y_i <= B_i
  virtual Real box_sum(const std::vector<u64>& B) const = 0;
  virtual std::optional<Integer> exact_box_sum(const std::vector<u64>&) const { return std::nullopt; }
  /// sum over y_last <= x with the other coordinates fixed
  virtual Real line_sum(std::vector<u64> y, u64 x) const {
    Real s = 0;
    for (u64 v = 1; v <= x; ++v) {
      y.back() = v;
      s += eval(y);
    }
    return s;
  }
  virtual Real C_M() const = 0;
  virtual Real C_E() const = 0;
  virtual const std::vector<Rational>& varpi() const = 0;
  virtual Real Delta() const = 0;
  virtual Real D() const = 0;
  virtual Real nu() const = 0;
  /// C_{f,M,I}(y_I); I sorted, y_I aligned with I
  virtual Real restricted_constant(const std::vector<std::size_t>& I, const std::vector<u64>& yI) const = 0;
};

/// f(y) = prod_i [y_i is m_i-full and d_i | y_i].
class MFullIndicator final : public PropertyIFunction {
 public:
  MFullIndicator(std::vector<unsigned> m, std::vector<u64> d, u64 cutoff = 100000) : m_(std::move(m)), d_(std::move(d)) {
    if (d_.empty()) d_.assign(m_.size(), 1);
    if (m_.empty() || m_.size() != d_.size()) throw Error(ErrorKind::ConfigError, "m and d must have equal nonzero length");
    c_M_ = 1;
    delta_ = 1;
    for (std::size_t i = 0; i < m_.size(); ++i) {
      mfull::require_squarefree(d_[i]);
      const Real c = mfull::c_md(m_[i], d_[i], cutoff);
      local_.push_back(c);
      c_M_ *= c;
      varpi_.emplace_back(1, m_[i]);
      delta_ = std::min(delta_, Real(1) / (m_[i] * (m_[i] + 1)));
    }
    c_E_ = std::max<Real>(1, c_M_);
  }

  std::size_t arity() const override { return m_.size(); }
  Real eval(const std::vector<u64>& y) const override { return member(y) ? 1 : 0; }
  Real box_sum(const std::vector<u64>& B) const override { return exact_box_sum(B)->convert_to<Real>(); }
  std::optional<Integer> exact_box_sum(const std::vector<u64>& B) const override {
    Integer v = 1;
    for (std::size_t i = 0; i < m_.size(); ++i) {
      if (B[i] == 0) return Integer(0);
      v *= F(i, B[i]);
    }
    return v;
  }
  Real line_sum(std::vector<u64> y, u64 x) const override {
    for (std::size_t i = 0; i + 1 < m_.size(); ++i)
      if (y[i] % d_[i] != 0 || !mfull::is_m_full(y[i], m_[i])) return 0;
    return static_cast<Real>(F(m_.size() - 1, x));
  }
  Real C_M() const override { return c_M_; }
  Real C_E() const override { return c_E_; }
  const std::vector<Rational>& varpi() const override { return varpi_; }
  Real Delta() const override { return delta_; }
  Real D() const override { return 0; }
  Real nu() const override { return 1; }
  Real restricted_constant(const std::vector<std::size_t>& I, const std::vector<u64>& yI) const override {
    Real v = 1;
    std::size_t k = 0;
    for (std::size_t i = 0; i < m_.size(); ++i) {
      if (k < I.size() && I[k] == i) {
        const u64 y = yI[k++];
        if (y % d_[i] != 0 || !mfull::is_m_full(y, m_[i])) return 0;
      } else {
        v *= local_[i];
      }
    }
    return v;
  }
  Integer restricted_box_sum(const std::vector<std::size_t>& I, const std::vector<u64>& BI) const {
    Integer v = 1;
    for (std::size_t k = 0; k < I.size(); ++k) v *= F(I[k], BI[k]);
    return v;
  }
  const std::vector<Real>& local_constants() const { return local_; }

 private:
  bool member(const std::vector<u64>& y) const {
    for (std::size_t i = 0; i < m_.size(); ++i)
      if (y[i] == 0 || y[i] % d_[i] != 0 || !mfull::is_m_full(y[i], m_[i])) return false;
    return true;
  }
  u64 F(std::size_t i, u64 x) const {
    if (m_[i] == 1) return x / d_[i];
    auto& c = counters_[i];
    if (!c || c->limit() < x) c = std::make_shared<mfull::MFullCounter>(m_[i], std::max<u64>(x, c ? 2 * c->limit() : x), d_[i]);
    return (*c)(x);
  }

  std::vector<unsigned> m_;
  std::vector<u64> d_;
  std::vector<Rational> varpi_;
  std::vector<Real> local_;
  Real c_M_ = 1, c_E_ = 1, delta_ = 1;
  mutable std::map<std::size_t, std::shared_ptr<mfull::MFullCounter>> counters_;
};

// ---- constraint systems ---------------------------------------------------

/// prod_i y_i^{alpha_{k,i}} <= B^{b_k}, k in K.
struct BoxConstraintSystem {
  std::vector<std::vector<Rational>> alpha;  ///< |K| x s
  std::vector<Rational> b;                   ///< defaults to 1
  Rational C3 = Rational(1, 2), C4 = 2;

  std::size_t size() const { return alpha.size(); }
  std::size_t arity() const { return alpha.empty() ? 0 : alpha[0].size(); }
  Rational exponent(std::size_t k) const { return b.empty() ? Rational(1) : b[k]; }

  void validate() const {
    if (alpha.empty()) throw Error(ErrorKind::UnboundedPolytope, "empty constraint system");
    if (!b.empty() && b.size() != alpha.size()) throw Error(ErrorKind::ConfigError, "need one b_k per constraint");
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      if (alpha[k].size() != arity()) throw Error(ErrorKind::ConfigError, "ragged alpha matrix");
      bool nonzero = false;
      for (const auto& a : alpha[k]) {
        if (a < 0) throw Error(ErrorKind::ConfigError, "alpha must be nonnegative");
        nonzero = nonzero || a != 0;
      }
      if (!nonzero) throw Error(ErrorKind::ConfigError, "constraint row is zero");
      if (exponent(k) < C3 || exponent(k) > C4) throw Error(ErrorKind::ConfigError, "b_k outside [C3, C4]");
    }
  }
};

/// P: sum_i alpha_{k,i} varpi_i^{-1} t_i <= b_k, t >= 0.
inline RationalPolytope build_P(const BoxConstraintSystem& sys, const std::vector<Rational>& varpi) {
  sys.validate();
  const std::size_t s = sys.arity();
  if (varpi.size() != s) throw Error(ErrorKind::ConfigError, "varpi has the wrong length");
  Mat a;
  Vec b;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    Vec row(s);
    for (std::size_t i = 0; i < s; ++i) row[i] = sys.alpha[k][i] / varpi[i];
    a.push_back(row);
    b.push_back(sys.exponent(k));
  }
  for (std::size_t i = 0; i < s; ++i) {
    Vec row(s, Rational(0));
    row[i] = -1;
    a.push_back(row);
    b.push_back(0);
  }
  RationalPolytope p(s, a, b);
  if (!is_bounded(p)) throw Error(ErrorKind::UnboundedPolytope, "P is unbounded");
  if (affine_dim(vertices(p)) != static_cast<long>(s)) throw Error(ErrorKind::DegenerateProjection, "P is degenerate");
  return p;
}

/// Smallest C5 with sum_i alpha_{k,i}/varpi_i <= C5 b_k for all k.
inline Rational constant_C5(const BoxConstraintSystem& sys, const std::vector<Rational>& varpi) {
  Rational c = 0;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    Rational row = 0;
    for (std::size_t i = 0; i < sys.arity(); ++i) row += sys.alpha[k][i] / varpi[i];
    c = std::max(c, row / sys.exponent(k));
  }
  return c;
}

struct MainTerm {
  Rational a;
  long k = -1;
  Real c_P = 0;
  Real value = 0;
  Real error_scale = 0;
  AssumptionReport assumption;
  std::vector<std::string> warnings;
};

/// (s-1-k)! C_M c_P (log B)^k B^a.
inline MainTerm hyperbola_main_term(const PropertyIFunction& f, const BoxConstraintSystem& sys, Real B) {
  const auto p = build_P(sys, f.varpi());
  const std::size_t s = sys.arity();
  const Vec ones(s, Rational(1));
  MainTerm mt;
  const auto lp = lp_maximize(p, ones);
  mt.a = lp.optimum;
  mt.k = lp.optimal_face_dim;
  const Vec bary = barycenter(lp.optimal_vertices);
  for (std::size_t i = 0; i < s; ++i)
    if (bary[i] == 0) throw Error(ErrorKind::DegenerateProjection, "the optimal face lies in a coordinate hyperplane");
  mt.assumption = check_assumption_polytopes(p, ones);
  if (mt.assumption.verdict != Verdict::Satisfied) mt.warnings.push_back("assumption unresolved: " + mt.assumption.witness);
  const auto series = slice_volume_series(p, ones, 0);
  mt.c_P = series.fitted_coefficient;
  Real fact = 1;
  for (long i = 2; i <= static_cast<long>(s) - 1 - mt.k; ++i) fact *= i;
  const Real lb = std::log(B);
  const Real ba = std::pow(B, to_real(mt.a));
  mt.value = fact * f.C_M() * mt.c_P * std::pow(lb, static_cast<Real>(mt.k)) * ba;
  mt.error_scale = f.C_E() * std::pow(std::log(lb), static_cast<Real>(s)) * std::pow(lb, static_cast<Real>(mt.k - 1)) * ba;
  return mt;
}

namespace detail {

/// Integer form of each constraint: prod y_i^{e_{k,i}} <= B^{t_k b_k}.
struct IntegerConstraints {
  std::vector<std::vector<unsigned>> e;
  std::vector<u128> budget;
};

inline IntegerConstraints integer_constraints(const BoxConstraintSystem& sys, u64 B) {
  IntegerConstraints ic;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    Integer t = den(sys.exponent(k));
    for (const auto& a : sys.alpha[k]) t = t / gcd(t, den(a)) * den(a);
    std::vector<unsigned> row;
    for (const auto& a : sys.alpha[k]) row.push_back(num(a * Rational(t)).convert_to<unsigned>());
    const unsigned tb = num(sys.exponent(k) * Rational(t)).convert_to<unsigned>();
    const u128 budget = sat_pow(B, tb);
    if (budget == kU128Max) throw Error(ErrorKind::BoundTooLarge, "B^(t b_k) overflows 128 bits");
    ic.e.push_back(std::move(row));
    ic.budget.push_back(budget);
  }
  return ic;
}

}  // namespace detail

/// Exact sum of f over prod_i y_i^{alpha_{k,i}} <= B^{b_k}, optionally with y_i >= lower.
inline Real exact_S_f(const PropertyIFunction& f, const BoxConstraintSystem& sys, u64 B, u64 lower = 1,
                      u64 work_cap = 100'000'000ull) {
  sys.validate();
  if (B == 0) return 0;
  const std::size_t s = sys.arity();
  const auto ic = detail::integer_constraints(sys, B);
  std::vector<u128> partial(sys.size(), 1);
  std::vector<u64> y(s, 1);
  u64 work = 0;
  auto limit = [&](std::size_t i) {
    u64 lim = UINT64_MAX;
    bool bounded = false;
    for (std::size_t k = 0; k < sys.size(); ++k)
      if (ic.e[k][i] > 0) {
        lim = std::min(lim, iroot(ic.budget[k] / partial[k], ic.e[k][i]));
        bounded = true;
      }
    if (!bounded) throw Error(ErrorKind::UnboundedPolytope, "variable " + std::to_string(i + 1) + " is unbounded");
    return lim;
  };
  std::function<Real(std::size_t)> rec = [&](std::size_t i) -> Real {
    const u64 lim = limit(i);
    if (lim < lower) return 0;
    if (i + 1 == s) {
      if (++work > work_cap) throw Error(ErrorKind::BoundTooLarge, "exact sum exceeded the work cap");
      return f.line_sum(y, lim) - (lower > 1 ? f.line_sum(y, lower - 1) : 0);
    }
    Real total = 0;
    const auto saved = partial;
    for (u64 v = lower; v <= lim; ++v) {
      if (++work > work_cap) throw Error(ErrorKind::BoundTooLarge, "exact sum exceeded the work cap");
      y[i] = v;
      for (std::size_t k = 0; k < sys.size(); ++k)
        if (ic.e[k][i] > 0) partial[k] = saved[k] * sat_pow(v, ic.e[k][i]);
      total += rec(i + 1);
    }
    partial = saved;
    return total;
  };
  return rec(0);
}

// ---- box decomposition ----------------------------------------------------

enum class Side { Plus, Minus };

struct BoxParameters {
  Real theta = 0;    ///< 0 selects 1 + (log B)^{-2}
  Real A_tilde = 2;  ///< lower cutoff y_i >= (log B)^{A~}
  std::optional<Real> C5;
  u64 explosion_cap = 50'000'000ull;
};

namespace detail {

inline Real resolved_theta(const BoxParameters& bp, Real B) {
  const Real th = bp.theta > 0 ? bp.theta : 1 + 1 / (std::log(B) * std::log(B));
  if (!(th > 1 && th < 2)) throw Error(ErrorKind::InvalidArgument, "theta must lie in (1, 2)");
  return th;
}

}  // namespace detail

/// Calls visit(l) for every l in L+ or L-; returns the count.
inline u64 for_each_box(const BoxConstraintSystem& sys, const std::vector<Rational>& varpi, Real B, Side side,
                        const BoxParameters& bp, const std::function<void(const std::vector<long>&)>& visit) {
  sys.validate();
  const std::size_t s = sys.arity(), K = sys.size();
  const Real theta = detail::resolved_theta(bp, B);
  const Real lt = std::log(theta), lb = std::log(B);
  const Real c5 = bp.C5 ? *bp.C5 : to_real(constant_C5(sys, varpi));
  // relative slack, applied so that L- shrinks and L+ grows
  constexpr Real slack = 1e-12L;
  std::vector<std::vector<Real>> coef(K, std::vector<Real>(s));
  std::vector<Real> cap(K);
  for (std::size_t k = 0; k < K; ++k) {
    const Real bk = to_real(sys.exponent(k));
    for (std::size_t i = 0; i < s; ++i) coef[k][i] = to_real(sys.alpha[k][i] / varpi[i]);
    const Real c = side == Side::Plus ? bk * lb / lt : bk * lb / lt - c5 * bk;
    cap[k] = c + (side == Side::Plus ? slack : -slack) * std::max<Real>(1, std::abs(c));
  }
  for (std::size_t i = 0; i < s; ++i) {
    bool bounded = false;
    for (std::size_t k = 0; k < K; ++k) bounded = bounded || coef[k][i] > 0;
    if (!bounded) throw Error(ErrorKind::UnboundedPolytope, "variable " + std::to_string(i + 1) + " is unbounded");
  }
  std::vector<long> lo(s);
  for (std::size_t i = 0; i < s; ++i) {
    const Real v = to_real(varpi[i]) * bp.A_tilde * std::log(lb) / lt;
    lo[i] = side == Side::Plus ? std::max(0L, static_cast<long>(std::ceil(v * (1 - slack) - 1)))
                               : std::max(0L, static_cast<long>(std::ceil(v * (1 + slack))));
  }
  // rough size estimate before enumerating
  Real est = 1;
  for (std::size_t i = 0; i < s; ++i) {
    Real hi = INFINITY;
    for (std::size_t k = 0; k < K; ++k)
      if (coef[k][i] > 0) hi = std::min(hi, cap[k] / coef[k][i]);
    est *= std::max<Real>(1, hi - lo[i] + 1);
  }
  Real fact = 1;
  for (std::size_t i = 2; i <= s; ++i) fact *= i;
  if (est / fact > static_cast<Real>(bp.explosion_cap))
    throw Error(ErrorKind::ExplosionGuard, "box decomposition too large; increase theta");
  std::vector<long> l(s);
  std::vector<Real> used(K, 0);
  u64 count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == s) {
      if (++count > bp.explosion_cap) throw Error(ErrorKind::ExplosionGuard, "box decomposition exceeded the cap");
      visit(l);
      return;
    }
    for (long v = lo[i];; ++v) {
      bool ok = true;
      for (std::size_t k = 0; k < K && ok; ++k) ok = used[k] + coef[k][i] * v <= cap[k];
      if (!ok) break;
      l[i] = v;
      for (std::size_t k = 0; k < K; ++k) used[k] += coef[k][i] * v;
      rec(i + 1);
      for (std::size_t k = 0; k < K; ++k) used[k] -= coef[k][i] * v;
    }
  };
  rec(0);
  return count;
}

/// r(l) = #{l in L+/- : sum l_i = l}.
inline std::map<long, u64> lattice_counts_r(const BoxConstraintSystem& sys, const std::vector<Rational>& varpi, Real B,
                                            Side side, const BoxParameters& bp = {}) {
  std::map<long, u64> r;
  for_each_box(sys, varpi, B, side, bp, [&](const std::vector<long>& l) {
    long t = 0;
    for (long v : l) t += v;
    ++r[t];
  });
  return r;
}

struct Sandwich {
  Integer lower, exact, upper;
  u64 boxes_minus = 0, boxes_plus = 0;
  bool holds() const { return lower <= exact && exact <= upper; }
};

/// S- <= S_1 <= S+ with exact box sums; edges are ceil(theta_i^l) so the
/// boxes partition the positive integers.
inline Sandwich sandwich(const MFullIndicator& f, const BoxConstraintSystem& sys, u64 B, const BoxParameters& bp) {
  const std::size_t s = sys.arity();
  const Real theta = detail::resolved_theta(bp, static_cast<Real>(B));
  const auto& varpi = f.varpi();
  std::vector<std::vector<u64>> edges(s);
  auto edge = [&](std::size_t i, long l) -> u64 {
    auto& e = edges[i];
    while (static_cast<long>(e.size()) <= l) {
      const Real v = std::pow(theta, static_cast<Real>(e.size()) / to_real(varpi[i]));
      e.push_back(v >= 1.8e19L ? UINT64_MAX : static_cast<u64>(std::ceil(v)));
    }
    return e[l];
  };
  auto box = [&](const std::vector<long>& l) {
    // inclusion-exclusion over the 2^s corners of [lo, hi - 1]
    Integer total = 0;
    for (unsigned long mask = 0; mask < (1ul << s); ++mask) {
      std::vector<u64> c(s);
      bool sign = false;
      for (std::size_t i = 0; i < s; ++i) {
        const bool upper = !(mask >> i & 1ul);
        const u64 v = upper ? edge(i, l[i] + 1) - 1 : edge(i, l[i]) - 1;
        c[i] = v;
        sign ^= !upper;
      }
      const Integer v = *f.exact_box_sum(c);
      total += sign ? Integer(-v) : v;
    }
    return total;
  };
  Sandwich sw;
  sw.boxes_minus = for_each_box(sys, varpi, static_cast<Real>(B), Side::Minus, bp,
                                [&](const std::vector<long>& l) { sw.lower += box(l); });
  sw.boxes_plus = for_each_box(sys, varpi, static_cast<Real>(B), Side::Plus, bp,
                               [&](const std::vector<long>& l) { sw.upper += box(l); });
  const Real lb = std::log(static_cast<Real>(B));
  const u64 lower = static_cast<u64>(std::ceil(std::pow(lb, bp.A_tilde)));
  sw.exact = Integer(static_cast<unsigned long long>(std::llround(exact_S_f(f, sys, B, lower))));
  return sw;
}

struct RestrictedCheck {
  Real lhs = 0, rhs = 0, ratio = 0;
};

/// sum_{y_I <= B_I} C_{f,M,I}(y_I) against C_{f,M} prod_{i in I} B_i^{varpi_i}.
inline RestrictedCheck restricted_constant_sum_check(const PropertyIFunction& f, const std::vector<std::size_t>& I,
                                                     const std::vector<u64>& BI) {
  if (I.empty() || I.size() >= f.arity()) throw Error(ErrorKind::InvalidArgument, "I must be nonempty and proper");
  RestrictedCheck out;
  if (auto mf = dynamic_cast<const MFullIndicator*>(&f)) {
    Real rest = 1;
    std::size_t k = 0;
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (k < I.size() && I[k] == i) ++k;
      else rest *= mf->local_constants()[i];
    }
    out.lhs = rest * mf->restricted_box_sum(I, BI).convert_to<Real>();
  } else {
    std::vector<u64> y(I.size(), 1);
    for (;;) {
      out.lhs += f.restricted_constant(I, y);
      std::size_t j = 0;
      while (j < y.size() && y[j] == BI[j]) y[j++] = 1;
      if (j == y.size()) break;
      ++y[j];
    }
  }
  out.rhs = f.C_M();
  for (std::size_t k = 0; k < I.size(); ++k)
    out.rhs *= std::pow(static_cast<Real>(BI[k]), to_real(f.varpi()[I[k]]));
  out.ratio = out.lhs / out.rhs;
  return out;
}

/// f = 1 on N^2 with y_1 y_2 <= B.
inline std::pair<MFullIndicator, BoxConstraintSystem> dirichlet_preset() {
  return {MFullIndicator({1, 1}, {1, 1}), BoxConstraintSystem{{{1, 1}}, {}}};
}

}  // namespace campana::hyperbola
