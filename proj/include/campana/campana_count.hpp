#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "campana/mfull.hpp"
#include "campana/toric_polytopes.hpp"

namespace campana::count {

/// H^t = max_sigma prod_i |y_i|^{t alpha_{i,sigma}} with t clearing denominators.
class HeightEvaluator {
 public:
  explicit HeightEvaluator(const OrbifoldInstance& inst) : s_(inst.s()) {
    const auto cds = all_cone_data(inst);
    Integer t = 1;
    for (const auto& cd : cds)
      for (const auto& a : cd.alpha) t = t / gcd(t, den(a)) * den(a);
    t_ = t.convert_to<unsigned>();
    for (const auto& cd : cds) {
      std::vector<unsigned> row;
      for (const auto& a : cd.alpha) {
        if (a < 0) throw Error(ErrorKind::InvalidArgument, "L(sigma) has a negative coefficient");
        row.push_back(num(a * t_).convert_to<unsigned>());
      }
      exps_.push_back(std::move(row));
    }
  }

  unsigned t() const { return t_; }
  const std::vector<std::vector<unsigned>>& exponents() const { return exps_; }

  Integer height_power(const std::vector<long long>& y) const {
    if (y.size() != s_) throw Error(ErrorKind::InvalidArgument, "wrong number of coordinates");
    Integer best = 0;
    for (const auto& row : exps_) {
      Integer v = 1;
      for (std::size_t i = 0; i < s_; ++i) {
        if (y[i] == 0) throw Error(ErrorKind::ZeroCoordinate, "torsor coordinates must be nonzero");
        v *= ipow(Integer(y[i] < 0 ? -y[i] : y[i]), row[i]);
      }
      best = std::max(best, v);
    }
    return best;
  }

 private:
  std::size_t s_;
  unsigned t_ = 1;
  std::vector<std::vector<unsigned>> exps_;
};

struct Height {
  Integer power;  ///< H^t
  unsigned t = 1;
};

inline Height height(const OrbifoldInstance& inst, const std::vector<long long>& y) {
  const HeightEvaluator h(inst);
  return {h.height_power(y), h.t()};
}

namespace detail {

inline std::vector<IndexSet> complements(const OrbifoldInstance& inst) {
  std::vector<IndexSet> out;
  for (const auto& cd : all_cone_data(inst)) out.push_back(cd.complement);
  return out;
}

inline bool coprime_over(const std::vector<IndexSet>& comps, const std::vector<long long>& y) {
  Integer g = 0;
  for (const auto& c : comps) {
    Integer p = 1;
    for (auto i : c) {
      if (y.at(i) == 0) throw Error(ErrorKind::ZeroCoordinate, "torsor coordinates must be nonzero");
      p *= y[i] < 0 ? -y[i] : y[i];
    }
    g = gcd(g, p);
  }
  return g == 1;
}

}  // namespace detail

/// gcd over sigma of prod_{i in Ic(sigma)} |y_i| equals 1.
inline bool coprime_indicator(const OrbifoldInstance& inst, const std::vector<long long>& y) {
  return detail::coprime_over(detail::complements(inst), y);
}

/// Boolean-lattice Moebius inversion of the face indicator, indexed by bitmask.
struct MoebiusLocal {
  std::size_t s = 0;
  std::vector<long long> table;
  long long operator()(unsigned long mask) const { return table.at(mask); }
};

inline MoebiusLocal moebius_local(const Fan& f) {
  MoebiusLocal mu;
  mu.s = f.s();
  const unsigned long n = 1ul << mu.s;
  std::vector<long long> ind(n);
  for (unsigned long mask = 0; mask < n; ++mask) {
    IndexSet e;
    for (Index i = 0; i < mu.s; ++i)
      if (mask >> i & 1ul) e.push_back(i);
    ind[mask] = is_face(f, e);
  }
  mu.table = ind;
  for (Index i = 0; i < mu.s; ++i)
    for (unsigned long mask = 0; mask < n; ++mask)
      if (mask >> i & 1ul) mu.table[mask] -= mu.table[mask ^ (1ul << i)];
  return mu;
}

/// mu(d) = prod_p mu_loc({i : p | d_i}).
inline long long mu(const MoebiusLocal& ml, const std::vector<u64>& d) {
  std::map<u64, unsigned long> masks;
  for (std::size_t i = 0; i < d.size(); ++i) {
    mfull::require_squarefree(d[i]);
    for (u64 p : prime_divisors(d[i])) masks[p] |= 1ul << i;
  }
  long long v = 1;
  for (const auto& [p, mask] : masks) v *= ml(mask);
  return v;
}

namespace detail {

inline u64 default_work_cap() { return 2'000'000'000ull; }

/// Positive-orthant enumeration of m-full tuples with d_i | y_i and H <= B,
/// optionally under the coprimality condition.
class Enumerator {
 public:
  Enumerator(const OrbifoldInstance& inst, u64 B, std::vector<u64> d, bool coprime, u64 work_cap)
      : s_(inst.s()), m_(inst.m), d_(std::move(d)), coprime_(coprime), cap_(work_cap), height_(inst) {
    if (d_.size() != s_) throw Error(ErrorKind::InvalidArgument, "need one divisor per coordinate");
    for (u64 x : d_) mfull::require_squarefree(x);
    const u128 budget = sat_pow(B, height_.t());
    if (budget == kU128Max) throw Error(ErrorKind::BoundTooLarge, "B^t overflows 128 bits");
    budget_ = budget;
    exps_ = height_.exponents();
    // Northcott bound per coordinate
    std::vector<u64> bound(s_, 0);
    for (std::size_t i = 0; i < s_; ++i) {
      bool found = false;
      for (const auto& row : exps_)
        if (row[i] > 0) {
          const u64 b = iroot(budget_, row[i]);
          bound[i] = found ? std::min(bound[i], b) : b;
          found = true;
        }
      if (!found) throw Error(ErrorKind::InvalidArgument, "coordinate " + std::to_string(i + 1) + " is unbounded");
    }
    order_.resize(s_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return bound[a] < bound[b]; });
    for (std::size_t i = 0; i < s_; ++i) {
      Stream st{m_[i], d_[i], bound[i], {}};
      if (m_[i] > 1) st.values = mfull::m_full_list(m_[i], bound[i], d_[i], cap_).values;
      streams_.push_back(std::move(st));
    }
    if (coprime_) {
      std::vector<std::size_t> pos(s_);
      for (std::size_t k = 0; k < s_; ++k) pos[order_[k]] = k;
      for (const auto& S : minimal_nonfaces(inst.fan)) {
        std::size_t last = 0;
        for (auto i : S) last = std::max(last, pos[i]);
        if (last + 1 == s_) {
          IndexSet rest;
          for (auto i : S)
            if (pos[i] + 1 != s_) rest.push_back(i);
          inner_nonfaces_.push_back(rest);
        } else {
          checks_[last].push_back(S);
        }
      }
      u64 spf_max = 1;
      for (std::size_t k = 0; k + 1 < s_; ++k) spf_max = std::max(spf_max, bound[order_[k]]);
      spf_ = spf_table(std::min<u64>(spf_max, 10'000'000));
      trial_ = primes_up_to(iroot(spf_max, 2));
    }
  }

  u64 run() {
    y_.assign(s_, 0);
    partial_.assign(exps_.size(), 1);
    return descend(0);
  }

 private:
  struct Stream {
    unsigned m;
    u64 d, bound;
    std::vector<u64> values;  // m > 1 only
  };

  u64 limit(std::size_t i) const {
    u64 lim = streams_[i].bound;
    for (std::size_t c = 0; c < exps_.size(); ++c)
      if (exps_[c][i] > 0) lim = std::min(lim, iroot(budget_ / partial_[c], exps_[c][i]));
    return lim;
  }

  bool passes(std::size_t k) const {
    auto it = checks_.find(k);
    if (it == checks_.end()) return true;
    for (const auto& S : it->second) {
      u64 g = 0;
      for (auto i : S) g = std::gcd(g, y_[i]);
      if (g != 1) return false;
    }
    return true;
  }

  /// #{y in stream i, e | y, y <= x}
  u64 stream_count(std::size_t i, u64 e, u64 x) {
    const Stream& st = streams_[i];
    if (st.m == 1) {
      const u64 step = std::lcm(st.d, e);
      return x / step;
    }
    if (e == 1)
      return static_cast<u64>(std::upper_bound(st.values.begin(), st.values.end(), x) - st.values.begin());
    auto it = filtered_.find(e);
    if (it == filtered_.end()) {
      std::vector<u64> f;
      for (u64 v : st.values)
        if (v % e == 0) f.push_back(v);
      it = filtered_.emplace(e, std::move(f)).first;
    }
    return static_cast<u64>(std::upper_bound(it->second.begin(), it->second.end(), x) - it->second.begin());
  }

  u64 count_inner(std::size_t i, u64 x) {
    if (!coprime_ || inner_nonfaces_.empty()) return stream_count(i, 1, x);
    std::vector<u64> ps;
    for (const auto& rest : inner_nonfaces_) {
      u64 g = 0;
      for (auto j : rest) g = std::gcd(g, y_[j]);
      u64 z = g;
      for (std::size_t k = 0; z >= spf_.size() && k < trial_.size(); ++k)
        if (z % trial_[k] == 0) {
          ps.push_back(trial_[k]);
          while (z % trial_[k] == 0) z /= trial_[k];
        }
      if (z >= spf_.size()) {
        ps.push_back(z);
        z = 1;
      }
      while (z > 1) {
        const u64 p = spf_[z];
        ps.push_back(p);
        while (z % p == 0) z /= p;
      }
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    u64 plus = 0, minus = 0;
    const std::size_t n = ps.size();
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
      u64 e = 1;
      bool sign = false;
      bool too_big = false;
      for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1ul) {
          if (e > x / ps[k]) {
            too_big = true;
            break;
          }
          e *= ps[k];
          sign = !sign;
        }
      if (too_big) continue;
      (sign ? minus : plus) += stream_count(i, e, x);
    }
    return plus - minus;
  }

  void assign(std::size_t i, u64 v, std::vector<u128>& saved) {
    saved = partial_;
    y_[i] = v;
    for (std::size_t c = 0; c < exps_.size(); ++c)
      if (exps_[c][i] > 0) partial_[c] *= sat_pow(v, exps_[c][i]);
  }

  u64 descend(std::size_t k) {
    const std::size_t i = order_[k];
    const u64 lim = limit(i);
    if (k + 1 == s_) return count_inner(i, lim);
    const Stream& st = streams_[i];
    u64 total = 0;
    std::vector<u128> saved;
    auto visit = [&](u64 v) {
      if (++nodes_ > cap_) throw Error(ErrorKind::BoundTooLarge, "enumeration exceeded the work cap");
      assign(i, v, saved);
      if (passes(k)) total += descend(k + 1);
      partial_ = saved;
    };
    if (st.m == 1) {
      for (u64 v = st.d; v <= lim; v += st.d) visit(v);
    } else {
      for (u64 v : st.values) {
        if (v > lim) break;
        visit(v);
      }
    }
    return total;
  }

  std::size_t s_;
  std::vector<unsigned> m_;
  std::vector<u64> d_;
  bool coprime_;
  u64 cap_, nodes_ = 0;
  HeightEvaluator height_;
  u128 budget_ = 0;
  std::vector<std::vector<unsigned>> exps_;
  std::vector<std::size_t> order_;
  std::vector<Stream> streams_;
  std::map<std::size_t, std::vector<IndexSet>> checks_;
  std::vector<IndexSet> inner_nonfaces_;
  std::vector<std::uint32_t> spf_;
  std::vector<u64> trial_;
  std::unordered_map<u64, std::vector<u64>> filtered_;
  std::vector<u64> y_;
  std::vector<u128> partial_;
};

}  // namespace detail

/// Positive-orthant count of coprime m-full tuples with H <= B.
inline u64 count_positive(const OrbifoldInstance& inst, u64 B, u64 work_cap = detail::default_work_cap()) {
  if (B == 0) return 0;
  return detail::Enumerator(inst, B, std::vector<u64>(inst.s(), 1), true, work_cap).run();
}

/// N(B) = 2^{s-r} times the positive-orthant count.
inline Integer count_N(const OrbifoldInstance& inst, u64 B, u64 work_cap = detail::default_work_cap()) {
  return Integer(count_positive(inst, B, work_cap)) << (inst.s() - inst.r());
}

/// #A(B, d) over nonzero integer tuples: 2^s times the positive count.
inline Integer count_A(const OrbifoldInstance& inst, u64 B, const std::vector<u64>& d,
                       u64 work_cap = detail::default_work_cap()) {
  if (B == 0) return 0;
  return Integer(detail::Enumerator(inst, B, d, false, work_cap).run()) << inst.s();
}

/// Divisor tuples d with mu(d) != 0 and d_i <= bound_i, by DFS over primes.
inline void for_each_mu_support(const MoebiusLocal& ml, const std::vector<u64>& bound,
                                const std::function<void(const std::vector<u64>&, long long)>& visit) {
  const std::size_t s = bound.size();
  const u64 top = *std::max_element(bound.begin(), bound.end());
  const auto ps = primes_up_to(top);
  std::vector<unsigned long> masks;
  for (unsigned long mask = 1; mask < (1ul << s); ++mask)
    if (ml(mask) != 0) masks.push_back(mask);
  std::vector<u64> d(s, 1);
  std::function<void(std::size_t, long long)> rec = [&](std::size_t k, long long sign) {
    visit(d, sign);
    for (std::size_t j = k; j < ps.size(); ++j) {
      const u64 p = ps[j];
      for (auto mask : masks) {
        bool fits = true;
        for (std::size_t i = 0; i < s && fits; ++i)
          if (mask >> i & 1ul) fits = d[i] <= bound[i] / p;
        if (!fits) continue;
        for (std::size_t i = 0; i < s; ++i)
          if (mask >> i & 1ul) d[i] *= p;
        rec(j + 1, sign * ml(mask));
        for (std::size_t i = 0; i < s; ++i)
          if (mask >> i & 1ul) d[i] /= p;
      }
    }
  };
  rec(0, 1);
}

/// Per-coordinate Northcott bounds max y_i on {H <= B}.
inline std::vector<u64> coordinate_bounds(const OrbifoldInstance& inst, u64 B) {
  const HeightEvaluator h(inst);
  const u128 budget = sat_pow(B, h.t());
  std::vector<u64> out(inst.s(), 0);
  for (std::size_t i = 0; i < inst.s(); ++i) {
    bool found = false;
    for (const auto& row : h.exponents())
      if (row[i] > 0) {
        const u64 b = iroot(budget, row[i]);
        out[i] = found ? std::min(out[i], b) : b;
        found = true;
      }
    if (!found) throw Error(ErrorKind::InvalidArgument, "coordinate is unbounded");
  }
  return out;
}

/// sum_d mu(d) #A(B, d) over the mu-support with d_i <= min(cap, bound_i).
inline Integer moebius_sum(const OrbifoldInstance& inst, u64 B, u64 d_cap) {
  auto bound = coordinate_bounds(inst, B);
  for (auto& b : bound) b = std::min(b, d_cap);
  const auto ml = moebius_local(inst.fan);
  Integer total = 0;
  for_each_mu_support(ml, bound, [&](const std::vector<u64>& d, long long sign) {
    if (sign != 0) total += sign * count_A(inst, B, d);
  });
  return total;
}

/// Brute-force count over the coordinate box: heights from exact powers of
/// the alpha table and primitivity from per-cone gcds.
inline Integer naive_count_N(const OrbifoldInstance& inst, u64 B) {
  const auto bound = coordinate_bounds(inst, B);
  const HeightEvaluator h(inst);
  const Integer budget = ipow(Integer(B), h.t());
  const std::size_t s = inst.s();
  const auto comps = detail::complements(inst);
  std::vector<std::vector<long long>> vals(s);
  for (std::size_t i = 0; i < s; ++i)
    for (u64 v = 1; v <= bound[i]; ++v)
      if (mfull::is_m_full(v, inst.m[i])) vals[i].push_back(static_cast<long long>(v));
  std::vector<std::size_t> at(s, 0);
  std::vector<long long> y(s);
  Integer count = 0;
  for (;;) {
    for (std::size_t i = 0; i < s; ++i) y[i] = vals[i][at[i]];
    if (h.height_power(y) <= budget && detail::coprime_over(comps, y)) ++count;
    std::size_t i = 0;
    while (i < s && at[i] + 1 == vals[i].size()) at[i++] = 0;
    if (i == s) break;
    ++at[i];
  }
  return count << (s - inst.r());
}

struct LeadingConstant {
  Real value = 0;
  Real tail_bound = 0;  ///< relative
  Integer two_power;
  Rational alpha;
  Rational cone_sum;
  Real prod_C = 1;
  Real euler_product = 1;
  u64 cutoff = 0;
};

/// c = 2^{s-r} alpha(L) (sum_sigma prod_{Ic} 1/m_i) prod_i C_{m_i} prod_p sum_E mu_loc(E) prod_{i in E} ef(m_i, p).
inline LeadingConstant leading_constant(const OrbifoldInstance& inst, u64 cutoff = 100000) {
  if (cutoff < 2) throw Error(ErrorKind::InvalidArgument, "cutoff must be at least 2");
  if (!is_ample(inst)) throw Error(ErrorKind::NotAmple, "L is not ample");
  const std::size_t s = inst.s();
  for (std::size_t i = 0; i < s; ++i)
    if (inst.L[i] != inst.varpi(i)) throw Error(ErrorKind::InvalidArgument, "the constant needs L = -(K + Delta)");
  LeadingConstant c;
  c.cutoff = cutoff;
  c.two_power = Integer(1) << (s - inst.r());
  c.alpha = alpha_L(inst);
  c.cone_sum = cone_weight_sum(inst);
  Real c_tail = 0;
  for (unsigned m : inst.m) {
    const auto cm = mfull::constant_C_m_accelerated(m, cutoff);
    c.prod_C *= cm.value;
    c_tail = (1 + c_tail) * (1 + cm.tail_bound) - 1;
  }
  const auto ml = moebius_local(inst.fan);
  std::vector<unsigned long> support;
  for (unsigned long mask = 1; mask < ml.table.size(); ++mask)
    if (ml(mask) != 0) support.push_back(mask);
  Real log_e = 0;
  for (u64 p : mfull::primes(cutoff)) {
    if (p > cutoff) break;
    std::vector<Real> ef(s);
    for (std::size_t i = 0; i < s; ++i) ef[i] = mfull::euler_factor(inst.m[i], p);
    Real local = 1;
    for (auto mask : support) {
      Real term = static_cast<Real>(ml(mask));
      for (std::size_t i = 0; i < s; ++i)
        if (mask >> i & 1ul) term *= ef[i];
      local += term;
    }
    log_e += std::log(local);
  }
  c.euler_product = std::exp(log_e);
  // ef(m, p) <= q / p for p > X with q = 1/(1 - X^{-1/m})
  const unsigned m_max = *std::max_element(inst.m.begin(), inst.m.end());
  const Real q = 1 / (1 - std::pow(static_cast<Real>(cutoff), -Real(1) / m_max));
  Real t = 0;
  for (auto mask : support) {
    const int size = __builtin_popcountl(mask);
    t += std::abs(static_cast<Real>(ml(mask))) * std::pow(q, size) * prime_tail_bound(cutoff, size);
  }
  const Real e_tail = t < 1 ? std::expm1(t / (1 - t)) : INFINITY;
  c.tail_bound = (1 + c_tail) * (1 + e_tail) - 1;
  c.value = to_real(Rational(c.two_power) * c.alpha * c.cone_sum) * c.prod_C * c.euler_product;
  return c;
}

struct AsymptoticRow {
  u64 B = 0;
  Integer N;
  Real prediction = 0;
  Real ratio = 0;
};

struct AsymptoticReport {
  std::vector<AsymptoticRow> rows;
  LeadingConstant constant;
  Exponents exponents;
  AssumptionReport assumption;
  Real theta = 0;                  ///< decay exponent used for extrapolation
  std::optional<Real> limit;       ///< extrapolated N(B)/(c B (log B)^{r-1}) as B grows
  bool monotone_approach = false;  ///< |ratio - 1| nonincreasing along the rows
};

/// Extrapolated limit of R(B) = R + c' B^{-theta} from the last two rows.
inline std::optional<Real> richardson_limit(const std::vector<AsymptoticRow>& rows, Real theta) {
  if (rows.size() < 2 || theta <= 0) return std::nullopt;
  const auto& a = rows[rows.size() - 2];
  const auto& b = rows.back();
  const Real wa = std::pow(static_cast<Real>(a.B), theta), wb = std::pow(static_cast<Real>(b.B), theta);
  return (b.ratio * wb - a.ratio * wa) / (wb - wa);
}

inline AsymptoticReport asymptotic_report(const OrbifoldInstance& inst, const std::vector<u64>& bounds,
                                          u64 cutoff = 100000, u64 work_cap = detail::default_work_cap()) {
  if (!std::is_sorted(bounds.begin(), bounds.end())) throw Error(ErrorKind::ConfigError, "bounds must be ascending");
  AsymptoticReport rep;
  rep.constant = leading_constant(inst, cutoff);
  rep.exponents = exponents_a_b(inst);
  rep.assumption = check_assumption_toric(inst);
  const long r = static_cast<long>(inst.r());
  for (u64 B : bounds) {
    AsymptoticRow row;
    row.B = B;
    row.N = count_N(inst, B, work_cap);
    const Real lb = std::log(static_cast<Real>(B));
    row.prediction = rep.constant.value * static_cast<Real>(B) * std::pow(lb, r - 1);
    row.ratio = to_real(Rational(row.N)) / row.prediction;
    rep.rows.push_back(std::move(row));
  }
  rep.monotone_approach = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k)
    rep.monotone_approach =
        rep.monotone_approach && std::abs(rep.rows[k].ratio - 1) <= std::abs(rep.rows[k - 1].ratio - 1);
  if (r == 1) {
    unsigned m_max = *std::max_element(inst.m.begin(), inst.m.end());
    rep.theta = Real(1) / (m_max * (m_max + 1));
    rep.limit = richardson_limit(rep.rows, rep.theta);
  }
  return rep;
}

}  // namespace campana::count
