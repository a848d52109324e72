#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "campana/core/errors.hpp"

namespace campana {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Real = long double;

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline std::string to_string(const Integer& z) { return z.str(); }

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& q) {
  if (den(q) == 1) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

inline Real to_real(const Integer& z) { return z.convert_to<Real>(); }

inline Real to_real(const Rational& q) {
  const Integer n = num(q), d = den(q);
  const auto bits_n = n == 0 ? 0u : boost::multiprecision::msb(abs(n));
  const auto bits_d = boost::multiprecision::msb(d);
  if (bits_n < 16000 && bits_d < 16000) return n.convert_to<Real>() / d.convert_to<Real>();
  // Shift both to a common scale first so neither overflows.
  const long shift = static_cast<long>(std::max(bits_n, bits_d)) - 200;
  Integer ns = shift > 0 ? Integer(n >> shift) : n;
  Integer ds = shift > 0 ? Integer(d >> shift) : d;
  if (ds == 0) return n > 0 ? INFINITY : -INFINITY;
  return ns.convert_to<Real>() / ds.convert_to<Real>();
}

inline Integer floor(const Rational& q) {
  Integer n = num(q), d = den(q);
  Integer f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

inline Integer ceil(const Rational& q) { return -floor(Rational(-q)); }

inline Rational rpow(const Rational& base, unsigned e) {
  Rational r = 1, b = base;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

inline Integer ipow(const Integer& base, unsigned e) {
  Integer r = 1, b = base;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

inline Integer lcm_of_denominators(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& q : v) l = boost::multiprecision::lcm(l, den(q));
  return l;
}

/// Parses "p/q", "-7", "0.25", "1e6", "2.5e-3" exactly.
inline Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorKind::ConfigError, "not a rational number: '" + text + "'");
  };
  if (text.empty()) return fail();
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      Integer p(text.substr(0, slash)), q(text.substr(slash + 1));
      if (q == 0) return fail();
      return Rational(p, q);
    }
    std::string mant = text;
    long exp10 = 0;
    const auto e = text.find_first_of("eE");
    if (e != std::string::npos) {
      mant = text.substr(0, e);
      exp10 = std::stol(text.substr(e + 1));
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant = mant.substr(1);
    }
    const auto dot = mant.find('.');
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(mant.size() - dot - 1);
      mant.erase(dot, 1);
    }
    if (mant.empty() || mant.find_first_not_of("0123456789") != std::string::npos) return fail();
    Rational r{Integer(mant)};
    if (exp10 >= 0) r *= ipow(Integer(10), static_cast<unsigned>(exp10));
    else r /= ipow(Integer(10), static_cast<unsigned>(-exp10));
    return neg ? Rational(-r) : r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    return fail();
  }
}

}  // namespace campana
