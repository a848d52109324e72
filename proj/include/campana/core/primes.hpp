#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "campana/core/errors.hpp"

namespace campana {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (u64 q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return out;
}

/// Distinct prime divisors by trial division.
inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_squarefree(u64 n) {
  if (n == 0) return false;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

inline int mobius(u64 n) {
  if (!is_squarefree(n)) return 0;
  return prime_divisors(n).size() % 2 ? -1 : 1;
}

inline u64 radical(u64 n) {
  u64 r = 1;
  for (auto p : prime_divisors(n)) r *= p;
  return r;
}

/// Upper bound for the sum over primes p > x of p^{-a}, a > 1, from
/// pi(y) < 1.25506 y / log y.
inline long double prime_tail_bound(long double x, long double a) {
  if (x < 2 || a <= 1) throw Error(ErrorKind::InvalidArgument, "prime_tail_bound needs x >= 2, a > 1");
  return 1.25506L * a * std::pow(x, 1 - a) / ((a - 1) * std::log(x));
}

/// Smallest-prime-factor table for 0..limit.
inline std::vector<std::uint32_t> spf_table(u64 limit) {
  std::vector<std::uint32_t> spf(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (spf[i]) continue;
    for (u64 j = i; j <= limit; j += i)
      if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
  }
  return spf;
}

// Checked 128-bit helpers used by the exact enumerators.

inline constexpr u128 kU128Max = ~u128(0);

inline bool mul_overflows(u128 a, u128 b) { return a != 0 && b > kU128Max / a; }

/// a^e, saturating at kU128Max.
inline u128 sat_pow(u128 a, unsigned e) {
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (mul_overflows(r, a)) return kU128Max;
    r *= a;
  }
  return r;
}

/// floor(x^{1/e}) for e >= 1.
inline u64 iroot(u128 x, unsigned e) {
  if (e == 1) return x > u128(UINT64_MAX) ? UINT64_MAX : static_cast<u64>(x);
  if (x == 0) return 0;
  long double guess = std::pow(static_cast<long double>(x), 1.0L / e);
  u64 r = guess >= 1.8e19L ? UINT64_MAX : static_cast<u64>(guess);
  while (r > 0 && sat_pow(r, e) > x) --r;
  while (r < UINT64_MAX && sat_pow(u128(r) + 1, e) <= x) ++r;
  return r;
}

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

}  // namespace campana
