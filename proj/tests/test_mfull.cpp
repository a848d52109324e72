#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>

#include "campana/mfull.hpp"

using namespace campana;
using namespace campana::mfull;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

// Power series of G_m by long division of the numerator by 1 - x + x^m,
// written independently of the library recurrence.
std::vector<Integer> long_division(unsigned m, unsigned n) {
  std::vector<Integer> rem(n + m + 1, 0), q(n + 1, 0);
  rem[m + 1] += 1;
  rem[2 * m] -= 1;
  for (unsigned i = 0; i <= n; ++i) {
    q[i] = rem[i];
    rem[i + 1] += q[i];
    if (i + m < rem.size()) rem[i + m] -= q[i];
  }
  return q;
}

}  // namespace

TEST(MFull, Predicate) {
  EXPECT_TRUE(is_m_full(8, 2));
  EXPECT_FALSE(is_m_full(12, 2));
  for (unsigned m = 1; m <= 5; ++m) EXPECT_TRUE(is_m_full(1, m));
  EXPECT_TRUE(is_m_full(12, 1));
  EXPECT_TRUE(is_m_full(81 * 32, 4));
  EXPECT_FALSE(is_m_full(81 * 8, 4));
}

TEST(MFull, CountExamples) {
  EXPECT_EQ(count_F(2, 100), 14u);
  EXPECT_EQ(count_F(2, 100, 2), 8u);
  EXPECT_EQ(count_F(1, 100, 3), 33u);
  EXPECT_EQ(count_F(2, 0), 0u);
  EXPECT_EQ(count_F(3, 1), 1u);
}

TEST(MFull, ListMatchesCount) {
  const auto l = m_full_list(2, 100);
  const std::vector<u64> expect{1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100};
  EXPECT_EQ(l.values, expect);
  EXPECT_EQ(l.supports[10], (std::vector<u64>{2}));
  EXPECT_EQ(l.supports[11], (std::vector<u64>{2, 3}));
  const auto l6 = m_full_list(2, 10000, 6);
  EXPECT_EQ(l6.values.size(), count_F(2, 10000, 6));
  for (std::size_t i = 0; i < l6.values.size(); ++i) {
    EXPECT_EQ(l6.values[i] % 36, 0u);
    EXPECT_EQ(l6.supports[i], prime_divisors(l6.values[i]));
  }
  const auto l1 = m_full_list(1, 30, 3);
  EXPECT_EQ(l1.values.size(), 10u);
  EXPECT_EQ(l1.supports[3], (std::vector<u64>{2, 3}));
}

TEST(MFull, GeneratorMatchesScan) {
  const std::vector<u64> ds{1, 2, 3, 6, 10, 30};
  for (unsigned m = 1; m <= 4; ++m) {
    for (u64 d : ds) {
      MFullCounter counter(m, 100000, d);
      u64 running = 0;
      for (u64 y = 1; y <= 100000; ++y) {
        running += y % d == 0 && is_m_full(y, m);
        if (y % 997 == 0 || y == 100000) {
          ASSERT_EQ(counter(y), running) << m << " " << d << " " << y;
        }
      }
      EXPECT_EQ(count_F(m, 100000, d), running);
      EXPECT_EQ(naive_count_F(m, 100000, d), running);
    }
  }
}

TEST(MFull, Monotone) {
  for (unsigned m = 2; m <= 3; ++m) {
    u64 prev = 0;
    for (u64 B = 1; B <= 1000000; B = B * 3 + 1) {
      const u64 f = count_F(m, B);
      EXPECT_GE(f, prev);
      prev = f;
      EXPECT_LE(count_F(m, B, 2), f);
      EXPECT_LE(count_F(m, B, 6), count_F(m, B, 2));
      EXPECT_LE(count_F(m, B, 6), count_F(m, B, 3));
    }
  }
}

TEST(MFull, Rejections) {
  EXPECT_EQ(kind_of([] { count_F(2, 100, 4); }), ErrorKind::NonSquarefree);
  EXPECT_EQ(kind_of([] { count_F(2, 100, 0); }), ErrorKind::NonSquarefree);
  EXPECT_EQ(kind_of([] { c_md(2, 12); }), ErrorKind::NonSquarefree);
  EXPECT_EQ(kind_of([] { count_F(2, 1'000'000'000'000ull, 1, 1000); }), ErrorKind::BoundTooLarge);
  EXPECT_EQ(kind_of([] { verify_peeling(2, 6, 5, 100); }), ErrorKind::InvalidArgument);
}

TEST(MFull, RhoTable) {
  const auto r2 = rho_table(2, 8, 8);
  for (unsigned t = 0; t <= 8; ++t)
    for (unsigned k = 0; k <= 8; ++k) EXPECT_EQ(r2[t][k], k == t ? 1 : 0);
  const auto r3 = rho_table(3, 4, 8);
  EXPECT_EQ(r3[2][3], 2);
  EXPECT_EQ(r3[3][4], 3);
  EXPECT_EQ(r3[3][7], 0);
}

TEST(MFull, CoefficientExamples) {
  const auto a2 = a_m_coefficients(2, 9);
  const std::vector<Integer> expect{1, 0, -1, -1, 0, 1, 1};
  for (unsigned mu = 3; mu <= 9; ++mu) EXPECT_EQ(a2[mu], expect[mu - 3]) << mu;
  EXPECT_EQ(a_m_coefficients(3, 4)[4], 1);
}

TEST(MFull, CoefficientsAreTaylorSeries) {
  for (unsigned m = 2; m <= 5; ++m) {
    const auto a = a_m_coefficients(m, 40);
    const auto t = taylor_G_m(m, 40);
    const auto q = long_division(m, 40);
    for (unsigned mu = 0; mu <= 40; ++mu) {
      EXPECT_EQ(a[mu], q[mu]) << m << " " << mu;
      EXPECT_EQ(t[mu], q[mu]) << m << " " << mu;
    }
  }
}

TEST(MFull, EulerFactor) {
  EXPECT_NEAR(static_cast<double>(euler_factor(2, 2)), 0.6306019, 1e-7);
  EXPECT_NEAR(static_cast<double>(G_m(2, std::sqrt(0.5L))), 0.1306019, 1e-7);
  for (u64 p : primes_up_to(100)) {
    EXPECT_EQ(euler_factor(1, p), 1.0L / p);
    for (unsigned m = 2; m <= 5; ++m) {
      const Real x = std::pow(static_cast<Real>(p), -1.0L / m);
      EXPECT_LT(std::abs(1.0L / p + G_m(m, x) - euler_factor(m, p)), 1e-12L);
      if (auto s = G_m_series(m, x)) {
        EXPECT_LT(std::abs(1.0L / p + *s - euler_factor(m, p)), 1e-12L) << m << " " << p;
      }
    }
  }
}

TEST(MFull, SeriesRadius) {
  EXPECT_NEAR(static_cast<double>(series_radius(2)), 1.0, 1e-9);
  EXPECT_NEAR(static_cast<double>(series_radius(3)), 0.8688369618, 1e-8);
  EXPECT_FALSE(G_m_series(5, std::pow(2.0L, -0.2L)).has_value());
  EXPECT_TRUE(G_m_series(5, std::pow(3.0L, -0.2L)).has_value());
  EXPECT_TRUE(K_m(2).has_value());
  EXPECT_TRUE(K_m(3).has_value());
  EXPECT_FALSE(K_m(4).has_value());
  EXPECT_FALSE(K_m(5).has_value());
  EXPECT_EQ(*K_m(1), 1);
}

TEST(MFull, ConstantExamples) {
  EXPECT_EQ(constant_C_m(1, 1000).value, 1);
  EXPECT_EQ(constant_C_m_accelerated(1, 1000).value, 1);
  const Real zq = boost::math::zeta(1.5L) / boost::math::zeta(3.0L);
  const auto plain = constant_C_m(2, 1000000);
  EXPECT_LT(plain.value, zq);
  EXPECT_LE(zq / plain.value - 1, plain.tail_bound);
  EXPECT_NEAR(static_cast<double>(plain.value), 2.17325, 1e-3);
  const auto acc = constant_C_m_accelerated(2, 100000);
  EXPECT_LT(std::abs(acc.value / zq - 1), 1e-12L);
  EXPECT_EQ(acc.exponents[3], 1);
  EXPECT_EQ(acc.exponents[6], -1);
}

TEST(MFull, AcceleratedAgreesWithPlainWithinTail) {
  for (unsigned m = 2; m <= 5; ++m) {
    const auto plain = constant_C_m(m, 1000000);
    const auto acc = constant_C_m_accelerated(m, 1000);
    EXPECT_GE(acc.value, plain.value);
    EXPECT_LE(acc.value / plain.value - 1, plain.tail_bound + 1e-9L) << m;
  }
}

TEST(MFull, AcceleratedStableAcrossCutoffs) {
  for (unsigned m = 2; m <= 5; ++m) {
    const Real a = constant_C_m_accelerated(m, 100000).value;
    const Real b = constant_C_m_accelerated(m, 1000000).value;
    EXPECT_LT(std::abs(a / b - 1), 1e-6L) << m;
  }
}

TEST(MFull, Densities) {
  for (u64 d : {1, 2, 3, 30}) EXPECT_NEAR(static_cast<double>(c_md(1, d)), 1.0 / d, 1e-15);
  EXPECT_NEAR(static_cast<double>(c_md(2, 2)), 1.37046, 1e-5);
  EXPECT_EQ(c_md(3, 1), constant_C_m_accelerated(3, 100000).value);
}

TEST(MFull, PeelingExamples) {
  EXPECT_TRUE(verify_peeling(2, 2, 2, 10000).holds());
  EXPECT_TRUE(verify_peeling(3, 5, 5, 100000).holds());
  EXPECT_TRUE(verify_peeling(2, 6, 3, 10000).holds());
}

TEST(MFull, PeelingGrid) {
  for (unsigned m = 2; m <= 4; ++m)
    for (u64 p : {2, 3, 5, 7})
      for (u64 d : {p, p == 2 ? 6 : 2 * p})
        for (u64 B : {1000, 10000, 100000})
          for (u64 q : prime_divisors(d)) {
            const auto c = verify_peeling(m, d, q, B);
            EXPECT_TRUE(c.holds()) << m << " " << d << " " << q << " " << B;
            EXPECT_EQ(verify_peeling_mu_form(m, d, q, B).rhs, c.lhs);
          }
}

TEST(MFull, BoxSums) {
  EXPECT_EQ(box_sum_f({1, 1}, {10, 10}, {1, 1}), 100);
  EXPECT_EQ(box_sum_f({2, 1}, {100, 100}, {1, 3}), 462);
  EXPECT_EQ(box_sum_f({2, 2}, {100, 100}, {2, 1}), 112);
}

TEST(MFull, ErrorExponentBounded) {
  Real worst = 0;
  for (u64 d : {1, 2, 6}) {
    const Real c = c_md(2, d);
    for (int j = 0; j <= 10; ++j) {
      const u64 B = static_cast<u64>(std::llround(std::pow(10.0L, 3 + 0.5L * j)));
      const Real err = std::abs(static_cast<Real>(count_F(2, B, d)) - c * std::sqrt(static_cast<Real>(B)));
      worst = std::max(worst, err / std::cbrt(static_cast<Real>(B)));
    }
  }
  EXPECT_LT(worst, 5);
}
