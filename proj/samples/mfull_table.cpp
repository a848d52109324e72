// F_m(B) next to C_m B^{1/m} for small m.

#include <cmath>
#include <cstdio>

#include "campana/mfull.hpp"

using namespace campana;

int main() {
  for (unsigned m = 2; m <= 4; ++m) {
    const auto cm = mfull::constant_C_m_accelerated(m, 100000);
    std::printf("m = %u  C_m = %.9Lf\n", m, cm.value);
    for (u64 B = 1000; B <= 1000000000000ull; B *= 1000) {
      const u64 F = mfull::count_F(m, B);
      const Real main = cm.value * std::pow(static_cast<Real>(B), 1.0L / m);
      std::printf("  B = 1e%-2d F = %-8llu ratio = %.5Lf\n", static_cast<int>(std::lround(std::log10(B))),
                  static_cast<unsigned long long>(F), F / main);
    }
  }
}
