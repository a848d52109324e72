// Rational points of bounded height on P^1, with and without a squarefull
// orbifold structure, against the predicted leading term.

#include <cstdio>

#include "campana/campana.hpp"

using namespace campana;

int main() {
  for (unsigned m : {1u, 2u}) {
    const auto inst = make_instance(fans::projective_line(), {m, m});
    const auto c = count::leading_constant(inst);
    std::printf("m = %u, c = %.7Lf\n", m, c.value);
    for (u64 B = 100; B <= 10000000; B *= 10) {
      const Integer N = count::count_N(inst, B);
      std::printf("  B = %-9llu N = %-9s N/(cB) = %.4Lf\n", static_cast<unsigned long long>(B), N.str().c_str(),
                  to_real(Rational(N)) / (c.value * static_cast<Real>(B)));
    }
  }
}
