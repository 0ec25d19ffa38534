// Twisted Kloosterman sums modulo 27 against the Weil and FLRT envelopes.
#include <cstdio>

#include "expsum/bounds.hpp"
#include "expsum/expsums.hpp"

int main() {
    using namespace expsum;
    const DirichletCharacter chi(27, {1});
    std::printf("chi = 27:1, conductor %llu\n", static_cast<unsigned long long>(chi.conductor()));
    std::printf("%4s %4s %12s %12s %10s %10s\n", "m", "n", "re S", "im S", "|S|", "flrt");
    for (i64 m = 1; m <= 4; ++m)
        for (i64 n = 1; n <= 4; ++n) {
            const auto S = twisted_kloosterman(chi, m, n, 27);
            std::printf("%4lld %4lld %12.6f %12.6f %10.6f %10.4f\n", static_cast<long long>(m), static_cast<long long>(n),
                        S.value.real(), S.value.imag(), std::abs(S.value), flrt_bound(chi, m, n));
        }
    const auto K = kloosterman(1, 1, 5);
    std::printf("\nS(1,1;5) = %.15f  (Weil bound %.6f)\n", K.value.real(), weil_bound(1, 1, 5));
}
