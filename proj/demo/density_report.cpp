// One-level density main terms for a prime level family, as theta varies.
#include <cstdio>

#include "expsum/density.hpp"

int main() {
    using namespace expsum;
    DensityParams prm;
    prm.kappa = 2;
    prm.q = 1009;
    std::printf("level %llu, weight %d, Fejer kernel test function\n", static_cast<unsigned long long>(prm.q), prm.kappa);
    std::printf("%6s %-8s %12s %12s %12s\n", "theta", "G", "W_G", "lower order", "total");
    for (double theta : {0.5, 0.8, 1.0}) {
        const auto r = assemble_report(1, prm, ils_pair(theta));
        std::printf("%6.2f %-8s %12.8f %12.8f %12.8f\n", theta, to_string(r.symmetry).c_str(), r.leading_term,
                    r.total - r.leading_term, r.total);
    }
    std::printf("\nnonvanishing lower bound, SO(even), theta = 2: %.6f\n", nonvanishing(SymmetryType::SO_even, 2.0, ParityMode::even));
}
