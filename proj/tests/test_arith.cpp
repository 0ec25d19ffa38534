#include <gtest/gtest.h>

#include "expsum/arith.hpp"
#include "expsum/primes.hpp"
#include "oracles.hpp"

using namespace expsum;

TEST(Factorize, Examples) {
    EXPECT_TRUE(factorize(1).empty());
    const auto f12 = factorize(12);
    ASSERT_EQ(f12.size(), 2u);
    EXPECT_EQ(f12[0].p, 2u);
    EXPECT_EQ(f12[0].e, 2u);
    EXPECT_EQ(f12[1].p, 3u);
    EXPECT_EQ(f12[1].e, 1u);
    const auto f = factorize(2025);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].p, 3u);
    EXPECT_EQ(f[0].e, 4u);
    EXPECT_EQ(f[1].p, 5u);
    EXPECT_EQ(f[1].e, 2u);
}

TEST(Factorize, MatchesTrialDivision) {
    for (u64 n = 1; n <= 5000; ++n) {
        const auto f = factorize(n);
        const auto g = oracle::factor(n);
        ASSERT_EQ(f.size(), g.size()) << n;
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_EQ(f[i].p, g[i].first);
            EXPECT_EQ(f[i].e, g[i].second);
        }
    }
}

TEST(Factorize, LargeSemiprime) {
    const u64 p = 3037000493ull, q = 2147483647ull;  // product just below 2^63
    const auto f = factorize(p * q);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].p, q);
    EXPECT_EQ(f[1].p, p);
    EXPECT_TRUE(is_prime(p));
    EXPECT_FALSE(is_prime(p * q));
}

TEST(Flrt, Examples) {
    EXPECT_EQ(flrt(1), 1u);
    EXPECT_EQ(flrt(12), 2u);
    for (u64 n = 1; n <= 1'000'000; n += 997) EXPECT_EQ(flrt(n * n), n);
}

TEST(Flrt, MultiplicativeOnCoprimePairs) {
    for (u64 m = 1; m <= 300; ++m)
        for (u64 n = 1; n <= 300; ++n)
            if (std::gcd(m, n) == 1) ASSERT_EQ(flrt(m * n), flrt(m) * flrt(n)) << m << " " << n;
}

TEST(Flrt, SquareDividesAndCofactorSquarefree) {
    for (u64 n = 1; n <= 100000; ++n) {
        const u64 r = flrt(n);
        ASSERT_EQ(n % (r * r), 0u);
        ASSERT_NE(oracle::moebius(n / (r * r)), 0) << n;
    }
}

TEST(MultFn, Examples) {
    const auto a = mult_fn(9);
    EXPECT_EQ(a.totient, 6u);
    EXPECT_EQ(a.moebius, 0);
    EXPECT_EQ(a.divisor_count, 3u);
    EXPECT_NEAR(a.von_mangoldt_log, std::log(3.0), 1e-15);
    const auto b = mult_fn(1);
    EXPECT_EQ(b.totient, 1u);
    EXPECT_EQ(b.moebius, 1);
    EXPECT_EQ(b.divisor_count, 1u);
    EXPECT_EQ(b.von_mangoldt_log, 0.0);
    const auto c = mult_fn(15);
    EXPECT_EQ(c.totient, 8u);
    EXPECT_EQ(c.moebius, 1);
    EXPECT_EQ(c.divisor_count, 4u);
    EXPECT_EQ(c.von_mangoldt_log, 0.0);
}

TEST(MultFn, MatchesBruteForce) {
    for (u64 n = 1; n <= 2000; ++n) {
        const auto f = mult_fn(n);
        EXPECT_EQ(f.totient, oracle::phi(n));
        EXPECT_EQ(f.divisor_count, oracle::divisor_count(n));
        EXPECT_EQ(f.moebius, oracle::moebius(n));
        const auto fac = oracle::factor(n);
        const double lam = fac.size() == 1 ? std::log(static_cast<double>(fac[0].first)) : 0.0;
        EXPECT_NEAR(f.von_mangoldt_log, lam, 1e-14);
    }
}

TEST(MultFn, TotientDivisorSum) {
    for (u64 n = 1; n <= 10000; ++n) {
        const auto f = mult_fn(n);
        ASSERT_LE(f.totient, n);
        u64 s = 0;
        for (u64 d = 1; d * d <= n; ++d) {
            if (n % d) continue;
            s += totient(d);
            if (d * d != n) s += totient(n / d);
        }
        ASSERT_EQ(s, n) << n;
    }
}

TEST(ModInverse, Examples) {
    EXPECT_EQ(mod_inverse(Residue(3, 7)), Residue(5, 7));
    EXPECT_EQ(mod_inverse(Residue(1, 91)), Residue(1, 91));
    EXPECT_EQ(mod_inverse(Residue(10, 27)), Residue(19, 27));
}

TEST(ModInverse, NonUnitThrows) { EXPECT_THROW((void)mod_inverse(Residue(6, 27)), not_invertible); }

TEST(ModInverse, Involution) {
    for (u64 m : {2ull, 9ull, 27ull, 125ull, 1001ull, 65537ull})
        for (u64 a = 1; a < std::min<u64>(m, 3000); ++a) {
            if (std::gcd(a, m) != 1) continue;
            const Residue r(a, m);
            const auto inv = mod_inverse(r);
            ASSERT_EQ(mul_mod(a, inv.value, m), 1 % m);
            ASSERT_EQ(mod_inverse(inv), r);
        }
}

TEST(MulMod, LargeOperands) {
    const u64 m = (1ull << 62) + 135;
    const u64 a = m - 1, b = m - 2;
    // (-1)(-2) = 2
    EXPECT_EQ(mul_mod(a, b, m), 2u);
}

TEST(Crt, Examples) {
    EXPECT_EQ(crt_combine({Residue(1, 3), Residue(1, 5)}), Residue(1, 15));
    EXPECT_EQ(crt_combine({Residue(2, 3), Residue(3, 5)}), Residue(8, 15));
    EXPECT_EQ(crt_combine({Residue(4, 11)}), Residue(4, 11));
}

TEST(Crt, ReconstructsEveryResidue) {
    for (u64 x = 0; x < 9 * 25 * 7; ++x) {
        const auto r = crt_combine({Residue(x, 9), Residue(x, 25), Residue(x, 7)});
        ASSERT_EQ(r, Residue(x, 9 * 25 * 7));
    }
}

TEST(Crt, NonCoprimeModuliRejected) { EXPECT_THROW((void)crt_combine({Residue(1, 6), Residue(1, 9)}), not_coprime); }

TEST(Divisors, CountIsNotSum) {
    // tau(n) is the number of divisors
    EXPECT_EQ(divisor_count(12), 6u);
    EXPECT_EQ(divisor_count(1), 1u);
    EXPECT_EQ(divisor_count(81), 5u);
}
