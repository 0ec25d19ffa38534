#include <gtest/gtest.h>

#include "expsum/characters.hpp"
#include "oracles.hpp"

using namespace expsum;

namespace {
double dist(cplx a, cplx b) { return std::abs(a - b); }
}

TEST(Characters, ValuesMatchDiscreteLogOracle) {
    for (u64 n : {9ull, 25ull, 27ull, 49ull, 81ull, 15ull, 45ull, 225ull, 343ull}) {
        const auto f = oracle::factor(n);
        for (const auto& chi : enumerate_group(n)) {
            const oracle::Char ref(n, chi.indices());
            for (i64 x = -7; x < static_cast<i64>(n) + 7; ++x) ASSERT_LT(dist(chi(x), ref(x)), 1e-12) << n << " " << x;
        }
    }
}

TEST(Characters, EnumerateGroupSizes) {
    EXPECT_EQ(enumerate_group(1).size(), 1u);
    EXPECT_TRUE(enumerate_group(1)[0].is_principal());
    EXPECT_EQ(enumerate_group(9).size(), 6u);
    EXPECT_EQ(enumerate_group(15).size(), 8u);
    EXPECT_THROW((void)enumerate_group(12), invalid_input);
}

TEST(Characters, OrthogonalityModFifteen) {
    cplx s27{0, 0}, s22{0, 0};
    for (const auto& chi : enumerate_group(15)) {
        s27 += chi(2) * std::conj(chi(7));
        s22 += chi(2) * std::conj(chi(2));
    }
    EXPECT_LT(std::abs(s27), 1e-12);
    EXPECT_LT(dist(s22, 8.0), 1e-12);
}

TEST(Characters, Multiplicative) {
    for (const auto& chi : enumerate_group(125))
        for (i64 a = 1; a < 30; ++a)
            for (i64 b = 1; b < 30; ++b) ASSERT_LT(dist(chi(a * b), chi(a) * chi(b)), 1e-12);
}

TEST(Characters, ParityHalfEven) {
    for (u64 q : {3ull, 9ull, 27ull, 5ull, 125ull, 7ull, 49ull}) {
        int even = 0;
        const auto g = enumerate_group(q);
        for (const auto& chi : g) {
            const int s = chi.parity();
            ASSERT_TRUE(s == 1 || s == -1);
            ASSERT_LT(dist(chi(-1), static_cast<double>(s)), 1e-12);
            even += s == 1;
        }
        EXPECT_EQ(2 * even, static_cast<int>(g.size())) << q;
    }
}

TEST(Conductor, Examples) {
    EXPECT_EQ(DirichletCharacter::principal(9).conductor(), 1u);
    // index 1 has exact order phi(p^e)
    for (u64 pe : {9ull, 27ull, 25ull, 125ull}) EXPECT_EQ(DirichletCharacter(pe, {1}).conductor(), pe);
    const DirichletCharacter mod3(3, {1});
    const auto lifted = mod3.lift(9);
    EXPECT_EQ(lifted.conductor(), 3u);
    for (i64 x = 0; x < 9; ++x) EXPECT_LT(dist(lifted(x), mod3(x)), 1e-12);
}

TEST(Conductor, FactorThroughOracle) {
    for (u64 n : {27ull, 45ull, 125ull, 225ull}) {
        for (const auto& chi : enumerate_group(n)) {
            const u64 c = chi.conductor();
            ASSERT_EQ(n % c, 0u);
            // chi factors through d iff chi(x) = 1 whenever x = 1 mod d
            auto trivial_mod = [&](u64 d) {
                for (u64 x = 1; x < n; x += d)
                    if (std::gcd(x, n) == 1 && dist(chi(static_cast<i64>(x)), 1.0) > 1e-9) return false;
                return true;
            };
            ASSERT_TRUE(trivial_mod(c));
            for (u64 d = 1; d < c; ++d)
                if (n % d == 0) ASSERT_FALSE(trivial_mod(d)) << n << " " << d;
        }
    }
}

TEST(GaussSum, Examples) {
    const auto one = gauss_sum(DirichletCharacter::principal(1));
    EXPECT_LT(dist(one.value, 1.0), 1e-12);
    for (u64 p : {3ull, 5ull, 7ull, 101ull}) EXPECT_LT(dist(gauss_sum(DirichletCharacter::principal(p)).value, -1.0), 1e-10);
    for (u64 q : {9ull, 27ull, 125ull, 15ull, 45ull, 1331ull})
        for (const auto& chi : enumerate_group(q))
            if (chi.is_primitive()) EXPECT_NEAR(std::abs(gauss_sum(chi).value), std::sqrt(static_cast<double>(q)), 1e-8);
}

TEST(GaussSum, MatchesDirectSum) {
    for (u64 q : {27ull, 45ull, 49ull})
        for (const auto& chi : enumerate_group(q)) {
            const oracle::Char ref(q, chi.indices());
            const auto g = gauss_sum(chi);
            EXPECT_LT(dist(g.value, oracle::gauss(ref, q)), 1e-10);
            EXPECT_LE(g.err_radius, 1e-12 * static_cast<double>(q));
        }
}

TEST(GaussSum, ProductWithConjugate) {
    for (u64 q = 3; q <= 2000; q += 2) {
        const auto g = enumerate_group(q);
        // a few primitive characters per modulus keep the sweep short
        int seen = 0;
        for (const auto& chi : g) {
            if (!chi.is_primitive()) continue;
            const cplx lhs = gauss_sum(chi).value * gauss_sum(chi.conj()).value;
            ASSERT_LT(dist(lhs, chi(-1) * static_cast<double>(q)), 1e-8 * static_cast<double>(q)) << q;
            if (++seen == 3) break;
        }
    }
}

TEST(GaussSum, FactorsOverCoprimeModuli) {
    // tau(chi eta) = chi(b) eta_q(b) eta_b(q) tau(chi eta_q) tau(eta_b), chi mod q, eta = eta_b eta_q mod bq
    const u64 q = 27;
    for (u64 b : {5ull, 7ull, 25ull, 49ull, 55ull}) {
        for (const auto& chi : enumerate_group(q)) {
            for (const auto& eb : enumerate_group(b)) {
                for (u64 tq = 0; tq < 18; tq += 5) {
                    const DirichletCharacter eq(q, {tq});
                    const auto eta = eb.lift(b * q) * eq.lift(b * q);
                    const auto lhs = gauss_sum(chi.lift(b * q) * eta).value;
                    const auto rhs = chi(static_cast<i64>(b)) * eq(static_cast<i64>(b)) * eb(static_cast<i64>(q)) *
                                     gauss_sum(chi * eq).value * gauss_sum(eb).value;
                    ASSERT_LT(dist(lhs, rhs), 1e-8) << b;
                }
            }
        }
    }
}

TEST(Coset, EnumerationAndConductors) {
    const CharacterCoset cs(DirichletCharacter(9, {1}), 1, 1);
    const auto all = coset_enumerate(cs);
    ASSERT_EQ(all.size(), 2u);
    for (const auto& chi : all) EXPECT_EQ(chi.conductor(), 9u);
    for (u64 p : {3ull, 5ull})
        for (u32 k = 2; k <= 3; ++k)
            for (u32 j = 1; j < k; ++j)
                for (const auto& psi : square_primitive_characters(p, k)) {
                    const CharacterCoset c(psi, j, psi.parity());
                    const auto el = coset_enumerate(c);
                    EXPECT_EQ(el.size(), (p - 1) * ipow(p, j - 1));
                    for (const auto& chi : el) EXPECT_EQ(chi.conductor(), ipow(p, k));
                    const auto filtered = coset_enumerate(c, true);
                    EXPECT_NE(std::find(filtered.begin(), filtered.end(), psi), filtered.end());
                    for (const auto& chi : filtered) EXPECT_EQ(chi.parity(), psi.parity());
                }
}

TEST(Coset, OrthogonalitySum) {
    for (const auto& psi : square_primitive_characters(5, 3)) {
        const CharacterCoset cs(psi, 2, 1);
        const double phij = 20.0;
        for (i64 m = 1; m < 40; ++m)
            for (i64 n = 1; n < 40; ++n) {
                if (m % 5 == 0 || n % 5 == 0) continue;
                cplx s{0, 0};
                for (const auto& chi : coset_enumerate(cs)) s += chi(m) * std::conj(chi(n));
                const cplx want = (m - n) % 25 == 0 ? psi(m) * std::conj(psi(n)) * phij : cplx{0, 0};
                ASSERT_LT(dist(s, want), 1e-10);
            }
        break;
    }
}

TEST(Coset, RejectsNonPrimitiveSquare) {
    // index 3 mod 9 has order 2, so its square is principal
    EXPECT_THROW(CharacterCoset(DirichletCharacter(9, {3}), 1, 1), invalid_input);
    EXPECT_THROW(CharacterCoset(DirichletCharacter(9, {1}), 2, 1), invalid_input);
}

TEST(Postnikov, PrincipalIsZero) {
    for (u64 p : {3ull, 5ull, 7ull}) EXPECT_EQ(postnikov_ell(DirichletCharacter::principal(p * p)).value, 0u);
}

TEST(Postnikov, EvenExponentIdentityMod81) {
    // conj chi(1 + 9 z) = e(ell z / 9) for all z
    for (const auto& chi : enumerate_group(81)) {
        const auto ell = postnikov_ell(chi);
        ASSERT_EQ(ell.modulus, 9u);
        for (u64 z = 0; z < 9; ++z)
            ASSERT_LT(dist(std::conj(chi(static_cast<i64>(1 + 9 * z))), oracle::e(static_cast<double>(ell.value * z % 9) / 9.0)),
                      1e-10);
    }
}

TEST(Postnikov, OddExponentIdentityMod125) {
    // e = 3: conj chi(1 + 5 z) = e(ell (z - 5 z^2 / 2) / 25) for all z mod 25
    for (const auto& chi : enumerate_group(125)) {
        const auto ell = postnikov_ell(chi);
        ASSERT_EQ(ell.modulus, 25u);
        const u64 inv2 = 13;  // 2 * 13 = 1 mod 25
        for (u64 z = 0; z < 25; ++z) {
            const u64 quad = (z + 25 - (5 * z % 25) * z % 25 * inv2 % 25) % 25;
            const cplx want = oracle::e(static_cast<double>(ell.value * quad % 25) / 25.0);
            ASSERT_LT(dist(std::conj(chi(static_cast<i64>(1 + 5 * z))), want), 1e-10) << chi.indices()[0] << " " << z;
        }
    }
}

TEST(Postnikov, RejectsEvenAndSquarefreeModuli) {
    EXPECT_THROW((void)postnikov_ell(DirichletCharacter(4, {0})), invalid_input);
    EXPECT_THROW((void)postnikov_ell(DirichletCharacter(7, {1})), invalid_input);
    EXPECT_THROW((void)postnikov_ell(DirichletCharacter(45, {1, 1})), invalid_input);
}
