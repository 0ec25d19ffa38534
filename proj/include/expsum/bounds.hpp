/**
 * @file bounds.hpp
 * @brief Weil-type bounds for plain and twisted Kloosterman sums, the
 *        floor-square-root refinement and the on-average envelope.
 */
#pragma once

#include <cmath>
#include <cstdlib>

#include "expsum/expsums.hpp"

namespace expsum {

namespace detail {
inline u64 gcd3(i64 m, i64 n, u64 c) {
    return std::gcd(std::gcd(static_cast<u64>(std::llabs(m)), static_cast<u64>(std::llabs(n))), c);
}
} // namespace detail

/// c^{1/2} (m,n,c)^{1/2} d(c).
[[nodiscard]] inline double weil_bound(i64 m, i64 n, u64 c) {
    const double g = static_cast<double>(detail::gcd3(m, n, c));
    return std::sqrt(static_cast<double>(c) * g) * static_cast<double>(divisor_count(c));
}

/// c^{1/2} cond(chi)^{1/2} (m,n,c)^{1/2} d(c) for the twisted sum.
[[nodiscard]] inline double weil_kl_bound(const DirichletCharacter& chi, i64 m, i64 n) {
    const u64 c = chi.modulus();
    const double g = static_cast<double>(detail::gcd3(m, n, c));
    return std::sqrt(static_cast<double>(c) * static_cast<double>(chi.conductor()) * g) *
           static_cast<double>(divisor_count(c));
}

/// Local data for one prime power p^e || c.
struct WeilFactor {
    u64 p = 0;
    u32 e = 0;
    Residue ell;     ///< Postnikov residue of the p-component (0 mod 1 when e = 1)
    u32 delta = 0;   ///< nu_p((m, n, ell, p^{floor(e/2)}))
    u64 c_i = 0;     ///< (c / p^e) * ell
    u32 disc_nu = 0; ///< min(nu_p(c_i^2 + 4mn), floor(e/2))
};

struct WeilFactorData {
    std::vector<WeilFactor> factors;
    u64 flrt_c = 1;
    u64 gcd_mn = 1;   ///< (m, n, flrt(c))
    u64 gcd_disc = 1; ///< (prod p_i^{nu(c_i^2 + 4mn)}, flrt(c))
};

namespace detail {
inline u32 capped_valuation_mod(u64 x, u64 p, u32 cap) {
    // valuation of x viewed modulo p^cap, capped at cap
    u32 v = 0;
    const u64 pc = ipow(p, cap);
    x %= pc;
    if (x == 0) return cap;
    while (v < cap && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}
} // namespace detail

[[nodiscard]] inline WeilFactorData weil_factor_data(const DirichletCharacter& chi, i64 m, i64 n) {
    const u64 c = chi.modulus();
    if (c % 2 == 0) throw unsupported_modulus("flrt_bound needs an odd modulus");
    WeilFactorData d;
    d.flrt_c = flrt(c);
    d.gcd_mn = detail::gcd3(m, n, d.flrt_c);
    const auto& f = chi.factorization();
    for (std::size_t i = 0; i < f.size(); ++i) {
        WeilFactor w;
        w.p = f[i].p;
        w.e = f[i].e;
        const u32 h = w.e / 2;
        const u64 pe = f[i].value();
        if (w.e >= 2) {
            w.ell = postnikov_ell(chi.component(i));
        } else {
            w.ell = Residue(0, 1);
        }
        w.c_i = (c / pe) * w.ell.value;
        if (h > 0) {
            const u64 ph = ipow(w.p, h);
            const u64 g = std::gcd(detail::gcd3(m, n, ph), std::gcd(w.ell.value, ph));
            w.delta = valuation(g, w.p, h);
            const u64 ci = w.c_i % ph;
            const u64 mn = mul_mod(reduce(m, ph), reduce(n, ph), ph);
            const u64 disc = (mul_mod(ci, ci, ph) + mul_mod(4 % ph, mn, ph)) % ph;
            w.disc_nu = detail::capped_valuation_mod(disc, w.p, h);
        }
        d.gcd_disc *= ipow(w.p, w.disc_nu);
        d.factors.push_back(w);
    }
    return d;
}

/// c^{1/2} d(c) (m,n,flrt c)^{1/2} (prod p_i^{nu(c_i^2+4mn)}, flrt c)^{1/2}.
[[nodiscard]] inline double flrt_bound(const DirichletCharacter& chi, i64 m, i64 n, WeilFactorData* diag = nullptr) {
    const u64 c = chi.modulus();
    auto d = weil_factor_data(chi, m, n);
    const double v = std::sqrt(static_cast<double>(c)) * static_cast<double>(divisor_count(c)) *
                     std::sqrt(static_cast<double>(d.gcd_mn)) * std::sqrt(static_cast<double>(d.gcd_disc));
    if (diag) *diag = std::move(d);
    return v;
}

/// (prod p_i^{nu(c_i^2 + 4r)}, flrt c) for the product mn = r.
[[nodiscard]] inline u64 discriminant_gcd(const WeilFactorData& base, u64 r) {
    u64 g = 1;
    for (const auto& w : base.factors) {
        const u32 h = w.e / 2;
        if (h == 0) continue;
        const u64 ph = ipow(w.p, h);
        const u64 ci = w.c_i % ph;
        const u64 disc = (mul_mod(ci, ci, ph) + mul_mod(4 % ph, r % ph, ph)) % ph;
        g *= ipow(w.p, detail::capped_valuation_mod(disc, w.p, h));
    }
    return g;
}

struct AvgWeilResult {
    double lhs = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
    u64 pairs = 0;
    double gcd_sum = 0.0;   ///< sum_{A<=r<=B} d(r) (flrt r, flrt c)
    double disc_sum = 0.0;  ///< sum_{A<=r<=B} d(r) (prod p_i^{nu(c_i^2+4r)}, flrt c)
    double amgm_rhs = 0.0;  ///< c^{1/2} d(c) (gcd_sum + disc_sum) / 2, a pointwise consequence of flrt_bound
};

/// sum over ordered (m,n) with A <= mn <= B of |S_chi(m,n;c)|, against c^{1/2+e0} B^{e0} (B - A + c^{1/2}).
[[nodiscard]] inline AvgWeilResult avg_weil_check(const DirichletCharacter& chi, u64 A, u64 B, double eps0 = 0.1) {
    if (A < 1 || A > B) throw invalid_input("avg_weil_check needs 1 <= A <= B");
    if (B > 10'000'000) throw invalid_input("avg_weil_check range too large");
    const u64 c = chi.modulus();
    AvgWeilResult out;
    // S_chi(m,n;c) only depends on m, n mod c
    std::map<std::pair<u64, u64>, double> cache;
    CompensatedSum lhs;
    for (u64 m = 1; m <= B; ++m) {
        for (u64 n = (A + m - 1) / m; n * m <= B; ++n) {
            const std::pair<u64, u64> key{m % c, n % c};
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, std::abs(twisted_kloosterman(chi, static_cast<i64>(m), static_cast<i64>(n), c).value)).first;
            lhs.add(it->second);
            ++out.pairs;
        }
    }
    out.lhs = lhs.value();
    const double cd = static_cast<double>(c);
    out.envelope = std::pow(cd, 0.5 + eps0) * std::pow(static_cast<double>(B), eps0) *
                   (static_cast<double>(B - A) + std::sqrt(cd));
    out.ratio = out.lhs / out.envelope;
    if (c % 2 == 1) {
        const u64 fc = flrt(c);
        const auto base = weil_factor_data(chi, 1, 1);
        for (u64 r = A; r <= B; ++r) {
            const double dr = static_cast<double>(divisor_count(r));
            out.gcd_sum += dr * static_cast<double>(std::gcd(flrt(r), fc));
            out.disc_sum += dr * static_cast<double>(discriminant_gcd(base, r));
        }
        out.amgm_rhs = 0.5 * std::sqrt(cd) * static_cast<double>(divisor_count(c)) * (out.gcd_sum + out.disc_sum);
    }
    return out;
}

/// sum_{m <= M} m^alpha |S_chi(m,n;c)| against
/// c^{1/2+e0} M^{1+alpha+e0} n^{1+e0} + c^{1+e0} M^{alpha+e0} n^{e0}.
[[nodiscard]] inline AvgWeilResult avg_weil_corollary_check(const DirichletCharacter& chi, u64 M, u64 n, double alpha,
                                                            double eps0 = 0.1) {
    if (alpha < 0) throw invalid_input("alpha must be nonnegative");
    if (M < 1 || n < 1) throw invalid_input("M and n must be positive");
    const u64 c = chi.modulus();
    AvgWeilResult out;
    CompensatedSum lhs;
    for (u64 m = 1; m <= M; ++m) {
        const double s = std::abs(twisted_kloosterman(chi, static_cast<i64>(m), static_cast<i64>(n), c).value);
        lhs.add(std::pow(static_cast<double>(m), alpha) * s);
        ++out.pairs;
    }
    out.lhs = lhs.value();
    const double cd = static_cast<double>(c), Md = static_cast<double>(M), nd = static_cast<double>(n);
    out.envelope = std::pow(cd, 0.5 + eps0) * std::pow(Md, 1 + alpha + eps0) * std::pow(nd, 1 + eps0) +
                   std::pow(cd, 1 + eps0) * std::pow(Md, alpha + eps0) * std::pow(nd, eps0);
    out.ratio = out.lhs / out.envelope;
    return out;
}

} // namespace expsum
