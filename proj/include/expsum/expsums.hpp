/**
 * @file expsums.hpp
 * @brief Kloosterman-type sums: plain, twisted, Salie-type restricted pieces,
 *        coset sums and their multiplicative Fourier coefficients.
 *
 * Every family has a literal path that simply adds up the defining terms and,
 * where the structure theory gives one, a fast structural path. Tests compare
 * the two.
 */
#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "expsum/characters.hpp"

namespace expsum {

/// Moduli up to this size are summed directly; larger ones factor through CRT.
inline constexpr u64 direct_sum_limit = 10'000;

namespace detail {

inline std::shared_ptr<const RootTable> shared_roots(u64 n) {
    static std::mutex mu;
    static std::map<u64, std::shared_ptr<const RootTable>> cache;
    constexpr u64 cacheable = u64{1} << 21;
    if (n > cacheable) return std::make_shared<const RootTable>(n);
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const RootTable>(n);
    return slot;
}

/// Inverses of all units mod c (0 marks non-units).
inline std::vector<u64> unit_inverses(u64 c) {
    std::vector<u64> inv(c, 0);
    if (c == 1) {
        inv[0] = 0;
        return inv;
    }
    for (u64 x = 1; x < c; ++x) {
        if (inv[x] != 0 || std::gcd(x, c) != 1) continue;
        const u64 y = inverse_mod(x, c);
        inv[x] = y;
        inv[y] = x;
    }
    return inv;
}

/// unit_inverses(c), built once per modulus for moduli up to 2^21.
inline std::shared_ptr<const std::vector<u64>> shared_inverses(u64 c) {
    static std::mutex mu;
    static std::map<u64, std::shared_ptr<const std::vector<u64>>> cache;
    constexpr u64 cacheable = u64{1} << 21;
    if (c > cacheable) return std::make_shared<const std::vector<u64>>(unit_inverses(c));
    std::lock_guard lock(mu);
    auto& slot = cache[c];
    if (!slot) slot = std::make_shared<const std::vector<u64>>(unit_inverses(c));
    return slot;
}

/// sum_{a mod phi} e(-t a / phi) e_{p^e}(m g^a + n g^{-a}), i.e. S_chi over one prime power.
inline SumValue prime_power_twisted(const DlogTable& tab, u64 t, u64 m, u64 n) {
    const u64 pe = tab.pe;
    m %= pe;
    n %= pe;
    const auto roots = shared_roots(pe);
    const auto croots = shared_roots(tab.phi);
    const u64 ginv = inverse_mod(tab.g, pe);
    u64 x = 1 % pe, xi = 1 % pe, ta = 0;
    ComplexCompensatedSum s;
    for (u64 a = 0; a < tab.phi; ++a) {
        const u64 arg = (mul_mod(m, x, pe) + mul_mod(n, xi, pe)) % pe;
        const u64 ce = ta == 0 ? 0 : tab.phi - ta;  // conj chi(x) = e(-t a / phi)
        s.add((*croots)[ce] * (*roots)[arg]);
        x = mul_mod(x, tab.g, pe);
        xi = mul_mod(xi, ginv, pe);
        ta = (ta + t) % tab.phi;
    }
    return SumValue::of(s.value(), tab.phi);
}

} // namespace detail

// ---------------------------------------------------------------------------
// plain and twisted Kloosterman sums

/// S(m,n;c) by direct summation over units.
[[nodiscard]] inline SumValue kloosterman_direct(i64 m, i64 n, u64 c) {
    if (c == 0) throw invalid_input("Kloosterman modulus must be positive");
    if (c == 1) return SumValue::of({1.0, 0.0}, 1);
    const auto invp = detail::shared_inverses(c);
    const auto& inv = *invp;
    const auto roots = detail::shared_roots(c);
    const u64 mr = reduce(m, c), nr = reduce(n, c);
    ComplexCompensatedSum s;
    u64 terms = 0;
    for (u64 x = 1; x < c; ++x) {
        if (inv[x] == 0) continue;
        s.add((*roots)[(mul_mod(mr, x, c) + mul_mod(nr, inv[x], c)) % c]);
        ++terms;
    }
    return SumValue::of(s.value(), terms);
}

/// S_chi(m,n;c) = sum_{(x,c)=1} conj chi(x) e_c(mx + n xbar), direct summation.
[[nodiscard]] inline SumValue twisted_kloosterman_direct(const DirichletCharacter& chi, i64 m, i64 n, u64 c) {
    if (chi.modulus() != c) throw modulus_mismatch("twisted sum needs a character modulo c");
    if (c == 1) return SumValue::of({1.0, 0.0}, 1);
    const CharacterTable tab(chi);
    const auto invp = detail::shared_inverses(c);
    const auto& inv = *invp;
    const auto roots = detail::shared_roots(c);
    const u64 mr = reduce(m, c), nr = reduce(n, c);
    ComplexCompensatedSum s;
    u64 terms = 0;
    for (u64 x = 1; x < c; ++x) {
        if (inv[x] == 0) continue;
        s.add(tab.conj(x) * (*roots)[(mul_mod(mr, x, c) + mul_mod(nr, inv[x], c)) % c]);
        ++terms;
    }
    return SumValue::of(s.value(), terms);
}

/// S_chi(m,n;c) = prod_i S_{chi_i}(d_i m, d_i n; p_i^{e_i}), d_i = (c/p_i^{e_i})^{-1} mod p_i^{e_i}.
[[nodiscard]] inline SumValue twisted_kloosterman_factored(const DirichletCharacter& chi, i64 m, i64 n, u64 c) {
    if (chi.modulus() != c) throw modulus_mismatch("twisted sum needs a character modulo c");
    SumValue prod = SumValue::exact({1.0, 0.0});
    const auto& f = chi.factorization();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const u64 pe = f[i].value();
        const u64 d = inverse_mod((c / pe) % pe, pe);
        const auto tab = dlog_table(f[i].p, f[i].e);
        const auto local = detail::prime_power_twisted(*tab, chi.indices()[i], mul_mod(d, reduce(m, pe), pe),
                                                       mul_mod(d, reduce(n, pe), pe));
        prod = prod * local;
    }
    prod.terms = std::max<u64>(prod.terms, 1);
    return prod;
}

[[nodiscard]] inline SumValue twisted_kloosterman(const DirichletCharacter& chi, i64 m, i64 n, u64 c) {
    if (chi.modulus() != c) throw modulus_mismatch("twisted sum needs a character modulo c");
    return c <= direct_sum_limit ? twisted_kloosterman_direct(chi, m, n, c) : twisted_kloosterman_factored(chi, m, n, c);
}

/// Plain sums of any modulus: odd-part characters cannot express a 2^e part
/// with e >= 3, so the factored path handles every prime power itself.
[[nodiscard]] inline SumValue kloosterman_factored(i64 m, i64 n, u64 c) {
    if (c == 0) throw invalid_input("Kloosterman modulus must be positive");
    SumValue prod = SumValue::exact({1.0, 0.0});
    for (const auto& pe_f : factorize(c)) {
        const u64 pe = pe_f.value();
        const u64 d = inverse_mod((c / pe) % pe, pe);
        prod = prod * kloosterman_direct(static_cast<i64>(mul_mod(d, reduce(m, pe), pe)),
                                         static_cast<i64>(mul_mod(d, reduce(n, pe), pe)), pe);
    }
    prod.terms = std::max<u64>(prod.terms, 1);
    return prod;
}

[[nodiscard]] inline SumValue kloosterman(i64 m, i64 n, u64 c) {
    if (c == 0) throw invalid_input("Kloosterman modulus must be positive");
    return c <= direct_sum_limit ? kloosterman_direct(m, n, c) : kloosterman_factored(m, n, c);
}

/// S_chi(m,n;c) for chi modulo q with q | c and c arbitrary (any power of 2 allowed):
/// with P the part of c supported on primes of q and b = c/P,
/// S_chi(m,n;c) = S_chi(bbar m, bbar n; P) S(Pbar m, Pbar n; b).
[[nodiscard]] inline SumValue twisted_kloosterman_any(const DirichletCharacter& chi, i64 m, i64 n, u64 c) {
    const u64 q = chi.modulus();
    if (c == 0 || c % q != 0) throw modulus_mismatch("twisted sum needs q | c");
    u64 P = 1, b = c;
    for (const auto& f : chi.factorization()) {
        while (b % f.p == 0) {
            b /= f.p;
            P *= f.p;
        }
    }
    if (b == 1) return twisted_kloosterman(chi.lift(c), m, n, c);
    const u64 bbar = inverse_mod(b % P, P);
    const u64 Pbar = inverse_mod(P % b, b);
    const auto local = twisted_kloosterman(chi.lift(P), static_cast<i64>(mul_mod(bbar, reduce(m, P), P)),
                                           static_cast<i64>(mul_mod(bbar, reduce(n, P), P)), P);
    const auto rest = kloosterman_factored(static_cast<i64>(mul_mod(Pbar, reduce(m, b), b)),
                                           static_cast<i64>(mul_mod(Pbar, reduce(n, b), b)), b);
    auto out = local * rest;
    out.terms = local.terms * std::max<u64>(rest.terms, 1);
    return out;
}

/// (1/phi(c)) sum_psi conj psi(m) tau(psi) tau(chi psi), which equals S_chi(m,1;c).
[[nodiscard]] inline SumValue kloosterman_fourier(const DirichletCharacter& chi, i64 m, u64 c) {
    if (chi.modulus() != c) throw modulus_mismatch("character modulus must equal c");
    if (std::gcd(reduce(m, c), c) != 1) throw invalid_input("kloosterman_fourier needs gcd(c, m) = 1");
    const auto group = enumerate_group_any(c);
    ComplexCompensatedSum s;
    double err = 0.0;
    for (const auto& psi : group) {
        const auto t1 = gauss_sum(psi);
        const auto t2 = gauss_sum(chi * psi);
        const auto prod = t1 * t2;
        s.add(std::conj(psi(m)) * prod.value);
        err += prod.err_radius;
    }
    const double phi = static_cast<double>(group.size());
    return {s.value() / phi, err / phi + term_error * phi, c};
}

// ---------------------------------------------------------------------------
// restricted sums and coset sums

enum class Sign { plus = 1, minus = -1 };

/// K^{+-}_psi(m,n;p^r): sum over units x mod p^r with m x^2 = +-n mod p^j of psi^2(x) e_{p^r}(mx + n xbar).
[[nodiscard]] inline SumValue salie_pm(const DirichletCharacter& psi, i64 m, i64 n, u64 pr, u32 j, Sign sign) {
    const auto& f = psi.factorization();
    if (f.size() != 1 || f[0].p == 2) throw invalid_input("salie_pm needs psi modulo an odd prime power");
    const u64 p = f[0].p;
    const u32 k = f[0].e;
    const u64 pj = ipow(p, j);
    if (j < 1 || j >= k) throw invalid_input("salie_pm needs 1 <= j < k");
    const auto fr = factorize(pr);
    if (fr.size() != 1 || fr[0].p != p || fr[0].e < k) throw invalid_input("salie_pm needs p^r with r >= k");
    if (reduce(m, p) == 0 || reduce(n, p) == 0) throw invalid_input("salie_pm needs p not dividing mn");
    const auto w = psi.pow(2).lift(pr);
    const auto tab = dlog_table(p, fr[0].e);
    const u64 t = w.indices()[0];
    const auto roots = detail::shared_roots(pr);
    const auto croots = detail::shared_roots(tab->phi);
    const u64 mr = reduce(m, pr), nr = reduce(n, pr);
    const u64 target = sign == Sign::plus ? reduce(n, pj) : reduce(-n, pj);
    const u64 ginv = inverse_mod(tab->g, pr);
    u64 x = 1, xi = 1, ta = 0, terms = 0;
    ComplexCompensatedSum s;
    for (u64 a = 0; a < tab->phi; ++a) {
        const u64 xj = x % pj;
        if (mul_mod(mr % pj, mul_mod(xj, xj, pj), pj) == target) {
            s.add((*croots)[ta] * (*roots)[(mul_mod(mr, x, pr) + mul_mod(nr, xi, pr)) % pr]);
            ++terms;
        }
        x = mul_mod(x, tab->g, pr);
        xi = mul_mod(xi, ginv, pr);
        ta = (ta + t) % tab->phi;
    }
    return SumValue::of(s.value(), std::max<u64>(terms, 1));
}

/// Parameters (m, n; c) for the coset sum, with c = b p^r.
struct CosetSumParams {
    CharacterCoset coset;
    i64 m = 1;
    i64 n = 1;
    u64 c = 1;

    [[nodiscard]] u32 r() const { return valuation(c, coset.p()); }
    [[nodiscard]] u64 pr() const { return ipow(coset.p(), r()); }
    [[nodiscard]] u64 b() const { return c / pr(); }

    void validate() const {
        const u64 p = coset.p();
        if (c == 0 || c % coset.q() != 0) throw invalid_input("coset sum needs q | c");
        if (reduce(m, p) == 0 || reduce(n, p) == 0) throw invalid_input("coset sum needs p not dividing mn");
        if (c >= max_integer / 4) throw invalid_input("modulus too large");
    }
};

enum class SigmaPath { literal, structural, naive };

namespace detail {

/// W(y) = sum_{chi in coset} chi(m) conj chi(n) [1 + eps chi(-1)] chi^2(y), tabulated for y mod q.
/// Every chi in the coset has a single index t mod phi(q), so chi^2(y) = e(2 t log y / phi(q)).
inline std::vector<cplx> coset_weights(const CharacterCoset& cs, i64 m, i64 n) {
    const u64 q = cs.q();
    const auto tab = dlog_table(cs.p(), cs.k());
    const u64 phi = tab->phi;
    const auto roots = shared_roots(phi);
    const u64 lm = (*tab)[reduce(m, q)], ln = (*tab)[reduce(n, q)], lneg = (*tab)[q - 1];
    std::vector<cplx> w(q, cplx{0.0, 0.0});
    for (const auto& chi : cs.enumerate()) {
        const u64 t = chi.indices()[0];
        const double par = mul_mod(t, lneg, phi) == 0 ? 1.0 : -1.0;
        const double f = 1.0 + cs.epsilon() * par;
        if (f == 0.0) continue;
        // chi(m) conj chi(n) = e(t (log m - log n) / phi)
        const u64 e = mul_mod(t, (lm + phi - ln) % phi, phi);
        const cplx coef = f * (*roots)[e];
        const u64 t2 = 2 * t % phi;
        for (u64 y = 1; y < q; ++y) {
            const u32 ly = (*tab)[y];
            if (ly == DlogTable::npos) continue;
            w[y] += coef * (*roots)[mul_mod(t2, ly, phi)];
        }
    }
    return w;
}

/// sum over units x mod p^r of W(x mod q) e_{p^r}(m x + n xbar).
inline SumValue weighted_local_sum(const std::vector<cplx>& w, u64 p, u32 r, u64 m, u64 n) {
    const u64 pr = ipow(p, r);
    const u64 q = w.size();
    const auto tab = dlog_table(p, r);
    const auto roots = shared_roots(pr);
    const u64 ginv = inverse_mod(tab->g, pr);
    m %= pr;
    n %= pr;
    u64 x = 1, xi = 1;
    ComplexCompensatedSum s;
    for (u64 a = 0; a < tab->phi; ++a) {
        // x, xbar < 2^21 so plain 64-bit products cannot overflow here
        const u64 arg = pr < (u64{1} << 31) ? (m * x + n * xi) % pr : (mul_mod(m, x, pr) + mul_mod(n, xi, pr)) % pr;
        s.add(w[x % q] * (*roots)[arg]);
        x = pr < (u64{1} << 31) ? x * tab->g % pr : mul_mod(x, tab->g, pr);
        xi = pr < (u64{1} << 31) ? xi * ginv % pr : mul_mod(xi, ginv, pr);
    }
    return SumValue::of(s.value(), tab->phi);
}

} // namespace detail

/// The literal double sum sum_chi chi(m) conj chi(n)[1 + eps chi(-1)] S_{conj chi^2}(m,n;c).
///
/// The chi-sum is taken first for each residue class mod q, and the x-sum is
/// split as x = (x mod b, x mod p^r); both steps only reorder the terms.
[[nodiscard]] inline SumValue coset_sigma_literal(const CosetSumParams& prm) {
    prm.validate();
    const auto& cs = prm.coset;
    const u64 b = prm.b(), pr = prm.pr();
    const auto w = detail::coset_weights(cs, prm.m, prm.n);
    // e_c(y) = e_b(y * (p^r)^{-1}) e_{p^r}(y * b^{-1})
    const u64 prinv_b = inverse_mod(pr % b, b);
    const u64 binv_p = inverse_mod(b % pr, pr);
    const auto local = detail::weighted_local_sum(w, cs.p(), prm.r(), mul_mod(binv_p, reduce(prm.m, pr), pr),
                                                  mul_mod(binv_p, reduce(prm.n, pr), pr));
    const auto bpart = kloosterman(static_cast<i64>(mul_mod(prinv_b, reduce(prm.m, b), b)),
                                   static_cast<i64>(mul_mod(prinv_b, reduce(prm.n, b), b)), b);
    auto out = bpart * local;
    out.terms = static_cast<u64>(cs.phi_pj()) * prm.c;
    out.err_radius = std::max(out.err_radius, term_error * static_cast<double>(out.terms));
    return out;
}

/// The same double sum with every twisted Kloosterman sum evaluated on its own.
[[nodiscard]] inline SumValue coset_sigma_naive(const CosetSumParams& prm) {
    prm.validate();
    const auto& cs = prm.coset;
    SumValue total = SumValue::exact({0.0, 0.0});
    for (const auto& chi : cs.enumerate()) {
        const cplx coef = chi(prm.m) * std::conj(chi(prm.n)) * (1.0 + cs.epsilon() * static_cast<double>(chi.parity()));
        if (coef == cplx{0.0, 0.0}) continue;
        const auto twist = chi.pow(-2).lift(prm.c);
        total = total + coef * twisted_kloosterman(twist, prm.m, prm.n, prm.c);
    }
    total.terms = static_cast<u64>(cs.phi_pj()) * prm.c;
    return total;
}

struct SigmaSplit {
    SumValue prefactor;      ///< psi(m) conj psi(n) phi(p^j) S(pbar^r m, pbar^r n; b)
    SumValue k_plus;         ///< K^+ at (bbar m, bbar n; p^r)
    SumValue k_minus;        ///< K^- at (bbar m, bbar n; p^r)
    SumValue same_sign;      ///< prefactor * K^+
    SumValue opposite_sign;  ///< prefactor * eps psi(-1) K^-

    [[nodiscard]] SumValue total() const { return same_sign + opposite_sign; }
};

/// Same-sign / opposite-sign decomposition of the coset sum.
[[nodiscard]] inline SigmaSplit sigma_split(const CosetSumParams& prm) {
    prm.validate();
    const auto& cs = prm.coset;
    const auto& psi = cs.base();
    const u64 b = prm.b(), pr = prm.pr();
    const u64 prinv_b = inverse_mod(pr % b, b);
    const u64 binv_p = inverse_mod(b % pr, pr);
    const auto mb = static_cast<i64>(mul_mod(binv_p, reduce(prm.m, pr), pr));
    const auto nb = static_cast<i64>(mul_mod(binv_p, reduce(prm.n, pr), pr));
    SigmaSplit out;
    const auto sb = kloosterman(static_cast<i64>(mul_mod(prinv_b, reduce(prm.m, b), b)),
                                static_cast<i64>(mul_mod(prinv_b, reduce(prm.n, b), b)), b);
    const cplx coef = psi(prm.m) * std::conj(psi(prm.n)) * static_cast<double>(cs.phi_pj());
    out.prefactor = coef * sb;
    out.k_plus = salie_pm(psi, mb, nb, pr, cs.j(), Sign::plus);
    out.k_minus = salie_pm(psi, mb, nb, pr, cs.j(), Sign::minus);
    out.same_sign = out.prefactor * out.k_plus;
    out.opposite_sign = cplx(cs.epsilon() * psi.parity(), 0.0) * (out.prefactor * out.k_minus);
    return out;
}

/// Closed forms for the coset sum, selected by r = nu_p(c):
///   r >= 2k          phi(p^j) S(m,n;c)
///   r >= j+k         psi(m) conj psi(n) phi(p^j) S_{conj psi^2}(m,n;c)
///   k < r < j+k      0
///   r = k            prefactor * eps psi(-1) K^-(bbar m, bbar n; q)
[[nodiscard]] inline SumValue coset_sigma_structural(const CosetSumParams& prm) {
    prm.validate();
    const auto& cs = prm.coset;
    const u32 r = prm.r(), k = cs.k(), j = cs.j();
    const auto phij = static_cast<double>(cs.phi_pj());
    SumValue out;
    if (r >= 2 * k) {
        out = cplx(phij, 0.0) * kloosterman(prm.m, prm.n, prm.c);
    } else if (r >= j + k) {
        const auto& psi = cs.base();
        const auto twist = psi.pow(-2).lift(prm.c);
        out = (psi(prm.m) * std::conj(psi(prm.n)) * phij) * twisted_kloosterman(twist, prm.m, prm.n, prm.c);
    } else if (r > k) {
        out = SumValue::exact({0.0, 0.0});
    } else {
        const auto split = sigma_split(prm);
        out = split.opposite_sign;
    }
    out.terms = static_cast<u64>(cs.phi_pj()) * prm.c;
    return out;
}

[[nodiscard]] inline SumValue coset_sigma(const CosetSumParams& prm, SigmaPath path = SigmaPath::literal) {
    switch (path) {
        case SigmaPath::structural: return coset_sigma_structural(prm);
        case SigmaPath::naive: return coset_sigma_naive(prm);
        default: return coset_sigma_literal(prm);
    }
}

// ---------------------------------------------------------------------------
// grid evaluation: one modulus, many (m, n)

namespace detail {

/**
 * out[i * ns.size() + l] = sum over units x mod p^r of w_{il}[x mod q] e_{p^r}(ms[i] x + ns[l] xbar).
 * weights(i, l) returns the table w_{il} of length q, which must be even: w(-x) = w(x). Then x and -x
 * pair up to w(x) 2 cos(2 pi (m x + n xbar) / p^r), so only x < p^r / 2 is visited. For each n the
 * residues n xbar are tabulated once and m x is advanced by addition, so the inner loop has no divisions.
 */
template <class Weights>
std::vector<SumValue> weighted_local_grid(Weights&& weights, u64 q, u64 p, u32 r, const std::vector<u64>& ms,
                                          const std::vector<u64>& ns) {
    const u64 pr = ipow(p, r);
    if (pr >= (u64{1} << 31) || p == 2) throw invalid_input("grid evaluation needs odd p and p^r < 2^31");
    const auto invp = shared_inverses(pr);
    const auto& inv = *invp;
    const auto roots = shared_roots(pr);
    std::vector<double> cos2(pr);
    for (u64 a = 0; a < pr; ++a) cos2[a] = 2.0 * (*roots)[a].real();
    const u64 phi = pr / p * (p - 1);
    const u64 half = (pr - 1) / 2;
    std::vector<SumValue> out(ms.size() * ns.size());
    std::vector<u32> nx(half + 1, 0);
    for (std::size_t l = 0; l < ns.size(); ++l) {
        const u64 n = ns[l] % pr;
        for (u64 x = 1; x <= half; ++x)
            if (inv[x] != 0) nx[x] = static_cast<u32>(n * inv[x] % pr);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::vector<cplx>& w = weights(i, l);
            const u64 m = ms[i] % pr;
            ComplexCompensatedSum s;
            double re = 0.0, im = 0.0;
            u64 mx = 0, xq = 0, xp = 0;
            for (u64 x = 1; x <= half; ++x) {
                mx += m;
                if (mx >= pr) mx -= pr;
                if (++xq == q) xq = 0;
                if (++xp == p) {
                    xp = 0;
                    continue;
                }
                u64 arg = mx + nx[x];
                if (arg >= pr) arg -= pr;
                const double cs = cos2[arg];
                re += w[xq].real() * cs;
                im += w[xq].imag() * cs;
                // flush short blocks into the compensated total
                if ((x & 1023) == 0) {
                    s.add({re, im});
                    re = im = 0.0;
                }
            }
            s.add({re, im});
            out[i * ns.size() + l] = SumValue::of(s.value(), phi);
        }
    }
    return out;
}

/// S(pbar^r m, pbar^r n; b) for the b-part of c = b p^r.
inline SumValue b_part(i64 m, i64 n, u64 b, u64 pr) {
    if (b == 1) return SumValue::exact({1.0, 0.0});
    const u64 prinv_b = inverse_mod(pr % b, b);
    return kloosterman(static_cast<i64>(mul_mod(prinv_b, reduce(m, b), b)),
                       static_cast<i64>(mul_mod(prinv_b, reduce(n, b), b)), b);
}

} // namespace detail

/// coset_sigma_literal at every (ms[i], ns[l]) for one modulus c, row-major in m.
[[nodiscard]] inline std::vector<SumValue> coset_sigma_literal_grid(const CharacterCoset& cs, const std::vector<i64>& ms,
                                                                    const std::vector<i64>& ns, u64 c) {
    for (i64 m : ms)
        for (i64 n : ns) CosetSumParams{cs, m, n, c}.validate();
    const u32 r = valuation(c, cs.p());
    const u64 pr = ipow(cs.p(), r), b = c / pr;
    const u64 binv_p = inverse_mod(b % pr, pr);
    std::vector<std::vector<cplx>> w;
    for (i64 m : ms)
        for (i64 n : ns) w.push_back(detail::coset_weights(cs, m, n));
    std::vector<u64> mb, nb;
    for (i64 m : ms) mb.push_back(mul_mod(binv_p, reduce(m, pr), pr));
    for (i64 n : ns) nb.push_back(mul_mod(binv_p, reduce(n, pr), pr));
    auto local = detail::weighted_local_grid([&](std::size_t i, std::size_t l) -> const std::vector<cplx>& { return w[i * ns.size() + l]; },
                                             cs.q(), cs.p(), r, mb, nb);
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t l = 0; l < ns.size(); ++l) {
            auto& v = local[i * ns.size() + l];
            v = detail::b_part(ms[i], ns[l], b, pr) * v;
            v.terms = static_cast<u64>(cs.phi_pj()) * c;
            v.err_radius = std::max(v.err_radius, term_error * static_cast<double>(v.terms));
        }
    return local;
}

/// coset_sigma_structural at every (ms[i], ns[l]) for one modulus c, row-major in m.
[[nodiscard]] inline std::vector<SumValue> coset_sigma_structural_grid(const CharacterCoset& cs, const std::vector<i64>& ms,
                                                                       const std::vector<i64>& ns, u64 c) {
    for (i64 m : ms)
        for (i64 n : ns) CosetSumParams{cs, m, n, c}.validate();
    const u32 r = valuation(c, cs.p()), k = cs.k(), j = cs.j();
    const u64 q = cs.q();
    std::vector<SumValue> out;
    if (r < j + k) {
        // the window and r = k have no long x-sum worth batching
        for (i64 m : ms)
            for (i64 n : ns) out.push_back(coset_sigma_structural({cs, m, n, c}));
        return out;
    }
    const u64 pr = ipow(cs.p(), r), b = c / pr;
    const u64 binv_p = inverse_mod(b % pr, pr);
    std::vector<u64> mb, nb;
    for (i64 m : ms) mb.push_back(mul_mod(binv_p, reduce(m, pr), pr));
    for (i64 n : ns) nb.push_back(mul_mod(binv_p, reduce(n, pr), pr));
    const auto& psi = cs.base();
    const bool plain = r >= 2 * k;
    // plain sums weight every unit by 1; S_{conj psi^2} weights x by psi^2(x)
    std::vector<cplx> w(q, cplx{1.0, 0.0});
    if (!plain) {
        const CharacterTable sq(psi.pow(2));
        for (u64 y = 0; y < q; ++y) w[y] = sq(y);
    }
    out = detail::weighted_local_grid([&](std::size_t, std::size_t) -> const std::vector<cplx>& { return w; }, q, cs.p(), r,
                                      mb, nb);
    const auto phij = static_cast<double>(cs.phi_pj());
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t l = 0; l < ns.size(); ++l) {
            auto& v = out[i * ns.size() + l];
            const cplx coef = plain ? cplx(phij, 0.0) : psi(ms[i]) * std::conj(psi(ns[l])) * phij;
            v = coef * (detail::b_part(ms[i], ns[l], b, pr) * v);
            v.terms = static_cast<u64>(cs.phi_pj()) * c;
        }
    return out;
}

/**
 * Multiplicative Fourier coefficient of m -> sigma_{psi,eps}(m,1;bq), for eta = eta_b eta_q:
 *
 *   eta_q(-1) eta_q^2(b) eta_b^2(q) tau(eta_b)^2 tau(psi eta_q) phi(p^{j+k}) / tau(psi conj eta_q)
 *
 * when cond(psi conj eta_q) = q and cond(eta_q^2) <= p^{k-j}; zero otherwise.
 */
[[nodiscard]] inline SumValue sigma_hat(const DirichletCharacter& psi, const DirichletCharacter& eta, u64 b, u32 j) {
    const u64 q = psi.modulus();
    const auto& f = psi.factorization();
    if (f.size() != 1 || f[0].p == 2) throw invalid_input("sigma_hat needs psi modulo an odd prime power");
    const u64 p = f[0].p;
    const u32 k = f[0].e;
    if (b == 0 || b % p == 0) throw invalid_input("sigma_hat needs p not dividing b");
    if (eta.modulus() != b * q) throw modulus_mismatch("eta must be a character modulo bq");
    if (j < 1 || j >= k) throw invalid_input("sigma_hat needs 1 <= j < k");
    const auto eta_b = eta.restrict_to(b);
    const auto eta_q = eta.restrict_to(q);
    const auto lead = psi * eta_q.conj();
    if (lead.conductor() != q || eta_q.pow(2).conductor() > ipow(p, k - j)) return SumValue::exact({0.0, 0.0});
    const auto tb = gauss_sum(eta_b);
    const auto num = gauss_sum(psi * eta_q);
    const auto den = gauss_sum(lead);
    const double phijk = static_cast<double>((p - 1) * ipow(p, j + k - 1));
    const cplx unit = eta_q(-1) * eta_q.pow(2)(static_cast<i64>(b)) * eta_b.pow(2)(static_cast<i64>(q));
    const cplx v = unit * tb.value * tb.value * num.value * phijk / den.value;
    // |den| = sqrt(q); first-order propagation of the Gauss-sum radii
    const double err = std::abs(v) * (2 * tb.err_radius / std::max(1e-300, std::abs(tb.value)) +
                                      num.err_radius / std::sqrt(static_cast<double>(q)) +
                                      den.err_radius / std::sqrt(static_cast<double>(q))) +
                       term_error * static_cast<double>(b * q);
    return {v, err, b * q};
}

/// sigma_{psi,eps}(m,1;bq) rebuilt from its Fourier coefficients:
/// (eps / phi(bq)) sum over eta with nu_p(cond eta^2) <= k-j of conj eta(m) sigma_hat(eta).
[[nodiscard]] inline SumValue sigma_fourier_inversion(const CharacterCoset& cs, i64 m, u64 b) {
    const u64 q = cs.q();
    if (reduce(m, cs.p()) == 0 || std::gcd(reduce(m, b), b) != 1) throw invalid_input("inversion needs m coprime to bq");
    const u64 c = b * q;
    const u64 bound = ipow(cs.p(), cs.k() - cs.j());
    ComplexCompensatedSum s;
    double err = 0.0;
    u64 count = 0;
    for (const auto& eta : enumerate_group_any(c)) {
        const auto eq2 = eta.restrict_to(q).pow(2);
        if (eq2.conductor() > bound) continue;
        const auto h = sigma_hat(cs.base(), eta, b, cs.j());
        s.add(std::conj(eta(m)) * h.value);
        err += h.err_radius;
        ++count;
    }
    const double phi = static_cast<double>(totient(c));
    return {static_cast<double>(cs.epsilon()) * s.value() / phi, err / phi, c};
}

/// Direct coefficient eps sum_{m mod bq} eta(m) sigma_{psi,eps}(m,1;bq).
[[nodiscard]] inline SumValue sigma_hat_direct(const CharacterCoset& cs, const DirichletCharacter& eta, u64 b) {
    const u64 c = b * cs.q();
    if (eta.modulus() != c) throw modulus_mismatch("eta must be a character modulo bq");
    ComplexCompensatedSum s;
    double err = 0.0;
    for (u64 m = 1; m < c; ++m) {
        if (std::gcd(m, c) != 1) continue;
        const auto sg = coset_sigma_literal({cs, static_cast<i64>(m), 1, c});
        s.add(eta(static_cast<i64>(m)) * sg.value);
        err += sg.err_radius;
    }
    return {static_cast<double>(cs.epsilon()) * s.value(), err, c * c};
}

// ---------------------------------------------------------------------------
// quadratic congruence counts

namespace detail {

// Roots of alpha x^2 + beta x + gamma mod p^e lying over x0 mod p^i.
inline u64 hensel_count(i64 alpha, i64 beta, i64 gamma, u64 p, u32 e, u64 x0, u32 i) {
    const u64 pe = ipow(p, e);
    auto f = [&](u64 x) {
        const u64 a = reduce(alpha, pe), bb = reduce(beta, pe), g = reduce(gamma, pe);
        return (mul_mod(a, mul_mod(x, x, pe), pe) + mul_mod(bb, x, pe) + g) % pe;
    };
    if (i == e) return 1;
    // g(y) = f(x0 + p^i y) = A y^2 + B y + C; if all vanish mod p^e every lift is a root
    const u64 pi = ipow(p, i);
    const u64 A = mul_mod(reduce(alpha, pe), mul_mod(pi, pi, pe), pe);
    const u64 B = mul_mod((mul_mod(2 % pe, mul_mod(reduce(alpha, pe), x0, pe), pe) + reduce(beta, pe)) % pe, pi, pe);
    if (A == 0 && B == 0 && f(x0) == 0) return ipow(p, e - i);
    u64 total = 0;
    const u64 pi1 = pi * p;
    for (u64 t = 0; t < p; ++t) {
        const u64 x1 = x0 + t * pi;
        if (f(x1) % pi1 == 0) total += hensel_count(alpha, beta, gamma, p, e, x1, i + 1);
    }
    return total;
}

} // namespace detail

/// #{x mod q : alpha x^2 + beta x + gamma = 0 mod q}.
[[nodiscard]] inline u64 m_count(i64 alpha, i64 beta, i64 gamma, u64 q) {
    if (q == 0) throw invalid_input("m_count modulus must be positive");
    if (q == 1) return 1;
    if (q <= 1'000'000) {
        const u64 a = reduce(alpha, q), b = reduce(beta, q), g = reduce(gamma, q);
        u64 count = 0;
        for (u64 x = 0; x < q; ++x)
            if ((mul_mod(a, mul_mod(x, x, q), q) + mul_mod(b, x, q) + g) % q == 0) ++count;
        return count;
    }
    u64 total = 1;
    for (const auto& [p, e] : factorize(q)) total *= detail::hensel_count(alpha, beta, gamma, p, e, 0, 0);
    return total;
}

/// Hensel-structured count only (exposed for cross-checks against brute force).
[[nodiscard]] inline u64 m_count_hensel(i64 alpha, i64 beta, i64 gamma, u64 q) {
    if (q == 0) throw invalid_input("m_count modulus must be positive");
    u64 total = 1;
    for (const auto& [p, e] : factorize(q)) total *= detail::hensel_count(alpha, beta, gamma, p, e, 0, 0);
    return total;
}

} // namespace expsum
