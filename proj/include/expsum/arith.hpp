/**
 * @file arith.hpp
 * @brief Exact integer utilities: factorization, multiplicative functions,
 *        modular inverses and the Chinese remainder theorem.
 *
 * Everything works on unsigned 64-bit integers below 2^63; modular products
 * go through unsigned __int128.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "expsum/error.hpp"

namespace expsum {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr u64 max_integer = u64{1} << 63;

struct PrimePower {
    u64 p = 0;
    u32 e = 0;

    [[nodiscard]] u64 value() const noexcept {
        u64 v = 1;
        for (u32 i = 0; i < e; ++i) v *= p;
        return v;
    }
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization in ascending prime order.
struct Factorization {
    std::vector<PrimePower> factors;

    [[nodiscard]] u64 value() const noexcept {
        u64 v = 1;
        for (const auto& f : factors) v *= f.value();
        return v;
    }
    [[nodiscard]] bool empty() const noexcept { return factors.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return factors.size(); }
    [[nodiscard]] auto begin() const noexcept { return factors.begin(); }
    [[nodiscard]] auto end() const noexcept { return factors.end(); }
    const PrimePower& operator[](std::size_t i) const { return factors[i]; }
    friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// A reduced residue class value mod modulus.
struct Residue {
    u64 value = 0;
    u64 modulus = 1;

    Residue() = default;
    Residue(u64 v, u64 m) : value(m ? v % m : 0), modulus(m) {
        if (m == 0) throw invalid_input("residue modulus must be positive");
    }
    friend bool operator==(const Residue&, const Residue&) = default;
};

// ---------------------------------------------------------------------------
// modular basics

[[nodiscard]] constexpr u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
    // both factors below 2^32: the product fits and the 64-bit remainder is much cheaper
    if (((a | b) >> 32) == 0) return a * b % m;
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

[[nodiscard]] constexpr u64 pow_mod(u64 b, u64 e, u64 m) noexcept {
    if (m == 1) return 0;
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

/// Least nonnegative representative of a mod m, for signed a.
[[nodiscard]] constexpr u64 reduce(i64 a, u64 m) noexcept {
    if (a >= 0) return static_cast<u64>(a) % m;
    const u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
    return (m - 1 - r) % m;
}

[[nodiscard]] constexpr u64 ipow(u64 b, u32 e) noexcept {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

/// Largest nu with p^nu | n; n = 0 yields cap.
[[nodiscard]] constexpr u32 valuation(u64 n, u64 p, u32 cap = 64) noexcept {
    if (n == 0) return cap;
    u32 v = 0;
    while (n % p == 0 && v < cap) {
        n /= p;
        ++v;
    }
    return v;
}

/// Inverse of a mod m via extended Euclid.
[[nodiscard]] inline u64 inverse_mod(u64 a, u64 m) {
    if (m == 0) throw invalid_input("modulus must be positive");
    if (m == 1) return 0;
    i64 r0 = static_cast<i64>(m), r1 = static_cast<i64>(a % m);
    i64 s0 = 0, s1 = 1;
    while (r1 != 0) {
        const i64 q = r0 / r1;
        i64 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1)
        throw not_invertible(std::to_string(a) + " is not invertible mod " + std::to_string(m));
    return reduce(s0, m);
}

[[nodiscard]] inline Residue mod_inverse(const Residue& a) {
    return Residue(inverse_mod(a.value, a.modulus), a.modulus);
}

/// Unique residue modulo the product that agrees with every input.
[[nodiscard]] inline Residue crt_combine(const std::vector<Residue>& rs) {
    u64 x = 0, m = 1;
    for (const auto& r : rs) {
        if (std::gcd(m, r.modulus) != 1) throw not_coprime("CRT moduli are not pairwise coprime");
        if (static_cast<u128>(m) * r.modulus >= max_integer) throw invalid_input("CRT modulus overflow");
        // x' = x + m * t with t = (r - x) / m mod r.modulus
        const u64 mm = m % r.modulus;
        const u64 diff = (r.value + r.modulus - x % r.modulus) % r.modulus;
        const u64 t = mul_mod(diff, inverse_mod(mm, r.modulus), r.modulus);
        x = x + m * t;
        m *= r.modulus;
    }
    return Residue(x, m);
}

// ---------------------------------------------------------------------------
// primality and factorization

[[nodiscard]] inline bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    u32 s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is deterministic for all n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (u32 r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

// Brent's variant of Pollard rho; n must be composite and odd.
inline u64 pollard_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

[[nodiscard]] inline Factorization factorize(u64 n) {
    if (n == 0) throw invalid_input("cannot factorize 0");
    if (n >= max_integer) throw invalid_input("factorize requires n < 2^63");
    std::vector<u64> primes;
    for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    if (n > 1) detail::factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    Factorization f;
    for (u64 p : primes) {
        if (!f.factors.empty() && f.factors.back().p == p)
            ++f.factors.back().e;
        else
            f.factors.push_back({p, 1});
    }
    return f;
}

// ---------------------------------------------------------------------------
// multiplicative functions

/// prod p^floor(nu_p(n)/2).
[[nodiscard]] inline u64 flrt(u64 n) {
    u64 r = 1;
    for (const auto& [p, e] : factorize(n)) r *= ipow(p, e / 2);
    return r;
}

struct MultFn {
    u64 totient = 1;
    int moebius = 1;
    u64 divisor_count = 1;
    double von_mangoldt_log = 0.0;
};

[[nodiscard]] inline MultFn mult_fn(u64 n) {
    const auto f = factorize(n);
    MultFn r;
    for (const auto& [p, e] : f) {
        r.totient *= (p - 1) * ipow(p, e - 1);
        r.divisor_count *= e + 1;
        r.moebius = e > 1 ? 0 : -r.moebius;
    }
    if (f.size() == 1) r.von_mangoldt_log = std::log(static_cast<double>(f[0].p));
    return r;
}

[[nodiscard]] inline u64 totient(const Factorization& f) noexcept {
    u64 t = 1;
    for (const auto& [p, e] : f) t *= (p - 1) * ipow(p, e - 1);
    return t;
}
[[nodiscard]] inline u64 totient(u64 n) { return totient(factorize(n)); }

[[nodiscard]] inline u64 divisor_count(const Factorization& f) noexcept {
    u64 d = 1;
    for (const auto& pe : f) d *= pe.e + 1;
    return d;
}
[[nodiscard]] inline u64 divisor_count(u64 n) { return divisor_count(factorize(n)); }

[[nodiscard]] inline int moebius(u64 n) { return mult_fn(n).moebius; }

/// Multiplicative order of the unit a modulo m, given phi(m) factored.
[[nodiscard]] inline u64 order_mod(u64 a, u64 m, u64 phi, const Factorization& phi_f) {
    u64 ord = phi;
    for (const auto& [l, e] : phi_f) {
        for (u32 i = 0; i < e && ord % l == 0 && pow_mod(a, ord / l, m) == 1; ++i) ord /= l;
    }
    return ord;
}

/// Smallest primitive root of p^e; p = 2 is accepted for the cyclic cases e <= 2.
[[nodiscard]] inline u64 primitive_root(u64 p, u32 e) {
    if (!is_prime(p) || e == 0) throw invalid_input("primitive_root needs a prime power");
    if (p == 2) {
        if (e > 2) throw unsupported_modulus("(Z/2^e)^* is not cyclic for e >= 3");
        return e == 1 ? 1 : 3;
    }
    const u64 m = ipow(p, e);
    const u64 phi = (p - 1) * ipow(p, e - 1);
    const auto phi_f = factorize(phi);
    for (u64 g = 2; g < m; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (const auto& pe : phi_f) {
            if (pow_mod(g, phi / pe.p, m) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw invalid_input("no primitive root found");
}

/// Exact max over n of d(n)/n^delta, attained on a finite product of prime powers.
[[nodiscard]] inline double divisor_bound_constant(double delta) {
    if (!(delta > 0.0)) throw invalid_input("delta must be positive");
    double k = 1.0;
    for (u64 p = 2;; ++p) {
        if (!is_prime(p)) continue;
        // a prime contributes only if 2 / p^delta > 1
        if (std::pow(static_cast<double>(p), delta) >= 2.0) break;
        double best = 1.0;
        for (u32 e = 1; e < 200; ++e) {
            const double v = (e + 1) / std::pow(static_cast<double>(p), delta * e);
            if (v > best) best = v;
        }
        k *= best;
    }
    return k;
}

} // namespace expsum
