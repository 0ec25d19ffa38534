// Brute-force reference implementations used as test oracles.
// They share nothing with the library beyond the u64/i64/cplx typedefs.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "expsum/arith.hpp"
#include "expsum/sum_value.hpp"

namespace oracle {

using expsum::cplx;
using expsum::i64;
using expsum::u64;

inline cplx e(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

inline u64 reduce(i64 a, u64 m) {
    const i64 r = a % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline u64 phi(u64 n) {
    u64 c = 0;
    for (u64 x = 1; x <= n; ++x) c += std::gcd(x, n) == 1;
    return c;
}

inline u64 inverse(u64 a, u64 m) {
    for (u64 x = 1; x < m; ++x)
        if (a * x % m == 1) return x;
    return m == 1 ? 0 : ~u64{0};
}

inline u64 order(u64 g, u64 m) {
    u64 x = g % m, k = 1;
    while (x != 1) {
        x = x * g % m;
        ++k;
    }
    return k;
}

/// Smallest generator of (Z/mZ)^* for m an odd prime power.
inline u64 primitive_root(u64 m) {
    const u64 ph = phi(m);
    for (u64 g = 2; g < m; ++g)
        if (std::gcd(g, m) == 1 && order(g, m) == ph) return g;
    return 1;
}

/// Character mod an odd prime power pe with chi(g) = e(t / phi(pe)), g the smallest primitive root.
struct PrimePowerChar {
    u64 pe, t;
    std::vector<i64> log;  // -1 off units
    PrimePowerChar(u64 pe_, u64 t_) : pe(pe_), t(t_), log(pe_, -1) {
        if (pe == 1) {
            log[0] = 0;
            return;
        }
        const u64 g = primitive_root(pe);
        u64 x = 1;
        for (u64 a = 0; a < phi(pe); ++a) {
            log[x] = static_cast<i64>(a);
            x = x * g % pe;
        }
    }
    cplx operator()(i64 n) const {
        const i64 l = log[reduce(n, pe)];
        if (l < 0) return {0.0, 0.0};
        return e(static_cast<double>((static_cast<u64>(l) * t) % phi(pe)) / static_cast<double>(phi(pe)));
    }
};

/// Product of prime-power characters, indices in ascending prime order.
struct Char {
    u64 modulus;
    std::vector<PrimePowerChar> parts;
    Char(u64 n, const std::vector<u64>& t) : modulus(n) {
        const auto f = factor(n);
        for (std::size_t i = 0; i < f.size(); ++i) {
            u64 pe = 1;
            for (unsigned k = 0; k < f[i].second; ++k) pe *= f[i].first;
            parts.emplace_back(pe, t[i]);
        }
    }
    cplx operator()(i64 n) const {
        cplx v{1.0, 0.0};
        for (const auto& c : parts) v *= c(n);
        if (modulus == 1) return v;
        return std::gcd(reduce(n, modulus), modulus) == 1 ? v : cplx{0.0, 0.0};
    }
};

inline cplx kloosterman(i64 m, i64 n, u64 c) {
    cplx s{0.0, 0.0};
    for (u64 x = 0; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        const u64 xb = c == 1 ? 0 : inverse(x, c);
        s += e(static_cast<double>((reduce(m, c) * x + reduce(n, c) * xb) % c) / static_cast<double>(c));
    }
    return s;
}

/// sum over units x of conj(chi(x)) e((m x + n xbar)/c)
template <class F>
cplx twisted_kloosterman(const F& chi, i64 m, i64 n, u64 c) {
    cplx s{0.0, 0.0};
    for (u64 x = 0; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        const u64 xb = c == 1 ? 0 : inverse(x, c);
        s += std::conj(chi(static_cast<i64>(x))) *
             e(static_cast<double>((reduce(m, c) * x + reduce(n, c) * xb) % c) / static_cast<double>(c));
    }
    return s;
}

template <class F>
cplx gauss(const F& chi, u64 q) {
    cplx s{0.0, 0.0};
    for (u64 x = 0; x < q; ++x) s += chi(static_cast<i64>(x)) * e(static_cast<double>(x) / static_cast<double>(q));
    return s;
}

inline u64 divisor_count(u64 n) {
    u64 d = 0;
    for (u64 k = 1; k <= n; ++k) d += n % k == 0;
    return d;
}

inline int moebius(u64 n) {
    int mu = 1;
    for (auto [p, e] : factor(n)) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

/// Ramanujan sum c_q(m) = sum_{d | (q, m)} mu(q/d) d.
inline double ramanujan(u64 q, u64 m) {
    const u64 g = std::gcd(q, m);
    double s = 0;
    for (u64 d = 1; d <= g; ++d)
        if (g % d == 0) s += moebius(q / d) * static_cast<double>(d);
    return s;
}

} // namespace oracle
