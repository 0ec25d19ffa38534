/**
 * @file special.hpp
 * @brief Digamma and polygamma, complex log-gamma, integer-order Bessel J,
 *        zeta via Euler-Maclaurin, the Euler product A(s), xi = zeta * A and
 *        the function J_{kappa,p}(s).
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "expsum/sum_value.hpp"

namespace expsum {

namespace detail {

// B_2, B_4, ..., B_20
inline constexpr std::array<double, 10> bernoulli_even = {
    1.0 / 6.0,        -1.0 / 30.0,     1.0 / 42.0,      -1.0 / 30.0,      5.0 / 66.0,
    -691.0 / 2730.0,  7.0 / 6.0,       -3617.0 / 510.0, 43867.0 / 798.0,  -174611.0 / 330.0,
};

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace detail

/// Psi(z) = Gamma'(z)/Gamma(z).
[[nodiscard]] inline cplx digamma(cplx z) {
    using std::numbers::pi;
    if (detail::is_nonpositive_integer(z)) throw pole_error("digamma has a pole at nonpositive integers");
    if (z.real() < 0.5) {
        // Psi(z) = Psi(1 - z) - pi cot(pi z)
        return digamma(1.0 - z) - pi / std::tan(pi * z);
    }
    cplx acc{0.0, 0.0};
    while (std::abs(z) < 15.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    const cplx w = 1.0 / (z * z);
    cplx series{0.0, 0.0}, pw = w;
    for (int k = 1; k <= 8; ++k) {
        series += detail::bernoulli_even[k - 1] / (2.0 * k) * pw;
        pw *= w;
    }
    return acc + std::log(z) - 0.5 / z - series;
}

[[nodiscard]] inline double digamma(double x) { return digamma(cplx(x, 0.0)).real(); }

/// n-th derivative of Psi at real x > 0.
[[nodiscard]] inline double polygamma(int n, double x) {
    if (n < 0) throw invalid_input("polygamma order must be nonnegative");
    if (n == 0) return digamma(x);
    if (!(x > 0.0)) throw invalid_input("polygamma needs x > 0");
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^{n+1}
    const double nf = detail::factorial(n);
    double acc = 0.0;
    while (x < 20.0) {
        // psi^(n)(x) = psi^(n)(x+1) - (-1)^n n! / x^{n+1}
        acc += sign * nf / std::pow(x, n + 1);
        x += 1.0;
    }
    double s = detail::factorial(n - 1) / std::pow(x, n) + nf / (2.0 * std::pow(x, n + 1));
    for (int k = 1; k <= 10; ++k) {
        s += detail::bernoulli_even[k - 1] * detail::factorial(2 * k + n - 1) / detail::factorial(2 * k) /
             std::pow(x, 2 * k + n);
    }
    return acc + sign * s;
}

/// log Gamma(z) on some branch: only differences and exponentials of it are meaningful.
[[nodiscard]] inline cplx lgamma_complex(cplx z) {
    using std::numbers::pi;
    if (detail::is_nonpositive_integer(z)) throw pole_error("Gamma has a pole at nonpositive integers");
    if (z.real() < 0.5) return std::log(pi) - std::log(std::sin(pi * z)) - lgamma_complex(1.0 - z);
    cplx shift{0.0, 0.0};
    while (std::abs(z) < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    const cplx w = 1.0 / (z * z);
    cplx series{0.0, 0.0}, pw = 1.0 / z;
    for (int k = 1; k <= 8; ++k) {
        series += detail::bernoulli_even[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pw;
        pw *= w;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift;
}

/// Gamma(a) / Gamma(b).
[[nodiscard]] inline cplx gamma_ratio(cplx a, cplx b) { return std::exp(lgamma_complex(a) - lgamma_complex(b)); }

/// J_nu(x) for integer 0 <= nu <= 50 and x >= 0.
[[nodiscard]] inline double bessel_j(int nu, double x) {
    using std::numbers::pi;
    if (nu < 0 || nu > 50) throw invalid_input("bessel_j supports 0 <= nu <= 50");
    if (!(x >= 0.0) || !std::isfinite(x)) throw invalid_input("bessel_j needs finite x >= 0");
    if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
    const double nu2 = 4.0 * nu * nu;
    if (x <= 12.0) {
        const double h = 0.5 * x;
        double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
        double s = term;
        for (int k = 1; k < 300; ++k) {
            term *= -h * h / (static_cast<double>(k) * (k + nu));
            s += term;
            if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(s))) break;
        }
        return s;
    }
    if (x >= std::max(30.0, 0.6 * nu * nu)) {
        // Hankel expansion, summed until the terms stop shrinking
        double P = 0.0, Q = 0.0, a = 1.0, prev = INFINITY;
        for (int k = 0; k < 200; ++k) {
            if (k > 0) a *= (nu2 - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
            const double mag = std::abs(a);
            if (mag > prev) break;
            const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
            if (k % 2 == 0)
                P += sgn * a;
            else
                Q += sgn * a;
            prev = mag;
            if (mag < 1e-17) break;
        }
        const double w = x - 0.5 * nu * pi - 0.25 * pi;
        return std::sqrt(2.0 / (pi * x)) * (P * std::cos(w) - Q * std::sin(w));
    }
    // Miller backward recurrence normalized by J_0 + 2 sum J_{2k} = 1
    const int top = 2 * ((std::max(nu, static_cast<int>(x)) + 20 + static_cast<int>(std::sqrt(40.0 * std::max(nu, static_cast<int>(x))))) / 2);
    double jp = 0.0, j = 1e-30, norm = 0.0, want = 0.0;
    for (int n = top; n > 0; --n) {
        const double jm = 2.0 * n / x * j - jp;
        jp = j;
        j = jm;
        // j now holds the unnormalized J_{n-1}
        if (n - 1 == nu) want = j;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
    }
    norm += j;
    return want / norm;
}

/// zeta(s) for Re s > -10, s != 1, by Euler-Maclaurin with ten correction terms.
[[nodiscard]] inline cplx zeta(cplx s) {
    if (s == cplx(1.0, 0.0)) throw pole_error("zeta has a pole at s = 1");
    if (s.real() <= -10.0) throw invalid_input("zeta implemented for Re s > -10");
    const int N = static_cast<int>(std::abs(s) + 20.0);
    ComplexCompensatedSum sum;
    for (int n = 1; n < N; ++n) sum.add(std::exp(-s * std::log(static_cast<double>(n))));
    const double Nd = N;
    const cplx Ns = std::exp(-s * std::log(Nd));
    cplx tail = Nd * Ns / (s - 1.0) + 0.5 * Ns;
    // B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    cplx rising = s;
    cplx pw = Ns / Nd;
    double fact = 2.0;
    for (int k = 1; k <= 10; ++k) {
        tail += detail::bernoulli_even[k - 1] / fact * rising * pw;
        rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        pw /= Nd * Nd;
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum.value() + tail;
}

/// Primes below the fixed product cutoff for A(s).
inline constexpr u64 euler_product_cutoff = 100'000;

namespace detail {
struct SmallPrime {
    double l, log_l, inv_lm1;  // l, log l, 1/(l-1)
};
inline const std::vector<SmallPrime>& small_primes() {
    static const std::vector<SmallPrime> ps = [] {
        std::vector<char> comp(euler_product_cutoff + 1, 0);
        std::vector<SmallPrime> out;
        for (u64 i = 2; i <= euler_product_cutoff; ++i) {
            if (comp[i]) continue;
            const double l = static_cast<double>(i);
            out.push_back({l, std::log(l), 1.0 / (l - 1.0)});
            for (u64 j = i * i; j <= euler_product_cutoff; j += i) comp[j] = 1;
        }
        return out;
    }();
    return ps;
}
} // namespace detail

struct EulerProduct {
    cplx value;
    double tail_bound = 0.0;  ///< bound on |log A - log A_truncated|
};

/// A(s) = prod_l (1 + (l^{s-1} - 1) / (l^{2s-1} (l - 1))), truncated at l <= 1e5.
[[nodiscard]] inline EulerProduct euler_product_A(cplx s) {
    if (!(s.real() > 0.5)) throw invalid_input("A(s) needs Re s > 1/2");
    const double sigma = s.real(), tau = s.imag();
    // factor 1 + (l^s - l) / (l^{2s} (l - 1)); with u = l^{-s} this is 1 + (u - l u^2) / (l - 1)
    double pr = 1.0, pi_ = 0.0;
    for (const auto& sp : detail::small_primes()) {
        const double mag = std::exp(-sigma * sp.log_l);
        const double ur = mag * std::cos(tau * sp.log_l), ui = -mag * std::sin(tau * sp.log_l);
        const double u2r = ur * ur - ui * ui, u2i = 2.0 * ur * ui;
        const double tr = 1.0 + (ur - sp.l * u2r) * sp.inv_lm1;
        const double ti = (ui - sp.l * u2i) * sp.inv_lm1;
        const double nr = pr * tr - pi_ * ti;
        pi_ = pr * ti + pi_ * tr;
        pr = nr;
    }
    // |t_l| <= (l^{sigma} + l) / (l^{2 sigma} (l - 1)) <= 2 (1 + 2/P) l^{-lambda}, lambda = min(2 sigma, sigma + 1)
    const double lam = std::min(2.0 * sigma, sigma + 1.0);
    const double P = static_cast<double>(euler_product_cutoff);
    const double tail = 2.0 * (1.0 + 2.0 / P) * std::pow(P, 1.0 - lam) / (lam - 1.0);
    return {cplx(pr, pi_), 1.5 * tail};
}

/// xi(s) = zeta(s) A(s).
[[nodiscard]] inline cplx xi_function(cplx s) { return zeta(s) * euler_product_A(s).value; }

/// Partial sum of the Dirichlet series of xi: the local factor is 1 + l u / (l - 1), u = l^{-s},
/// so the n-th coefficient is mu^2(n) n / phi(n).
[[nodiscard]] inline cplx xi_dirichlet_partial(cplx s, u64 N) {
    if (N > 100'000'000) throw invalid_input("partial sum length too large");
    std::vector<u64> phi(N + 1);
    std::vector<char> squarefree(N + 1, 1);
    for (u64 i = 0; i <= N; ++i) phi[i] = i;
    for (u64 i = 2; i <= N; ++i) {
        if (phi[i] != i) continue;
        for (u64 j = i; j <= N; j += i) phi[j] -= phi[j] / i;
        if (i <= N / i)
            for (u64 j = i * i; j <= N; j += i * i) squarefree[j] = 0;
    }
    // smallest terms first
    cplx acc{0.0, 0.0};
    for (u64 n = N; n >= 1; --n) {
        if (!squarefree[n]) continue;
        const double nd = static_cast<double>(n);
        acc += nd / static_cast<double>(phi[n]) * std::exp(-s * std::log(nd));
    }
    return acc;
}

/// 2^{-s} Gamma((kappa - s)/2) / Gamma((kappa + s)/2).
[[nodiscard]] inline cplx bessel_mellin_factor(int kappa, cplx s) {
    return std::exp(-s * std::numbers::ln2) * gamma_ratio((static_cast<double>(kappa) - s) / 2.0, (static_cast<double>(kappa) + s) / 2.0);
}

namespace detail {
inline cplx j_kappa_p_raw(int kappa, u64 p, cplx s) {
    const double pd = static_cast<double>(p);
    const cplx ps = std::exp(s * std::log(pd));
    return pd * ps * xi_function(1.0 + s) / (ps * (pd - 1.0) + 1.0) * gamma_ratio((static_cast<double>(kappa) - s) / 2.0, (static_cast<double>(kappa) + s) / 2.0) -
           1.0 / s;
}
} // namespace detail

/// p^{1+s} xi(1+s) / (p^s (p-1) + 1) * Gamma((kappa-s)/2) / Gamma((kappa+s)/2) - 1/s on -1/2 < Re s < kappa.
/// Near s = 0 the value is the mean over eight points on a circle of radius 2e-3, exact for the analytic part up to O(r^8).
[[nodiscard]] inline cplx j_kappa_p(int kappa, u64 p, cplx s) {
    if (kappa < 2 || kappa % 2 != 0) throw invalid_input("kappa must be an even integer >= 2");
    if (p < 3 || !is_prime(p)) throw invalid_input("p must be an odd prime");
    if (!(s.real() > -0.5 && s.real() < kappa)) throw invalid_input("s outside the strip -1/2 < Re s < kappa");
    if (std::abs(s) >= 1e-3) return detail::j_kappa_p_raw(kappa, p, s);
    constexpr double radius = 2e-3;
    cplx acc{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        const double a = std::numbers::pi * (2.0 * i + 1.0) / 8.0;
        acc += detail::j_kappa_p_raw(kappa, p, s + radius * cplx(std::cos(a), std::sin(a)));
    }
    return acc / 8.0;
}

} // namespace expsum
