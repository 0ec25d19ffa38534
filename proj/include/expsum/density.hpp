/**
 * @file density.hpp
 * @brief Main terms of the one-level density for the thin and coset families,
 *        symmetry-type functionals and the nonvanishing proportions.
 */
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "expsum/expsums.hpp"
#include "expsum/primes.hpp"
#include "expsum/special.hpp"
#include "expsum/test_function.hpp"

namespace expsum {

enum class SymmetryType { U, O, SO_even, SO_odd };

[[nodiscard]] inline std::string to_string(SymmetryType g) {
    switch (g) {
        case SymmetryType::U: return "U";
        case SymmetryType::O: return "O";
        case SymmetryType::SO_even: return "SO(even)";
        default: return "SO(odd)";
    }
}

/// Accepts u, o, so-even, so-odd (case-insensitive) and the printed names.
[[nodiscard]] inline SymmetryType parse_symmetry(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "u") return SymmetryType::U;
    if (s == "o") return SymmetryType::O;
    if (s == "so-even" || s == "so(even)" || s == "so_even") return SymmetryType::SO_even;
    if (s == "so-odd" || s == "so(odd)" || s == "so_odd") return SymmetryType::SO_odd;
    throw invalid_input("unknown symmetry type '" + s + "'");
}

/// int phi(x) W(G)(x) dx through the Fourier side.
[[nodiscard]] inline double wg_functional(const TestFunction& f, SymmetryType g) {
    const double h0 = f.phi_hat(0.0), p0 = f.phi(0.0);
    switch (g) {
        case SymmetryType::U: return h0;
        case SymmetryType::O: return h0 + 0.5 * p0;
        case SymmetryType::SO_even: return h0 + 0.5 * hat_integral(f, -1.0, 1.0);
        default: return h0 + p0 - 0.5 * hat_integral(f, -1.0, 1.0);
    }
}

/// A real number with its quadrature error and truncation diagnostics.
struct NumericTerm {
    double value = 0.0;
    double quad_error = 0.0;
    double imag_residual = 0.0;
    double truncation = 0.0;      ///< integration radius or sum cutoff, 0 when not applicable
    double tail_estimate = 0.0;   ///< size estimate of what lies beyond the truncation
    u64 evals = 0;
};

inline constexpr double default_quad_tol = 1e-9;
inline constexpr double imag_tolerance = 1e-8;

/// Fourth root of unity i^kappa; only the sign matters for even kappa.
[[nodiscard]] inline int i_pow_sign(int kappa) {
    if (kappa % 2 != 0) throw invalid_input("kappa must be even");
    return (kappa / 2) % 2 == 0 ? 1 : -1;
}

namespace detail {
inline void check_kappa(int kappa) {
    if (kappa < 2 || kappa % 2 != 0) throw invalid_input("kappa must be an even integer >= 2");
}
inline void check_R(double R) {
    if (!(R > 1.0) || !std::isfinite(R)) throw invalid_input("R must exceed 1");
}
} // namespace detail

/// R = (q / 2 pi)^2.
[[nodiscard]] inline double conductor_R(u64 q) {
    const double r = static_cast<double>(q) / (2.0 * std::numbers::pi);
    return r * r;
}

// ---------------------------------------------------------------------------
// I(kappa, phi, R)

/// int Psi(kappa/2 + 2 pi i x / log R) phi(x) dx.
[[nodiscard]] inline NumericTerm integral_I(int kappa, const TestFunction& f, double R, double tol = default_quad_tol,
                                            double radius = 0.0) {
    detail::check_kappa(kappa);
    detail::check_R(R);
    const double L = std::log(R);
    const double a = 0.5 * kappa;
    auto g = [a, L](double x) { return digamma(cplx(a, 2.0 * std::numbers::pi * x / L)); };
    if (radius <= 0.0) {
        // the dropped oscillating part of an x^{-2} tail is about |g| / (4 pi^4 theta^4 X^3)
        const double th = f.algebraic_tail() ? f.theta : 1.0;
        radius = std::max(50.0, std::cbrt(10.0 / (4.0 * std::pow(std::numbers::pi * th, 4) * tol)));
    }
    const auto r = integrate_against_phi(f, g, tol, radius, true);
    if (!r.converged) throw quadrature_error("I integral did not converge");
    NumericTerm out;
    out.value = r.value.real();
    out.imag_residual = std::abs(r.value.imag());
    out.quad_error = r.quad_error;
    out.truncation = r.truncation;
    out.tail_estimate = r.tail_estimate;
    out.evals = r.evals;
    if (out.imag_residual > imag_tolerance) throw verification_error("I integral has a non-negligible imaginary part");
    return out;
}

// ---------------------------------------------------------------------------
// diagonal sums and J(q, phi, R [, chi])

namespace detail {

struct PrimeWeights {
    std::vector<double> points;   ///< primes l <= X with nonzero weight, ascending
    std::vector<double> weights;  ///< Re chi(l) log l
};

inline PrimeWeights prime_weights(u64 q, const DirichletCharacter* chi, double X) {
    PrimeWeights out;
    if (X < 2.0) return out;
    const auto bound = static_cast<u64>(std::floor(X));
    const auto primes = primes_up_to(bound);
    for (u64 l : *primes) {
        if (l > bound) break;
        double w = 0.0;
        if (chi) {
            const cplx v = (*chi)(static_cast<i64>(l));
            w = v.real();
        } else {
            w = q % l == 0 ? 0.0 : 1.0;
        }
        if (w == 0.0) continue;
        out.points.push_back(static_cast<double>(l));
        out.weights.push_back(w * std::log(static_cast<double>(l)));
    }
    return out;
}

} // namespace detail

/// Phi_R(x) = phi_hat(2 log x / log R) / x.
[[nodiscard]] inline double phi_R(const TestFunction& f, double R, double x) {
    return f.phi_hat(2.0 * std::log(x) / std::log(R)) / x;
}

/// S(phi, R, eta) = sum_l Re[eta^2(l)] log l / l phi_hat(2 log l / log R), summed directly.
[[nodiscard]] inline NumericTerm diagonal_S(const TestFunction& f, double R, const DirichletCharacter& eta) {
    detail::check_R(R);
    const auto eta2 = eta.pow(2);
    const double X = std::pow(R, f.theta / 2.0);
    const auto pw = detail::prime_weights(eta.modulus(), &eta2, X);
    CompensatedSum s;
    for (std::size_t i = 0; i < pw.points.size(); ++i) s.add(pw.weights[i] * phi_R(f, R, pw.points[i]));
    NumericTerm out;
    out.value = s.value();
    out.truncation = X;
    out.evals = pw.points.size();
    return out;
}

/// Principal mode (chi empty): int_1^inf Phi_R'(x) [theta_{chi_0}(x) - x] dx with chi_0 principal mod q.
/// Twisted mode: int_1^inf Phi_R'(x) Re[theta_chi(x)] dx.
/// Between consecutive primes theta is constant, so each piece is theta times a difference of Phi_R;
/// the x part becomes int_0^theta [phi_hat'(u) - (log R / 2) phi_hat(u)] du after x = R^{u/2}.
[[nodiscard]] inline NumericTerm integral_J(u64 q, const TestFunction& f, double R,
                                            const std::optional<DirichletCharacter>& chi = std::nullopt) {
    detail::check_R(R);
    if (chi && chi->modulus() != q) throw modulus_mismatch("character must be modulo q");
    const double L = std::log(R);
    const double X = std::pow(R, f.theta / 2.0);
    const auto pw = detail::prime_weights(q, chi ? &*chi : nullptr, X);
    CompensatedSum sum, cheb;
    for (std::size_t i = 0; i < pw.points.size(); ++i) {
        cheb.add(pw.weights[i]);
        const double a = pw.points[i];
        const double b = i + 1 < pw.points.size() ? pw.points[i + 1] : X;
        const double fb = b >= X ? 0.0 : phi_R(f, R, b);
        sum.add(cheb.value() * (fb - phi_R(f, R, a)));
    }
    NumericTerm out;
    out.truncation = X;
    out.evals = pw.points.size();
    double v = sum.value();
    if (!chi) {
        auto g = [&](double u) { return f.phi_hat_deriv(1, u) - 0.5 * L * f.phi_hat(u); };
        const auto r = integrate_panels(g, make_breaks(0.0, f.theta, f.hat_kinks), 1e-13);
        if (!r.converged) throw quadrature_error("x-part of J did not converge");
        v -= r.value;
        out.quad_error = r.error;
        out.evals += r.evals;
    }
    out.value = v;
    return out;
}

/// Expansion constant R_j = int_1^X (log x)^j [theta_{chi_0}(x) - x] / x^2 dx (or Re theta_chi in twisted mode),
/// truncated at X. The integral converges slowly; tail_estimate is |theta(X) - X| (log X)^j / X.
[[nodiscard]] inline NumericTerm expansion_constant(int jexp, u64 q, double X,
                                                    const std::optional<DirichletCharacter>& chi = std::nullopt) {
    if (jexp < 0) throw invalid_input("j must be nonnegative");
    if (!(X > 2.0)) throw invalid_input("truncation X must exceed 2");
    // antiderivative of (log x)^j / x^2 is -(1/x) sum_{i<=j} j!/i! (log x)^i
    auto F = [jexp](double x) {
        const double lx = std::log(x);
        double s = 0.0, term = 1.0, fact = 1.0;
        for (int i = 0; i <= jexp; ++i) {
            if (i > 0) term *= lx;
            fact = 1.0;
            for (int k = i + 1; k <= jexp; ++k) fact *= k;
            s += fact * term;
        }
        return -s / x;
    };
    const auto pw = detail::prime_weights(q, chi ? &*chi : nullptr, X);
    CompensatedSum sum, cheb;
    for (std::size_t i = 0; i < pw.points.size(); ++i) {
        cheb.add(pw.weights[i]);
        const double a = pw.points[i];
        const double b = i + 1 < pw.points.size() ? pw.points[i + 1] : X;
        sum.add(cheb.value() * (F(b) - F(a)));
    }
    NumericTerm out;
    out.value = sum.value();
    const double lX = std::log(X);
    double drift = cheb.value();
    if (!chi) {
        out.value -= std::pow(lX, jexp + 1) / (jexp + 1);
        drift -= X;
    }
    out.truncation = X;
    out.tail_estimate = std::abs(drift) * std::pow(lX, jexp) / X;
    out.evals = pw.points.size();
    return out;
}

// ---------------------------------------------------------------------------
// L(kappa, p, phi, R) and N(kappa, phi)

/// int e(-y) J_{kappa,p}(4 pi i y / log R) phi(y) dy, truncated at |y| <= radius.
[[nodiscard]] inline NumericTerm integral_L(int kappa, u64 p, const TestFunction& f, double R,
                                            double tol = 1e-7, double radius = 40.0) {
    detail::check_kappa(kappa);
    detail::check_R(R);
    const double L = std::log(R);
    auto g = [=](double y) {
        using std::numbers::pi;
        return std::exp(cplx(0.0, -2.0 * pi * y)) * j_kappa_p(kappa, p, cplx(0.0, 4.0 * pi * y / L));
    };
    const auto r = integrate_against_phi(f, g, tol, radius, false, {}, 0.25);
    if (!r.converged) throw quadrature_error("L integral did not converge");
    NumericTerm out;
    out.value = r.value.real();
    out.imag_residual = std::abs(r.value.imag());
    out.quad_error = r.quad_error;
    out.truncation = r.truncation;
    out.tail_estimate = r.tail_estimate;
    out.evals = r.evals;
    if (out.imag_residual > imag_tolerance) throw verification_error("L integral has a non-negligible imaginary part");
    return out;
}

/// N(kappa, phi) = i^kappa / 2 [phi(0) - int_{-1}^{1} phi_hat].
[[nodiscard]] inline cplx n_main(int kappa, const TestFunction& f) {
    detail::check_kappa(kappa);
    return i_pow(kappa) * (0.5 * (f.phi(0.0) - hat_integral(f, -1.0, 1.0)));
}

struct ContourResult {
    cplx value{0.0, 0.0};
    double quad_error = 0.0;
    double tail_bound = 0.0;
    u64 evals = 0;
};

/// (i^kappa e^{-2 pi sigma} / 2 pi) int e^{-2 pi i t} phi(i sigma - t) / (sigma + i t) dt over |t| <= T.
[[nodiscard]] inline ContourResult n_contour(int kappa, const TestFunction& f, double sigma = 1e-3, double T = 1000.0,
                                             double tol = 1e-9) {
    using std::numbers::pi;
    detail::check_kappa(kappa);
    if (!f.phi_complex) throw invalid_input("contour quadrature needs the analytic continuation of phi");
    if (!(sigma > 0.0)) throw invalid_input("sigma must be positive");
    auto h = [&](double t) {
        return std::exp(cplx(0.0, -2.0 * pi * t)) * f.phi_complex(cplx(-t, sigma)) / cplx(sigma, t);
    };
    std::vector<double> pts;
    for (double s : {1.0, 3.0, 10.0, 30.0, 100.0, 300.0}) {
        if (s * sigma < 1.0) {
            pts.push_back(s * sigma);
            pts.push_back(-s * sigma);
        }
    }
    pts.push_back(0.0);
    const double w = std::min(0.5, f.period > 0.0 ? 0.5 * f.period : 0.5);
    const auto breaks = uniform_breaks(-T, T, w, pts);
    const auto r = integrate_panels(h, breaks, tol);
    if (!r.converged) throw quadrature_error("contour integral did not converge");
    ContourResult out;
    const cplx pref = i_pow(kappa) * std::exp(-2.0 * pi * sigma) / (2.0 * pi);
    out.value = pref * r.value;
    out.quad_error = std::abs(pref) * r.error;
    // |phi(i sigma - t)| <= cosh(2 pi theta sigma) / (pi theta t)^2 beyond T, both sides
    if (f.algebraic_tail())
        out.tail_bound = std::abs(pref) * 2.0 * std::cosh(2.0 * pi * f.theta * sigma) /
                         (pi * pi * f.theta * f.theta) / (2.0 * T * T);
    out.evals = r.evals;
    return out;
}

// ---------------------------------------------------------------------------
// Q_chi(c) and its main term

/// sum_m chi(m) Lambda(m) m^{-1/2} J_{kappa-1}(4 pi sqrt m / c) phi_hat(log m / log R), a finite sum over m < R^theta.
[[nodiscard]] inline SumValue q_sum(const DirichletCharacter& chi, u64 c, int kappa, const TestFunction& f, double R) {
    detail::check_kappa(kappa);
    detail::check_R(R);
    if (c == 0) throw invalid_input("c must be positive");
    const double L = std::log(R);
    const double top = std::pow(R, f.theta);
    if (top < 2.0) return SumValue::exact({0.0, 0.0});
    const auto bound = static_cast<u64>(std::floor(top));
    const auto primes = primes_up_to(bound);
    ComplexCompensatedSum s;
    u64 terms = 0;
    const double cd = static_cast<double>(c);
    for (u64 l : *primes) {
        if (l > bound) break;
        const double ll = std::log(static_cast<double>(l));
        u64 m = l;
        while (true) {
            const double md = static_cast<double>(m);
            const cplx cv = chi(static_cast<i64>(m % chi.modulus()));
            if (cv != cplx(0.0, 0.0)) {
                const double w = ll / std::sqrt(md) * bessel_j(kappa - 1, 4.0 * std::numbers::pi * std::sqrt(md) / cd) *
                                 f.phi_hat(std::log(md) / L);
                s.add(cv * w);
                ++terms;
            }
            if (m > bound / l) break;
            m *= l;
        }
    }
    return SumValue::of(s.value(), terms);
}

/// int_0^inf x^{-1/2} J_{kappa-1}(4 pi sqrt x / c) phi_hat(log x / log R) dx, computed in u = log x / log R.
[[nodiscard]] inline NumericTerm q_main(u64 c, int kappa, const TestFunction& f, double R, double tol = 1e-10) {
    detail::check_kappa(kappa);
    detail::check_R(R);
    const double L = std::log(R);
    const double cd = static_cast<double>(c);
    auto g = [&](double u) {
        const double half = std::exp(0.5 * u * L);
        return L * half * bessel_j(kappa - 1, 4.0 * std::numbers::pi * half / cd) * f.phi_hat(u);
    };
    // resolve the Bessel oscillation: about 2 sqrt(x)/c periods in x
    const double osc = 2.0 * std::pow(R, 0.5 * f.theta) / cd;
    const double panels = std::max(64.0, 8.0 * osc);
    const auto breaks = uniform_breaks(-f.theta, f.theta, 2.0 * f.theta / panels, f.hat_kinks);
    const auto r = integrate_panels(g, breaks, tol);
    if (!r.converged) throw quadrature_error("Q main integral did not converge");
    NumericTerm out;
    out.value = r.value;
    out.quad_error = r.error;
    out.evals = r.evals;
    return out;
}

// ---------------------------------------------------------------------------
// off-diagonal Petersson terms

struct ETermResult {
    SumValue value;
    double tail_bound = 0.0;  ///< bound on everything beyond c <= C
    u64 C = 0;
    u64 moduli = 0;           ///< number of moduli c that contributed
};

namespace detail {

/// Bound for A * sum_{n > N0} d(base n) (base n)^{-alpha}, alpha = kappa - 1/2, as the smaller of
///  (a) min over delta of K_delta A base^{delta - alpha} int_{N0}^inf x^{delta - alpha} dx, using d(n) <= K_delta n^delta;
///  (b) A d(base) base^{-alpha} alpha N0^{1-alpha} [(log N0 + 1)/(alpha - 1) + 1/(alpha - 1)^2], by partial
///      summation against sum_{n <= x} d(n) <= x (log x + 1).
inline double bessel_weil_tail(int kappa, double A, double base, double N0, double d_base) {
    static const std::vector<std::pair<double, double>> consts = [] {
        std::vector<std::pair<double, double>> v;
        for (int i = 10; i <= 48; i += 2) v.emplace_back(i / 100.0, divisor_bound_constant(i / 100.0));
        return v;
    }();
    const double n0 = std::max(N0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [delta, K] : consts) {
        const double alpha = kappa - 0.5 - delta;
        if (alpha <= 1.0) continue;
        const double tail = std::pow(base, -alpha) * std::pow(n0, 1.0 - alpha) / (alpha - 1.0);
        best = std::min(best, K * A * tail);
    }
    const double alpha = kappa - 0.5;
    const double hyper = A * d_base * std::pow(base, -alpha) * alpha * std::pow(n0, 1.0 - alpha) *
                         ((std::log(n0) + 1.0) / (alpha - 1.0) + 1.0 / ((alpha - 1.0) * (alpha - 1.0)));
    return std::min(best, hyper);
}

} // namespace detail

/// 2 pi i^{-kappa} sum_{c <= C, q | c} c^{-1} S_{conj chi^2}(m,1;c) J_{kappa-1}(4 pi sqrt m / c), chi modulo q.
[[nodiscard]] inline ETermResult e_term_thin(const DirichletCharacter& chi, int kappa, u64 m, u64 C) {
    using std::numbers::pi;
    detail::check_kappa(kappa);
    if (m < 1) throw invalid_input("m must be positive");
    const u64 q = chi.modulus();
    if (C < q) throw invalid_input("truncation C must be at least q");
    const auto twist = chi.pow(-2);
    const double sm = std::sqrt(static_cast<double>(m));
    ETermResult out;
    out.C = C;
    SumValue acc = SumValue::exact({0.0, 0.0});
    for (u64 c = q; c <= C; c += q) {
        const double cd = static_cast<double>(c);
        const auto S = twisted_kloosterman_any(twist, static_cast<i64>(m), 1, c);
        acc = acc + cplx(bessel_j(kappa - 1, 4.0 * pi * sm / cd) / cd, 0.0) * S;
        ++out.moduli;
    }
    out.value = (2.0 * pi * i_pow(-kappa)) * acc;
    // |S| <= sqrt(c cond) d(c) with (m,1,c) = 1, |J_nu(x)| <= (x/2)^nu / nu!
    const double nu = kappa - 1;
    const double A = 2.0 * pi * std::sqrt(static_cast<double>(twist.conductor())) * std::pow(2.0 * pi * sm, nu) /
                     std::tgamma(nu + 1.0);
    out.tail_bound = detail::bessel_weil_tail(kappa, A, static_cast<double>(q),
                                              std::floor(static_cast<double>(C) / static_cast<double>(q)),
                                              static_cast<double>(divisor_count(q)));
    return out;
}

/// Two-piece coset sum: the b-sum with K^- at level q plus the c = 0 mod p^{j+k} sum with S_{conj psi^2},
/// over all moduli bq and c not exceeding C.
[[nodiscard]] inline ETermResult e_term_coset(const CharacterCoset& cs, int kappa, u64 m, u64 C) {
    using std::numbers::pi;
    detail::check_kappa(kappa);
    if (m < 1 || m % cs.p() == 0) throw invalid_input("m must be positive and prime to p");
    const u64 q = cs.q(), p = cs.p();
    const u64 top = q * cs.pj();
    if (C < q) throw invalid_input("truncation C must be at least q");
    const auto& psi = cs.base();
    const double sm = std::sqrt(static_cast<double>(m));
    const auto mi = static_cast<i64>(m);
    ETermResult out;
    out.C = C;
    SumValue first = SumValue::exact({0.0, 0.0});
    for (u64 b = 1; b * q <= C; ++b) {
        if (b % p == 0) continue;
        const u64 c = b * q;
        const double cd = static_cast<double>(c);
        const u64 qbar = b == 1 ? 0 : inverse_mod(q % b, b);
        const u64 bbar = inverse_mod(b % q, q);
        const auto S = kloosterman(static_cast<i64>(mul_mod(qbar, m % b, b)), static_cast<i64>(qbar), b);
        const auto K = salie_pm(psi, static_cast<i64>(mul_mod(bbar, m % q, q)), static_cast<i64>(bbar), q, cs.j(),
                                Sign::minus);
        first = first + cplx(bessel_j(kappa - 1, 4.0 * pi * sm / cd) / cd, 0.0) * (S * K);
        ++out.moduli;
    }
    const auto twist = psi.pow(-2);
    SumValue second = SumValue::exact({0.0, 0.0});
    for (u64 c = top; c <= C; c += top) {
        const double cd = static_cast<double>(c);
        const auto S = twisted_kloosterman_any(twist, mi, 1, c);
        second = second + cplx(bessel_j(kappa - 1, 4.0 * pi * sm / cd) / cd, 0.0) * S;
        ++out.moduli;
    }
    const cplx a = static_cast<double>(cs.epsilon()) * psi(-mi);
    out.value = (2.0 * pi * i_pow(-kappa)) * ((a * first) + (psi(mi) * second));
    const double nu = kappa - 1;
    const double jc = std::pow(2.0 * pi * sm, nu) / std::tgamma(nu + 1.0);
    // first piece: |S(.,.;b)| <= sqrt(b) d(b), |K^-| <= q, so each term is at most d(b) b^{-1/2} |J| / 1
    const double t1 = detail::bessel_weil_tail(kappa, 2.0 * pi * jc * std::pow(static_cast<double>(q), -nu), 1.0,
                                               std::floor(static_cast<double>(C) / static_cast<double>(q)), 1.0);
    // second piece: |S_{psi^2}| <= sqrt(c q) d(c)
    const double t2 = detail::bessel_weil_tail(kappa, 2.0 * pi * jc * std::sqrt(static_cast<double>(q)),
                                               static_cast<double>(top),
                                               std::floor(static_cast<double>(C) / static_cast<double>(top)),
                                               static_cast<double>(divisor_count(top)));
    out.tail_bound = t1 + t2;
    return out;
}

// ---------------------------------------------------------------------------
// assembled main terms

enum class EtaMode { quadratic, non_quadratic };

struct DensityParams {
    int kappa = 2;
    u64 q = 0;  ///< level; for the coset family q = p^k
    u64 p = 0;
    u32 k = 0;
    u32 j = 0;
    int epsilon = 1;
    EtaMode eta_mode = EtaMode::quadratic;
    std::optional<DirichletCharacter> eta;  ///< non-quadratic twist modulo q
};

struct DensityReport {
    int theorem = 1;
    SymmetryType symmetry = SymmetryType::O;
    double R = 0.0, log_R = 0.0, theta = 0.0;
    double leading_term = 0.0;
    double hatphi_term = 0.0;
    NumericTerm I_term, J_term;
    std::optional<NumericTerm> L_term;
    std::optional<double> N_term;  ///< -epsilon N(kappa, phi); leading_term = wg(O) + N_term
    double total = 0.0;
};

[[nodiscard]] inline DensityReport assemble_report(int theorem, const DensityParams& prm, const TestFunction& f) {
    detail::check_kappa(prm.kappa);
    DensityReport rep;
    rep.theorem = theorem;
    rep.theta = f.theta;
    u64 q = prm.q;
    if (theorem == 2) {
        if (prm.p < 3 || !is_prime(prm.p)) throw invalid_input("Theorem 2 needs an odd prime p");
        if (prm.k < 2) throw invalid_input("Theorem 2 needs k >= 2");
        if (prm.j < 1 || prm.j >= prm.k) throw invalid_input("Theorem 2 needs 1 <= j < k");
        if (prm.epsilon != 1 && prm.epsilon != -1) throw invalid_input("epsilon must be +1 or -1");
        if (prm.eta_mode != EtaMode::quadratic || prm.eta) throw invalid_input("Theorem 2 takes no eta twist");
        const u64 pk = ipow(prm.p, prm.k);
        if (q != 0 && q != pk) throw invalid_input("q must equal p^k");
        q = pk;
    } else if (theorem == 1) {
        if (prm.j != 0) throw invalid_input("Theorem 1 takes no coset exponent");
        if (q == 0) throw invalid_input("Theorem 1 needs a level q");
    } else {
        throw invalid_input("theorem must be 1 or 2");
    }
    if (q < 7) throw invalid_input("q must be at least 7 so that R > 1");
    rep.R = conductor_R(q);
    rep.log_R = std::log(rep.R);
    const double s = 2.0 / rep.log_R;
    rep.I_term = integral_I(prm.kappa, f, rep.R);
    rep.I_term.value *= s;
    rep.I_term.quad_error *= s;
    if (theorem == 1 && prm.eta_mode == EtaMode::non_quadratic) {
        const DirichletCharacter eta = prm.eta ? *prm.eta : DirichletCharacter(q, std::vector<u64>(factorize(q).size(), 1));
        if (eta.modulus() != q) throw invalid_input("eta must be a character modulo q");
        const auto eta2 = eta.pow(2);
        if (eta2.is_principal()) throw invalid_input("eta is quadratic but eta_mode is non-quadratic");
        rep.symmetry = SymmetryType::U;
        rep.leading_term = wg_functional(f, SymmetryType::U);
        rep.J_term = integral_J(q, f, rep.R, eta2);
    } else {
        if (prm.eta && !prm.eta->pow(2).is_principal()) throw invalid_input("eta is not quadratic");
        rep.hatphi_term = s * f.phi_hat(0.0);
        rep.J_term = integral_J(q, f, rep.R);
        if (theorem == 1) {
            rep.symmetry = SymmetryType::O;
            rep.leading_term = wg_functional(f, SymmetryType::O);
        } else {
            const int root = i_pow_sign(prm.kappa) * prm.epsilon;
            rep.symmetry = root == 1 ? SymmetryType::SO_even : SymmetryType::SO_odd;
            rep.leading_term = wg_functional(f, rep.symmetry);
            rep.N_term = -prm.epsilon * n_main(prm.kappa, f).real();
            auto Lt = integral_L(prm.kappa, prm.p, f, rep.R);
            const double sc = -s * i_pow_sign(prm.kappa) * prm.epsilon;
            Lt.value *= sc;
            Lt.quad_error *= std::abs(sc);
            Lt.tail_estimate *= std::abs(sc);
            rep.L_term = Lt;
        }
    }
    rep.J_term.value *= -s;
    rep.J_term.quad_error *= s;
    rep.total = rep.leading_term + rep.hatphi_term + rep.I_term.value + rep.J_term.value +
                (rep.L_term ? rep.L_term->value : 0.0);
    return rep;
}

// ---------------------------------------------------------------------------
// nonvanishing proportions

enum class ParityMode { even, odd };

/// 1 - W/2 (even) or 3/2 - W/2 (odd), W = int phi W(G) for the ILS pair at theta.
[[nodiscard]] inline double nonvanishing(SymmetryType g, double theta, ParityMode mode) {
    if (!(theta > 0.0)) throw invalid_input("theta must be positive");
    if ((g == SymmetryType::SO_even || g == SymmetryType::SO_odd) && theta < 1.0)
        throw invalid_input("SO proportions need theta >= 1");
    const double w = wg_functional(ils_pair(theta), g);
    return (mode == ParityMode::even ? 1.0 : 1.5) - 0.5 * w;
}

} // namespace expsum
