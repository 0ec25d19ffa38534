#pragma once

#include <algorithm>
#include <complex>
#include <numbers>
#include <vector>

#include "expsum/arith.hpp"

namespace expsum {

using cplx = std::complex<double>;

/// Per-term accumulation allowance used for a-priori error radii.
inline constexpr double term_error = 1e-12;

/// A computed sum together with an a-priori absolute error radius.
struct SumValue {
    cplx value{0.0, 0.0};
    double err_radius = 0.0;
    u64 terms = 0;

    static SumValue of(cplx v, u64 terms) { return {v, term_error * static_cast<double>(std::max<u64>(terms, 1)), terms}; }
    static SumValue exact(cplx v) { return {v, 0.0, 0}; }
};

[[nodiscard]] inline SumValue operator*(const SumValue& a, const SumValue& b) {
    // |ab - a'b'| <= |a| eb + |b| ea + ea eb
    const double r = std::abs(a.value) * b.err_radius + std::abs(b.value) * a.err_radius + a.err_radius * b.err_radius;
    return {a.value * b.value, r, std::max(a.terms, b.terms)};
}
[[nodiscard]] inline SumValue operator*(cplx s, const SumValue& a) { return {s * a.value, std::abs(s) * a.err_radius, a.terms}; }
[[nodiscard]] inline SumValue operator+(const SumValue& a, const SumValue& b) {
    return {a.value + b.value, a.err_radius + b.err_radius, a.terms + b.terms};
}

/// Default comparison slack 1e-6 * max(1, terms).
[[nodiscard]] inline double default_tolerance(const SumValue& a, const SumValue& b) {
    return 1e-6 * static_cast<double>(std::max<u64>({1, a.terms, b.terms}));
}

[[nodiscard]] inline bool approx_equal(const SumValue& a, const SumValue& b, double tol) {
    return std::abs(a.value - b.value) <= a.err_radius + b.err_radius + tol;
}
[[nodiscard]] inline bool approx_equal(const SumValue& a, const SumValue& b) {
    return approx_equal(a, b, default_tolerance(a, b));
}

/// e(a/c) = exp(2 pi i a / c); the numerator is reduced in integers first.
[[nodiscard]] inline cplx unit_root(u64 a, u64 c) {
    const u64 r = a % c;
    if (r == 0) return {1.0, 0.0};
    const double t = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(c);
    return {std::cos(t), std::sin(t)};
}

[[nodiscard]] inline cplx unit_root_signed(i64 a, u64 c) { return unit_root(reduce(a, c), c); }

/// Table of all c-th roots of unity, indexed by the exponent mod c.
class RootTable {
public:
    explicit RootTable(u64 c) : c_(c), roots_(c) {
        for (u64 a = 0; a < c; ++a) roots_[a] = unit_root(a, c);
    }
    [[nodiscard]] u64 modulus() const noexcept { return c_; }
    [[nodiscard]] const cplx& operator[](u64 a) const noexcept { return roots_[a]; }

private:
    u64 c_;
    std::vector<cplx> roots_;
};

/// i^k exactly, read off from k mod 4.
[[nodiscard]] constexpr cplx i_pow(i64 k) noexcept {
    switch (reduce(k, 4)) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexCompensatedSum {
public:
    void add(cplx z) noexcept {
        re_.add(z.real());
        im_.add(z.imag());
    }
    [[nodiscard]] cplx value() const noexcept { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_, im_;
};

} // namespace expsum
