#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <vector>

#include "expsum/sum_value.hpp"

namespace expsum {

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;  ///< accumulated Richardson error estimate
    u64 evals = 0;
    bool converged = true;
};

namespace detail {

template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

template <class F, class T>
void simpson_step(F& f, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth, int min_depth,
                  QuadResult<T>& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const T flm = f(lm), frm = f(rm);
    out.evals += 2;
    const double h = (b - a) / 12.0;
    const T left = h * (fa + 4.0 * flm + fm);
    const T right = h * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    const double err = magnitude(delta) / 15.0;
    // rounding floor: differences below a few ulps of the panel value cannot be resolved
    const bool ok = err <= tol || err <= 1e-14 * magnitude(left + right);
    if (depth >= min_depth && (ok || depth >= 48 || b - a < 1e-14 * std::max(1.0, std::abs(a)))) {
        if (!ok) out.converged = false;
        out.value += left + right + delta / 15.0;
        out.error += err;
        return;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, min_depth, out);
    simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, min_depth, out);
}

} // namespace detail

/// Adaptive Simpson with Richardson correction on [a, b] to absolute tolerance tol.
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double tol, int min_depth = 3) {
    using T = std::decay_t<decltype(f(a))>;
    QuadResult<T> out;
    if (a == b) return out;
    const T fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    out.evals = 3;
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 0, min_depth, out);
    return out;
}

/// Integrate over consecutive panels given by sorted break points, splitting tol evenly.
template <class F>
auto integrate_panels(F&& f, const std::vector<double>& breaks, double tol, int min_depth = 3) {
    using T = std::decay_t<decltype(f(breaks.front()))>;
    QuadResult<T> out;
    if (breaks.size() < 2) return out;
    const double share = tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (b <= a) continue;
        const auto r = adaptive_simpson(f, a, b, share, min_depth);
        out.value += r.value;
        out.error += r.error;
        out.evals += r.evals;
        out.converged = out.converged && r.converged;
    }
    return out;
}

/// Sorted, deduplicated break points from a list, restricted to [a, b] and including both ends.
inline std::vector<double> make_breaks(double a, double b, std::vector<double> pts) {
    pts.push_back(a);
    pts.push_back(b);
    std::erase_if(pts, [&](double x) { return x < a || x > b; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// Uniform panels of width w on [a, b] merged with extra break points.
inline std::vector<double> uniform_breaks(double a, double b, double w, std::vector<double> extra = {}) {
    const auto n = static_cast<u64>(std::ceil((b - a) / w));
    for (u64 i = 1; i < n; ++i) extra.push_back(a + static_cast<double>(i) * w);
    return make_breaks(a, b, std::move(extra));
}

} // namespace expsum
