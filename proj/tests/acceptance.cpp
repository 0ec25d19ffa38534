// Acceptance driver: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>

#include "expsum/suites.hpp"

using namespace expsum;

namespace {

// pinned tolerances, per criterion
constexpr double tol_wg = 1e-10;
constexpr double tol_nonvanishing = 1e-12;
constexpr double tol_square = 1e-12;
constexpr double tol_n_contour = 1e-4;
constexpr double tol_n_zero = 1e-12;
constexpr double tol_diagonal = 1e-8;
constexpr double tol_xi = 1e-8;
constexpr double tol_j_cont = 1e-4;
constexpr double tol_digamma = 1e-10;
constexpr double max_slope = -0.8;
constexpr double max_runtime_s = 600.0;

struct Outcome {
    bool pass;
    std::string detail;
};

SuiteResult suite(const std::string& name, std::function<void(SweepSpec&)> tweak = {}) {
    SweepSpec s;
    s.suite = name;
    if (tweak) tweak(s);
    return run_suite(s);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// every density-identities cell whose check name is in `names` must meet `tols[name]`
Outcome density_cells(const json& report, const std::map<std::string, double>& tols) {
    std::size_t n = 0;
    double worst = 0.0;
    bool ok = true;
    for (const auto& t : report["tuples"]) {
        const auto name = t["check"].get<std::string>();
        const auto it = tols.find(name);
        if (it == tols.end()) continue;
        ++n;
        const double dev = t["deviation"].get<double>();
        worst = std::max(worst, dev / it->second);
        ok = ok && dev <= it->second && t["pass"].get<bool>();
    }
    ok = ok && n > 0;
    return {ok, fmt("%.0f checks, worst deviation/tolerance %.3g", static_cast<double>(n), worst)};
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = suite("coset-structure");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = r.pass && r.report["failures"].empty() && secs <= max_runtime_s;
    return {ok, fmt("%.0f tuples, max deviation %.3g, %.1f s", r.report["tuples_tested"].get<double>(),
                    r.report["max_deviation"].get<double>(), secs)};
}

Outcome criterion2() {
    const auto a = suite("kloosterman-fourier", [](SweepSpec& s) { s.m_range = IntRange{1, 30}; });
    const auto b = suite("coset-fourier", [](SweepSpec& s) { s.k_range = IntRange{2, 3}; s.j_range = IntRange{1, 1}; });
    return {a.pass && b.pass, fmt("kloosterman-fourier %.0f tuples (max dev %.3g), coset-fourier %.0f tuples",
                                  a.report["tuples_tested"].get<double>(), a.report["max_deviation"].get<double>(),
                                  b.report["tuples_tested"].get<double>())};
}

Outcome criterion3() {
    const auto a = suite("weil-flrt", [](SweepSpec& s) { s.m_range = s.n_range = IntRange{1, 30}; });
    const auto b = suite("weil-avg", [](SweepSpec& s) { s.eps0 = 0.1; });
    const bool ok = a.pass && a.report["violations"].empty() && b.pass && b.report["violations"].empty();
    return {ok, fmt("flrt max ratio %.4f, avg constant %.4f", a.report["max_ratio"].get<double>(),
                    b.report["constant_estimate"].get<double>())};
}

Outcome criterion8() {
    bool ok = true;
    std::string detail;
    for (int kappa : {2, 4}) {
        std::vector<double> qs, vals;
        for (u64 q : {81ull, 625ull, 2401ull}) {
            const DirichletCharacter chi(q, {1});
            const auto e = e_term_thin(chi, kappa, 1, 100 * q);
            const auto e2 = e_term_thin(chi, kappa, 1, 200 * q);
            const double v = std::abs(e.value.value), change = std::abs(e2.value.value - e.value.value);
            ok = ok && change < e.tail_bound;
            qs.push_back(static_cast<double>(q));
            vals.push_back(v);
        }
        ok = ok && vals[0] > vals[1] && vals[1] > vals[2];
        // least-squares slope of log|E| against log q
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < 3; ++i) mx += std::log(qs[i]) / 3, my += std::log(vals[i]) / 3;
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            sxy += (std::log(qs[i]) - mx) * (std::log(vals[i]) - my);
            sxx += (std::log(qs[i]) - mx) * (std::log(qs[i]) - mx);
        }
        const double slope = sxy / sxx;
        ok = ok && slope <= max_slope;
        detail += (detail.empty() ? "" : ", ") + fmt("kappa=%.0f slope %.3f", kappa, slope);
    }
    return {ok, detail};
}

} // namespace

int main() {
    json density;
    auto density_report = [&]() -> const json& {
        if (density.is_null()) density = suite("density-identities", [](SweepSpec& s) { s.q_list = {7, 11}; }).report;
        return density;
    };
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"coset-structure suite", criterion1},
        {"fourier suites", criterion2},
        {"weil suites", criterion3},
        {"density closed forms",
         [&] { return density_cells(density_report(), {{"wg", tol_wg}, {"nonvanishing", tol_nonvanishing}, {"square-identity", tol_square}}); }},
        {"N cross-check", [&] { return density_cells(density_report(), {{"N-contour", tol_n_contour}, {"N-vanishes", tol_n_zero}}); }},
        {"diagonal lemma",
         [&] { return density_cells(density_report(), {{"diagonal-quadratic", tol_diagonal}, {"diagonal-non-quadratic", tol_diagonal}}); }},
        {"special functions",
         [&] {
             return density_cells(density_report(), {{"xi-dirichlet", tol_xi}, {"J-continuity", tol_j_cont},
                                                     {"digamma-recurrence", tol_digamma}, {"digamma-reflection", tol_digamma}});
         }},
        {"E-term trend", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
