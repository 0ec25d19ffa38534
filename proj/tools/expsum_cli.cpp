// expsum: verification suites and one-off computations with JSON or CSV output.
//
// Exit codes: 0 success, 1 verification failure, 64 usage, 65 bad input.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "expsum/suites.hpp"

using namespace expsum;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 64;
constexpr int exit_input = 65;

// ---------------------------------------------------------------------------
// argument parsing

i64 to_int(const std::string& s) {
    std::size_t pos = 0;
    i64 v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw invalid_input("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw invalid_input("not an integer: '" + s + "'");
    return v;
}

u64 to_uint(const std::string& s) {
    const i64 v = to_int(s);
    if (v < 0) throw invalid_input("expected a nonnegative integer: '" + s + "'");
    return static_cast<u64>(v);
}

double to_real(const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw invalid_input("not a number: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw invalid_input("not a finite number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

/// "a..b" or a single integer.
IntRange parse_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const i64 v = to_int(s);
        return {v, v};
    }
    const IntRange r{to_int(s.substr(0, dots)), to_int(s.substr(dots + 2))};
    if (r.empty()) throw invalid_input("empty range '" + s + "'");
    return r;
}

/// Comma-separated integers and ranges, e.g. "1..3,7".
std::vector<u64> parse_uint_list(const std::string& s) {
    std::vector<u64> out;
    for (const auto& tok : split(s, ',')) {
        const auto r = parse_range(tok);
        if (r.lo < 0) throw invalid_input("negative value in '" + s + "'");
        if (r.hi - r.lo > 1'000'000) throw invalid_input("range too long in '" + s + "'");
        for (i64 v = r.lo; v <= r.hi; ++v) out.push_back(static_cast<u64>(v));
    }
    if (out.empty()) throw invalid_input("empty list");
    return out;
}

/// Comma-separated reals, or "lo:hi:step".
std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw invalid_input("expected lo:hi:step, got '" + s + "'");
        const double lo = to_real(parts[0]), hi = to_real(parts[1]), step = to_real(parts[2]);
        if (!(step > 0.0) || hi < lo) throw invalid_input("bad grid '" + s + "'");
        const auto n = static_cast<i64>(std::floor((hi - lo) / step + 1e-9));
        if (n > 100000) throw invalid_input("grid too long");
        for (i64 i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
        return out;
    }
    for (const auto& tok : split(s, ',')) out.push_back(to_real(tok));
    return out;
}

/// "A:B,A:B".
std::vector<std::pair<u64, u64>> parse_pairs(const std::string& s) {
    std::vector<std::pair<u64, u64>> out;
    for (const auto& tok : split(s, ',')) {
        const auto ab = split(tok, ':');
        if (ab.size() != 2) throw invalid_input("expected A:B, got '" + tok + "'");
        out.emplace_back(to_uint(ab[0]), to_uint(ab[1]));
    }
    return out;
}

/// "re" or "re,im".
cplx parse_complex(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() == 1) return {to_real(parts[0]), 0.0};
    if (parts.size() == 2) return {to_real(parts[0]), to_real(parts[1])};
    throw invalid_input("expected re or re,im, got '" + s + "'");
}

int to_sign(i64 e) {
    if (e != 1 && e != -1) throw invalid_input("epsilon must be 1 or -1");
    return static_cast<int>(e);
}

template <class T>
const T& need(const std::optional<T>& v, const char* name) {
    if (!v) throw invalid_input(std::string("missing --") + name);
    return *v;
}

// ---------------------------------------------------------------------------
// output

struct Output {
    std::string format = "json";
    bool compact = false;

    void emit(const json& j) const {
        if (format == "csv") {
            std::cout << to_csv(j.is_array() ? j : json::array({j}));
        } else {
            std::cout << dump(j, compact ? 0 : 2) << '\n';
        }
    }
};

// ---------------------------------------------------------------------------
// option bags

struct VerifyArgs {
    std::string suite;
    std::optional<std::string> p, k, j, r, m, n, mn, b, c, q, ab, theta;
    u64 samples = 20, seed = 1;
    std::optional<double> tol;
    double eps0 = 0.1, max_constant = 10.0;
    unsigned threads = 1;
};

struct ComputeArgs {
    std::string kind;
    std::optional<std::string> m, n, c, chi, psi, eta, sign, path, theta, q, s, G, mode, eta_mode, A, B, C, x;
    std::optional<i64> j, k, p, b, r, kappa, epsilon, theorem, order;
    std::optional<double> R, sigma, T, alpha, tol, radius;
    double eps0 = 0.1;
};

SweepSpec to_spec(const VerifyArgs& a) {
    SweepSpec s;
    s.suite = a.suite;
    if (a.p) s.p_list = parse_uint_list(*a.p);
    if (a.k) s.k_range = parse_range(*a.k);
    if (a.j) s.j_range = parse_range(*a.j);
    if (a.r) s.r_range = parse_range(*a.r);
    if (a.mn) s.m_range = s.n_range = parse_range(*a.mn);
    if (a.m) s.m_range = parse_range(*a.m);
    if (a.n) s.n_range = parse_range(*a.n);
    if (a.b) s.b_list = parse_uint_list(*a.b);
    if (a.c) s.c_list = parse_uint_list(*a.c);
    if (a.q) s.q_list = parse_uint_list(*a.q);
    if (a.ab) s.ab_list = parse_pairs(*a.ab);
    if (a.theta) s.theta_list = parse_real_list(*a.theta);
    s.samples = a.samples;
    s.seed = a.seed;
    s.tol = a.tol;
    s.eps0 = a.eps0;
    s.max_constant = a.max_constant;
    s.threads = a.threads;
    return s;
}

int run_verify(const VerifyArgs& a, const Output& out) {
    const auto spec = to_spec(a);
    const auto res = run_suite(spec);
    if (out.format == "csv")
        out.emit(res.report["tuples"]);
    else
        out.emit(res.report);
    return res.pass ? exit_ok : exit_fail;
}

// ---------------------------------------------------------------------------
// compute sum

json run_sum(const ComputeArgs& a) {
    const auto& k = a.kind;
    if (k == "kloosterman") {
        const i64 m = to_int(need(a.m, "m")), n = to_int(need(a.n, "n"));
        const u64 c = to_uint(need(a.c, "c"));
        return sum_report(k, {{"m", m}, {"n", n}, {"c", c}}, kloosterman(m, n, c));
    }
    if (k == "twisted") {
        const auto chi = parse_character(need(a.chi, "chi"));
        const i64 m = to_int(need(a.m, "m")), n = to_int(need(a.n, "n"));
        const u64 c = a.c ? to_uint(*a.c) : chi.modulus();
        return sum_report(k, {{"chi", to_json(chi)}, {"m", m}, {"n", n}, {"c", c}}, twisted_kloosterman_any(chi, m, n, c));
    }
    if (k == "gauss") {
        const auto chi = parse_character(need(a.chi, "chi"));
        return sum_report(k, {{"chi", to_json(chi)}}, gauss_sum(chi));
    }
    if (k == "kloosterman-fourier") {
        const auto chi = parse_character(need(a.chi, "chi"));
        const i64 m = to_int(need(a.m, "m"));
        return sum_report(k, {{"chi", to_json(chi)}, {"m", m}, {"c", chi.modulus()}}, kloosterman_fourier(chi, m, chi.modulus()));
    }
    if (k == "salie") {
        const auto psi = parse_character(need(a.psi, "psi"));
        const i64 m = to_int(need(a.m, "m")), n = to_int(need(a.n, "n"));
        const auto j = static_cast<u32>(need(a.j, "j"));
        const u64 pr = to_uint(need(a.c, "c"));
        const std::string sg = a.sign.value_or("minus");
        if (sg != "plus" && sg != "minus") throw invalid_input("--sign must be plus or minus");
        return sum_report(k, {{"psi", to_json(psi)}, {"m", m}, {"n", n}, {"c", pr}, {"j", j}, {"sign", sg}},
                          salie_pm(psi, m, n, pr, j, sg == "plus" ? Sign::plus : Sign::minus));
    }
    if (k == "coset") {
        const auto psi = parse_character(need(a.psi, "psi"));
        const CharacterCoset cs(psi, static_cast<u32>(need(a.j, "j")), to_sign(need(a.epsilon, "epsilon")));
        const i64 m = to_int(need(a.m, "m")), n = to_int(need(a.n, "n"));
        const u64 c = to_uint(need(a.c, "c"));
        const std::string path = a.path.value_or("literal");
        SigmaPath sp;
        if (path == "literal") sp = SigmaPath::literal;
        else if (path == "structural") sp = SigmaPath::structural;
        else if (path == "naive") sp = SigmaPath::naive;
        else throw invalid_input("--path must be literal, structural or naive");
        return sum_report(k, {{"psi", to_json(psi)}, {"j", cs.j()}, {"epsilon", cs.epsilon()}, {"m", m}, {"n", n}, {"c", c}, {"path", path}},
                          coset_sigma({cs, m, n, c}, sp));
    }
    if (k == "sigma-hat") {
        const auto psi = parse_character(need(a.psi, "psi"));
        const auto j = static_cast<u32>(need(a.j, "j"));
        const u64 b = static_cast<u64>(need(a.b, "b"));
        const auto eta = a.eta ? parse_character(*a.eta) : DirichletCharacter::principal(b * psi.modulus());
        return sum_report(k, {{"psi", to_json(psi)}, {"eta", to_json(eta)}, {"b", b}, {"j", j}}, sigma_hat(psi, eta, b, j));
    }
    throw invalid_input("unknown sum kind '" + k + "'");
}

// ---------------------------------------------------------------------------
// compute bound

json run_bound(const ComputeArgs& a) {
    const auto& k = a.kind;
    if (k == "weil") {
        const i64 m = to_int(need(a.m, "m")), n = to_int(need(a.n, "n"));
        const u64 c = to_uint(need(a.c, "c"));
        return {{"bound_kind", k}, {"params", {{"m", m}, {"n", n}, {"c", c}}}, {"value", weil_bound(m, n, c)}};
    }
    if (k == "weil-kl" || k == "flrt") {
        const auto chi = parse_character(need(a.chi, "chi"));
        const i64 m = to_int(need(a.m, "m")), n = to_int(need(a.n, "n"));
        json j = {{"bound_kind", k}, {"params", {{"chi", to_json(chi)}, {"m", m}, {"n", n}}}};
        if (k == "weil-kl") {
            j["value"] = weil_kl_bound(chi, m, n);
            return j;
        }
        WeilFactorData d;
        j["value"] = flrt_bound(chi, m, n, &d);
        json fs = json::array();
        for (const auto& f : d.factors)
            fs.push_back({{"p", f.p}, {"e", f.e}, {"ell", f.ell.value}, {"ell_modulus", f.ell.modulus}, {"delta", f.delta},
                          {"c_i", f.c_i}, {"disc_nu", f.disc_nu}});
        j["diagnostics"] = {{"flrt_c", d.flrt_c}, {"gcd_mn", d.gcd_mn}, {"gcd_disc", d.gcd_disc}, {"factors", fs}};
        const auto S = twisted_kloosterman(chi, m, n, chi.modulus());
        j["sum_abs"] = std::abs(S.value);
        return j;
    }
    if (k == "avg-weil") {
        const auto chi = parse_character(need(a.chi, "chi"));
        const u64 A = to_uint(need(a.A, "A")), B = to_uint(need(a.B, "B"));
        const auto r = avg_weil_check(chi, A, B, a.eps0);
        return {{"bound_kind", k},
                {"params", {{"chi", to_json(chi)}, {"A", A}, {"B", B}, {"eps0", a.eps0}}},
                {"lhs", r.lhs},
                {"envelope", r.envelope},
                {"ratio", r.ratio},
                {"pairs", r.pairs},
                {"gcd_sum", r.gcd_sum},
                {"disc_sum", r.disc_sum},
                {"amgm_rhs", r.amgm_rhs}};
    }
    throw invalid_input("unknown bound kind '" + k + "'");
}

// ---------------------------------------------------------------------------
// compute density

std::vector<double> thetas(const ComputeArgs& a, double fallback) {
    return a.theta ? parse_real_list(*a.theta) : std::vector<double>{fallback};
}

json maybe_list(json rows) { return rows.size() == 1 ? rows[0] : rows; }

json run_density(const ComputeArgs& a) {
    const auto& k = a.kind;
    json rows = json::array();
    if (k == "report") {
        const int theorem = static_cast<int>(need(a.theorem, "theorem"));
        std::vector<u64> qs = a.q ? parse_uint_list(*a.q) : std::vector<u64>{0};
        for (u64 q : qs)
            for (double t : thetas(a, 1.0)) {
                DensityParams prm;
                prm.kappa = static_cast<int>(a.kappa.value_or(2));
                prm.q = q;
                if (theorem == 2) {
                    prm.p = static_cast<u64>(need(a.p, "p"));
                    prm.k = static_cast<u32>(need(a.k, "k"));
                    prm.j = static_cast<u32>(need(a.j, "j"));
                    prm.epsilon = to_sign(need(a.epsilon, "epsilon"));
                } else {
                    if (q == 0) throw invalid_input("missing --q");
                    const std::string em = a.eta_mode.value_or("quadratic");
                    if (em == "quadratic") prm.eta_mode = EtaMode::quadratic;
                    else if (em == "non-quadratic") prm.eta_mode = EtaMode::non_quadratic;
                    else throw invalid_input("--eta-mode must be quadratic or non-quadratic");
                    if (a.eta) prm.eta = parse_character(*a.eta);
                }
                json j = to_json(assemble_report(theorem, prm, ils_pair(t)));
                json p = {{"kappa", prm.kappa}, {"q", theorem == 2 ? ipow(prm.p, prm.k) : q}};
                if (theorem == 2) {
                    p["p"] = prm.p;
                    p["k"] = prm.k;
                    p["j"] = prm.j;
                    p["epsilon"] = prm.epsilon;
                } else {
                    p["eta_mode"] = a.eta_mode.value_or("quadratic");
                }
                p["phi"] = "ils";
                j["params"] = p;
                rows.push_back(std::move(j));
            }
        return maybe_list(rows);
    }
    if (k == "nonvanishing") {
        const auto G = parse_symmetry(need(a.G, "G"));
        const std::string mode = a.mode.value_or("even");
        if (mode != "even" && mode != "odd") throw invalid_input("--mode must be even or odd");
        for (double t : thetas(a, 1.0))
            rows.push_back({{"G", to_string(G)}, {"theta", t}, {"mode", mode},
                            {"value", nonvanishing(G, t, mode == "even" ? ParityMode::even : ParityMode::odd)}});
        return maybe_list(rows);
    }
    if (k == "wg") {
        const auto G = parse_symmetry(need(a.G, "G"));
        for (double t : thetas(a, 1.0)) rows.push_back({{"G", to_string(G)}, {"theta", t}, {"value", wg_functional(ils_pair(t), G)}});
        return maybe_list(rows);
    }
    // R from --R or from --q
    auto level_R = [&](u64 q) { return a.R ? *a.R : conductor_R(q); };
    if (k == "integral-I" || k == "integral-J" || k == "integral-L" || k == "diagonal") {
        std::vector<u64> qs = a.q ? parse_uint_list(*a.q) : std::vector<u64>{0};
        for (u64 q : qs)
            for (double t : thetas(a, 1.0)) {
                const auto f = ils_pair(t);
                if (!a.R && q == 0) throw invalid_input("missing --q or --R");
                const double R = level_R(q);
                json p = {{"theta", t}, {"R", R}};
                if (q) p["q"] = q;
                NumericTerm v;
                if (k == "integral-I") {
                    const int kappa = static_cast<int>(a.kappa.value_or(2));
                    p["kappa"] = kappa;
                    v = integral_I(kappa, f, R, a.tol.value_or(default_quad_tol), a.radius.value_or(0.0));
                } else if (k == "integral-L") {
                    const int kappa = static_cast<int>(a.kappa.value_or(2));
                    const u64 pp = static_cast<u64>(need(a.p, "p"));
                    p["kappa"] = kappa;
                    p["p"] = pp;
                    v = integral_L(kappa, pp, f, R, a.tol.value_or(1e-7), a.radius.value_or(40.0));
                } else {
                    if (q == 0) throw invalid_input("missing --q");
                    std::optional<DirichletCharacter> chi;
                    if (a.chi) chi = parse_character(*a.chi);
                    if (k == "integral-J") {
                        v = integral_J(q, f, R, chi);
                        if (chi) p["chi"] = to_json(*chi);
                    } else {
                        const DirichletCharacter eta = chi ? *chi : DirichletCharacter(q, std::vector<u64>(factorize(q).size(), 1));
                        v = diagonal_S(f, R, eta);
                        p["eta"] = to_json(eta);
                    }
                }
                rows.push_back({{"term", k}, {"params", p}, {"result", to_json(v)}});
            }
        return maybe_list(rows);
    }
    if (k == "n-main" || k == "n-contour") {
        const int kappa = static_cast<int>(a.kappa.value_or(2));
        for (double t : thetas(a, 1.5)) {
            const auto f = ils_pair(t);
            json j = {{"term", k}, {"params", {{"kappa", kappa}, {"theta", t}}}};
            if (k == "n-main") {
                j["value"] = complex_json(n_main(kappa, f));
            } else {
                const double sigma = a.sigma.value_or(1e-3), T = a.T.value_or(1000.0);
                const auto r = n_contour(kappa, f, sigma, T, a.tol.value_or(1e-9));
                j["params"]["sigma"] = sigma;
                j["params"]["T"] = T;
                j["value"] = complex_json(r.value);
                j["quad_error"] = r.quad_error;
                j["tail_bound"] = r.tail_bound;
                j["closed_form"] = complex_json(n_main(kappa, f));
            }
            rows.push_back(std::move(j));
        }
        return maybe_list(rows);
    }
    if (k == "e-term") {
        const int kappa = static_cast<int>(a.kappa.value_or(2));
        const u64 m = a.m ? to_uint(*a.m) : 1;
        const std::string mode = a.mode.value_or("thin");
        if (mode == "thin") {
            std::vector<u64> qs = a.q ? parse_uint_list(*a.q) : std::vector<u64>{};
            if (a.chi) {
                const auto chi = parse_character(*a.chi);
                qs = {chi.modulus()};
            }
            if (qs.empty()) throw invalid_input("missing --q or --chi");
            for (u64 q : qs) {
                const auto chi = a.chi ? parse_character(*a.chi) : DirichletCharacter(q, std::vector<u64>(factorize(q).size(), 1));
                const u64 C = a.C ? to_uint(*a.C) : 100 * q;
                rows.push_back({{"term", k}, {"params", {{"mode", mode}, {"chi", to_json(chi)}, {"kappa", kappa}, {"m", m}}},
                                {"result", to_json(e_term_thin(chi, kappa, m, C))}});
            }
        } else if (mode == "coset") {
            const u64 p = static_cast<u64>(need(a.p, "p"));
            const auto kk = static_cast<u32>(need(a.k, "k"));
            const auto psi = a.psi ? parse_character(*a.psi) : square_primitive_characters(p, kk).at(0);
            const CharacterCoset cs(psi, static_cast<u32>(need(a.j, "j")), to_sign(a.epsilon.value_or(1)));
            const u64 C = a.C ? to_uint(*a.C) : 100 * cs.q();
            rows.push_back({{"term", k},
                            {"params", {{"mode", mode}, {"psi", to_json(psi)}, {"j", cs.j()}, {"epsilon", cs.epsilon()}, {"kappa", kappa}, {"m", m}}},
                            {"result", to_json(e_term_coset(cs, kappa, m, C))}});
        } else {
            throw invalid_input("--mode must be thin or coset");
        }
        return maybe_list(rows);
    }
    if (k == "expansion") {
        const u64 q = to_uint(need(a.q, "q"));
        const double X = a.x ? to_real(*a.x) : 1e6;
        std::optional<DirichletCharacter> chi;
        if (a.chi) chi = parse_character(*a.chi);
        const int jexp = static_cast<int>(a.order.value_or(0));
        json p = {{"j", jexp}, {"q", q}, {"X", X}};
        if (chi) p["chi"] = to_json(*chi);
        return {{"term", k}, {"params", p}, {"result", to_json(expansion_constant(jexp, q, X, chi))},
                {"caveat", "slowly convergent; tail_estimate bounds the unseen part only heuristically"}};
    }
    if (k == "xi" || k == "zeta" || k == "euler-product") {
        const cplx s = parse_complex(need(a.s, "s"));
        json j = {{"function", k}, {"s", complex_json(s)}};
        if (k == "xi") j["value"] = complex_json(xi_function(s));
        if (k == "zeta") j["value"] = complex_json(zeta(s));
        if (k == "euler-product") {
            const auto e = euler_product_A(s);
            j["value"] = complex_json(e.value);
            j["tail_bound"] = e.tail_bound;
            j["cutoff"] = euler_product_cutoff;
        }
        return j;
    }
    if (k == "j-kappa-p") {
        const int kappa = static_cast<int>(a.kappa.value_or(2));
        const u64 p = static_cast<u64>(need(a.p, "p"));
        const cplx s = parse_complex(a.s.value_or("0"));
        return {{"function", k}, {"params", {{"kappa", kappa}, {"p", p}, {"s", complex_json(s)}}},
                {"value", complex_json(j_kappa_p(kappa, p, s))}};
    }
    if (k == "q-sum") {
        const auto chi = parse_character(need(a.chi, "chi"));
        const int kappa = static_cast<int>(a.kappa.value_or(2));
        const u64 c = to_uint(need(a.c, "c"));
        const double t = thetas(a, 1.0).at(0);
        const double R = level_R(chi.modulus());
        const auto f = ils_pair(t);
        json j = sum_report(k, {{"chi", to_json(chi)}, {"c", c}, {"kappa", kappa}, {"theta", t}, {"R", R}}, q_sum(chi, c, kappa, f, R));
        j["main_term"] = to_json(q_main(c, kappa, f, R));
        return j;
    }
    throw invalid_input("unknown density kind '" + k + "'");
}

void add_compute_options(CLI::App* sub, ComputeArgs& a) {
    sub->add_option("kind", a.kind, "what to compute")->required();
    sub->add_option("--m", a.m);
    sub->add_option("--n", a.n);
    sub->add_option("--c", a.c, "modulus");
    sub->add_option("--chi", a.chi, "character: N:t1,t2,... or {\"modulus\":N,\"components\":[{p,e,t}]}");
    sub->add_option("--psi", a.psi, "coset base character mod p^k");
    sub->add_option("--eta", a.eta, "twist character");
    sub->add_option("--sign", a.sign, "plus | minus");
    sub->add_option("--path", a.path, "literal | structural | naive");
    sub->add_option("--theta", a.theta, "support of phi_hat: value, list a,b,c or grid lo:hi:step");
    sub->add_option("--q", a.q, "level, or a list of levels");
    sub->add_option("--s", a.s, "complex argument re[,im]");
    sub->add_option("--G", a.G, "symmetry type: u | o | so-even | so-odd");
    sub->add_option("--mode", a.mode);
    sub->add_option("--eta-mode", a.eta_mode, "quadratic | non-quadratic");
    sub->add_option("--A", a.A);
    sub->add_option("--B", a.B);
    sub->add_option("--C", a.C, "truncation of the c-sum");
    sub->add_option("--X", a.x, "truncation of the expansion integral");
    sub->add_option("--j", a.j);
    sub->add_option("--k", a.k);
    sub->add_option("--p", a.p);
    sub->add_option("--b", a.b);
    sub->add_option("--r", a.r);
    sub->add_option("--kappa", a.kappa);
    sub->add_option("--epsilon", a.epsilon);
    sub->add_option("--theorem", a.theorem);
    sub->add_option("--order", a.order, "power of log in the expansion constant");
    sub->add_option("--R", a.R);
    sub->add_option("--sigma", a.sigma);
    sub->add_option("--T", a.T);
    sub->add_option("--alpha", a.alpha);
    sub->add_option("--tol", a.tol);
    sub->add_option("--radius", a.radius);
    sub->add_option("--eps0", a.eps0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted Kloosterman sums, coset sums, Weil-type bounds and one-level density main terms"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--format", out.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--compact", out.compact, "single-line JSON");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", va.suite, "coset-structure | coset-fourier | kloosterman-fourier | weil-flrt | weil-avg | density-identities")
        ->required();
    verify->add_option("--p", va.p, "primes, e.g. 3,5");
    verify->add_option("--k", va.k, "range a..b");
    verify->add_option("--j", va.j, "range a..b");
    verify->add_option("--r", va.r, "range a..b");
    verify->add_option("--m", va.m, "range a..b");
    verify->add_option("--n", va.n, "range a..b");
    verify->add_option("--mn", va.mn, "range for both m and n");
    verify->add_option("--b", va.b, "list");
    verify->add_option("--c", va.c, "list of moduli");
    verify->add_option("--q", va.q, "list of levels");
    verify->add_option("--ab", va.ab, "A:B pairs, e.g. 1:100,50:200");
    verify->add_option("--theta", va.theta, "list or lo:hi:step");
    verify->add_option("--samples", va.samples, "psi sampled per cell");
    verify->add_option("--seed", va.seed);
    verify->add_option("--tol", va.tol, "replace the suite's base tolerance factor");
    verify->add_option("--eps0", va.eps0);
    verify->add_option("--max-constant", va.max_constant, "weil-avg ceiling on the sweep constant");
    verify->add_option("--threads", va.threads);
    verify->fallthrough();

    auto* compute = app.add_subcommand("compute", "compute one quantity");
    compute->require_subcommand(1);
    compute->fallthrough();
    ComputeArgs sa, ba, da;
    auto* csum = compute->add_subcommand("sum", "kloosterman | twisted | gauss | kloosterman-fourier | salie | coset | sigma-hat");
    auto* cbound = compute->add_subcommand("bound", "weil | weil-kl | flrt | avg-weil");
    auto* cdens = compute->add_subcommand(
        "density", "report | nonvanishing | wg | integral-I | integral-J | integral-L | diagonal | n-main | n-contour | "
                   "e-term | expansion | xi | zeta | euler-product | j-kappa-p | q-sum");
    add_compute_options(csum, sa);
    add_compute_options(cbound, ba);
    add_compute_options(cdens, da);
    for (auto* s : {csum, cbound, cdens}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (verify->parsed()) return run_verify(va, out);
        if (csum->parsed()) out.emit(run_sum(sa));
        else if (cbound->parsed()) out.emit(run_bound(ba));
        else out.emit(run_density(da));
        return exit_ok;
    } catch (const unknown_suite& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const sieve_limit_error& e) {
        std::cerr << "error: " << e.what() << " (raise EXPSUM_SIEVE_LIMIT)\n";
        return exit_input;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_fail;
    }
}
