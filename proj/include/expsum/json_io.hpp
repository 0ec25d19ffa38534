/**
 * @file json_io.hpp
 * @brief Report serialization. Values are built as ordered JSON trees and written
 *        with every double at 17 significant digits so that reports round-trip exactly.
 */
#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "expsum/density.hpp"

namespace expsum {

using json = nlohmann::ordered_json;

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) {
    // nlohmann already knows how to escape a bare string
    os << json(s).dump();
}

inline void write_double(std::ostream& os, double v) {
    if (!std::isfinite(v)) {
        // JSON has no inf/nan; keep the information as a string
        write_string(os, std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    os << s;
}

inline void write_json(std::ostream& os, const json& j, int indent, int level) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
    const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * level), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) { os << "{}"; return; }
            os << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad;
                write_string(os, it.key());
                os << sep;
                write_json(os, it.value(), indent, level + 1);
            }
            os << nl << close << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) { os << "[]"; return; }
            // short numeric arrays such as [re, im] stay on one line
            const bool flat = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            if (flat || indent == 0) {
                os << '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << (indent > 0 ? ", " : ",");
                    write_json(os, j[i], indent, level + 1);
                }
                os << ']';
                return;
            }
            os << '[' << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ',' << nl;
                os << pad;
                write_json(os, j[i], indent, level + 1);
            }
            os << nl << close << ']';
            return;
        }
        case json::value_t::number_float: write_double(os, j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

} // namespace detail

/// Serialize with doubles at %.17g; indent 0 gives one line.
[[nodiscard]] inline std::string dump(const json& j, int indent = 2) {
    std::ostringstream os;
    detail::write_json(os, j, indent, 0);
    return os.str();
}

[[nodiscard]] inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// characters

[[nodiscard]] inline json to_json(const DirichletCharacter& chi) {
    json comps = json::array();
    for (const auto& c : chi.components()) comps.push_back({{"p", c.p}, {"e", c.e}, {"t", c.t}});
    return {{"modulus", chi.modulus()}, {"components", comps}};
}

/// Inverse of to_json. Components must list every prime power of the modulus in ascending order.
[[nodiscard]] inline DirichletCharacter character_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("modulus")) throw invalid_input("character needs a modulus");
        const u64 n = j.at("modulus").get<u64>();
        if (n == 0) throw invalid_input("modulus must be positive");
        const auto f = factorize(n);
        std::vector<u64> t(f.size(), 0);
        if (j.contains("components")) {
            const auto& cs = j.at("components");
            if (!cs.is_array() || cs.size() != f.size())
                throw invalid_input("character needs one component per prime power of the modulus");
            for (std::size_t i = 0; i < cs.size(); ++i) {
                const u64 p = cs[i].at("p").get<u64>();
                const u32 e = cs[i].at("e").get<u32>();
                if (p != f[i].p || e != f[i].e) throw invalid_input("component does not match the factorization of the modulus");
                t[i] = cs[i].at("t").get<u64>();
            }
        }
        return DirichletCharacter(n, std::move(t));
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("malformed character: ") + e.what());
    }
}

/// Accepts the JSON form or the short form "N:t1,t2,..." (indices in ascending prime order).
/// A bare "N" gives the principal character.
[[nodiscard]] inline DirichletCharacter parse_character(const std::string& s) {
    const auto start = s.find_first_not_of(" \t");
    if (start == std::string::npos) throw invalid_input("empty character spec");
    if (s[start] == '{') {
        json j;
        try {
            j = json::parse(s);
        } catch (const nlohmann::json::exception& e) {
            throw invalid_input(std::string("malformed character: ") + e.what());
        }
        return character_from_json(j);
    }
    auto to_u64 = [&](const std::string& tok) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw invalid_input("malformed character spec '" + s + "'");
        try {
            return static_cast<u64>(std::stoull(tok));
        } catch (const std::exception&) {
            throw invalid_input("malformed character spec '" + s + "'");
        }
    };
    const auto colon = s.find(':');
    const u64 n = to_u64(s.substr(0, colon));
    if (colon == std::string::npos) return DirichletCharacter::principal(n);
    std::vector<u64> t;
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) t.push_back(to_u64(tok));
    return DirichletCharacter(n, std::move(t));
}

// ---------------------------------------------------------------------------
// sums and density terms

[[nodiscard]] inline json sum_report(const std::string& kind, json params, const SumValue& v) {
    return {{"sum_kind", kind}, {"params", std::move(params)}, {"value", complex_json(v.value)},
            {"err_radius", v.err_radius}, {"terms", v.terms}};
}

[[nodiscard]] inline json to_json(const NumericTerm& t) {
    return {{"value", t.value},
            {"quad_error", t.quad_error},
            {"imag_residual", t.imag_residual},
            {"truncation", t.truncation},
            {"tail_estimate", t.tail_estimate},
            {"evals", t.evals}};
}

[[nodiscard]] inline json to_json(const DensityReport& r) {
    json j = {{"theorem", r.theorem}, {"symmetry", to_string(r.symmetry)}, {"R", r.R},
              {"log_R", r.log_R},     {"theta", r.theta},                  {"leading_term", r.leading_term}};
    json terms = {{"hatphi", r.hatphi_term}, {"I", to_json(r.I_term)}, {"J", to_json(r.J_term)}};
    terms["L"] = r.L_term ? to_json(*r.L_term) : json(nullptr);
    terms["N"] = r.N_term ? json(*r.N_term) : json(nullptr);
    j["terms"] = terms;
    j["total"] = r.total;
    return j;
}

[[nodiscard]] inline json to_json(const ETermResult& e) {
    return {{"value", complex_json(e.value.value)}, {"abs", std::abs(e.value.value)}, {"err_radius", e.value.err_radius},
            {"tail_bound", e.tail_bound},           {"C", e.C},                        {"moduli", e.moduli}};
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {
inline std::string csv_cell(const json& v) {
    if (v.is_number_float()) {
        std::ostringstream os;
        write_double(os, v.get<double>());
        return os.str();
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_null()) return "";
    if (v.is_primitive()) return v.dump();
    return csv_cell(json(dump(v, 0)));
}

inline void flatten(const json& v, const std::string& prefix, json& out) {
    if (v.is_object() && !v.empty()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        out[prefix + ".re"] = v[0];
        out[prefix + ".im"] = v[1];
        return;
    }
    out[prefix] = v;
}
} // namespace detail

/// Rows are flattened with dotted keys; the header is the union of keys in order of first appearance.
[[nodiscard]] inline std::string to_csv(const json& rows) {
    std::vector<json> flat;
    std::vector<std::string> header;
    for (const auto& r : rows) {
        json f = json::object();
        detail::flatten(r, "", f);
        for (auto it = f.begin(); it != f.end(); ++it)
            if (std::find(header.begin(), header.end(), it.key()) == header.end()) header.push_back(it.key());
        flat.push_back(std::move(f));
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << detail::csv_cell(json(header[i]));
    os << '\n';
    for (const auto& f : flat) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os << ',';
            if (f.contains(header[i])) os << detail::csv_cell(f[header[i]]);
        }
        os << '\n';
    }
    return os.str();
}

} // namespace expsum
