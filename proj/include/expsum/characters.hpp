/**
 * @file characters.hpp
 * @brief Dirichlet characters modulo odd integers.
 *
 * A character mod N = prod p^e is stored as one index t per prime power,
 * relative to the smallest primitive root g of p^e:
 *
 *     chi(g^a) = e(t a / phi(p^e)).
 *
 * Values are kept exact as exponents in Z/E, E = lcm of the phi(p^e), so
 * chi(n) = e(k / E). Discrete-log tables are built once per prime power and
 * shared across the process.
 */
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "expsum/arith.hpp"
#include "expsum/sum_value.hpp"

namespace expsum {

inline constexpr u64 dlog_table_cap = 10'000'000;

/// Discrete logarithms base g for every residue mod p^e.
struct DlogTable {
    static constexpr u32 npos = 0xffffffffu;

    u64 p = 0;
    u32 e = 0;
    u64 pe = 0;
    u64 phi = 0;
    u64 g = 0;
    std::vector<u32> log;

    [[nodiscard]] u32 operator[](u64 x) const noexcept { return log[x % pe]; }
};

[[nodiscard]] inline std::shared_ptr<const DlogTable> dlog_table(u64 p, u32 e) {
    static std::mutex mu;
    static std::map<std::pair<u64, u32>, std::shared_ptr<const DlogTable>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find({p, e}); it != cache.end()) return it->second;
    }
    if (p == 2 && e > 2) throw unsupported_modulus("2-parts beyond 4 are outside the character machinery");
    const u64 pe = ipow(p, e);
    if (pe > dlog_table_cap) throw invalid_input("prime power exceeds discrete-log table cap 10^7");
    auto t = std::make_shared<DlogTable>();
    t->p = p;
    t->e = e;
    t->pe = pe;
    t->phi = (p - 1) * (pe / p);
    t->g = primitive_root(p, e);
    t->log.assign(pe, DlogTable::npos);
    u64 x = 1;
    for (u64 a = 0; a < t->phi; ++a) {
        t->log[x] = static_cast<u32>(a);
        x = mul_mod(x, t->g, pe);
    }
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.emplace(std::pair{p, e}, std::move(t));
    return it->second;
}

struct CharComponent {
    u64 p = 0;
    u32 e = 0;
    u64 t = 0;
    friend bool operator==(const CharComponent&, const CharComponent&) = default;
};

class DirichletCharacter {
public:
    /// The trivial character mod 1.
    DirichletCharacter() { init(1, {}); }

    /// Character mod N with one index per prime power of N, in ascending prime order.
    DirichletCharacter(u64 modulus, std::vector<u64> indices) { init(modulus, std::move(indices)); }

    [[nodiscard]] static DirichletCharacter principal(u64 modulus) {
        const auto f = checked_factor(modulus);
        return DirichletCharacter(modulus, std::vector<u64>(f.size(), 0));
    }

    [[nodiscard]] u64 modulus() const noexcept { return n_; }
    [[nodiscard]] const Factorization& factorization() const noexcept { return f_; }
    [[nodiscard]] const std::vector<u64>& indices() const noexcept { return t_; }
    [[nodiscard]] std::size_t num_components() const noexcept { return t_.size(); }
    [[nodiscard]] u64 exponent() const noexcept { return e_; }

    [[nodiscard]] std::vector<CharComponent> components() const {
        std::vector<CharComponent> out;
        for (std::size_t i = 0; i < t_.size(); ++i) out.push_back({f_[i].p, f_[i].e, t_[i]});
        return out;
    }

    /// Generator used for component i.
    [[nodiscard]] u64 generator(std::size_t i) const { return tables_[i]->g; }

    /// k with chi(n) = e(k/E), or nothing when gcd(n, N) > 1.
    [[nodiscard]] std::optional<u64> log_value(i64 n) const {
        const u64 x = reduce(n, n_);
        u64 k = 0;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const u32 a = (*tables_[i])[x];
            if (a == DlogTable::npos) return std::nullopt;
            k = (k + mul_mod(mul_mod(t_[i], a, e_), scale_[i], e_)) % e_;
        }
        return k;
    }

    [[nodiscard]] cplx operator()(i64 n) const {
        const auto k = log_value(n);
        return k ? unit_root(*k, e_) : cplx{0.0, 0.0};
    }

    /// Exponents k(x) for x = 0..N-1, with -1 for non-units.
    [[nodiscard]] std::vector<i64> log_table() const {
        std::vector<i64> out(n_, -1);
        for (u64 x = 0; x < n_; ++x) {
            if (auto k = log_value(static_cast<i64>(x))) out[x] = static_cast<i64>(*k);
        }
        return out;
    }

    [[nodiscard]] bool is_principal() const noexcept {
        return std::all_of(t_.begin(), t_.end(), [](u64 t) { return t == 0; });
    }

    /// chi(-1) as +1 or -1.
    [[nodiscard]] int parity() const {
        if (n_ == 1) return 1;
        const u64 k = *log_value(-1);
        return k == 0 ? 1 : -1;
    }

    [[nodiscard]] DirichletCharacter pow(i64 m) const {
        std::vector<u64> t(t_.size());
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const u64 phi = tables_[i]->phi;
            t[i] = mul_mod(t_[i], reduce(m, phi), phi);
        }
        return DirichletCharacter(n_, std::move(t));
    }
    [[nodiscard]] DirichletCharacter conj() const { return pow(-1); }

    [[nodiscard]] DirichletCharacter operator*(const DirichletCharacter& o) const {
        if (o.n_ != n_) throw modulus_mismatch("character product needs equal moduli");
        std::vector<u64> t(t_.size());
        for (std::size_t i = 0; i < t_.size(); ++i) t[i] = (t_[i] + o.t_[i]) % tables_[i]->phi;
        return DirichletCharacter(n_, std::move(t));
    }

    /// Order of chi in the character group.
    [[nodiscard]] u64 order() const {
        u64 o = 1;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const u64 phi = tables_[i]->phi;
            o = std::lcm(o, phi / std::gcd(phi, t_[i]));
        }
        return o;
    }

    /// Smallest modulus through which chi factors.
    [[nodiscard]] u64 conductor() const {
        u64 c = 1;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (t_[i] == 0) continue;
            const auto& pe = f_[i];
            const u32 nu = valuation(t_[i], pe.p, pe.e);
            const u32 f = nu >= pe.e ? 1 : std::max<u32>(1, pe.e - nu);
            c *= ipow(pe.p, f);
        }
        return c;
    }
    [[nodiscard]] bool is_primitive() const { return conductor() == n_; }

    /// The induced character modulo a multiple M of the modulus.
    [[nodiscard]] DirichletCharacter lift(u64 m) const {
        if (m % n_ != 0) throw invalid_input("lift target must be a multiple of the modulus");
        const auto fm = checked_factor(m);
        std::vector<u64> t(fm.size(), 0);
        for (std::size_t i = 0; i < fm.size(); ++i) {
            const auto pos = component_of(fm[i].p);
            if (!pos || t_[*pos] == 0) continue;
            const auto& old = *tables_[*pos];
            const auto fresh = dlog_table(fm[i].p, fm[i].e);
            // chi(g_new) with g_new read modulo the old prime power
            const u64 a = old[fresh->g % old.pe];
            const u64 k = mul_mod(t_[*pos], a, old.phi);
            t[i] = mul_mod(k, fresh->phi / old.phi, fresh->phi);
        }
        return DirichletCharacter(m, std::move(t));
    }

    /// The component character modulo d, where d is a unitary divisor of N.
    [[nodiscard]] DirichletCharacter restrict_to(u64 d) const {
        if (d == 0 || n_ % d != 0 || std::gcd(d, n_ / d) != 1)
            throw invalid_input("restriction needs a unitary divisor of the modulus");
        std::vector<u64> t;
        for (std::size_t i = 0; i < t_.size(); ++i)
            if (d % f_[i].p == 0) t.push_back(t_[i]);
        return DirichletCharacter(d, std::move(t));
    }

    /// Component i as a character mod p_i^{e_i}.
    [[nodiscard]] DirichletCharacter component(std::size_t i) const {
        return DirichletCharacter(f_[i].value(), {t_[i]});
    }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.n_ == b.n_ && a.t_ == b.t_;
    }

private:
    // Odd moduli are the supported domain. A 2-part of at most 4 is tolerated
    // so that odd characters can be induced to moduli such as 2 p^r or 4 p^r.
    static Factorization checked_factor(u64 n) {
        if (n == 0) throw invalid_input("modulus must be positive");
        if (n % 8 == 0) throw unsupported_modulus("characters are restricted to odd moduli");
        return factorize(n);
    }

    [[nodiscard]] std::optional<std::size_t> component_of(u64 p) const {
        for (std::size_t i = 0; i < f_.size(); ++i)
            if (f_[i].p == p) return i;
        return std::nullopt;
    }

    void init(u64 modulus, std::vector<u64> indices) {
        f_ = checked_factor(modulus);
        n_ = modulus;
        if (indices.size() != f_.size())
            throw invalid_input("character needs exactly one index per prime power of the modulus");
        t_ = std::move(indices);
        tables_.clear();
        e_ = 1;
        for (const auto& pe : f_) {
            tables_.push_back(dlog_table(pe.p, pe.e));
            e_ = std::lcm(e_, tables_.back()->phi);
        }
        scale_.clear();
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (t_[i] >= tables_[i]->phi) throw invalid_input("character index out of range");
            scale_.push_back(e_ / tables_[i]->phi);
        }
    }

    u64 n_ = 1;
    Factorization f_;
    std::vector<u64> t_;
    std::vector<std::shared_ptr<const DlogTable>> tables_;
    u64 e_ = 1;
    std::vector<u64> scale_;
};

/// Values of one character on all residues, for tight loops.
class CharacterTable {
public:
    explicit CharacterTable(const DirichletCharacter& chi)
        : n_(chi.modulus()), logs_(chi.log_table()), roots_(chi.exponent()) {}

    [[nodiscard]] u64 modulus() const noexcept { return n_; }
    [[nodiscard]] bool is_unit(u64 x) const noexcept { return logs_[x % n_] >= 0; }
    [[nodiscard]] i64 log(u64 x) const noexcept { return logs_[x % n_]; }
    [[nodiscard]] cplx operator()(u64 x) const noexcept {
        const i64 k = logs_[x % n_];
        return k < 0 ? cplx{0.0, 0.0} : roots_[static_cast<u64>(k)];
    }
    [[nodiscard]] cplx conj(u64 x) const noexcept { return std::conj((*this)(x)); }

private:
    u64 n_;
    std::vector<i64> logs_;
    RootTable roots_;
};

// ---------------------------------------------------------------------------

/// Every character mod N in lexicographic index order, the principal one first.
/// Accepts a 2-part of at most 4 (cyclic), used when odd characters meet even moduli.
[[nodiscard]] inline std::vector<DirichletCharacter> enumerate_group_any(u64 n) {
    const auto base = DirichletCharacter::principal(n);
    const auto& f = base.factorization();
    std::vector<u64> phis;
    for (const auto& pe : f) phis.push_back((pe.p - 1) * ipow(pe.p, pe.e - 1));
    std::vector<DirichletCharacter> out;
    std::vector<u64> t(f.size(), 0);
    while (true) {
        out.emplace_back(n, t);
        std::size_t i = t.size();
        bool carried = true;
        while (i > 0 && carried) {
            --i;
            carried = ++t[i] >= phis[i];
            if (carried) t[i] = 0;
        }
        if (carried) return out;
    }
}

/// Every character mod N for odd N.
[[nodiscard]] inline std::vector<DirichletCharacter> enumerate_group(u64 n) {
    if (n % 2 == 0) throw unsupported_modulus("enumerate_group needs an odd modulus");
    return enumerate_group_any(n);
}

[[nodiscard]] inline u64 conductor(const DirichletCharacter& chi) { return chi.conductor(); }

/// tau(chi) = sum_x chi(x) e_q(x).
[[nodiscard]] inline SumValue gauss_sum(const DirichletCharacter& chi) {
    const u64 q = chi.modulus();
    if (q == 1) return SumValue::of({1.0, 0.0}, 1);
    const CharacterTable tab(chi);
    const RootTable eq(q);
    ComplexCompensatedSum s;
    for (u64 x = 1; x < q; ++x) {
        if (tab.is_unit(x)) s.add(tab(x) * eq[x]);
    }
    return SumValue::of(s.value(), q);
}

/// A coset psi * G_{p^j} inside the characters mod p^k, with a parity sign.
class CharacterCoset {
public:
    CharacterCoset(DirichletCharacter psi, u32 j, int epsilon) : psi_(std::move(psi)), j_(j), eps_(epsilon) {
        const auto& f = psi_.factorization();
        if (f.size() != 1) throw invalid_input("coset base must live modulo an odd prime power");
        p_ = f[0].p;
        k_ = f[0].e;
        if (j_ < 1 || j_ >= k_) throw invalid_input("coset needs 1 <= j < k");
        if (eps_ != 1 && eps_ != -1) throw invalid_input("parity sign must be +1 or -1");
        if (!psi_.pow(2).is_primitive()) throw invalid_input("psi^2 must be primitive mod p^k");
    }

    [[nodiscard]] const DirichletCharacter& base() const noexcept { return psi_; }
    [[nodiscard]] u64 p() const noexcept { return p_; }
    [[nodiscard]] u32 k() const noexcept { return k_; }
    [[nodiscard]] u32 j() const noexcept { return j_; }
    [[nodiscard]] int epsilon() const noexcept { return eps_; }
    [[nodiscard]] u64 q() const noexcept { return ipow(p_, k_); }
    [[nodiscard]] u64 pj() const noexcept { return ipow(p_, j_); }
    [[nodiscard]] u64 phi_pj() const noexcept { return (p_ - 1) * ipow(p_, j_ - 1); }

    /// All phi(p^j) characters psi * lambda with lambda factoring through p^j.
    [[nodiscard]] std::vector<DirichletCharacter> enumerate() const {
        const u64 phi_q = (p_ - 1) * ipow(p_, k_ - 1);
        const u64 step = ipow(p_, k_ - j_);
        std::vector<DirichletCharacter> out;
        for (u64 s = 0; s < phi_pj(); ++s) out.emplace_back(q(), std::vector<u64>{(psi_.indices()[0] + s * step) % phi_q});
        return out;
    }

private:
    DirichletCharacter psi_;
    u32 j_;
    int eps_;
    u64 p_ = 0;
    u32 k_ = 0;
};

[[nodiscard]] inline std::vector<DirichletCharacter> coset_enumerate(const CharacterCoset& c, bool parity_filter = false) {
    auto all = c.enumerate();
    if (!parity_filter) return all;
    std::vector<DirichletCharacter> out;
    for (auto& chi : all)
        if (chi.parity() == c.epsilon()) out.push_back(std::move(chi));
    return out;
}

/// All psi mod p^k whose square is primitive, in index order.
[[nodiscard]] inline std::vector<DirichletCharacter> square_primitive_characters(u64 p, u32 k) {
    std::vector<DirichletCharacter> out;
    const u64 q = ipow(p, k);
    const u64 phi = (p - 1) * (q / p);
    for (u64 t = 1; t < phi; ++t) {
        DirichletCharacter psi(q, {t});
        if (psi.pow(2).is_primitive()) out.push_back(std::move(psi));
    }
    return out;
}

/**
 * Residue l attached to chi mod p^e (p odd, e >= 2) such that, with m = floor(e/2),
 *
 *     even e:  conj chi(1 + z p^m) = e(l z / p^m),
 *     odd e:   conj chi(1 + z p^m) = e(l z / p^{m+1} - inv2 l z^2 / p),
 *
 * for every integer z. The identity is re-checked for all z before returning.
 */
[[nodiscard]] inline Residue postnikov_ell(const DirichletCharacter& chi) {
    const auto& f = chi.factorization();
    if (f.size() != 1) throw invalid_input("postnikov_ell needs a prime-power modulus");
    const u64 p = f[0].p;
    const u32 e = f[0].e;
    if (p == 2) throw unsupported_modulus("postnikov_ell is undefined for p = 2");
    if (e < 2) throw invalid_input("postnikov_ell needs exponent e >= 2");
    const u64 pe = chi.modulus();
    const u64 E = chi.exponent();
    const u32 m = e / 2;
    const u64 pm = ipow(p, m);
    const u64 den = (e % 2 == 0) ? pm : pm * p;  // order of 1 + p^m
    // exponent of conj chi at 1 + z p^m, as a numerator over den
    auto conj_exp = [&](u64 z) -> u64 {
        const u64 x = (1 + mul_mod(z % pe, pm, pe)) % pe;
        const u64 k = *chi.log_value(static_cast<i64>(x));
        const u64 kc = (E - k) % E;
        if (kc % (E / den) != 0) throw verification_error("root of unity of unexpected order");
        return kc / (E / den);
    };
    const u64 k1 = conj_exp(1);
    u64 ell = k1;
    const u64 inv2 = (p + 1) / 2;
    if (e % 2 == 1) ell = mul_mod(k1, (1 + mul_mod(inv2, pm, den)) % den, den);
    for (u64 z = 0; z < den; ++z) {
        u64 rhs;
        if (e % 2 == 0) {
            rhs = mul_mod(ell, z, den);
        } else {
            // (l z - inv2 l z^2 p^m) over p^{m+1}
            const u64 lz = mul_mod(ell, z, den);
            const u64 corr = mul_mod(mul_mod(mul_mod(inv2, ell, den), mul_mod(z, z, den), den), pm, den);
            rhs = (lz + den - corr) % den;
        }
        if (conj_exp(z) != rhs) throw verification_error("postnikov identity failed");
    }
    return Residue(ell, den);
}

} // namespace expsum
