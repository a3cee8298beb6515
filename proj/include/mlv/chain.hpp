#pragma once

#include <optional>
#include <string>
#include <vector>

#include "compress.hpp"
#include "keypoly.hpp"
#include "valuation.hpp"

namespace mlv {

struct MLVChain {
    InductiveValuation chain;
    std::vector<RationalPoly> phi_rep; // Φ-representative for each step: next φ or the family's χ_1
    std::vector<long> phi_deg;
};

namespace detail {
inline bool same_chain(const InductiveValuation& a, const InductiveValuation& b) {
    if (a.p() != b.p() || a.depth() != b.depth()) return false;
    if (a.base().a != b.base().a || !(a.base().gamma == b.base().gamma)) return false;
    for (std::size_t i = 0; i < a.depth(); ++i) {
        const auto &s = a.steps()[i], &t = b.steps()[i];
        if (s.kind != t.kind || !(s.phi == t.phi) || !(s.gamma == t.gamma)) return false;
        if (s.kind == StepKind::Limit && s.family != t.family) {
            const auto &fs = s.family->spec(), &ft = t.family->spec();
            if (fs.kind != ft.kind || fs.params != ft.params || fs.shift != ft.shift || fs.kind == "custom") return false;
        }
    }
    return true;
}
} // namespace detail

/// Checks the MLV conditions step by step.
inline MLVChain validate(const InductiveValuation& mu) {
    MLVChain out{mu, {}, {}};
    for (std::size_t n = 1; n <= mu.depth(); ++n) {
        const AugStep& st = mu.steps()[n - 1];
        InductiveValuation prev = mu.prefix(n - 1);
        const Value& gprev = mu.gamma(n - 1);
        const long mprev = mu.degree(n - 1);
        if (gprev.is_infinite()) throw MLVViolationError(n, "only the final γ may be ∞");
        if (!(gprev < st.gamma)) throw MLVViolationError(n, "γ must strictly increase along the chain");
        if (st.kind == StepKind::Ordinary) {
            if (st.phi.degree() <= mprev) throw MLVViolationError(n, "ordinary step must increase the key degree");
            if (!is_key(prev, st.phi)) throw MLVViolationError(n, "φ is not a key polynomial for the previous valuation");
            if (!(prev.eval(st.phi) < st.gamma)) throw MLVViolationError(n, "γ must exceed the previous value of φ");
            out.phi_rep.push_back(st.phi);
        } else {
            const ContinuousFamily& fam = *st.family;
            if (!detail::same_chain(fam.base(), prev)) throw MLVViolationError(n, "family base differs from the previous valuation");
            if (fam.stable_degree() != mprev) throw MLVViolationError(n, "family stable degree must equal the previous key degree");
            const auto& [chi, beta] = fam.member(1);
            if (!is_key(prev, chi) || !(prev.eval(chi) < beta)) throw MLVViolationError(n, "family member is not an augmentation of the previous valuation");
            if (equiv(prev, chi, mu.key(n - 1))) throw MLVViolationError(n, "previous key lies in the family's class");
            if (st.phi.degree() <= mprev) throw MLVViolationError(n, "limit key must exceed the stable degree");
            auto rep = fam.stable_value(st.phi);
            if (rep.stable) throw MLVViolationError(n, "limit key is stable for the family");
            for (const auto& v : rep.values)
                if (!(v < st.gamma)) throw MLVViolationError(n, "γ must exceed every ρ_i(φ)");
            out.phi_rep.push_back(chi);
        }
        out.phi_deg.push_back(out.phi_rep.back().degree());
    }
    return out;
}

struct NodeInvariants {
    long m = 1;
    Value gamma;
    ValueGroup G;
    FieldDesc kappa;
};

struct ChainInvariants {
    std::vector<NodeInvariants> nodes;   // 0..r
    std::vector<i64> e, f;               // per step 0..r-1
    std::vector<Rational> d;
    std::vector<FqPoly> psi;             // minimal polynomial of z_n over κ_n
    std::vector<FieldEmbedding> embeddings; // κ_n -> κ_{n+1}
    i64 e_total = 1, f_total = 1;
    Rational d_total = 1;
};

inline ChainInvariants invariants(const MLVChain& c, const ResidualContext& ctx) {
    ChainInvariants inv;
    const std::size_t r = ctx.top();
    for (std::size_t n = 0; n <= r; ++n) {
        const auto& l = ctx.level(n);
        inv.nodes.push_back({l.m, l.gamma, l.G, *l.kappa});
    }
    for (std::size_t n = 0; n < r; ++n) {
        const auto& l = ctx.level(n);
        const auto& nx = ctx.level(n + 1);
        const i64 e = group_index(n == 0 ? ValueGroup::integers() : ctx.level(n - 1).G, l.G);
        const i64 f = l.psi.degree();
        const Rational d = nx.kind == StepKind::Limit ? make_rational(nx.m, l.m) : Rational(1);
        // f two ways: residual degree and deg Φ/(e m)
        MLV_ASSERT(make_rational(c.phi_deg[n], e * l.m) == (nx.kind == StepKind::Limit ? Rational(1) : Rational(f)),
                   "f_n disagrees with deg Φ/(e m) at node " + std::to_string(n));
        MLV_ASSERT(Rational(e * f * l.m) * d == nx.m, "degree identity at node " + std::to_string(n));
        inv.e.push_back(e);
        inv.f.push_back(f);
        inv.d.push_back(d);
        inv.psi.push_back(l.psi);
        inv.embeddings.push_back(nx.iota);
        inv.e_total *= e;
        inv.f_total *= f;
        inv.d_total *= d;
    }
    return inv;
}

inline ChainInvariants invariants(const MLVChain& c) { return invariants(c, ResidualContext(c.chain)); }

struct DefectLedger {
    i64 e = 1, f = 1;
    Rational d = 1;
};

inline DefectLedger defect_ledger(const MLVChain& c, const ChainInvariants& inv) {
    if (c.chain.last_gamma().is_finite()) throw DomainError(ErrorKind::SupportRequired, "defect ledger needs a final γ = ∞");
    DefectLedger l{inv.e_total, inv.f_total, inv.d_total};
    MLV_ASSERT(Rational(l.e * l.f) * l.d == c.chain.deg(), "e·f·d differs from the final key degree");
    return l;
}
inline DefectLedger defect_ledger(const MLVChain& c) {
    if (c.chain.last_gamma().is_finite()) throw DomainError(ErrorKind::SupportRequired, "defect ledger needs a final γ = ∞");
    return defect_ledger(c, invariants(c));
}

struct GradedPresentation {
    i64 p = 2;
    std::vector<std::string> kappa_tower; // ψ_n, n < r
    struct Generator {
        std::string name;
        Value degree;
        i64 e = 1;
        std::string relation;   // x_n^{e_n} = u_n*z_n
        std::string normalizer; // u_n = p^t * x_i^{t_i} ...
    };
    std::vector<Generator> generators;
    std::optional<Generator> transcendental; // q_r, present iff γ_r < ∞
};

inline GradedPresentation graded_presentation(const MLVChain& c, const ResidualContext& ctx) {
    GradedPresentation gp;
    gp.p = c.chain.p();
    const std::size_t r = ctx.top();
    for (std::size_t n = 0; n < r; ++n) {
        const auto& l = ctx.level(n);
        gp.kappa_tower.push_back(l.psi.str());
        GradedPresentation::Generator g;
        g.name = "x" + std::to_string(n);
        g.degree = l.gamma;
        g.e = l.e;
        const ValueGroup prev = n == 0 ? ValueGroup::integers() : ctx.level(n - 1).G;
        MLV_ASSERT(prev.contains(Rational(l.e * l.gamma.rational())), "relation degree e_n γ_n outside Γ_{n-1}");
        const std::string u = "u" + std::to_string(n), z = "z" + std::to_string(n);
        g.relation = g.name + (l.e == 1 ? "" : "^" + std::to_string(l.e)) + " = " + u + "*" + z;
        std::string expr;
        if (l.u.p_exp != 0 || std::all_of(l.u.t.begin(), l.u.t.end(), [](i64 t) { return t == 0; }))
            expr = l.u.p_exp == 0 ? "1" : (l.u.p_exp == 1 ? std::to_string(gp.p) : std::to_string(gp.p) + "^" + std::to_string(l.u.p_exp));
        std::string mono = l.u.str("x");
        if (!mono.empty()) expr += (expr.empty() ? "" : "*") + mono;
        g.normalizer = u + " = " + expr;
        gp.generators.push_back(std::move(g));
    }
    const auto& top = ctx.level(r);
    if (top.gamma.is_finite()) gp.transcendental = GradedPresentation::Generator{"q" + std::to_string(r), top.gamma, 1, "", ""};
    return gp;
}
inline GradedPresentation graded_presentation(const MLVChain& c) { return graded_presentation(c, ResidualContext(c.chain)); }

struct EqualityVerdict {
    bool equal = false;
    std::optional<RationalPoly> witness;
};

/// Equality of two purely ordinary chains, compared node by node after compression.
inline EqualityVerdict equals(const InductiveValuation& a, const InductiveValuation& b) {
    for (const auto* m : {&a, &b})
        for (const auto& st : m->steps())
            if (st.kind == StepKind::Limit) throw DomainError(ErrorKind::LimitStepPresent, "equality of limit chains is only semi-decidable");
    if (a.p() != b.p()) return {false, std::nullopt};
    const InductiveValuation ca = compress(a), cb = compress(b);
    bool eq = ca.depth() == cb.depth();
    if (eq) {
        for (std::size_t n = 0; n <= ca.depth() && eq; ++n) {
            if (ca.degree(n) != cb.degree(n) || !(ca.gamma(n) == cb.gamma(n))) {
                eq = false;
                break;
            }
            const RationalPoly diff = cb.key(n) - ca.key(n);
            Value v = n == 0 ? (diff.is_zero() ? Value::infinity() : Value(Rational(ord_p(diff.coeff(0), a.p()))))
                             : ca.eval_at(n - 1, diff);
            eq = !(v < ca.gamma(n));
        }
    }
    if (eq) return {true, std::nullopt};
    std::vector<RationalPoly> cand{RationalPoly::x()};
    for (const auto* m : {&ca, &cb})
        for (std::size_t n = 0; n <= m->depth(); ++n) cand.push_back(m->key(n));
    for (std::size_t n = 0; n <= std::min(ca.depth(), cb.depth()); ++n) {
        RationalPoly diff = cb.key(n) - ca.key(n);
        if (!diff.is_zero()) cand.push_back(diff);
    }
    cand.push_back(RationalPoly(Rational(static_cast<long>(a.p()))));
    for (const auto& c : cand)
        if (!(ca.eval(c) == cb.eval(c))) return {false, c};
    return {false, std::nullopt};
}

} // namespace mlv
