#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "chain.hpp"
#include "keypoly.hpp"
#include "limitfam.hpp"

namespace mlv {

struct ExtensionLeaf {
    InductiveValuation approximant; // μ with finite top γ (or the exact chain itself for divisor leaves)
    MLVChain chain;                 // [μ; F, ∞] when F is a key, otherwise [μ; lift ψ, ∞]
    bool exact = false;
    FqPoly psi;
    i64 e = 1, f = 1;
    std::vector<Rational> slopes;  // −slope of each Newton side taken, i.e. the γ it was augmented with
};

struct ExtensionReport {
    RationalPoly F;
    i64 p = 2;
    std::vector<ExtensionLeaf> leaves;
    i64 sum_ef = 0;
};

namespace detail {

class MacLaneSearch {
public:
    MacLaneSearch(RationalPoly F, i64 p) : F_(std::move(F)), p_(p) {}

    std::vector<ExtensionLeaf> run() {
        process(InductiveValuation::gauss(p_), true, {}, 0);
        return std::move(leaves_);
    }

private:
    static constexpr int kMaxDepth = 64;

    void process(const InductiveValuation& mu, bool root, const std::vector<Rational>& slopes, int depth) {
        if (depth > kMaxDepth) throw InternalError("MacLane search exceeded depth " + std::to_string(kMaxDepth));
        ResidualContext ctx(mu);
        ResidualData rd = ctx.residual(F_);
        if (root && rd.s0 >= 1) branch(mu, ctx.level(ctx.top()).phi, slopes, depth);
        for (const auto& [psi, k] : fq_factor(rd.R)) {
            if (k == 1) add_leaf(mu, ctx, psi, slopes);
            else branch(mu, ctx.lift_psi(psi), slopes, depth);
        }
    }

    void branch(const InductiveValuation& mu, const RationalPoly& chi, const std::vector<Rational>& slopes, int depth) {
        auto a = phi_expand(F_, chi);
        if (a[0].is_zero()) add_divisor_leaf(mu, chi, slopes);
        NewtonPolygon np = newton_polygon(mu, chi, F_);
        const Value vchi = mu.eval(chi);
        for (const auto& side : np.sides) {
            Rational lambda = -side.slope;
            if (!(vchi < Value(lambda))) continue;
            auto next = slopes;
            next.push_back(lambda);
            process(compress(mu.augment(chi, Value(lambda))), false, next, depth + 1);
        }
    }

    void finish(ExtensionLeaf& leaf) {
        ResidualContext ctx(leaf.chain.chain);
        ChainInvariants inv = invariants(leaf.chain, ctx);
        DefectLedger led = defect_ledger(leaf.chain, inv);
        MLV_ASSERT(led.d == 1, "ordinary search produced a gap");
        leaf.e = led.e;
        leaf.f = led.f;
        leaves_.push_back(std::move(leaf));
    }

    void add_leaf(const InductiveValuation& mu, const ResidualContext& ctx, const FqPoly& psi, const std::vector<Rational>& slopes) {
        ExtensionLeaf leaf;
        leaf.approximant = mu;
        leaf.psi = psi;
        leaf.slopes = slopes;
        leaf.exact = is_key(ctx, F_);
        RationalPoly top = leaf.exact ? F_ : ctx.lift_psi(psi);
        leaf.chain = validate(compress(mu.augment(top, Value::infinity())));
        finish(leaf);
        const auto& back = leaves_.back();
        MLV_ASSERT(back.e == group_index(ValueGroup::integers(), value_group(mu)), "leaf e differs from the value group index");
        MLV_ASSERT(back.f == ctx.kappa()->k() * psi.degree(), "leaf f differs from [κ : F_p]·deg ψ");
    }

    void add_divisor_leaf(const InductiveValuation& mu, const RationalPoly& chi, const std::vector<Rational>& slopes) {
        ExtensionLeaf leaf;
        leaf.chain = validate(compress(mu.augment(chi, Value::infinity())));
        leaf.approximant = leaf.chain.chain;
        leaf.exact = chi == F_;
        leaf.slopes = slopes;
        finish(leaf);
    }

    RationalPoly F_;
    i64 p_;
    std::vector<ExtensionLeaf> leaves_;
};

inline auto leaf_key(const ExtensionLeaf& l) {
    std::vector<std::string> sl;
    for (const auto& s : l.slopes) sl.push_back(s.get_str());
    return std::make_tuple(l.e, l.f, sl, l.chain.chain.str());
}

} // namespace detail

/// All extensions of ord_p to Q[x]/(F).
inline ExtensionReport extensions(const RationalPoly& F, i64 p) {
    if (!is_prime(p)) throw DomainError(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    if (!F.is_monic()) throw DomainError(ErrorKind::NotMonic, "F = " + F.str() + " is not monic");
    if (!F.has_integer_coefficients()) throw DomainError(ErrorKind::NotIntegral, "F must have integer coefficients");
    if (F.degree() < 1) throw DomainError(ErrorKind::InvalidArgument, "F must have positive degree");
    if (!is_squarefree(F)) throw DomainError(ErrorKind::NotSquarefree, "F = " + F.str() + " is not squarefree");
    ExtensionReport rep;
    rep.F = F;
    rep.p = p;
    rep.leaves = detail::MacLaneSearch(F, p).run();
    std::sort(rep.leaves.begin(), rep.leaves.end(),
              [](const ExtensionLeaf& a, const ExtensionLeaf& b) { return detail::leaf_key(a) < detail::leaf_key(b); });
    for (const auto& l : rep.leaves) rep.sum_ef += l.e * l.f;
    MLV_ASSERT(rep.sum_ef == F.degree(), "Σ e f differs from deg F");
    return rep;
}

struct ExactChainResult {
    bool exact = false;
    MLVChain chain;                 // exact chain, or the approximant chain
    std::vector<i64> digit_seed;    // p-adic digits of the root when the leaf is linear over depth zero
};

inline ExactChainResult exact_chain(const ExtensionLeaf& leaf, const RationalPoly& F, unsigned digits = 8) {
    ExactChainResult r;
    r.chain = leaf.chain;
    r.exact = leaf.exact;
    if (r.exact) return r;
    const InductiveValuation& c = leaf.chain.chain;
    if (c.depth() == 0 && c.base().gamma.is_infinite()) {
        // ω_{b,∞}: the leaf pins a root of F congruent to b
        const i64 p = c.p();
        const Rational b = c.base().a;
        if (b == 0 || ord_p(b, p) >= 0) {
            Integer r0 = reduce_mod_pk(b, p, 1);
            Rational d0 = F.derivative()(Rational(r0));
            Integer root;
            if (d0 != 0 && ord_p(d0, p) == 0) root = hensel_root(F, p, r0.get_si(), digits);
            else root = reduce_mod_pk(b, p, digits);
            for (unsigned i = 0; i < digits; ++i) {
                Integer q = root % static_cast<long>(p);
                r.digit_seed.push_back(q.get_si());
                root /= static_cast<long>(p);
            }
        }
    }
    return r;
}

inline ChainInvariants leaf_invariants(const ExtensionLeaf& leaf) {
    ChainInvariants inv = invariants(leaf.chain);
    MLV_ASSERT(inv.e_total == leaf.e && inv.f_total == leaf.f, "leaf (e, f) disagrees with ∏e_n, ∏f_n");
    return inv;
}

} // namespace mlv
