#pragma once

#include <memory>

#include "valuation.hpp"

namespace mlv {

namespace detail {
// same-degree ordinary step (φ', γ') applied on top of `out`: replaces the last building pair
inline InductiveValuation replace_top(const InductiveValuation& out, const RationalPoly& phi, const Value& gamma) {
    if (out.depth() == 0) {
        MLV_ASSERT(phi.degree() == 1, "depth-zero replacement needs a linear key");
        return InductiveValuation(out.p(), DepthZero{Rational(-phi.coeff(0)), gamma});
    }
    auto steps = out.steps();
    steps.back().phi = phi;
    steps.back().gamma = gamma;
    return InductiveValuation(out.p(), out.base(), std::move(steps));
}

inline InductiveValuation push_ordinary(const InductiveValuation& out, const RationalPoly& phi, const Value& gamma) {
    if (phi.degree() == out.deg()) return replace_top(out, phi, gamma);
    MLV_ASSERT(phi.degree() > out.deg(), "augmentation key of smaller degree");
    return out.augment(phi, gamma);
}
} // namespace detail

/// Rewrites a legal augmentation chain into MLV form defining the same valuation.
inline InductiveValuation compress(const InductiveValuation& chain) {
    InductiveValuation out(chain.p(), chain.base());
    for (const AugStep& st : chain.steps()) {
        if (st.kind == StepKind::Ordinary) {
            out = detail::push_ordinary(out, st.phi, st.gamma);
            continue;
        }
        ContinuousFamily fam = st.family->rebased(out);
        std::size_t guard = 0;
        for (;;) {
            const auto& [chi, beta] = fam.member(1);
            bool absorb = chi.degree() > out.deg() || (chi.degree() == out.deg() && equiv(out, chi, out.last_key()));
            if (!absorb) break;
            if (++guard > fam.default_budget())
                throw DomainError(ErrorKind::BudgetExhausted, "family members stay equivalent to the last key");
            out = detail::push_ordinary(out, chi, beta);
            fam = fam.shifted(1).rebased(out);
        }
        out = out.augment(AugStep::limit(std::make_shared<const ContinuousFamily>(fam), st.phi, st.gamma));
    }
    return out;
}

} // namespace mlv
