#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "compress.hpp"
#include "valuation.hpp"

namespace mlv {

/// Root of F in Z_p lifted from a simple root r0 mod p, reduced mod p^k.
inline Integer hensel_root(const RationalPoly& F, i64 p, i64 r0, unsigned k) {
    if (!F.has_integer_coefficients()) throw DomainError(ErrorKind::NotIntegral, "Hensel lifting needs integer coefficients");
    Rational d0 = F.derivative()(Rational(static_cast<long>(r0)));
    if (d0 == 0 || ord_p(d0, p) != 0) throw DomainError(ErrorKind::InvalidArgument, "root is not simple mod p");
    if (F(Rational(static_cast<long>(r0))) == 0) return Integer(static_cast<long>(r0));
    if (ord_p(F(Rational(static_cast<long>(r0))), p) < 1) throw DomainError(ErrorKind::InvalidArgument, "r0 is not a root of F mod p");
    Integer r = static_cast<long>(detail::md(r0, p));
    Integer pk = static_cast<long>(p);
    for (unsigned i = 1; i < k; ++i) {
        pk *= static_cast<long>(p);
        // Newton step mod p^(i+1)
        Rational fr = F(Rational(r));
        Rational dr = F.derivative()(Rational(r));
        r = reduce_mod_pk(Rational(Rational(r) - fr / dr), p, i + 1);
    }
    return r;
}

/// Digit family of θ: χ_i = x − a_i, β_i = i, a_i = θ mod p^i, over ω_{0,0}.
inline ContinuousFamily digit_family(i64 p, const Rational& theta) {
    if (theta != 0 && ord_p(theta, p) < 0) throw DomainError(ErrorKind::NotIntegral, "θ = " + theta.get_str() + " is not p-integral");
    auto stream = [p, theta](std::size_t i) {
        Integer a = reduce_mod_pk(theta, p, static_cast<unsigned>(i));
        return std::make_pair(RationalPoly::linear(Rational(a)), Value(static_cast<long>(i)));
    };
    return ContinuousFamily(InductiveValuation::gauss(p), stream, FamilySpec{"digits", {{"theta", theta.get_str()}}, 0});
}

/// Digits c_0, c_1, ... from a callback (each in [0, p)).
inline ContinuousFamily digit_family(i64 p, std::function<i64(std::size_t)> digit, std::string label = "callback") {
    auto stream = [p, digit](std::size_t i) {
        Integer a = 0, pw = 1;
        for (std::size_t j = 0; j < i; ++j) {
            i64 c = digit(j);
            if (c < 0 || c >= p) throw DomainError(ErrorKind::InvalidArgument, "digit out of range");
            a += pw * static_cast<long>(c);
            pw *= static_cast<long>(p);
        }
        return std::make_pair(RationalPoly::linear(Rational(a)), Value(static_cast<long>(i)));
    };
    return ContinuousFamily(InductiveValuation::gauss(p), stream, FamilySpec{"custom", {{"label", std::move(label)}}, 0});
}

/// Digits of the p-adic root of F lifting the simple root r0 mod p.
inline ContinuousFamily hensel_family(i64 p, const RationalPoly& F, i64 r0) {
    hensel_root(F, p, r0, 1); // validates
    auto stream = [p, F, r0](std::size_t i) {
        Integer a = hensel_root(F, p, r0, static_cast<unsigned>(i));
        return std::make_pair(RationalPoly::linear(Rational(a)), Value(static_cast<long>(i)));
    };
    return ContinuousFamily(InductiveValuation::gauss(p), stream,
                            FamilySpec{"hensel", {{"poly", F.str()}, {"root", std::to_string(r0)}}, 0});
}

/// √D in Z_p; r0 defaults to the smallest square root of D mod p.
inline ContinuousFamily sqrt_family(i64 p, const Rational& D, std::optional<i64> r0 = std::nullopt) {
    RationalPoly F = RationalPoly(std::vector<Rational>{Rational(-D), 0, 1});
    if (!r0) {
        for (i64 r = 1; r < p; ++r)
            if (ord_p(F(Rational(static_cast<long>(r))), p) >= 1 || F(Rational(static_cast<long>(r))) == 0) {
                r0 = r;
                break;
            }
        if (!r0) throw DomainError(ErrorKind::InvalidArgument, D.get_str() + " has no square root mod " + std::to_string(p));
    }
    ContinuousFamily fam = hensel_family(p, F, *r0);
    return ContinuousFamily(fam.base(), [fam](std::size_t i) { return fam.member(i); },
                            FamilySpec{"sqrt", {{"of", D.get_str()}, {"root", std::to_string(*r0)}}, 0});
}

inline StabilityReport stable_value(const ContinuousFamily& fam, const RationalPoly& f, std::size_t budget) {
    if (budget < 2) throw DomainError(ErrorKind::InvalidArgument, "stability budget must be at least 2");
    return fam.stable_value(f, budget);
}

/// Evaluation of a chain whose steps may be limit augmentations, with a per-family budget.
inline Value limit_eval(const InductiveValuation& mu, const RationalPoly& f, std::size_t budget) {
    std::vector<AugStep> steps = mu.steps();
    for (auto& st : steps)
        if (st.kind == StepKind::Limit) st.family = std::make_shared<const ContinuousFamily>(st.family->with_budget(budget));
    try {
        return InductiveValuation(mu.p(), mu.base(), std::move(steps)).eval(f);
    } catch (const DomainError& e) {
        if (e.kind() == ErrorKind::UnstableCoefficient) throw DomainError(ErrorKind::BudgetExhausted, e.what());
        throw;
    }
}

struct Classification {
    enum class Kind { Inessential, EssentialWith, Undetermined } kind = Kind::Undetermined;
    RationalPoly poly; // witness or limit key
};

inline const char* to_string(Classification::Kind k) {
    switch (k) {
    case Classification::Kind::Inessential: return "inessential";
    case Classification::Kind::EssentialWith: return "essential";
    case Classification::Kind::Undetermined: return "undetermined";
    }
    return "?";
}

inline Classification classify(const ContinuousFamily& fam, const std::vector<RationalPoly>& candidates, std::size_t budget) {
    const long m = fam.stable_degree();
    long last_deg = -1;
    for (const auto& c : candidates) {
        if (c.degree() < last_deg) throw DomainError(ErrorKind::InvalidArgument, "candidates must be sorted by degree");
        last_deg = c.degree();
        if (!c.is_monic()) throw DomainError(ErrorKind::NotMonic, "candidate " + c.str() + " is not monic");
        if (c.degree() < m) continue; // always stable
        if (fam.stable_value(c, budget).stable) continue;
        if (c.degree() == m) return {Classification::Kind::Inessential, c};
        return {Classification::Kind::EssentialWith, c};
    }
    return {};
}

struct FamilyComparison {
    enum class Kind { Equivalent, Distinguished, Inconclusive } kind = Kind::Inconclusive;
    RationalPoly witness;
};

inline FamilyComparison family_equiv_budgeted(const ContinuousFamily& A, const ContinuousFamily& B,
                                              const std::vector<RationalPoly>& sample, std::size_t budget) {
    if (A.base().p() != B.base().p()) throw DomainError(ErrorKind::InvalidArgument, "families over different primes");
    bool all = true;
    for (const auto& f : sample) {
        auto a = A.stable_value(f, budget), b = B.stable_value(f, budget);
        if (a.stable && b.stable) {
            if (!(a.value == b.value)) return {FamilyComparison::Kind::Distinguished, f};
        } else {
            all = false;
        }
    }
    if (all && !sample.empty()) return {FamilyComparison::Kind::Equivalent, {}};
    return {};
}

} // namespace mlv
