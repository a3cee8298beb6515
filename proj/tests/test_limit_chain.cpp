#include <gtest/gtest.h>

#include "support/gen.hpp"

using namespace mlv;
using namespace mlvtest;

namespace {

Rational q(const char* s) { return parse_rational(s); }
RationalPoly P(const char* s) { return parse_poly(s); }
Value V(const char* s) { return parse_value(s); }
InductiveValuation w(i64 p, const char* a, const char* g) { return InductiveValuation::depth_zero(p, q(a), V(g)); }

FamilyPtr sqrt2() { return std::make_shared<const ContinuousFamily>(sqrt_family(7, 2)); }

// ω_{0,0} → limit(√2-family, x²−2 ↦ γ) over p = 7
InductiveValuation sqrt2_chain(const char* gamma = "inf") {
    return InductiveValuation(7, DepthZero{0, Value(0)}, {AugStep::limit(sqrt2(), P("x^2-2"), V(gamma))});
}

InductiveValuation x2m7_chain() { return w(7, "0", "1/2").augment(P("x^2-7"), Value::infinity()); }
InductiveValuation x2x1_chain() { return w(2, "0", "0").augment(P("x^2+x+1"), Value::infinity()); }

} // namespace

// ---------------- limitfam ----------------

TEST(Family, SqrtDigits) {
    auto fam = sqrt_family(7, 2);
    EXPECT_EQ(fam.member(1).first, P("x-3"));
    EXPECT_EQ(fam.member(2).first, P("x-10"));
    EXPECT_EQ(fam.member(3).first, P("x-108"));
    EXPECT_EQ(fam.member(3).second, V("3"));
    for (std::size_t i = 1; i <= 10; ++i) {
        Rational a = -fam.member(i).first.coeff(0);
        EXPECT_GE(ord_p(a * a - 2, 7), static_cast<i64>(i));
    }
}

TEST(HenselRoot, MatchesPolynomial) {
    Rng g(3);
    int done = 0;
    while (done < 60) {
        i64 p = random_prime(g, {3, 5, 7, 11, 13});
        auto F = random_poly(g, 1, 4, true); // integer coefficients (p = 1 scaling disabled)
        std::vector<Rational> cs = F.coeffs();
        for (auto& c : cs) c = Rational(uniform(g, -20, 20));
        cs.back() = 1;
        F = RationalPoly(cs);
        for (i64 r = 0; r < p; ++r) {
            Rational fr = F(Rational(static_cast<long>(r))), dr = F.derivative()(Rational(static_cast<long>(r)));
            if ((fr == 0 || ord_p(fr, p) >= 1) && dr != 0 && ord_p(dr, p) == 0) {
                Integer root = hensel_root(F, p, r, 8);
                Rational v = F(Rational(root));
                EXPECT_TRUE(v == 0 || ord_p(v, p) >= 8);
                EXPECT_EQ(mod_p(root, p), r);
                ++done;
                break;
            }
        }
    }
}

TEST(Family, DigitFamilyRejectsNonIntegral) {
    try {
        digit_family(7, q("1/7"));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotIntegral);
    }
}

TEST(StableValue, Examples) {
    auto fam = sqrt_family(7, 2);
    auto rx = stable_value(fam, P("x"), 48);
    EXPECT_TRUE(rx.stable);
    EXPECT_EQ(rx.value, V("0"));
    EXPECT_EQ(rx.index, 1u);

    auto r3 = stable_value(fam, P("x-3"), 48);
    EXPECT_TRUE(r3.stable);
    EXPECT_EQ(r3.value, V("1"));
    EXPECT_EQ(fam.rho_eval(r3.index, P("x-3")), fam.rho_eval(r3.index + 1, P("x-3")));

    auto ru = stable_value(fam, P("x^2-2"), 12);
    EXPECT_FALSE(ru.stable);
    ASSERT_EQ(ru.values.size(), 12u);
    for (std::size_t i = 0; i < ru.values.size(); ++i) EXPECT_EQ(ru.values[i], Value(static_cast<long>(i + 1)));

    EXPECT_THROW(stable_value(fam, P("x"), 1), DomainError);
}

// unstable values grow strictly; any consecutive repeat is reported as stability
TEST(StableValue, MonotoneGrowth) {
    auto sixth = digit_family(7, q("-1/6"));
    auto r = stable_value(sixth, P("x+1/6"), 20);
    EXPECT_FALSE(r.stable);
    for (std::size_t i = 1; i < r.values.size(); ++i) EXPECT_LT(r.values[i - 1], r.values[i]);
    Rng g(5);
    auto fam = sqrt_family(7, 2);
    for (int it = 0; it < 40; ++it) {
        auto f = random_nonzero_poly(g, 7, 3);
        auto rep = stable_value(fam, f, 30);
        if (rep.stable) {
            EXPECT_EQ(fam.rho_eval(rep.index, f), rep.value);
            EXPECT_EQ(fam.rho_eval(rep.index + 1, f), rep.value);
        } else {
            for (std::size_t i = 1; i < rep.values.size(); ++i) EXPECT_LT(rep.values[i - 1], rep.values[i]);
        }
    }
}

TEST(LimitEval, Examples) {
    auto mu = sqrt2_chain();
    EXPECT_EQ(limit_eval(mu, P("x-3"), 48), V("1"));
    EXPECT_TRUE(limit_eval(mu, P("x^2-2"), 48).is_infinite());
    EXPECT_EQ(limit_eval(mu, P("7*(x^2-2)+(x-3)"), 48), V("1"));
}

TEST(LimitEval, BudgetExhausted) {
    auto fam = sqrt_family(7, 2);
    RationalPoly f = fam.member(6).first; // agrees with √2 to six digits
    try {
        limit_eval(sqrt2_chain(), f, 3);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExhausted);
    }
    EXPECT_EQ(limit_eval(sqrt2_chain(), f, 48), V("6"));
}

// multiplicativity and ρ_i ≤ μ' on samples, for γ = ∞ and a finite γ above the computed ρ_i(φ)
TEST(LimitEval, ValuationAndDominance) {
    Rng g(7);
    auto fam = sqrt_family(7, 2);
    for (const char* gamma : {"inf", "100"}) {
        auto mu = sqrt2_chain(gamma);
        validate(mu);
        for (int it = 0; it < 40; ++it) {
            auto f = random_nonzero_poly(g, 7, 3), h = random_nonzero_poly(g, 7, 3);
            EXPECT_EQ(limit_eval(mu, f * h, 48), limit_eval(mu, f, 48) + limit_eval(mu, h, 48));
            Value v = limit_eval(mu, f, 48);
            for (std::size_t i = 1; i <= 6; ++i) EXPECT_FALSE(v < fam.rho_eval(i, f));
        }
    }
}

TEST(Classify, Examples) {
    auto ines = classify(digit_family(7, q("-1/6")), {P("x+1/6")}, 48);
    EXPECT_EQ(ines.kind, Classification::Kind::Inessential);
    EXPECT_EQ(ines.poly, P("x+1/6"));
    EXPECT_EQ(ines.poly.str(), "x+1/6");

    auto fam = sqrt_family(7, 2);
    auto ess = classify(fam, {P("x"), P("x-3"), P("x-1"), P("x^2-2")}, 48);
    EXPECT_EQ(ess.kind, Classification::Kind::EssentialWith);
    EXPECT_EQ(ess.poly, P("x^2-2"));
    EXPECT_GT(ess.poly.degree(), fam.stable_degree());

    // digits 1,2,1,1,2,1,1,1,2,... (a 2 at every triangular index): not eventually periodic
    auto pattern = digit_family(7, [](std::size_t i) -> i64 {
        std::size_t t = 0, k = 0;
        while (t < i) t += ++k;
        return t == i ? 2 : 1;
    });
    auto und = classify(pattern, {P("x"), P("x-1"), P("x+1/6"), P("x^2-2"), P("x^2+x+1"), P("x^3-2")}, 48);
    EXPECT_EQ(und.kind, Classification::Kind::Undetermined);
}

TEST(FamilyEquiv, Examples) {
    auto fam = sqrt_family(7, 2);
    std::vector<RationalPoly> sample{P("x"), P("x-3"), P("x-10"), P("x+4"), P("x^2"), P("x-1")};
    EXPECT_EQ(family_equiv_budgeted(fam, fam.shifted(1), sample, 48).kind, FamilyComparison::Kind::Equivalent);
    auto neg = sqrt_family(7, 2, 4);
    auto d = family_equiv_budgeted(fam, neg, {P("x"), P("x-3")}, 48);
    EXPECT_EQ(d.kind, FamilyComparison::Kind::Distinguished);
    EXPECT_EQ(d.witness, P("x-3"));
    EXPECT_EQ(family_equiv_budgeted(fam, neg, {P("x^2-2")}, 2).kind, FamilyComparison::Kind::Inconclusive);
}

// ---------------- chain ----------------

TEST(Validate, Examples) {
    auto c = validate(w(7, "0", "1/2").augment(P("x^2-7"), Value::infinity()));
    ASSERT_EQ(c.phi_deg.size(), 1u);
    EXPECT_EQ(c.phi_deg[0], 2);

    try {
        validate(w(7, "0", "0").augment(P("x-3"), V("1")).augment(P("x-10"), V("2")));
        FAIL();
    } catch (const MLVViolationError& e) {
        EXPECT_EQ(e.step(), 1u); // already x−3 repeats the degree of x
    }
    try {
        validate(w(7, "0", "0").augment(P("x^2-3"), V("1")).augment(P("x^2-10"), V("2")));
        FAIL();
    } catch (const MLVViolationError& e) {
        EXPECT_EQ(e.step(), 2u);
    }

    auto lc = validate(sqrt2_chain());
    ASSERT_EQ(lc.phi_rep.size(), 1u);
    EXPECT_EQ(lc.phi_rep[0], P("x-3"));
    EXPECT_FALSE(equiv(w(7, "0", "0"), P("x"), P("x-3")));
}

TEST(Validate, Violations) {
    auto expect_violation = [](const InductiveValuation& mu, std::size_t step) {
        try {
            validate(mu);
            ADD_FAILURE() << mu.str();
        } catch (const MLVViolationError& e) {
            EXPECT_EQ(e.step(), step) << e.what();
        }
    };
    expect_violation(w(7, "0", "1/2").augment(P("x^2-7"), V("1/2")), 1);         // γ does not increase
    expect_violation(w(5, "0", "0").augment(P("x^2+1"), V("3")), 1);             // not a key
    expect_violation(w(7, "0", "inf").augment(P("x^2-7"), V("3")), 1);          // ∞ before the end
    expect_violation(w(7, "0", "1/2").augment(P("x^2-7"), V("1")), 1);          // γ not above μ(φ)
    expect_violation(InductiveValuation(7, DepthZero{0, Value(0)}, {AugStep::limit(sqrt2(), P("x^2-2"), V("5"))}), 1); // γ below ρ_i(φ)
    expect_violation(InductiveValuation(7, DepthZero{0, Value(0)}, {AugStep::limit(sqrt2(), P("x^2-3"), V("inf"))}), 1); // φ stable
    expect_violation(InductiveValuation(7, DepthZero{3, Value(0)}, {AugStep::limit(sqrt2(), P("x^2-2"), V("inf"))}), 1); // base mismatch
}

TEST(Compress, Examples) {
    auto a = compress(w(2, "0", "0").augment(P("x"), V("1/2")));
    EXPECT_EQ(a.str(), w(2, "0", "1/2").str());

    auto raw = w(7, "0", "0").augment(P("x-3"), V("1")).augment(P("x-10"), V("2")).augment(P("x^2-2"), Value::infinity());
    auto c = compress(raw);
    EXPECT_EQ(c.str(), "[p=7; w(10,2) -> (x^2-2,inf)]");
    Rng g(11);
    for (int it = 0; it < 100; ++it) {
        auto f = random_nonzero_poly(g, 7, 10);
        EXPECT_EQ(raw.eval(f), c.eval(f));
    }

    auto mlv = x2m7_chain();
    EXPECT_EQ(compress(mlv).str(), mlv.str());
}

// same-degree ordinary step before a limit step: the family is carried over to the compressed prefix
TEST(Compress, LimitAfterSameDegreeStep) {
    auto mu1 = w(7, "0", "0").augment(P("x-3"), V("1"));
    auto fam = std::make_shared<const ContinuousFamily>(sqrt_family(7, 2).shifted(1).rebased(mu1));
    InductiveValuation raw(7, mu1.base(), {mu1.steps()[0], AugStep::limit(fam, P("x^2-2"), Value::infinity())});
    auto c = compress(raw);
    EXPECT_EQ(c.str(), "[p=7; w(3,1) =lim=> (x^2-2,inf)]");
    auto v = validate(c);
    auto inv = invariants(v);
    EXPECT_EQ(inv.d[0], 2);
    Rng g(13);
    for (int it = 0; it < 60; ++it) {
        auto f = random_nonzero_poly(g, 7, 5);
        EXPECT_EQ(raw.eval(f), c.eval(f));
    }
}

// a family whose first members are equivalent to the last key gets absorbed member by member
TEST(Compress, AbsorbsEquivalentMembers) {
    auto base = w(7, "3", "1");
    auto fam = std::make_shared<const ContinuousFamily>(sqrt_family(7, 2).rebased(base));
    // χ_1 = x−3 is the key of ω_{3,1} itself
    InductiveValuation raw(7, base.base(), {AugStep::limit(fam, P("x^2-2"), Value::infinity())});
    auto c = compress(raw);
    EXPECT_EQ(c.base().a, 3);
    EXPECT_EQ(c.steps().size(), 1u);
    EXPECT_NO_THROW(validate(c));
}

TEST(Compress, PreservesEvalRandom) {
    Rng g(17);
    for (int c = 0; c < 60; ++c) {
        i64 p = random_prime(g);
        auto raw = random_chain(g, p);
        auto cc = compress(raw);
        EXPECT_NO_THROW(validate(cc)) << raw.str();
        EXPECT_EQ(compress(cc).str(), cc.str());
        for (int it = 0; it < 100; ++it) {
            auto f = random_nonzero_poly(g, p, 10);
            ASSERT_EQ(raw.eval(f), cc.eval(f)) << raw.str() << " f=" << f.str();
        }
    }
}

TEST(Invariants, Examples) {
    auto i1 = invariants(validate(x2m7_chain()));
    ASSERT_EQ(i1.nodes.size(), 2u);
    EXPECT_EQ(i1.nodes[0].m, 1);
    EXPECT_EQ(i1.nodes[1].m, 2);
    EXPECT_EQ(i1.e, std::vector<i64>{2});
    EXPECT_EQ(i1.f, std::vector<i64>{1});
    EXPECT_EQ(i1.d[0], 1);
    EXPECT_EQ(i1.e_total * i1.f_total, 2);

    auto i2 = invariants(validate(x2x1_chain()));
    EXPECT_EQ(i2.e, std::vector<i64>{1});
    EXPECT_EQ(i2.f, std::vector<i64>{2});
    EXPECT_EQ(i2.d[0], 1);
    EXPECT_EQ(i2.nodes[1].kappa.k(), 2);

    auto i3 = invariants(validate(sqrt2_chain()));
    EXPECT_EQ(i3.nodes[1].m, 2);
    EXPECT_EQ(i3.e, std::vector<i64>{1});
    EXPECT_EQ(i3.f, std::vector<i64>{1});
    EXPECT_EQ(i3.d[0], 2);
}

TEST(Invariants, DegreeIdentityRandom) {
    Rng g(19);
    const auto before = degree_identity_stats().checks.load();
    for (int c = 0; c < 60; ++c) {
        i64 p = random_prime(g);
        auto mu = random_mlv_chain(g, p);
        if (coin(g)) {
            auto ctx = residual_context(mu);
            mu = mu.augment(ctx.lift_psi(random_irreducible(g, ctx.kappa(), 2)), Value::infinity());
            mu = compress(mu);
        }
        auto inv = invariants(validate(mu));
        for (std::size_t n = 0; n + 1 < inv.nodes.size(); ++n)
            EXPECT_EQ(Rational(inv.e[n] * inv.f[n] * inv.nodes[n].m) * inv.d[n], inv.nodes[n + 1].m);
        // κ tower: [κ_r : F_p] = ∏ f_n
        EXPECT_EQ(inv.nodes.back().kappa.k(), inv.f_total);
        if (mu.last_gamma().is_infinite()) {
            auto led = defect_ledger(validate(mu));
            EXPECT_EQ(Rational(led.e * led.f) * led.d, mu.deg());
        }
        // relation degrees e_n γ_n ∈ Γ_{n−1} are asserted while building the presentation
        auto gp = graded_presentation(validate(mu));
        EXPECT_EQ(gp.generators.size(), mu.depth());
        EXPECT_EQ(gp.transcendental.has_value(), mu.last_gamma().is_finite());
    }
    EXPECT_GT(degree_identity_stats().checks.load(), before);
    EXPECT_EQ(degree_identity_stats().violations.load(), 0u);
}

TEST(DefectLedger, Examples) {
    auto l1 = defect_ledger(validate(x2m7_chain()));
    EXPECT_EQ(l1.e, 2);
    EXPECT_EQ(l1.f, 1);
    EXPECT_EQ(l1.d, 1);
    auto l2 = defect_ledger(validate(x2x1_chain()));
    EXPECT_EQ(l2.e, 1);
    EXPECT_EQ(l2.f, 2);
    auto l3 = defect_ledger(validate(sqrt2_chain()));
    EXPECT_EQ(l3.e, 1);
    EXPECT_EQ(l3.f, 1);
    EXPECT_EQ(l3.d, 2);
    try {
        defect_ledger(validate(w(7, "0", "1/2")));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SupportRequired);
    }
}

TEST(Graded, Examples) {
    auto g1 = graded_presentation(validate(x2m7_chain()));
    ASSERT_EQ(g1.generators.size(), 1u);
    EXPECT_EQ(g1.kappa_tower, std::vector<std::string>{"y-1"});
    EXPECT_EQ(g1.generators[0].degree, V("1/2"));
    EXPECT_EQ(g1.generators[0].relation, "x0^2 = u0*z0");
    EXPECT_EQ(g1.generators[0].normalizer, "u0 = 7");
    EXPECT_FALSE(g1.transcendental);

    auto g2 = graded_presentation(validate(x2x1_chain()));
    EXPECT_EQ(g2.kappa_tower, std::vector<std::string>{"y^2+y+1"});
    EXPECT_EQ(g2.generators[0].relation, "x0 = u0*z0");
    EXPECT_EQ(g2.generators[0].degree, V("0"));

    auto g3 = graded_presentation(validate(w(2, "0", "1/3")));
    EXPECT_TRUE(g3.generators.empty());
    ASSERT_TRUE(g3.transcendental);
    EXPECT_EQ(g3.transcendental->name, "q0");
    EXPECT_EQ(g3.transcendental->degree, V("1/3"));
}

TEST(Graded, NormalizerMentionsEarlierGenerators) {
    // [ω_{0,1/2}; x²−7 ↦ 3/2]: e_1 = 2 needs u_1 with value 3 = 2·(3/2), e.g. 7·x0^2... built greedily
    auto mu = w(7, "0", "1/2").augment(P("x^2-7"), V("5/4"));
    auto gp = graded_presentation(validate(mu.augment(lift(mu, FqPoly::from_ints(prime_field(7), {-1, 1})), Value::infinity())));
    ASSERT_EQ(gp.generators.size(), 2u);
    EXPECT_EQ(gp.generators[1].e, 2);
    EXPECT_EQ(gp.generators[1].relation, "x1^2 = u1*z1");
    EXPECT_NE(gp.generators[1].normalizer.find("x0"), std::string::npos) << gp.generators[1].normalizer;
}

// Two chains differing by an equivalent key: [ω_{0,1/2}; x²−7 ↦ 2] and [ω_{0,1/2}; x²+42 ↦ 2]
TEST(Unicity, EquivalentKeys) {
    auto a = w(7, "0", "1/2").augment(P("x^2-7"), V("2"));
    auto b = w(7, "0", "1/2").augment(P("x^2+42"), V("2"));
    EXPECT_TRUE(equals(a, b).equal);
    auto ia = invariants(validate(a)), ib = invariants(validate(b));
    EXPECT_EQ(ia.e, ib.e);
    EXPECT_EQ(ia.f, ib.f);
    // above γ = 2 the keys are no longer interchangeable
    auto c = w(7, "0", "1/2").augment(P("x^2-7"), V("3"));
    auto d = w(7, "0", "1/2").augment(P("x^2+42"), V("3"));
    auto r = equals(c, d);
    EXPECT_FALSE(r.equal);
    ASSERT_TRUE(r.witness);
    EXPECT_NE(c.eval(*r.witness), d.eval(*r.witness));
}
