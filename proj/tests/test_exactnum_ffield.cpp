#include <gtest/gtest.h>

#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace mlv;
using namespace mlvtest;

namespace {

Rational q(const char* s) { return parse_rational(s); }
RationalPoly P(const char* s) { return parse_poly(s); }

oracle::Coeffs coeffs(const RationalPoly& f) { return {f.coeffs().begin(), f.coeffs().end()}; }

oracle::Fp to_fp(const FqPoly& f) {
    oracle::Fp r;
    for (long i = 0; i <= f.degree(); ++i) r.push_back(f.coeff(i).rep()[0]);
    return r;
}

} // namespace

TEST(Rational, CanonicalAndParsed) {
    EXPECT_EQ(make_rational(Integer(4), Integer(-6)).get_str(), "-2/3");
    EXPECT_EQ(q("-10/4"), Rational(-5, 2));
    EXPECT_EQ(q("+7"), Rational(7));
    EXPECT_THROW(q("1/0"), ParseError);
    EXPECT_THROW(q("1.5"), ParseError);
    EXPECT_THROW(q(""), ParseError);
    EXPECT_EQ(ord_p(q("98/3"), 7), 2);
    EXPECT_EQ(ord_p(q("3/49"), 7), -2);
    EXPECT_EQ(residue_mod_p(q("1/6"), 7), 6);
}

TEST(Value, MinAndOrder) {
    EXPECT_EQ(value_min(Value(q("1/2")), Value::infinity()), Value(q("1/2")));
    EXPECT_TRUE(value_min(Value::infinity(), Value::infinity()).is_infinite());
    EXPECT_EQ(value_min(Value(q("2/3")), Value(q("3/4"))), Value(q("2/3")));
    EXPECT_TRUE(Value(q("1000")) < Value::infinity());
    EXPECT_TRUE((Value(1) + Value::infinity()).is_infinite());
    EXPECT_EQ(Value(q("1/3")) + Value(q("1/6")), Value(q("1/2")));
    EXPECT_EQ(parse_value("inf").str(), "inf");
}

TEST(ValueGroup, JoinExamples) {
    auto Z = ValueGroup::integers();
    EXPECT_EQ(group_join(Z, Value(q("1/2"))).generator(), q("1/2"));
    EXPECT_EQ(group_join(Z, Value::infinity()).generator(), 1);
    EXPECT_EQ(group_join(ValueGroup(q("1/2")), Value(q("1/3"))).generator(), q("1/6"));
}

TEST(ValueGroup, IndexExamples) {
    EXPECT_EQ(group_index(ValueGroup::integers(), ValueGroup(q("1/2"))), 2);
    EXPECT_EQ(group_index(ValueGroup::integers(), ValueGroup::integers()), 1);
    EXPECT_EQ(group_index(ValueGroup(q("1/2")), ValueGroup(q("1/6"))), 3);
    try {
        group_index(ValueGroup(q("1/2")), ValueGroup(q("1/3")));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotNested);
    }
}

// The joined generator must lie in both-generated lattice (Bezout) and divide both generators.
TEST(ValueGroup, JoinPropertiesRandom) {
    Rng g(11);
    for (int it = 0; it < 300; ++it) {
        ValueGroup G(random_gamma(g, 5, 6) + make_rational(Integer(1), Integer(uniform(g, 1, 6))));
        Rational c = random_gamma(g, 7, 6);
        ValueGroup J = group_join(G, Value(c));
        EXPECT_TRUE(J.contains(G.generator()));
        EXPECT_TRUE(J.contains(c));
        // J's generator is an integer combination of G's generator and c: the lattice they span
        Integer L = lcm(Integer(G.generator().get_den()), Integer(c.get_den()));
        Integer a = Integer(G.generator() * Rational(L)), b = Integer(c * Rational(L));
        Integer gg = gcd(a, b);
        EXPECT_EQ(J.generator(), make_rational(gg, L));
        // idempotent and order-independent
        EXPECT_EQ(group_join(J, Value(c)).generator(), J.generator());
        EXPECT_EQ(group_join(group_join(ValueGroup::integers(), Value(c)), Value(G.generator())).generator(),
                  group_join(group_join(ValueGroup::integers(), Value(G.generator())), Value(c)).generator());
        // index = order of c modulo G
        long order = 1;
        while (!G.contains(Rational(c * order))) ++order;
        EXPECT_EQ(group_index(G, J), order);
    }
}

TEST(Poly, ParseAndPrint) {
    EXPECT_EQ(P("x^2+2x+4"), poly_of_ints({4, 2, 1}));
    EXPECT_EQ(P("(x-3)^2+6(x-3)+7"), poly_of_ints({-2, 0, 1}));
    EXPECT_EQ(P("1/6*x").str(), "1/6*x");
    EXPECT_EQ(P("-x^2 - 11/6 x - 1").str(), "-x^2-11/6*x-1");
    EXPECT_EQ(P("7*(x^2-2)+x-3"), poly_of_ints({-17, 1, 7}));
    EXPECT_EQ(P("x/2"), RationalPoly(std::vector<Rational>{0, q("1/2")}));
    EXPECT_EQ(P("2^3"), RationalPoly(Rational(8)));
    EXPECT_EQ(P("0").str(), "0");
    EXPECT_THROW(P("x^"), ParseError);
    EXPECT_THROW(P("1/x"), ParseError);
    EXPECT_THROW(P("(x+1"), ParseError);
    EXPECT_THROW(P("y+1"), ParseError);
}

TEST(Poly, PrintParseRoundTrip) {
    Rng g(5);
    for (int it = 0; it < 200; ++it) {
        auto f = random_poly(g, 5, 7);
        EXPECT_EQ(parse_poly(f.str()), f) << f.str();
    }
}

TEST(PhiExpand, Examples) {
    auto a = phi_expand(P("x^3+2x+1"), P("x^2+1"));
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0], P("x+1"));
    EXPECT_EQ(a[1], P("x"));
    auto c = phi_expand(P("5"), P("x^2+1"));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], P("5"));
    auto id = phi_expand(P("x^2+1"), P("x^2+1"));
    ASSERT_EQ(id.size(), 2u);
    EXPECT_TRUE(id[0].is_zero());
    EXPECT_EQ(id[1], P("1"));
    try {
        phi_expand(P("x^3"), P("2x+1"));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotMonic);
    }
}

// f = Σ a_s φ^s checked with the schoolbook long-division oracle
TEST(PhiExpand, ReassemblyRandom) {
    Rng g(1);
    for (int it = 0; it < 300; ++it) {
        auto f = random_poly(g, 3, 12);
        auto phi = random_poly(g, 3, 6, true);
        auto a = phi_expand(f, phi);
        oracle::Coeffs acc, pw{1};
        for (const auto& as : a) {
            EXPECT_LT(as.degree(), phi.degree());
            auto term = oracle::mul(coeffs(as), pw);
            if (acc.size() < term.size()) acc.resize(term.size(), 0);
            for (std::size_t i = 0; i < term.size(); ++i) acc[i] += term[i];
            pw = oracle::mul(pw, coeffs(phi));
        }
        oracle::trim(acc);
        EXPECT_EQ(acc, coeffs(f));
        EXPECT_EQ(phi_assemble(a, phi), f);
        // lowest coefficient is the remainder of the division oracle
        auto [qq, r] = oracle::divide(coeffs(f), coeffs(phi));
        EXPECT_EQ(r, coeffs(a.empty() ? RationalPoly() : a[0]));
    }
}

TEST(Poly, DivmodGcdSquarefree) {
    Rng g(3);
    for (int it = 0; it < 100; ++it) {
        auto f = random_poly(g, 5, 8), h = random_nonzero_poly(g, 5, 4);
        auto [qq, r] = divmod(f, h);
        EXPECT_EQ(qq * h + r, f);
        EXPECT_LT(r.degree(), h.degree());
    }
    EXPECT_EQ(gcd(P("x^2-1"), P("x^2+2x+1")), P("x+1"));
    EXPECT_TRUE(is_squarefree(P("x^2+1")));
    EXPECT_FALSE(is_squarefree(P("x^2")));
    EXPECT_FALSE(is_squarefree(P("(x^2-2)^2*(x+1)")));
}

// ---------------- ffield ----------------

TEST(FqFactor, Examples) {
    auto F5 = prime_field(5);
    auto f = fq_factor(FqPoly::from_ints(F5, {1, 0, 1}));
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].first, FqPoly::from_ints(F5, {2, 1}));
    EXPECT_EQ(f[1].first, FqPoly::from_ints(F5, {3, 1}));
    EXPECT_EQ(f[0].second, 1);
    auto F2 = prime_field(2);
    auto g2 = fq_factor(FqPoly::from_ints(F2, {1, 1, 1}));
    ASSERT_EQ(g2.size(), 1u);
    EXPECT_EQ(g2[0].second, 1);
    auto sq = fq_factor(FqPoly::from_ints(F2, {1, 0, 1}));
    ASSERT_EQ(sq.size(), 1u);
    EXPECT_EQ(sq[0].first, FqPoly::from_ints(F2, {1, 1}));
    EXPECT_EQ(sq[0].second, 2);
    try {
        fq_factor(FqPoly(F5, {}));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroPolynomial);
    }
}

// Remultiplication, irreducibility of each factor (trial-division oracle), canonical order.
TEST(FqFactor, RemultipliesRandom) {
    Rng g(7);
    const i64 ps[] = {2, 3, 5, 7, 13};
    for (int it = 0; it < 500; ++it) {
        i64 p = ps[it % 5];
        auto F = prime_field(p);
        long d = uniform(g, 1, 8);
        std::vector<i64> cs(d + 1);
        for (auto& c : cs) c = uniform(g, 0, p - 1);
        if (cs[d] == 0) cs[d] = 1;
        auto f = FqPoly::from_ints(F, cs);
        auto fac = fq_factor(f, static_cast<std::uint64_t>(it));
        FqPoly prod = FqPoly::constant(f.leading());
        for (std::size_t i = 0; i < fac.size(); ++i) {
            const auto& [h, k] = fac[i];
            EXPECT_TRUE(h.is_monic());
            EXPECT_TRUE(oracle::irreducible_by_trial(to_fp(h), p)) << h.str();
            for (long j = 0; j < k; ++j) prod = prod * h;
            if (i) EXPECT_TRUE(fac[i - 1].first < h);
        }
        EXPECT_EQ(prod, f);
    }
}

TEST(FqFactor, SeedIndependentOutput) {
    auto F = prime_field(3);
    auto f = FqPoly::from_ints(F, {2, 0, 1, 1, 0, 2, 1, 0, 1});
    auto base = fq_factor(f, 0);
    for (std::uint64_t s = 1; s < 20; ++s) EXPECT_EQ(fq_factor(f, s), base);
}

TEST(FqIrreducible, Examples) {
    EXPECT_TRUE(fq_is_irreducible(FqPoly::from_ints(prime_field(7), {1, 0, 1})));
    EXPECT_FALSE(fq_is_irreducible(FqPoly::from_ints(prime_field(5), {1, 0, 1})));
    for (i64 p : {2, 3, 5}) EXPECT_TRUE(fq_is_irreducible(FqPoly::y(prime_field(p))));
}

// Exhaustive agreement with trial division for every monic polynomial of degree ≤ 4, p ≤ 7.
TEST(FqIrreducible, ExhaustiveOracle) {
    for (long p : {2L, 3L, 5L, 7L}) {
        auto F = prime_field(p);
        for (long d = 1; d <= (p == 7 ? 3 : 4); ++d)
            for (const auto& m : oracle::monics(d, p)) {
                std::vector<i64> cs(m.begin(), m.end());
                EXPECT_EQ(fq_is_irreducible(FqPoly::from_ints(F, cs)), oracle::irreducible_by_trial(m, p));
            }
    }
    // p = 7, degree 4: a sample
    Rng g(9);
    auto F7 = prime_field(7);
    for (int it = 0; it < 300; ++it) {
        oracle::Fp m(5);
        for (int i = 0; i < 4; ++i) m[i] = uniform(g, 0, 6);
        m[4] = 1;
        EXPECT_EQ(fq_is_irreducible(FqPoly::from_ints(F7, std::vector<i64>(m.begin(), m.end()))), oracle::irreducible_by_trial(m, 7));
    }
}

TEST(FqRoots, MatchExhaustiveSearch) {
    Rng g(4);
    for (int it = 0; it < 200; ++it) {
        long p = random_prime(g, {2, 3, 5, 7, 11, 13});
        auto F = prime_field(p);
        oracle::Fp m(uniform(g, 2, 6), 0);
        for (auto& c : m) c = uniform(g, 0, p - 1);
        m.back() = 1;
        auto r = fq_roots(FqPoly::from_ints(F, std::vector<i64>(m.begin(), m.end())));
        std::vector<long> got;
        for (auto& e : r) got.push_back(e.rep()[0]);
        std::sort(got.begin(), got.end());
        EXPECT_EQ(got, oracle::roots(m, p));
    }
}

TEST(ExtendField, Examples) {
    auto F2 = prime_field(2);
    auto e4 = extend_field(F2, FqPoly::from_ints(F2, {1, 1, 1}));
    EXPECT_EQ(e4.field->k(), 2);
    auto z = e4.root;
    EXPECT_TRUE((z * z + z + FqElem::one(e4.field)).is_zero());

    auto F7 = prime_field(7);
    auto e7 = extend_field(F7, FqPoly::from_ints(F7, {-1, 1}));
    EXPECT_EQ(e7.field->k(), 1);
    EXPECT_EQ(e7.root, FqElem::from_int(F7, 1));

    // 𝔽4 then an irreducible quadratic over 𝔽4: y^2 + y + t
    auto F4 = e4.field;
    FqPoly psi(F4, {FqElem::gen(F4), FqElem::one(F4), FqElem::one(F4)});
    ASSERT_TRUE(fq_is_irreducible(psi));
    auto e16 = extend_field(F4, psi);
    EXPECT_EQ(e16.field->k(), 4);
    EXPECT_TRUE(e16.embedding(psi)(e16.root).is_zero());
    // embedding is a ring map on random elements
    Rng g(2);
    for (int it = 0; it < 50; ++it) {
        auto a = random_elem(g, F4), b = random_elem(g, F4);
        EXPECT_EQ(e16.embedding(a * b), e16.embedding(a) * e16.embedding(b));
        EXPECT_EQ(e16.embedding(a + b), e16.embedding(a) + e16.embedding(b));
    }
    try {
        extend_field(F2, FqPoly::from_ints(F2, {1, 0, 1}));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotIrreducible);
    }
}

TEST(ExtendField, RootOfPsiRandom) {
    Rng g(13);
    for (int it = 0; it < 60; ++it) {
        long p = random_prime(g, {2, 3, 5});
        auto base = prime_field(p);
        if (coin(g)) base = extend_field(base, random_irreducible(g, base, 2)).field;
        auto psi = random_irreducible(g, base, 3);
        auto ext = extend_field(base, psi);
        EXPECT_EQ(ext.field->k(), base->k() * psi.degree());
        EXPECT_TRUE(ext.embedding(psi)(ext.root).is_zero());
        EXPECT_TRUE(fq_is_irreducible(FqPoly::from_ints(prime_field(p), ext.field->modulus)));
    }
}

TEST(FqElem, FieldAxiomsSample) {
    Rng g(21);
    auto F = make_field(3, {1, 2, 0, 1}); // y^3 + 2y + 1
    for (int it = 0; it < 100; ++it) {
        auto a = random_elem(g, F), b = random_elem(g, F), c = random_elem(g, F);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), FqElem::one(F));
        EXPECT_EQ(a.pow(Integer(27)), a); // Frobenius of order 3
    }
}
