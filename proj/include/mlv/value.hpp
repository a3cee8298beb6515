#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>

#include "rational.hpp"

namespace mlv {

/// An element of Q ∪ {∞}, totally ordered with ∞ maximal.
class Value {
public:
    Value() : finite_(false) {}
    Value(const Rational& q) : finite_(true), q_(q) {} // NOLINT: implicit by design of the value semigroup
    Value(long n) : finite_(true), q_(n) {}            // NOLINT

    static Value infinity() { return Value(); }

    bool is_infinite() const { return !finite_; }
    bool is_finite() const { return finite_; }

    const Rational& rational() const {
        MLV_ASSERT(finite_, "rational() of infinite value");
        return q_;
    }

    friend Value operator+(const Value& a, const Value& b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return Value(Rational(a.q_ + b.q_));
    }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.q_ == b.q_;
    }

    friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
        if (!a.finite_ && !b.finite_) return std::strong_ordering::equal;
        if (!a.finite_) return std::strong_ordering::greater;
        if (!b.finite_) return std::strong_ordering::less;
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string str() const { return finite_ ? q_.get_str() : "inf"; }

    friend std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.str(); }

private:
    bool finite_;
    Rational q_;
};

inline Value value_min(const Value& a, const Value& b) { return b < a ? b : a; }

inline Value parse_value(const std::string& s) {
    if (s == "inf" || s == "oo" || s == "infinity") return Value::infinity();
    return Value(parse_rational(s));
}

inline Rational rational_gcd(const Rational& a, const Rational& b) {
    // gcd(a/b, c/d) = gcd(a, c) / lcm(b, d) for reduced fractions.
    Integer num, den;
    mpz_gcd(num.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
    mpz_lcm(den.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    return make_rational(num, den);
}

/// A subgroup g·Z of Q with g > 0. Every finitely generated subgroup of Q is of this form.
class ValueGroup {
public:
    ValueGroup() : gen_(1) {}
    explicit ValueGroup(const Rational& generator) : gen_(abs(generator)) {
        if (gen_ == 0) throw DomainError(ErrorKind::InvalidArgument, "value group generator must be nonzero");
    }

    static ValueGroup integers() { return ValueGroup(); }

    const Rational& generator() const { return gen_; }

    bool contains(const Rational& q) const { return is_integer(Rational(q / gen_)); }
    bool contains(const Value& v) const { return v.is_finite() && contains(v.rational()); }

    /// G ⊆ H.
    bool subgroup_of(const ValueGroup& h) const { return h.contains(gen_); }

    friend bool operator==(const ValueGroup& a, const ValueGroup& b) { return a.gen_ == b.gen_; }

    std::string str() const { return "(" + gen_.get_str() + ")Z"; }

private:
    Rational gen_;
};

/// ⟨G, γ⟩; an infinite γ contributes nothing.
inline ValueGroup group_join(const ValueGroup& g, const Value& gamma) {
    if (gamma.is_infinite() || gamma.rational() == 0) return g;
    return ValueGroup(rational_gcd(g.generator(), abs(gamma.rational())));
}

/// (outer : inner) for inner ⊆ outer.
inline std::int64_t group_index(const ValueGroup& inner, const ValueGroup& outer) {
    if (!inner.subgroup_of(outer))
        throw DomainError(ErrorKind::NotNested, inner.str() + " is not contained in " + outer.str());
    Rational r = inner.generator() / outer.generator();
    return r.get_num().get_si();
}

} // namespace mlv
