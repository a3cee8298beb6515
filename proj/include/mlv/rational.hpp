#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace mlv {

using i64 = std::int64_t;
using Integer = mpz_class;
using Rational = mpq_class; // gmp keeps results canonical (reduced, positive denominator)

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError(ErrorKind::InvalidArgument, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// p-adic valuation of a nonzero integer.
inline std::int64_t ord_p(const Integer& n, std::int64_t p) {
    MLV_ASSERT(n != 0, "ord_p of zero");
    Integer t;
    Integer pp(static_cast<long>(p));
    return static_cast<std::int64_t>(mpz_remove(t.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

/// p-adic valuation of a nonzero rational.
inline std::int64_t ord_p(const Rational& q, std::int64_t p) {
    return ord_p(q.get_num(), p) - ord_p(q.get_den(), p);
}

inline std::int64_t mod_p(const Integer& n, std::int64_t p) {
    Integer r = n % static_cast<long>(p);
    if (r < 0) r += static_cast<long>(p);
    return r.get_si();
}

/// Residue in F_p of a rational of non-negative valuation.
inline std::int64_t residue_mod_p(const Rational& q, std::int64_t p) {
    Integer den = q.get_den();
    Integer pp(static_cast<long>(p));
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()) == 0)
        throw DomainError(ErrorKind::InvalidArgument, "rational has negative valuation");
    return mod_p(q.get_num() * inv, p);
}

/// Reduces q ∈ Z_(p) modulo p^k to an integer in [0, p^k).
inline Integer reduce_mod_pk(const Rational& q, std::int64_t p, unsigned k) {
    Integer pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), k);
    Integer den = q.get_den();
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw DomainError(ErrorKind::InvalidArgument, "rational is not p-integral");
    Integer r = (q.get_num() * inv) % pk;
    if (r < 0) r += pk;
    return r;
}

inline Rational rational_pow(const Rational& base, std::int64_t e) {
    if (e == 0) return Rational(1);
    Rational b = base;
    if (e < 0) {
        if (b == 0) throw DomainError(ErrorKind::InvalidArgument, "zero to a negative power");
        b = 1 / b;
        e = -e;
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), b.get_num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), b.get_den().get_mpz_t(), static_cast<unsigned long>(e));
    return make_rational(num, den);
}

inline Rational p_power(std::int64_t p, std::int64_t e) {
    return rational_pow(Rational(static_cast<long>(p)), e);
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "a", "-a", "+a", "a/b" exactly.
inline Rational parse_rational(std::string_view s) {
    std::string str(s);
    std::size_t i = 0;
    bool neg = false;
    if (i < str.size() && (str[i] == '+' || str[i] == '-')) {
        neg = str[i] == '-';
        ++i;
    }
    auto digits = [&](std::size_t from, std::size_t to) {
        if (from >= to) throw ParseError("malformed rational '" + str + "'");
        for (std::size_t j = from; j < to; ++j)
            if (str[j] < '0' || str[j] > '9') throw ParseError("malformed rational '" + str + "'");
        return Integer(str.substr(from, to - from));
    };
    std::size_t slash = str.find('/', i);
    Integer num = digits(i, slash == std::string::npos ? str.size() : slash);
    Integer den = slash == std::string::npos ? Integer(1) : digits(slash + 1, str.size());
    if (den == 0) throw ParseError("zero denominator in '" + str + "'");
    Rational q = make_rational(num, den);
    return neg ? Rational(-q) : q;
}

} // namespace mlv
