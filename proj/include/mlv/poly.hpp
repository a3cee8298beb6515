#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace mlv {

/// Dense polynomial over Q in x, ascending coefficients, trailing zeros trimmed.
class RationalPoly {
public:
    RationalPoly() = default;
    RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); } // NOLINT
    RationalPoly(const Rational& c) { // NOLINT: constants promote
        if (c != 0) c_.push_back(c);
    }
    RationalPoly(long c) : RationalPoly(Rational(c)) {} // NOLINT

    static RationalPoly x() { return RationalPoly(std::vector<Rational>{0, 1}); }
    static RationalPoly monomial(const Rational& c, std::size_t deg) {
        std::vector<Rational> v(deg + 1, Rational(0));
        v[deg] = c;
        return RationalPoly(std::move(v));
    }
    /// x - a
    static RationalPoly linear(const Rational& a) { return RationalPoly(std::vector<Rational>{-a, 1}); }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool is_constant() const { return c_.size() <= 1; }

    bool has_integer_coefficients() const {
        return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return is_integer(q); });
    }

    RationalPoly& operator+=(const RationalPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    RationalPoly& operator-=(const RationalPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
    friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
    friend RationalPoly operator-(RationalPoly a) {
        for (auto& q : a.c_) q = -q;
        return a;
    }
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return RationalPoly(std::move(r));
    }
    RationalPoly& operator*=(const RationalPoly& o) { return *this = *this * o; }

    friend RationalPoly operator*(const Rational& s, RationalPoly a) {
        if (s == 0) return {};
        for (auto& q : a.c_) q *= s;
        return a;
    }

    friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }
    friend bool operator<(const RationalPoly& a, const RationalPoly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        return a.c_ < b.c_;
    }

    Rational operator()(const Rational& at) const {
        Rational r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * at + *it;
        return r;
    }

    RationalPoly pow(unsigned e) const {
        RationalPoly r(1), b = *this;
        while (e) {
            if (e & 1u) r *= b;
            e >>= 1u;
            if (e) b *= b;
        }
        return r;
    }

    RationalPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
        return RationalPoly(std::move(d));
    }

    RationalPoly monic() const {
        if (is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "monic of zero polynomial");
        return Rational(1 / leading()) * *this;
    }

    /// f(x + a)
    RationalPoly taylor_shift(const Rational& a) const {
        std::vector<Rational> r = c_;
        const long n = static_cast<long>(r.size());
        for (long i = 0; i < n; ++i)
            for (long j = n - 2; j >= i; --j) r[j] += a * r[j + 1];
        return RationalPoly(std::move(r));
    }

    std::string str(const std::string& var = "x") const;

    friend std::ostream& operator<<(std::ostream& os, const RationalPoly& p) { return os << p.str(); }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Division with remainder by a nonzero divisor.
inline std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& f, const RationalPoly& g) {
    if (g.is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "division by zero polynomial");
    if (f.degree() < g.degree()) return {RationalPoly(), f};
    std::vector<Rational> r = f.coeffs();
    const std::size_t dg = static_cast<std::size_t>(g.degree());
    std::vector<Rational> q(r.size() - dg, Rational(0));
    const Rational lc = g.leading();
    const bool monic = lc == 1;
    for (std::size_t i = r.size(); i-- > dg;) {
        if (r[i] == 0) continue;
        Rational t = monic ? r[i] : Rational(r[i] / lc);
        q[i - dg] = t;
        for (std::size_t j = 0; j <= dg; ++j) r[i - dg + j] -= t * g.coeffs()[j];
    }
    r.resize(dg);
    return {RationalPoly(std::move(q)), RationalPoly(std::move(r))};
}

inline RationalPoly operator%(const RationalPoly& f, const RationalPoly& g) { return divmod(f, g).second; }
inline RationalPoly operator/(const RationalPoly& f, const RationalPoly& g) { return divmod(f, g).first; }

/// Monic gcd over Q (zero if both are zero).
inline RationalPoly gcd(RationalPoly a, RationalPoly b) {
    while (!b.is_zero()) {
        RationalPoly r = a % b;
        a = std::move(b);
        b = r.is_zero() ? r : r.monic();
    }
    return a.is_zero() ? a : a.monic();
}

inline bool is_squarefree(const RationalPoly& f) {
    if (f.degree() <= 0) return true;
    return gcd(f, f.derivative()).degree() == 0;
}

/// Canonical φ-expansion f = Σ a_s φ^s with deg a_s < deg φ, lowest s first.
inline std::vector<RationalPoly> phi_expand(const RationalPoly& f, const RationalPoly& phi) {
    if (!phi.is_monic()) throw DomainError(ErrorKind::NotMonic, "expansion key " + phi.str() + " is not monic");
    if (phi.degree() < 1) throw DomainError(ErrorKind::InvalidArgument, "expansion key must have degree >= 1");
    std::vector<RationalPoly> out;
    RationalPoly rest = f;
    while (!rest.is_zero()) {
        auto [q, r] = divmod(rest, phi);
        out.push_back(std::move(r));
        rest = std::move(q);
    }
    if (out.empty()) out.emplace_back();
    return out;
}

/// Σ a_s φ^s (used by tests to check expansions).
inline RationalPoly phi_assemble(const std::vector<RationalPoly>& coeffs, const RationalPoly& phi) {
    RationalPoly r;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * phi + *it;
    return r;
}

namespace detail {
inline std::string coeff_term(const Rational& c, std::size_t deg, const std::string& var, bool first) {
    std::string out;
    Rational a = abs(c);
    if (c < 0) out += first ? "-" : "-";
    else if (!first) out += "+";
    std::string mono;
    if (deg >= 1) mono = var;
    if (deg >= 2) mono += "^" + std::to_string(deg);
    if (deg == 0) return out + a.get_str();
    if (a == 1) return out + mono;
    if (is_integer(a)) return out + a.get_str() + mono;
    return out + a.get_str() + "*" + mono;
}
} // namespace detail

inline std::string RationalPoly::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::string s;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        s += detail::coeff_term(c_[i], i, var, first);
        first = false;
    }
    return s;
}

} // namespace mlv
