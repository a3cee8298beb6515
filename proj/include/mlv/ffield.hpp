#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace mlv {

// F_p[t]/(modulus), modulus monic of degree k. The prime field itself uses modulus t.
struct FieldDesc {
    i64 p = 2;
    std::vector<i64> modulus{0, 1};

    int k() const { return static_cast<int>(modulus.size()) - 1; }
    friend bool operator==(const FieldDesc& a, const FieldDesc& b) {
        return a.p == b.p && a.modulus == b.modulus;
    }
    Integer order() const {
        Integer q;
        mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k()));
        return q;
    }
};

using Field = std::shared_ptr<const FieldDesc>;

inline bool same_field(const Field& a, const Field& b) { return a == b || (a && b && *a == *b); }

namespace detail {
inline i64 md(i64 a, i64 p) {
    a %= p;
    return a < 0 ? a + p : a;
}
inline i64 inv_mod(i64 a, i64 p) {
    i64 g = p, x = 0, x1 = 1, r = md(a, p);
    MLV_ASSERT(r != 0, "inverse of zero mod p");
    while (r) {
        i64 q = g / r;
        std::tie(g, r) = std::make_pair(r, g - q * r);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return md(x, p);
}
// print in (-p/2, p/2]
inline std::string sym(i64 a, i64 p) {
    i64 s = a > p / 2 ? a - p : a;
    return std::to_string(s);
}
} // namespace detail

class FqElem {
public:
    FqElem() = default;
    FqElem(Field F, std::vector<i64> rep) : F_(std::move(F)), r_(std::move(rep)) { reduce(); }

    static FqElem from_int(const Field& F, i64 c) { return FqElem(F, std::vector<i64>{c}); }
    static FqElem zero(const Field& F) { return from_int(F, 0); }
    static FqElem one(const Field& F) { return from_int(F, 1); }
    static FqElem gen(const Field& F) { return FqElem(F, std::vector<i64>{0, 1}); }

    const Field& field() const { return F_; }
    const std::vector<i64>& rep() const { return r_; }
    i64 p() const { return F_->p; }

    bool is_zero() const {
        return std::all_of(r_.begin(), r_.end(), [](i64 c) { return c == 0; });
    }
    bool is_one() const {
        if (r_.empty() || r_[0] != 1) return false;
        return std::all_of(r_.begin() + 1, r_.end(), [](i64 c) { return c == 0; });
    }

    friend FqElem operator+(const FqElem& a, const FqElem& b) {
        check(a, b);
        FqElem r = a;
        for (std::size_t i = 0; i < r.r_.size(); ++i) r.r_[i] = detail::md(r.r_[i] + b.r_[i], a.p());
        return r;
    }
    friend FqElem operator-(const FqElem& a, const FqElem& b) {
        check(a, b);
        FqElem r = a;
        for (std::size_t i = 0; i < r.r_.size(); ++i) r.r_[i] = detail::md(r.r_[i] - b.r_[i], a.p());
        return r;
    }
    friend FqElem operator-(const FqElem& a) { return zero(a.F_) - a; }
    friend FqElem operator*(const FqElem& a, const FqElem& b) {
        check(a, b);
        const i64 p = a.p();
        if (a.r_.size() == 1) return FqElem(a.F_, {(a.r_[0] * b.r_[0]) % p}, true);
        std::vector<i64> c(a.r_.size() * 2 - 1, 0);
        for (std::size_t i = 0; i < a.r_.size(); ++i) {
            if (!a.r_[i]) continue;
            for (std::size_t j = 0; j < b.r_.size(); ++j) c[i + j] = (c[i + j] + a.r_[i] * b.r_[j]) % p;
        }
        return FqElem(a.F_, std::move(c));
    }
    FqElem& operator+=(const FqElem& o) { return *this = *this + o; }
    FqElem& operator-=(const FqElem& o) { return *this = *this - o; }
    FqElem& operator*=(const FqElem& o) { return *this = *this * o; }

    FqElem pow(const Integer& e) const {
        if (e < 0) return inverse().pow(Integer(-e));
        FqElem r = one(F_), b = *this;
        const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = r * r;
            if (mpz_tstbit(e.get_mpz_t(), i)) r = r * b;
        }
        return r;
    }
    FqElem pow(i64 e) const { return pow(Integer(static_cast<long>(e))); }

    FqElem inverse() const {
        if (is_zero()) throw DomainError(ErrorKind::InvalidArgument, "inverse of zero in finite field");
        if (r_.size() == 1) return from_int(F_, detail::inv_mod(r_[0], p()));
        return pow(Integer(F_->order() - 2));
    }
    friend FqElem operator/(const FqElem& a, const FqElem& b) { return a * b.inverse(); }

    friend bool operator==(const FqElem& a, const FqElem& b) { return same_field(a.F_, b.F_) && a.r_ == b.r_; }
    friend bool operator<(const FqElem& a, const FqElem& b) { return a.r_ < b.r_; }

    std::string str() const {
        if (std::all_of(r_.begin() + 1, r_.end(), [](i64 c) { return c == 0; })) return detail::sym(r_[0], p());
        std::string s;
        for (std::size_t i = r_.size(); i-- > 0;) {
            if (!r_[i]) continue;
            i64 c = r_[i] > p() / 2 ? r_[i] - p() : r_[i];
            std::string mono = i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i));
            if (!s.empty() || c < 0) s += c < 0 ? "-" : "+";
            i64 a = c < 0 ? -c : c;
            if (i == 0 || a != 1) s += std::to_string(a);
            s += mono;
        }
        if (s.empty()) return "0";
        return "(" + s + ")";
    }

private:
    FqElem(Field F, std::vector<i64> rep, bool) : F_(std::move(F)), r_(std::move(rep)) {}

    static void check(const FqElem& a, const FqElem& b) {
        if (!same_field(a.F_, b.F_)) throw DomainError(ErrorKind::FieldMismatch, "elements of different fields");
    }
    void reduce() {
        MLV_ASSERT(F_ != nullptr, "element without field");
        const i64 p = F_->p;
        const auto& m = F_->modulus;
        const std::size_t k = m.size() - 1;
        for (auto& c : r_) c = detail::md(c, p);
        for (std::size_t i = r_.size(); i-- > k;) {
            i64 c = r_[i];
            if (!c) continue;
            for (std::size_t j = 0; j <= k; ++j) r_[i - k + j] = detail::md(r_[i - k + j] - c * m[j], p);
        }
        r_.resize(k, 0);
    }

    Field F_;
    std::vector<i64> r_;
};

class FqPoly {
public:
    FqPoly() = default;
    explicit FqPoly(Field F) : F_(std::move(F)) {}
    FqPoly(Field F, std::vector<FqElem> c) : F_(std::move(F)), c_(std::move(c)) { trim(); }

    static FqPoly constant(const FqElem& c) { return FqPoly(c.field(), {c}); }
    static FqPoly y(const Field& F) { return FqPoly(F, {FqElem::zero(F), FqElem::one(F)}); }
    static FqPoly monomial(const FqElem& c, std::size_t d) {
        std::vector<FqElem> v(d + 1, FqElem::zero(c.field()));
        v[d] = c;
        return FqPoly(c.field(), std::move(v));
    }
    // integer coefficients, ascending
    static FqPoly from_ints(const Field& F, const std::vector<i64>& cs) {
        std::vector<FqElem> v;
        for (i64 c : cs) v.push_back(FqElem::from_int(F, c));
        return FqPoly(F, std::move(v));
    }

    const Field& field() const { return F_; }
    const std::vector<FqElem>& coeffs() const { return c_; }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    FqElem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : FqElem::zero(F_); }
    FqElem leading() const { return c_.empty() ? FqElem::zero(F_) : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }

    friend FqPoly operator+(const FqPoly& a, const FqPoly& b) {
        std::vector<FqElem> r(std::max(a.c_.size(), b.c_.size()), FqElem::zero(a.F_));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
        return FqPoly(a.F_, std::move(r));
    }
    friend FqPoly operator-(const FqPoly& a, const FqPoly& b) {
        std::vector<FqElem> r(std::max(a.c_.size(), b.c_.size()), FqElem::zero(a.F_));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
        return FqPoly(a.F_, std::move(r));
    }
    friend FqPoly operator*(const FqPoly& a, const FqPoly& b) {
        if (a.is_zero() || b.is_zero()) return FqPoly(a.F_);
        std::vector<FqElem> r(a.c_.size() + b.c_.size() - 1, FqElem::zero(a.F_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return FqPoly(a.F_, std::move(r));
    }
    friend FqPoly operator*(const FqElem& s, const FqPoly& a) {
        std::vector<FqElem> r = a.c_;
        for (auto& c : r) c = s * c;
        return FqPoly(a.F_, std::move(r));
    }

    friend bool operator==(const FqPoly& a, const FqPoly& b) { return a.c_ == b.c_; }
    // canonical order: degree, then ascending coefficients lexicographically
    friend bool operator<(const FqPoly& a, const FqPoly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
    }

    FqPoly monic() const {
        if (is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "monic of zero polynomial");
        return leading().inverse() * *this;
    }

    FqPoly derivative() const {
        if (c_.size() <= 1) return FqPoly(F_);
        std::vector<FqElem> d;
        for (std::size_t i = 1; i < c_.size(); ++i)
            d.push_back(FqElem::from_int(F_, static_cast<i64>(i) % F_->p) * c_[i]);
        return FqPoly(F_, std::move(d));
    }

    FqElem operator()(const FqElem& x) const {
        FqElem r = FqElem::zero(F_);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    std::string str(const std::string& var = "y") const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const FqElem& c = c_[i];
            if (c.is_zero()) continue;
            std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
            std::string cs = c.str();
            bool neg = cs[0] == '-';
            if (neg) cs = cs.substr(1);
            if (!s.empty() || neg) s += neg ? "-" : "+";
            if (i == 0) s += cs;
            else if (cs != "1") s += cs + mono;
            else s += mono;
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    Field F_;
    std::vector<FqElem> c_;
};

inline std::pair<FqPoly, FqPoly> divmod(const FqPoly& f, const FqPoly& g) {
    if (g.is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "division by zero polynomial");
    const Field& F = f.field() ? f.field() : g.field();
    if (f.degree() < g.degree()) return {FqPoly(F), f};
    std::vector<FqElem> r = f.coeffs();
    const std::size_t dg = static_cast<std::size_t>(g.degree());
    std::vector<FqElem> q(r.size() - dg, FqElem::zero(F));
    FqElem li = g.leading().inverse();
    for (std::size_t i = r.size(); i-- > dg;) {
        if (r[i].is_zero()) continue;
        FqElem t = r[i] * li;
        q[i - dg] = t;
        for (std::size_t j = 0; j <= dg; ++j) r[i - dg + j] -= t * g.coeffs()[j];
    }
    r.resize(dg, FqElem::zero(F));
    return {FqPoly(F, std::move(q)), FqPoly(F, std::move(r))};
}
inline FqPoly operator%(const FqPoly& f, const FqPoly& g) { return divmod(f, g).second; }
inline FqPoly operator/(const FqPoly& f, const FqPoly& g) { return divmod(f, g).first; }

inline FqPoly gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

// a^e mod m
inline FqPoly powmod(const FqPoly& a, const Integer& e, const FqPoly& m) {
    FqPoly r = FqPoly::constant(FqElem::one(m.field())) % m, b = a % m;
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (std::size_t i = bits; i-- > 0;) {
        r = (r * r) % m;
        if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * b) % m;
    }
    return r;
}

inline Field prime_field(i64 p) {
    if (!is_prime(p)) throw DomainError(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    if (p >= (i64(1) << 31)) throw DomainError(ErrorKind::InvalidArgument, "prime too large for ffield");
    return std::make_shared<const FieldDesc>(FieldDesc{p, {0, 1}});
}

inline std::atomic<std::uint64_t>& default_factor_seed() {
    static std::atomic<std::uint64_t> s{0};
    return s;
}

namespace detail {
inline std::vector<int> prime_divisors(int n) {
    std::vector<int> r;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            r.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) r.push_back(n);
    return r;
}

// y^(q^n) mod f by repeated q-th powering
inline FqPoly frob(const FqPoly& h, const Integer& q, const FqPoly& f, int times) {
    FqPoly r = h;
    for (int i = 0; i < times; ++i) r = powmod(r, q, f);
    return r;
}

inline FqElem pth_root(const FqElem& a) {
    // a^(p^(k-1)) is the inverse of Frobenius on F_{p^k}
    Integer e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(a.p()), static_cast<unsigned long>(a.field()->k() - 1));
    return a.pow(e);
}

inline void squarefree(const FqPoly& f, long mult, std::vector<std::pair<FqPoly, long>>& out) {
    const Field& F = f.field();
    const i64 p = F->p;
    if (f.degree() < 1) return;
    FqPoly c = gcd(f, f.derivative());
    FqPoly w = f / c;
    long i = 1;
    while (w.degree() > 0) {
        FqPoly yv = gcd(w, c);
        FqPoly fac = w / yv;
        if (fac.degree() > 0) out.emplace_back(fac.monic(), i * mult);
        w = yv;
        c = c / yv;
        ++i;
    }
    if (c.degree() > 0) {
        std::vector<FqElem> root;
        for (std::size_t j = 0; j < c.coeffs().size(); j += static_cast<std::size_t>(p)) root.push_back(pth_root(c.coeffs()[j]));
        squarefree(FqPoly(F, std::move(root)).monic(), mult * p, out);
    }
}

inline FqPoly random_poly(const Field& F, long deg_below, std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> dist(0, F->p - 1);
    std::vector<FqElem> c;
    for (long i = 0; i < deg_below; ++i) {
        std::vector<i64> rep(static_cast<std::size_t>(F->k()));
        for (auto& x : rep) x = dist(rng);
        c.emplace_back(F, std::move(rep));
    }
    return FqPoly(F, std::move(c));
}

// g monic squarefree, all irreducible factors of degree d
inline void equal_degree(const FqPoly& g, int d, std::mt19937_64& rng, std::vector<FqPoly>& out) {
    if (g.degree() == d) {
        out.push_back(g);
        return;
    }
    const Field& F = g.field();
    const Integer q = F->order();
    for (;;) {
        FqPoly a = random_poly(F, g.degree(), rng);
        if (a.degree() < 1) continue;
        FqPoly b(F);
        if (F->p == 2) {
            // trace map a + a^2 + ... + a^(2^(kd-1))
            FqPoly t = a % g, s = t;
            for (int i = 1; i < F->k() * d; ++i) {
                t = (t * t) % g;
                s = s + t;
            }
            b = s;
        } else {
            Integer qd;
            mpz_pow_ui(qd.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(d));
            Integer e = (qd - 1) / 2;
            b = powmod(a, e, g) - FqPoly::constant(FqElem::one(F));
        }
        FqPoly h = gcd(g, b);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            equal_degree(h, d, rng, out);
            equal_degree((g / h).monic(), d, rng, out);
            return;
        }
    }
}
} // namespace detail

/// Full factorization: monic irreducible factors with multiplicities in canonical order.
inline std::vector<std::pair<FqPoly, long>> fq_factor(const FqPoly& f, std::uint64_t seed) {
    if (f.is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "cannot factor zero");
    std::vector<std::pair<FqPoly, long>> sqf, out;
    if (f.degree() < 1) return out;
    const Field& F = f.field();
    detail::squarefree(f.monic(), 1, sqf);
    std::mt19937_64 rng(seed);
    const Integer q = F->order();
    for (auto& [g0, mult] : sqf) {
        FqPoly g = g0;
        FqPoly h = FqPoly::y(F) % g;
        const FqPoly yv = FqPoly::y(F);
        for (int d = 1; g.degree() >= 2 * d; ++d) {
            h = powmod(h, q, g);
            FqPoly part = gcd(g, h - yv);
            if (part.degree() > 0) {
                std::vector<FqPoly> pieces;
                detail::equal_degree(part, d, rng, pieces);
                for (auto& pc : pieces) out.emplace_back(pc, mult);
                g = (g / part).monic();
                h = h % g;
            }
        }
        if (g.degree() > 0) out.emplace_back(g, mult);
    }
    // the same irreducible can come from different squarefree layers only in char p splitting; merge
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<FqPoly, long>> merged;
    for (auto& pr : out) {
        if (!merged.empty() && merged.back().first == pr.first) merged.back().second += pr.second;
        else merged.push_back(pr);
    }
    return merged;
}
inline std::vector<std::pair<FqPoly, long>> fq_factor(const FqPoly& f) { return fq_factor(f, default_factor_seed().load()); }

/// Rabin's test.
inline bool fq_is_irreducible(const FqPoly& f) {
    if (f.is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "irreducibility of zero");
    const int n = static_cast<int>(f.degree());
    if (n < 1) return false;
    if (n == 1) return true;
    FqPoly g = f.monic();
    const Field& F = f.field();
    const Integer q = F->order();
    const FqPoly yv = FqPoly::y(F);
    if (!(detail::frob(yv, q, g, n) == yv % g)) return false;
    for (int r : detail::prime_divisors(n)) {
        FqPoly h = detail::frob(yv, q, g, n / r) - yv;
        if (gcd(g, h).degree() > 0) return false;
    }
    return true;
}

/// Roots of f in its field, ascending.
inline std::vector<FqElem> fq_roots(const FqPoly& f) {
    std::vector<FqElem> r;
    for (auto& [g, m] : fq_factor(f))
        if (g.degree() == 1) r.push_back(-g.coeff(0));
    std::sort(r.begin(), r.end());
    return r;
}

inline Field make_field(i64 p, std::vector<i64> modulus) {
    Field Fp = prime_field(p);
    for (auto& c : modulus) c = detail::md(c, p);
    while (!modulus.empty() && modulus.back() == 0) modulus.pop_back();
    if (modulus.size() < 2 || modulus.back() != 1) throw DomainError(ErrorKind::NotMonic, "field modulus must be monic of degree >= 1");
    if (modulus.size() == 2) return Fp; // all degree-1 presentations are F_p with t = -m0; use the canonical one
    if (!fq_is_irreducible(FqPoly::from_ints(Fp, modulus)))
        throw DomainError(ErrorKind::NotIrreducible, "field modulus is reducible");
    return std::make_shared<const FieldDesc>(FieldDesc{p, std::move(modulus)});
}

class FieldEmbedding {
public:
    FieldEmbedding() = default;
    FieldEmbedding(Field src, Field dst, FqElem image) : src_(std::move(src)), dst_(std::move(dst)), img_(std::move(image)) {}

    static FieldEmbedding identity(const Field& F) { return FieldEmbedding(F, F, FqElem::gen(F)); }

    const Field& source() const { return src_; }
    const Field& target() const { return dst_; }
    const FqElem& image_of_generator() const { return img_; }

    FqElem operator()(const FqElem& a) const {
        if (!same_field(a.field(), src_)) throw DomainError(ErrorKind::FieldMismatch, "embedding applied outside its source");
        FqElem r = FqElem::zero(dst_);
        const auto& rep = a.rep();
        for (std::size_t i = rep.size(); i-- > 0;) r = r * img_ + FqElem::from_int(dst_, rep[i]);
        return r;
    }
    FqPoly operator()(const FqPoly& f) const {
        std::vector<FqElem> c;
        for (auto& x : f.coeffs()) c.push_back((*this)(x));
        return FqPoly(dst_, std::move(c));
    }
    FieldEmbedding then(const FieldEmbedding& next) const { return FieldEmbedding(src_, next.dst_, next(img_)); }

private:
    Field src_, dst_;
    FqElem img_;
};

struct FieldExtension {
    Field field;
    FieldEmbedding embedding; // base -> field
    FqElem root;              // a root of ψ in field
};

namespace detail {
inline bool next_tuple(std::vector<i64>& v, i64 p) {
    for (auto& c : v) {
        if (++c < p) return true;
        c = 0;
    }
    return false;
}
// first monic irreducible of degree K over F_p in counting order of its lower coefficients
inline std::vector<i64> first_irreducible(i64 p, int K) {
    Field Fp = prime_field(p);
    std::vector<i64> low(static_cast<std::size_t>(K), 0);
    do {
        std::vector<i64> m = low;
        m.push_back(1);
        if (m[0] != 0 && fq_is_irreducible(FqPoly::from_ints(Fp, m))) return m;
    } while (next_tuple(low, p));
    throw InternalError("no irreducible polynomial found");
}
} // namespace detail

/// κ(ψ) over base as a flat field, with an embedding and the smallest root of ψ.
inline FieldExtension extend_field(const Field& base, const FqPoly& psi) {
    if (!same_field(psi.field(), base)) throw DomainError(ErrorKind::FieldMismatch, "ψ is not over the base field");
    if (!psi.is_monic() || !fq_is_irreducible(psi)) throw DomainError(ErrorKind::NotIrreducible, "ψ = " + psi.str() + " is not monic irreducible");
    if (psi.degree() == 1) return {base, FieldEmbedding::identity(base), -psi.coeff(0)};
    if (base->k() == 1) {
        std::vector<i64> m;
        for (auto& c : psi.coeffs()) m.push_back(c.rep()[0]);
        Field F = std::make_shared<const FieldDesc>(FieldDesc{base->p, std::move(m)});
        return {F, FieldEmbedding(base, F, FqElem::zero(F)), FqElem::gen(F)};
    }
    const int K = base->k() * static_cast<int>(psi.degree());
    Field F = std::make_shared<const FieldDesc>(FieldDesc{base->p, detail::first_irreducible(base->p, K)});
    auto base_roots = fq_roots(FqPoly::from_ints(F, base->modulus));
    MLV_ASSERT(!base_roots.empty(), "base modulus has no root in the extension");
    FieldEmbedding emb(base, F, base_roots.front());
    auto roots = fq_roots(emb(psi));
    MLV_ASSERT(!roots.empty(), "ψ has no root in the extension");
    return {F, emb, roots.front()};
}

/// Coordinates of elements of a target field over ι(source) in the power basis of z (degree f).
class RelativeBasis {
public:
    RelativeBasis() = default;
    RelativeBasis(FieldEmbedding emb, FqElem z, int f) : emb_(std::move(emb)), z_(std::move(z)), f_(f) {
        const int kb = emb_.source()->k();
        const int K = emb_.target()->k();
        MLV_ASSERT(kb * f == K, "relative degree mismatch");
        const i64 p = emb_.target()->p;
        // columns: ι(t^i) z^j
        std::vector<std::vector<i64>> A(static_cast<std::size_t>(K), std::vector<i64>(static_cast<std::size_t>(2 * K), 0));
        FqElem zj = FqElem::one(emb_.target());
        for (int j = 0; j < f; ++j) {
            FqElem ti = FqElem::one(emb_.source());
            for (int i = 0; i < kb; ++i) {
                FqElem col = emb_(ti) * zj;
                for (int r = 0; r < K; ++r) A[static_cast<std::size_t>(r)][static_cast<std::size_t>(j * kb + i)] = col.rep()[static_cast<std::size_t>(r)];
                ti = ti * FqElem::gen(emb_.source());
            }
            zj = zj * z_;
        }
        for (int r = 0; r < K; ++r) A[static_cast<std::size_t>(r)][static_cast<std::size_t>(K + r)] = 1;
        // invert by Gauss-Jordan mod p
        for (int c = 0, r = 0; c < K; ++c, ++r) {
            int piv = r;
            while (piv < K && A[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)] == 0) ++piv;
            MLV_ASSERT(piv < K, "relative basis is singular");
            std::swap(A[static_cast<std::size_t>(piv)], A[static_cast<std::size_t>(r)]);
            auto& R = A[static_cast<std::size_t>(r)];
            i64 inv = detail::inv_mod(R[static_cast<std::size_t>(c)], p);
            for (auto& x : R) x = x * inv % p;
            for (int o = 0; o < K; ++o) {
                if (o == r) continue;
                auto& O = A[static_cast<std::size_t>(o)];
                i64 fct = O[static_cast<std::size_t>(c)];
                if (!fct) continue;
                for (std::size_t x = 0; x < O.size(); ++x) O[x] = detail::md(O[x] - fct * R[x], p);
            }
        }
        inv_.assign(static_cast<std::size_t>(K), std::vector<i64>(static_cast<std::size_t>(K)));
        for (int r = 0; r < K; ++r)
            for (int c = 0; c < K; ++c) inv_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(K + c)];
    }

    const FieldEmbedding& embedding() const { return emb_; }
    const FqElem& z() const { return z_; }
    int degree() const { return f_; }

    /// c = Σ_j ι(c_j) z^j
    std::vector<FqElem> decompose(const FqElem& c) const {
        const int kb = emb_.source()->k();
        const int K = emb_.target()->k();
        const i64 p = emb_.target()->p;
        std::vector<i64> x(static_cast<std::size_t>(K), 0);
        for (int r = 0; r < K; ++r) {
            i64 s = 0;
            for (int cc = 0; cc < K; ++cc) s = (s + inv_[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] * c.rep()[static_cast<std::size_t>(cc)]) % p;
            x[static_cast<std::size_t>(r)] = s;
        }
        std::vector<FqElem> out;
        for (int j = 0; j < f_; ++j)
            out.emplace_back(emb_.source(), std::vector<i64>(x.begin() + j * kb, x.begin() + (j + 1) * kb));
        return out;
    }

private:
    FieldEmbedding emb_;
    FqElem z_;
    int f_ = 1;
    std::vector<std::vector<i64>> inv_;
};

} // namespace mlv
