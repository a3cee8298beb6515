#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "compress.hpp"
#include "ffield.hpp"
#include "valuation.hpp"

namespace mlv {

/// p^p_exp · ∏ φ_i^{t_i}
struct Monomial {
    i64 p_exp = 0;
    std::vector<i64> t;

    std::string str(const std::string& var = "phi") const {
        std::string s;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!t[i]) continue;
            if (!s.empty()) s += "*";
            s += var + std::to_string(i) + (t[i] == 1 ? "" : "^" + std::to_string(t[i]));
        }
        return s;
    }
};

struct ResidualData {
    Value value;
    long s0 = 0;
    FqPoly R;            // monic
    FqElem leading_unit; // R_raw = leading_unit · R
    FqPoly R_raw;        // constant term 1
    RationalPoly lead_coeff; // a_{s0}
};

struct NewtonPolygon {
    struct Vertex {
        long s;
        Value value;
    };
    struct Side {
        Rational slope;
        long length;
    };
    std::vector<Vertex> vertices;
    std::vector<Side> sides;
};

using Items = std::vector<std::pair<RationalPoly, i64>>;

struct DegreeIdentityStats {
    std::atomic<std::uint64_t> checks{0};
    std::atomic<std::uint64_t> violations{0};
};

// every residual context checks the degree identity at each node it builds
inline DegreeIdentityStats& degree_identity_stats() {
    static DegreeIdentityStats s;
    return s;
}

/// Per-node residual machinery of a compressed chain: Γ_n, e_n, u_n, κ_n and z_{n-1}.
class ResidualContext {
public:
    struct Level {
        RationalPoly phi;
        Value gamma;
        long m = 1;
        StepKind kind = StepKind::Ordinary;
        FamilyPtr family;
        ValueGroup G;
        i64 e = 0; // 0 when γ = ∞
        Monomial u;
        Field kappa;
        FieldEmbedding iota; // κ_{n-1} -> κ_n
        RelativeBasis basis; // κ_n over κ_{n-1} with z_{n-1}
        FqPoly psi;          // ψ_n = R_n(Φ-rep), n < top
        RationalPoly phi_rep;
    };

    explicit ResidualContext(InductiveValuation chain) : mu_(std::move(chain)) { build(); }

    const InductiveValuation& chain() const { return mu_; }
    std::size_t top() const { return mu_.depth(); }
    const Level& level(std::size_t n) const { return lv_[n]; }
    const std::vector<Level>& levels() const { return lv_; }
    const Field& kappa() const { return lv_.back().kappa; }

    Monomial monomial(std::size_t L, Rational target) const {
        Monomial mo;
        mo.t.assign(L, 0);
        for (std::size_t i = L; i-- > 0;) {
            const Level& li = lv_[i];
            ValueGroup prev = i == 0 ? ValueGroup::integers() : lv_[i - 1].G;
            i64 ti = 0;
            while (!prev.contains(Rational(target - ti * li.gamma.rational()))) {
                ++ti;
                MLV_ASSERT(ti < li.e, "normalizer digit out of range");
            }
            mo.t[i] = ti;
            target -= ti * li.gamma.rational();
        }
        MLV_ASSERT(is_integer(target), "normalizer target left a non-integral part");
        mo.p_exp = target.get_num().get_si();
        return mo;
    }

    RationalPoly monomial_poly(const Monomial& mo) const {
        RationalPoly r(p_power(mu_.p(), mo.p_exp));
        for (std::size_t i = 0; i < mo.t.size(); ++i)
            if (mo.t[i]) r *= lv_[i].phi.pow(static_cast<unsigned>(mo.t[i]));
        return r;
    }

    void append_monomial(Items& items, const Monomial& mo, i64 k) const {
        if (k == 0) return;
        if (mo.p_exp) items.emplace_back(RationalPoly(Rational(static_cast<long>(mu_.p()))), mo.p_exp * k);
        for (std::size_t i = 0; i < mo.t.size(); ++i)
            if (mo.t[i]) items.emplace_back(lv_[i].phi, mo.t[i] * k);
    }

    /// Residue in κ_L of ∏ g^t, all deg g < m_L, total value 0.
    FqElem unit_residue(std::size_t L, const Items& items) const {
        const Level& l = lv_[L];
        if (L == 0) {
            Rational prod = 1;
            for (const auto& [g, t] : items) {
                if (t == 0) continue;
                MLV_ASSERT(g.degree() == 0, "depth-zero unit item is not a nonzero constant");
                prod *= rational_pow(g.coeff(0), t);
            }
            MLV_ASSERT(ord_p(prod, mu_.p()) == 0, "unit residue of a non-unit");
            return FqElem::from_int(l.kappa, residue_mod_p(prod, mu_.p()));
        }
        if (l.kind == StepKind::Limit) return limit_unit_residue(L, items);
        const Level& lp = lv_[L - 1];
        Items sub;
        i64 S = 0;
        FqElem acc = FqElem::one(l.kappa);
        const FqElem& z = l.basis.z();
        for (const auto& [g, t] : items) {
            if (t == 0) continue;
            MLV_ASSERT(!g.is_zero() && g.degree() < l.m, "unit item degree out of range");
            ResidualData rd = residual_at(L - 1, g);
            S += t * rd.s0;
            sub.emplace_back(rd.lead_coeff, t);
            FqElem rz = l.iota(rd.R_raw)(z);
            acc = acc * rz.pow(t);
        }
        MLV_ASSERT(S % lp.e == 0, "φ-exponent sum not divisible by e");
        const i64 q = S / lp.e;
        append_monomial(sub, lp.u, q);
        FqElem base = unit_residue(L - 1, sub);
        return l.iota(base) * z.pow(q) * acc;
    }

    /// in_μ f at node L along φ_L (γ_L finite).
    ResidualData residual_at(std::size_t L, const RationalPoly& f) const {
        if (f.is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "residual of zero");
        const Level& l = lv_[L];
        if (l.e == 0) throw DomainError(ErrorKind::NotResiduallyTranscendental, "node " + std::to_string(L) + " has γ = ∞");
        auto a = phi_expand(f, l.phi);
        std::vector<Value> vals(a.size());
        Value best = Value::infinity();
        for (std::size_t s = 0; s < a.size(); ++s) {
            vals[s] = a[s].is_zero() ? Value::infinity() : mu_.eval_at(L, a[s]) + Value(Rational(l.gamma.rational() * static_cast<long>(s)));
            best = value_min(best, vals[s]);
        }
        std::vector<long> S;
        for (std::size_t s = 0; s < a.size(); ++s)
            if (vals[s] == best) S.push_back(static_cast<long>(s));
        const long s0 = S.front();
        for (long s : S) MLV_ASSERT((s - s0) % l.e == 0, "residual support not in s0 + eZ");
        const long top_j = (S.back() - s0) / l.e;
        std::vector<FqElem> eps(static_cast<std::size_t>(top_j + 1), FqElem::zero(l.kappa));
        eps[0] = FqElem::one(l.kappa);
        for (long s : S) {
            if (s == s0) continue;
            const long j = (s - s0) / l.e;
            Items it{{a[static_cast<std::size_t>(s)], 1}, {a[static_cast<std::size_t>(s0)], -1}};
            append_monomial(it, l.u, j);
            eps[static_cast<std::size_t>(j)] = unit_residue(L, it);
        }
        ResidualData rd;
        rd.value = best;
        rd.s0 = s0;
        rd.R_raw = FqPoly(l.kappa, eps);
        rd.leading_unit = rd.R_raw.leading();
        rd.R = rd.R_raw.monic();
        rd.lead_coeff = a[static_cast<std::size_t>(s0)];
        return rd;
    }
    ResidualData residual(const RationalPoly& f) const { return residual_at(top(), f); }

    /// deg < m_L, value 0, residue c.
    RationalPoly lift_elem(std::size_t L, const FqElem& c) const {
        if (c.is_zero()) return {};
        const Level& l = lv_[L];
        if (L == 0) {
            i64 r = c.rep()[0];
            if (r > mu_.p() / 2) r -= mu_.p();
            return RationalPoly(Rational(static_cast<long>(r)));
        }
        if (l.kind == StepKind::Limit) return lift_elem(L - 1, FqElem(lv_[L - 1].kappa, c.rep()));
        const Level& lp = lv_[L - 1];
        auto coords = l.basis.decompose(c);
        RationalPoly P;
        for (std::size_t k = 0; k < coords.size(); ++k) {
            if (coords[k].is_zero()) continue;
            const i64 ek = lp.e * static_cast<i64>(k);
            Monomial N = monomial(L - 1, Rational(-ek * lp.gamma.rational()));
            Items it;
            append_monomial(it, lp.u, static_cast<i64>(k));
            append_monomial(it, N, 1);
            FqElem eta = it.empty() ? FqElem::one(lp.kappa) : unit_residue(L - 1, it);
            RationalPoly A = (lift_elem(L - 1, coords[k] / eta) * monomial_poly(N)) % lp.phi;
            P += A * lp.phi.pow(static_cast<unsigned>(ek));
        }
        return P;
    }

    /// Key polynomial χ with R(χ) = ψ at the top node.
    RationalPoly lift_psi(const FqPoly& psi) const {
        const Level& l = lv_.back();
        if (l.e == 0) throw DomainError(ErrorKind::NotResiduallyTranscendental, "last γ is ∞");
        if (!same_field(psi.field(), l.kappa)) throw DomainError(ErrorKind::FieldMismatch, "ψ is not over κ(μ)");
        if (!psi.is_monic() || !fq_is_irreducible(psi)) throw DomainError(ErrorKind::NotIrreducible, "ψ = " + psi.str() + " is not monic irreducible");
        if (psi.degree() == 1 && psi.coeff(0).is_zero()) throw DomainError(ErrorKind::PsiIsY, "ψ = y corresponds to the key itself");
        const long d = psi.degree();
        const std::size_t n = top();
        RationalPoly chi = l.phi.pow(static_cast<unsigned>(l.e * d));
        for (long j = 0; j < d; ++j) {
            FqElem cj = psi.coeff(static_cast<std::size_t>(j));
            if (cj.is_zero()) continue;
            Monomial N = monomial(n, Rational((d - j) * l.e * l.gamma.rational()));
            Items it;
            append_monomial(it, N, 1);
            append_monomial(it, l.u, -(d - j));
            FqElem eta = it.empty() ? FqElem::one(l.kappa) : unit_residue(n, it);
            RationalPoly C = (lift_elem(n, cj / eta) * monomial_poly(N)) % l.phi;
            chi += C * l.phi.pow(static_cast<unsigned>(l.e * j));
        }
        return chi;
    }

private:
    FqElem limit_unit_residue(std::size_t L, const Items& items) const {
        const Level& l = lv_[L];
        std::size_t j = 0;
        for (const auto& [g, t] : items) {
            if (t == 0) continue;
            auto rep = l.family->stable_value(g);
            if (!rep.stable) throw DomainError(ErrorKind::BudgetExhausted, "polynomial " + g.str() + " did not stabilize within " + std::to_string(rep.budget));
            j = std::max(j, rep.index + 1);
        }
        if (j == 0) return FqElem::one(l.kappa);
        const ResidualContext& C = rho_context(L, j);
        const RationalPoly& chi = l.family->member(j).first;
        Items sub;
        for (const auto& [g, t] : items) {
            if (t == 0) continue;
            RationalPoly c0 = g % chi;
            MLV_ASSERT(!c0.is_zero() && C.chain().eval(c0) < C.chain().eval(g - c0), "limit coefficient is not stable at the chosen index");
            sub.emplace_back(std::move(c0), t);
        }
        FqElem r = C.unit_residue(C.top(), sub);
        MLV_ASSERT(same_field(r.field(), l.kappa), "residue field of ρ_j differs from κ");
        return FqElem(l.kappa, r.rep());
    }

    const ResidualContext& rho_context(std::size_t L, std::size_t j) const {
        std::lock_guard<std::mutex> lk(cache_->m);
        auto key = std::make_pair(L, j);
        auto it = cache_->rho.find(key);
        if (it != cache_->rho.end()) return *it->second;
        auto ctx = std::make_shared<ResidualContext>(compress(lv_[L].family->rho(j)));
        return *cache_->rho.emplace(key, std::move(ctx)).first->second;
    }

    void fill_level(std::size_t n) {
        Level& l = lv_[n];
        l.phi = mu_.key(n);
        l.gamma = mu_.gamma(n);
        l.m = l.phi.degree();
        l.kind = mu_.kind(n);
        l.family = n == 0 ? nullptr : mu_.steps()[n - 1].family;
        ValueGroup prev = n == 0 ? ValueGroup::integers() : lv_[n - 1].G;
        l.G = group_join(prev, l.gamma);
        if (l.gamma.is_finite()) {
            l.e = group_index(prev, l.G);
            l.u = monomial(n, Rational(l.e * l.gamma.rational()));
        }
    }

    void build() {
        lv_.resize(mu_.depth() + 1);
        lv_[0].kappa = prime_field(mu_.p());
        fill_level(0);
        for (std::size_t n = 1; n <= mu_.depth(); ++n) {
            Level& prev = lv_[n - 1];
            const AugStep& st = mu_.steps()[n - 1];
            prev.phi_rep = st.kind == StepKind::Ordinary ? st.phi : st.family->member(1).first;
            ResidualData rd = residual_at(n - 1, prev.phi_rep);
            if (rd.s0 != 0 || rd.R.degree() < 1) throw MLVViolationError(n, "key is equivalent to the previous key");
            prev.psi = rd.R;
            FieldExtension ext = extend_field(prev.kappa, prev.psi);
            lv_[n].kappa = ext.field;
            lv_[n].iota = ext.embedding;
            lv_[n].basis = RelativeBasis(ext.embedding, ext.root, static_cast<int>(prev.psi.degree()));
            fill_level(n);
            // m_{n+1} = e_n f_n d_n m_n
            const Rational d = st.kind == StepKind::Limit ? make_rational(lv_[n].m, prev.m) : Rational(1);
            auto& stats = degree_identity_stats();
            ++stats.checks;
            if (Rational(prev.e * prev.psi.degree() * prev.m) * d != lv_[n].m) {
                ++stats.violations;
                throw MLVViolationError(n, "degree identity m_{n+1} = e f d m fails");
            }
        }
    }

    struct Cache {
        std::mutex m;
        std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<ResidualContext>> rho;
    };

    InductiveValuation mu_;
    std::vector<Level> lv_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline ResidualContext residual_context(const InductiveValuation& mu) { return ResidualContext(compress(mu)); }

inline Monomial normalizer(const InductiveValuation& mu) {
    if (!mu.residually_transcendental()) throw DomainError(ErrorKind::NotResiduallyTranscendental, "last γ is ∞");
    return residual_context(mu).levels().back().u;
}

inline RationalPoly normalizer_poly(const InductiveValuation& mu) {
    auto ctx = residual_context(mu);
    if (ctx.levels().back().e == 0) throw DomainError(ErrorKind::NotResiduallyTranscendental, "last γ is ∞");
    return ctx.monomial_poly(ctx.levels().back().u);
}

inline ResidualData residual(const ResidualContext& ctx, const RationalPoly& f) { return ctx.residual(f); }
inline ResidualData residual(const InductiveValuation& mu, const RationalPoly& f) { return residual_context(mu).residual(f); }

inline bool is_key(const ResidualContext& ctx, const RationalPoly& chi) {
    if (!chi.is_monic()) return false;
    const auto& top = ctx.levels().back();
    if (top.e == 0) throw DomainError(ErrorKind::NotResiduallyTranscendental, "last γ is ∞");
    if (chi.degree() == top.m && equiv(ctx.chain(), chi, top.phi)) return true;
    ResidualData rd = ctx.residual(chi);
    if (rd.s0 != 0 || rd.R.degree() < 1) return false;
    if (chi.degree() != top.m * top.e * rd.R.degree()) return false;
    return fq_is_irreducible(rd.R);
}
inline bool is_key(const InductiveValuation& mu, const RationalPoly& chi) {
    if (!chi.is_monic()) return false;
    return is_key(residual_context(mu), chi);
}

inline RationalPoly lift(const ResidualContext& ctx, const FqPoly& psi) { return ctx.lift_psi(psi); }
inline RationalPoly lift(const InductiveValuation& mu, const FqPoly& psi) { return residual_context(mu).lift_psi(psi); }

/// Lower convex hull of {(s, μ(a_s))} over the φ-expansion of f.
inline NewtonPolygon newton_polygon(const InductiveValuation& mu, const RationalPoly& phi, const RationalPoly& f) {
    if (f.is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "polygon of zero");
    auto a = phi_expand(f, phi);
    std::vector<std::pair<long, Rational>> pts;
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].is_zero()) continue;
        Value v = mu.eval(a[s]);
        pts.emplace_back(static_cast<long>(s), v.rational());
    }
    std::vector<std::pair<long, Rational>> hull;
    auto cross_ok = [](const auto& o, const auto& p1, const auto& p2) {
        // keep p1 only if it lies strictly below segment o–p2
        Rational lhs = (p1.second - o.second) * (p2.first - o.first);
        Rational rhs = (p2.second - o.second) * (p1.first - o.first);
        return lhs < rhs;
    };
    for (const auto& pt : pts) {
        while (hull.size() >= 2 && !cross_ok(hull[hull.size() - 2], hull.back(), pt)) hull.pop_back();
        hull.push_back(pt);
    }
    NewtonPolygon np;
    for (const auto& [s, v] : hull) np.vertices.push_back({s, Value(v)});
    for (std::size_t i = 1; i < hull.size(); ++i) {
        long len = hull[i].first - hull[i - 1].first;
        np.sides.push_back({Rational((hull[i].second - hull[i - 1].second) / len), len});
    }
    return np;
}

} // namespace mlv
