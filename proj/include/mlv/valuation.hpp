#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poly.hpp"
#include "value.hpp"

namespace mlv {

inline constexpr std::size_t kDefaultBudget = 48;

struct DepthZero {
    Rational a = 0;
    Value gamma = Value(0);
};

enum class StepKind { Ordinary, Limit };

inline const char* to_string(StepKind k) { return k == StepKind::Ordinary ? "ordinary" : "limit"; }

class ContinuousFamily;
using FamilyPtr = std::shared_ptr<const ContinuousFamily>;

struct AugStep {
    StepKind kind = StepKind::Ordinary;
    RationalPoly phi;
    Value gamma;
    FamilyPtr family; // Limit only

    static AugStep ordinary(RationalPoly phi, Value gamma) { return {StepKind::Ordinary, std::move(phi), std::move(gamma), nullptr}; }
    static AugStep limit(FamilyPtr fam, RationalPoly phi, Value gamma) {
        return {StepKind::Limit, std::move(phi), std::move(gamma), std::move(fam)};
    }
};

class InductiveValuation {
public:
    InductiveValuation() = default;
    InductiveValuation(i64 p, DepthZero base, std::vector<AugStep> steps = {}) : p_(p), base_(std::move(base)), steps_(std::move(steps)) {
        if (!is_prime(p_)) throw DomainError(ErrorKind::NotPrime, std::to_string(p_) + " is not prime");
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            const auto& s = steps_[i];
            if (!s.phi.is_monic()) throw DomainError(ErrorKind::NotMonic, "key of step " + std::to_string(i + 1) + " is not monic");
            if (s.kind == StepKind::Limit && !s.family) throw DomainError(ErrorKind::InvalidArgument, "limit step without family");
        }
    }

    static InductiveValuation gauss(i64 p) { return InductiveValuation(p, DepthZero{0, Value(0)}); }
    static InductiveValuation depth_zero(i64 p, const Rational& a, const Value& g) { return InductiveValuation(p, DepthZero{a, g}); }

    i64 p() const { return p_; }
    const DepthZero& base() const { return base_; }
    const std::vector<AugStep>& steps() const { return steps_; }
    std::size_t depth() const { return steps_.size(); }

    // node 0 is the depth-zero valuation, node n the result of step n
    RationalPoly key(std::size_t node) const { return node == 0 ? RationalPoly::linear(base_.a) : steps_[node - 1].phi; }
    const Value& gamma(std::size_t node) const { return node == 0 ? base_.gamma : steps_[node - 1].gamma; }
    long degree(std::size_t node) const { return key(node).degree(); }
    StepKind kind(std::size_t node) const { return node == 0 ? StepKind::Ordinary : steps_[node - 1].kind; }

    RationalPoly last_key() const { return key(depth()); }
    const Value& last_gamma() const { return gamma(depth()); }
    long deg() const { return degree(depth()); }
    bool residually_transcendental() const { return last_gamma().is_finite(); }

    InductiveValuation prefix(std::size_t nodes_kept) const {
        return InductiveValuation(p_, base_, std::vector<AugStep>(steps_.begin(), steps_.begin() + static_cast<long>(nodes_kept)));
    }
    InductiveValuation augment(AugStep s) const {
        auto st = steps_;
        st.push_back(std::move(s));
        return InductiveValuation(p_, base_, std::move(st));
    }
    InductiveValuation augment(const RationalPoly& phi, const Value& g) const { return augment(AugStep::ordinary(phi, g)); }

    Value eval(const RationalPoly& f) const { return eval_at(depth(), f); }
    Value operator()(const RationalPoly& f) const { return eval(f); }
    Value eval_at(std::size_t node, const RationalPoly& f) const;

    std::string str() const;

private:
    i64 p_ = 2;
    DepthZero base_;
    std::vector<AugStep> steps_;
};

struct StabilityReport {
    bool stable = false;
    Value value;                // Stable
    std::size_t index = 0;      // Stable: ρ_index(f) = ρ_{index+1}(f)
    std::size_t budget = 0;     // UnstableWithin
    std::vector<Value> values;  // ρ_1(f), ρ_2(f), ... as computed
};

struct FamilySpec {
    std::string kind; // "digits", "hensel", "custom"
    std::vector<std::pair<std::string, std::string>> params;
    std::size_t shift = 0;
};

/// i ↦ (χ_i, β_i), i ≥ 1, over a base valuation; ρ_i = [base; χ_i, β_i].
class ContinuousFamily {
public:
    using Stream = std::function<std::pair<RationalPoly, Value>(std::size_t)>;

    ContinuousFamily(InductiveValuation base, Stream stream, FamilySpec spec = {}, std::size_t budget = kDefaultBudget)
        : base_(std::move(base)), stream_(std::move(stream)), spec_(std::move(spec)), budget_(budget), cache_(std::make_shared<Cache>()) {}

    const InductiveValuation& base() const { return base_; }
    const FamilySpec& spec() const { return spec_; }
    std::size_t default_budget() const { return budget_; }
    long stable_degree() const { return member(1).first.degree(); }

    const std::pair<RationalPoly, Value>& member(std::size_t i) const {
        MLV_ASSERT(i >= 1, "family indices start at 1");
        std::lock_guard<std::mutex> lk(cache_->m);
        while (cache_->members.size() < i) {
            auto mbr = stream_(cache_->members.size() + 1);
            if (!mbr.first.is_monic()) throw DomainError(ErrorKind::NotMonic, "family member is not monic");
            if (!cache_->members.empty()) {
                const auto& prev = cache_->members.back();
                if (mbr.first.degree() != prev.first.degree())
                    throw DomainError(ErrorKind::InvalidArgument, "family members have different degrees");
                if (!(prev.second < mbr.second)) throw DomainError(ErrorKind::InvalidArgument, "family values are not strictly increasing");
            }
            cache_->members.push_back(std::move(mbr));
        }
        return cache_->members[i - 1];
    }

    InductiveValuation rho(std::size_t i) const {
        const auto& [chi, beta] = member(i);
        return base_.augment(chi, beta);
    }
    Value rho_eval(std::size_t i, const RationalPoly& f) const { return rho(i).eval(f); }

    StabilityReport stable_value(const RationalPoly& f, std::size_t budget) const {
        StabilityReport rep;
        rep.budget = budget;
        if (f.is_zero()) {
            rep.stable = true;
            rep.value = Value::infinity();
            rep.index = 1;
            return rep;
        }
        if (f.degree() < stable_degree()) {
            // below the stable degree every ρ_i agrees with the base
            rep.stable = true;
            rep.value = base_.eval(f);
            rep.index = 1;
            rep.values = {rep.value, rep.value};
            return rep;
        }
        rep.values.push_back(rho_eval(1, f));
        for (std::size_t i = 1; i < budget; ++i) {
            rep.values.push_back(rho_eval(i + 1, f));
            if (rep.values[i] == rep.values[i - 1]) {
                rep.stable = true;
                rep.value = rep.values[i];
                rep.index = i;
                return rep;
            }
        }
        return rep;
    }
    StabilityReport stable_value(const RationalPoly& f) const { return stable_value(f, budget_); }

    ContinuousFamily shifted(std::size_t k) const {
        Stream s = [fam = *this, k](std::size_t i) { return fam.member(i + k); };
        FamilySpec sp = spec_;
        sp.shift += k;
        return ContinuousFamily(base_, std::move(s), std::move(sp), budget_);
    }
    ContinuousFamily with_budget(std::size_t b) const {
        ContinuousFamily r = *this;
        r.budget_ = b;
        return r;
    }
    ContinuousFamily rebased(InductiveValuation b) const {
        ContinuousFamily r = *this;
        r.base_ = std::move(b);
        return r;
    }

private:
    struct Cache {
        std::mutex m;
        std::deque<std::pair<RationalPoly, Value>> members; // deque: references survive appends
    };
    InductiveValuation base_;
    Stream stream_;
    FamilySpec spec_;
    std::size_t budget_;
    std::shared_ptr<Cache> cache_;
};

inline Value InductiveValuation::eval_at(std::size_t node, const RationalPoly& f) const {
    if (f.is_zero()) return Value::infinity();
    if (node == 0) {
        RationalPoly g = f.taylor_shift(base_.a);
        const auto& c = g.coeffs();
        if (base_.gamma.is_infinite()) {
            if (c[0] == 0) return Value::infinity();
            return Value(Rational(ord_p(c[0], p_)));
        }
        Value best = Value::infinity();
        for (std::size_t s = 0; s < c.size(); ++s) {
            if (c[s] == 0) continue;
            Value v = Value(Rational(ord_p(c[s], p_))) + Value(Rational(base_.gamma.rational() * static_cast<long>(s)));
            best = value_min(best, v);
        }
        return best;
    }
    const AugStep& st = steps_[node - 1];
    auto coeff_value = [&](const RationalPoly& a, std::size_t s) -> Value {
        if (a.is_zero()) return Value::infinity();
        if (st.kind == StepKind::Ordinary) return eval_at(node - 1, a);
        auto rep = st.family->stable_value(a);
        if (!rep.stable)
            throw DomainError(ErrorKind::UnstableCoefficient,
                              "coefficient a_" + std::to_string(s) + " = " + a.str() + " did not stabilize within " + std::to_string(rep.budget));
        return rep.value;
    };
    if (f.degree() < st.phi.degree()) return coeff_value(f, 0);
    auto a = phi_expand(f, st.phi);
    if (st.gamma.is_infinite()) return coeff_value(a[0], 0);
    Value best = Value::infinity();
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].is_zero()) continue;
        best = value_min(best, coeff_value(a[s], s) + Value(Rational(st.gamma.rational() * static_cast<long>(s))));
    }
    return best;
}

inline std::string InductiveValuation::str() const {
    std::string s = "[p=" + std::to_string(p_) + "; w(" + base_.a.get_str() + "," + base_.gamma.str() + ")";
    for (const auto& st : steps_)
        s += std::string(st.kind == StepKind::Limit ? " =lim=> " : " -> ") + "(" + st.phi.str() + "," + st.gamma.str() + ")";
    return s + "]";
}

/// Γ_n for every node: Γ_{-1} = Z, Γ_n = ⟨Γ_{n-1}, γ_n⟩.
inline std::vector<ValueGroup> value_groups(const InductiveValuation& mu) {
    std::vector<ValueGroup> g;
    ValueGroup cur = ValueGroup::integers();
    for (std::size_t n = 0; n <= mu.depth(); ++n) {
        cur = group_join(cur, mu.gamma(n));
        g.push_back(cur);
    }
    return g;
}

inline ValueGroup value_group(const InductiveValuation& mu) { return value_groups(mu).back(); }

/// (Γ_n : Γ_{n-1}) at a node with finite γ_n.
inline std::int64_t node_e(const InductiveValuation& mu, std::size_t n) {
    if (mu.gamma(n).is_infinite()) throw DomainError(ErrorKind::NotResiduallyTranscendental, "node " + std::to_string(n) + " has γ = ∞");
    auto g = value_groups(mu);
    ValueGroup prev = n == 0 ? ValueGroup::integers() : g[n - 1];
    return group_index(prev, g[n]);
}

inline std::int64_t e_rel(const InductiveValuation& mu) {
    if (!mu.residually_transcendental()) throw DomainError(ErrorKind::NotResiduallyTranscendental, "last γ is ∞");
    return node_e(mu, mu.depth());
}

/// f ~_μ g  ⟺  μ(f−g) > μ(f)
inline bool equiv(const InductiveValuation& mu, const RationalPoly& f, const RationalPoly& g) {
    if (f.is_zero() || g.is_zero()) throw DomainError(ErrorKind::ZeroPolynomial, "equivalence of zero");
    return mu.eval(f) < mu.eval(f - g);
}

/// χ |_μ f, decided through the probe [μ; χ, μ(χ)+1].
inline bool divides_probe(const InductiveValuation& mu, const RationalPoly& chi, const RationalPoly& f) {
    Value vc = mu.eval(chi);
    if (vc.is_infinite()) throw DomainError(ErrorKind::InvalidArgument, "probe key has infinite value");
    InductiveValuation probe = mu.augment(chi, vc + Value(1));
    return mu.eval(f) < probe.eval(f);
}

} // namespace mlv
