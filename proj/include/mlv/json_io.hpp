#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "chain.hpp"
#include "extend.hpp"
#include "limitfam.hpp"
#include "poly_parse.hpp"

namespace mlv::json_io {

using json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& at, const std::string& msg) {
    throw ParseError("at " + (at.empty() ? std::string("/") : at) + ": " + msg);
}

inline const json& field(const json& j, const std::string& key, const std::string& at) {
    if (!j.is_object()) fail(at, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(at, "missing key \"" + key + "\"");
    return *it;
}

inline std::string scalar_string(const json& j, const std::string& at) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(at, "expected a rational string or an integer");
}

// nested ParseErrors from the rational / poly parsers get the path prepended
template <class F>
auto at_path(const std::string& at, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& e) {
        std::string m = e.what();
        if (m.rfind("at ", 0) == 0) throw;
        fail(at, m);
    }
}

} // namespace detail

inline Rational rational_from_json(const json& j, const std::string& at = "") {
    std::string s = detail::scalar_string(j, at);
    return detail::at_path(at, [&] { return parse_rational(s); });
}

inline Value value_from_json(const json& j, const std::string& at = "") {
    std::string s = detail::scalar_string(j, at);
    return detail::at_path(at, [&] { return parse_value(s); });
}

inline json to_json(const Value& v) { return v.str(); }
inline json to_json(const Rational& q) { return q.get_str(); }

/// Coefficient array (ascending, rational strings) or the human syntax "x^2-7".
inline RationalPoly poly_from_json(const json& j, const std::string& at = "") {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        return detail::at_path(at, [&] { return parse_poly(s); });
    }
    if (!j.is_array()) detail::fail(at, "expected a coefficient array or a polynomial string");
    std::vector<Rational> cs;
    for (std::size_t i = 0; i < j.size(); ++i) cs.push_back(rational_from_json(j[i], at + "/" + std::to_string(i)));
    return RationalPoly(std::move(cs));
}

inline json to_json(const RationalPoly& f) {
    json a = json::array();
    for (long i = 0; i <= f.degree(); ++i) a.push_back(f.coeff(i).get_str());
    return a;
}

/// Poly argument from the command line: JSON if it looks like JSON, otherwise the human syntax.
inline RationalPoly poly_from_arg(const std::string& s) {
    std::size_t k = s.find_first_not_of(" \t\n");
    if (k != std::string::npos && (s[k] == '[' || s[k] == '"')) {
        json j;
        try {
            j = json::parse(s);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("poly: ") + e.what());
        }
        return poly_from_json(j, "poly");
    }
    return parse_poly(s);
}

inline ContinuousFamily family_from_json(const json& j, i64 p, const std::string& at) {
    const std::string kind = detail::field(j, "kind", at).is_string() ? j["kind"].get<std::string>() : "";
    auto opt_root = [&]() -> std::optional<i64> {
        if (!j.contains("root")) return std::nullopt;
        Rational r = rational_from_json(j["root"], at + "/root");
        if (!is_integer(r)) detail::fail(at + "/root", "root must be an integer");
        return r.get_num().get_si();
    };
    ContinuousFamily fam = [&] {
        if (kind == "digits") return digit_family(p, rational_from_json(detail::field(j, "theta", at), at + "/theta"));
        if (kind == "sqrt") return sqrt_family(p, rational_from_json(detail::field(j, "of", at), at + "/of"), opt_root());
        if (kind == "hensel") {
            auto r = opt_root();
            if (!r) detail::fail(at, "hensel family needs \"root\"");
            return hensel_family(p, poly_from_json(detail::field(j, "poly", at), at + "/poly"), *r);
        }
        detail::fail(at + "/kind", "unknown family kind '" + kind + "' (digits, sqrt, hensel)");
    }();
    if (j.contains("shift")) {
        if (!j["shift"].is_number_unsigned()) detail::fail(at + "/shift", "expected a non-negative integer");
        fam = fam.shifted(j["shift"].get<std::size_t>());
    }
    return fam;
}

inline json to_json(const ContinuousFamily& fam) {
    const FamilySpec& sp = fam.spec();
    if (sp.kind == "custom") throw DomainError(ErrorKind::InvalidArgument, "callback families cannot be serialized");
    json j;
    j["kind"] = sp.kind;
    for (const auto& [k, v] : sp.params) j[k] = v;
    if (sp.shift) j["shift"] = sp.shift;
    return j;
}

inline InductiveValuation chain_from_json(const json& j) {
    const json& pj = detail::field(j, "p", "");
    if (!pj.is_number_integer()) detail::fail("/p", "expected an integer");
    const i64 p = pj.get<i64>();
    if (!is_prime(p)) throw DomainError(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    DepthZero base{0, Value(0)};
    if (j.contains("base")) {
        base.a = rational_from_json(detail::field(j["base"], "a", "/base"), "/base/a");
        base.gamma = value_from_json(detail::field(j["base"], "gamma", "/base"), "/base/gamma");
    }
    std::vector<AugStep> steps;
    if (j.contains("steps")) {
        if (!j["steps"].is_array()) detail::fail("/steps", "expected an array");
        for (std::size_t i = 0; i < j["steps"].size(); ++i) {
            const std::string at = "/steps/" + std::to_string(i);
            const json& s = j["steps"][i];
            std::string kind = s.contains("kind") ? s["kind"].get<std::string>() : "ordinary";
            RationalPoly phi = poly_from_json(detail::field(s, "phi", at), at + "/phi");
            Value g = value_from_json(detail::field(s, "gamma", at), at + "/gamma");
            if (kind == "ordinary") {
                steps.push_back(AugStep::ordinary(std::move(phi), std::move(g)));
            } else if (kind == "limit") {
                auto fam = std::make_shared<const ContinuousFamily>(family_from_json(detail::field(s, "family", at), p, at + "/family"));
                steps.push_back(AugStep::limit(std::move(fam), std::move(phi), std::move(g)));
            } else {
                detail::fail(at + "/kind", "expected \"ordinary\" or \"limit\"");
            }
        }
    }
    return InductiveValuation(p, std::move(base), std::move(steps));
}

inline InductiveValuation chain_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("chain: ") + e.what());
    }
    return chain_from_json(j);
}

inline json to_json(const InductiveValuation& mu) {
    json j;
    j["p"] = mu.p();
    j["base"] = {{"a", mu.base().a.get_str()}, {"gamma", mu.base().gamma.str()}};
    json steps = json::array();
    for (const auto& st : mu.steps()) {
        json s;
        s["kind"] = to_string(st.kind);
        s["phi"] = to_json(st.phi);
        s["gamma"] = to_json(st.gamma);
        if (st.kind == StepKind::Limit) s["family"] = to_json(*st.family);
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    return j;
}

inline json to_json(const ResidualData& rd) {
    return json{{"value", rd.value.str()}, {"s0", rd.s0}, {"R", rd.R.str()}, {"R_raw", rd.R_raw.str()}, {"leading_unit", rd.leading_unit.str()}};
}

inline json to_json(const ChainInvariants& inv, const std::optional<DefectLedger>& led) {
    json j;
    json m = json::array(), gam = json::array(), grp = json::array(), kap = json::array();
    for (const auto& n : inv.nodes) {
        m.push_back(n.m);
        gam.push_back(n.gamma.str());
        grp.push_back(n.G.generator().get_str());
        kap.push_back(n.kappa.k());
    }
    j["m"] = m;
    j["e"] = inv.e;
    j["f"] = inv.f;
    json d = json::array();
    for (const auto& q : inv.d) d.push_back(q.get_str());
    j["d"] = d;
    j["gamma"] = gam;
    j["value_group"] = grp;
    j["kappa_degree"] = kap;
    json psi = json::array();
    for (const auto& s : inv.psi) psi.push_back(s.str());
    j["psi"] = psi;
    j["totals"] = {{"e", inv.e_total}, {"f", inv.f_total}, {"d", inv.d_total.get_str()}};
    if (led) j["defect_ledger"] = {{"e", led->e}, {"f", led->f}, {"d", led->d.get_str()}};
    return j;
}

inline json to_json(const GradedPresentation& gp) {
    auto gen = [](const GradedPresentation::Generator& g) {
        json j{{"name", g.name}, {"degree", g.degree.str()}};
        if (!g.relation.empty()) {
            j["e"] = g.e;
            j["relation"] = g.relation;
            j["normalizer"] = g.normalizer;
        } else {
            j["transcendental"] = true;
        }
        return j;
    };
    json j;
    j["p"] = gp.p;
    j["kappa_tower"] = gp.kappa_tower;
    json gs = json::array();
    for (const auto& g : gp.generators) gs.push_back(gen(g));
    j["generators"] = gs;
    j["transcendental"] = gp.transcendental ? gen(*gp.transcendental) : json(nullptr);
    return j;
}

inline json to_json(const ExtensionReport& rep) {
    json leaves = json::array();
    for (const auto& l : rep.leaves) {
        json s = json::array();
        for (const auto& q : l.slopes) s.push_back(q.get_str());
        json lj{{"e", l.e}, {"f", l.f}, {"exact", l.exact}, {"slopes", s}, {"chain", to_json(l.chain.chain)}};
        ExactChainResult ex = exact_chain(l, rep.F);
        if (!ex.digit_seed.empty()) lj["digit_seed"] = ex.digit_seed;
        leaves.push_back(std::move(lj));
    }
    return json{{"F", rep.F.str()}, {"p", rep.p}, {"leaves", leaves}, {"sum_ef", rep.sum_ef}};
}

} // namespace mlv::json_io
