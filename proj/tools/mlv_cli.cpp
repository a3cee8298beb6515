#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mlv/json_io.hpp"
#include "mlv/mlv.hpp"

using namespace mlv;
using json_io::json;

namespace {

constexpr const char* kGrammar = R"(Polynomials: either a JSON coefficient array, ascending, of rational strings
(e.g. '["-7","0","1"]'), or the expression syntax
    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor | factor)*     '/' only by constants
    factor := ('+'|'-') factor | atom ('^' integer)?
    atom   := integer | 'x' | '(' expr ')'
e.g. "x^2-7", "(x+1)^2-2", "1/6*x+3", "2x^3-x".
Chains are JSON: {"p":7,"base":{"a":"0","gamma":"1/2"},"steps":[{"kind":"ordinary","phi":"x^2-7","gamma":"inf"}]}
Limit steps carry "family": {"kind":"sqrt","of":"2"} | {"kind":"digits","theta":"-1/6"} | {"kind":"hensel","poly":"x^3-2","root":"3"}.
Exit codes: 0 ok, 2 parse error, 3 domain error, 4 internal error.)";

std::string slurp(const std::string& arg) {
    std::size_t k = arg.find_first_not_of(" \t\n");
    if (k != std::string::npos && arg[k] == '{') return arg; // inline JSON
    std::ostringstream ss;
    if (arg == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(arg);
    if (!in) throw ParseError("cannot open '" + arg + "'");
    ss << in.rdbuf();
    return ss.str();
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

std::optional<DefectLedger> ledger_if_support(const MLVChain& c, const ChainInvariants& inv) {
    if (c.chain.last_gamma().is_finite()) return std::nullopt;
    return defect_ledger(c, inv);
}

json invariants_json(const MLVChain& c) {
    ResidualContext ctx(c.chain);
    ChainInvariants inv = invariants(c, ctx);
    return json_io::to_json(inv, ledger_if_support(c, inv));
}

// compressed, then validated
MLVChain canonical(const InductiveValuation& mu) { return validate(compress(mu)); }

json limit_demo(const json& spec) {
    const i64 p = spec.contains("p") ? spec["p"].get<i64>() : 7;
    const std::string theta = json_io::detail::scalar_string(json_io::detail::field(spec, "theta", ""), "/theta");
    const std::size_t budget = spec.contains("budget") ? spec["budget"].get<std::size_t>() : kDefaultBudget;
    std::optional<ContinuousFamily> fam;
    std::optional<RationalPoly> minpoly;
    if (theta == "sqrt") {
        Rational D = json_io::rational_from_json(json_io::detail::field(spec, "of", ""), "/of");
        std::optional<i64> r0;
        if (spec.contains("root")) r0 = json_io::rational_from_json(spec["root"], "/root").get_num().get_si();
        fam = sqrt_family(p, D, r0);
        minpoly = RationalPoly(std::vector<Rational>{Rational(-D), 0, 1});
    } else if (theta == "hensel") {
        minpoly = json_io::poly_from_json(json_io::detail::field(spec, "poly", ""), "/poly");
        fam = hensel_family(p, *minpoly, json_io::rational_from_json(json_io::detail::field(spec, "root", ""), "/root").get_num().get_si());
    } else {
        Rational t = json_io::rational_from_json(spec["theta"], "/theta");
        fam = digit_family(p, t);
        minpoly = RationalPoly::linear(t);
    }
    // stable degree-1 probes first, then the defining polynomial
    std::vector<RationalPoly> cand;
    if (minpoly->degree() > 1) {
        cand.push_back(RationalPoly::x());
        cand.push_back(fam->member(1).first);
    }
    cand.push_back(*minpoly);
    Classification cl = classify(*fam, cand, budget);
    json out{{"p", p}, {"family", json_io::to_json(*fam)}, {"classification", to_string(cl.kind)}};
    if (cl.kind == Classification::Kind::Inessential) {
        out["witness"] = cl.poly.str();
    } else if (cl.kind == Classification::Kind::EssentialWith) {
        out["limit_key"] = cl.poly.str();
        auto fp = std::make_shared<const ContinuousFamily>(*fam);
        MLVChain c = validate(InductiveValuation(p, DepthZero{0, Value(0)}, {AugStep::limit(fp, cl.poly, Value::infinity())}));
        out["chain"] = json_io::to_json(c.chain);
        out["depth"] = c.chain.depth();
        out["invariants"] = invariants_json(c);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MacLane–Vaquié inductive valuations over Q with ord_p"};
    app.footer(kGrammar);
    app.require_subcommand(1);
    app.fallthrough(); // --seed may follow the subcommand
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for randomized finite-field factorization")->capture_default_str();

    std::string chain_arg, poly_arg, spec_arg;
    long p = 0;
    std::size_t budget = kDefaultBudget;

    auto* eval = app.add_subcommand("eval", "value of a polynomial under a chain");
    eval->add_option("--chain", chain_arg, "chain JSON file, '-' for stdin, or inline JSON")->required();
    eval->add_option("--poly", poly_arg, "polynomial")->required();
    eval->add_option("--budget", budget, "stability budget for limit steps")->capture_default_str();

    auto* ext = app.add_subcommand("extend", "all extensions of ord_p to Q[x]/(F)");
    ext->add_option("--poly", poly_arg, "monic squarefree integer polynomial F")->required();
    ext->add_option("--p", p, "prime")->required();

    auto* inv = app.add_subcommand("chain-invariants", "m, e, f, d per node and the defect ledger");
    inv->add_option("--chain", chain_arg, "chain")->required();

    auto* gr = app.add_subcommand("graded", "graded-algebra presentation");
    gr->add_option("--chain", chain_arg, "chain")->required();

    auto* key = app.add_subcommand("is-key", "key polynomial test");
    key->add_option("--chain", chain_arg, "chain")->required();
    key->add_option("--poly", poly_arg, "candidate")->required();

    auto* res = app.add_subcommand("residual", "residual polynomial data");
    res->add_option("--chain", chain_arg, "chain")->required();
    res->add_option("--poly", poly_arg, "polynomial")->required();

    auto* demo = app.add_subcommand("limit-demo", "digit-family classification");
    demo->add_option("--spec", spec_arg, R"(e.g. '{"p":7,"theta":"sqrt","of":"2"}' or '{"p":7,"theta":"-1/6"}')")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    default_factor_seed().store(seed);

    try {
        if (*eval) {
            InductiveValuation mu = json_io::chain_from_string(slurp(chain_arg));
            RationalPoly f = json_io::poly_from_arg(poly_arg);
            emit(json{{"value", limit_eval(mu, f, budget).str()}});
        } else if (*ext) {
            emit(json_io::to_json(extensions(json_io::poly_from_arg(poly_arg), p)));
        } else if (*inv) {
            emit(invariants_json(canonical(json_io::chain_from_string(slurp(chain_arg)))));
        } else if (*gr) {
            emit(json_io::to_json(graded_presentation(canonical(json_io::chain_from_string(slurp(chain_arg))))));
        } else if (*key) {
            InductiveValuation mu = json_io::chain_from_string(slurp(chain_arg));
            emit(json{{"is_key", is_key(mu, json_io::poly_from_arg(poly_arg))}});
        } else if (*res) {
            InductiveValuation mu = json_io::chain_from_string(slurp(chain_arg));
            emit(json_io::to_json(residual(mu, json_io::poly_from_arg(poly_arg))));
        } else if (*demo) {
            json spec;
            try {
                spec = json::parse(slurp(spec_arg));
            } catch (const json::parse_error& e) {
                throw ParseError(std::string("spec: ") + e.what());
            }
            emit(limit_demo(spec));
        }
    } catch (const ParseError& e) {
        std::cerr << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return 4;
    }
    return 0;
}
