#ifndef KOSZUL_CLI_HPP
#define KOSZUL_CLI_HPP

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "builtin_algebras.hpp"
#include "cohomology.hpp"
#include "equivariant.hpp"
#include "errors.hpp"
#include "kg_module.hpp"
#include "koszul_duality.hpp"
#include "lie_algebra.hpp"
#include "transgression.hpp"
#include "weil.hpp"

#ifndef KOSZUL_VERSION
#define KOSZUL_VERSION "unknown"
#endif

namespace koszul {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInputError = 2;

struct RunConfig {
    std::string command;
    std::string algebra = "su2";
    std::string module = "trivial";
    int max_degree = 8;
    std::string format = "text";
    std::string model = "plain";
    bool corrupt_transgression = false;
};

inline nlohmann::json to_json(const RunConfig& c)
{
    return {{"command", c.command},
            {"algebra", c.algebra},
            {"module", c.module},
            {"max_degree", c.max_degree},
            {"format", c.format},
            {"model", c.model},
            {"corrupt_transgression", c.corrupt_transgression}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j)
{
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.algebra = j.at("algebra").get<std::string>();
    c.module = j.at("module").get<std::string>();
    c.max_degree = j.at("max_degree").get<int>();
    c.format = j.at("format").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.corrupt_transgression = j.at("corrupt_transgression").get<bool>();
    return c;
}

/// Exception class name, used as the error kind in messages.
inline std::string error_kind(const std::exception& e)
{
#define KOSZUL_KIND(T)                      \
    if (dynamic_cast<const T*>(&e) != nullptr) \
        return #T;
    KOSZUL_KIND(ParseError)
    KOSZUL_KIND(DimensionMismatch)
    KOSZUL_KIND(BadIndex)
    KOSZUL_KIND(AntisymmetryViolation)
    KOSZUL_KIND(JacobiViolation)
    KOSZUL_KIND(NotReductive)
    KOSZUL_KIND(InvalidRepresentation)
    KOSZUL_KIND(InvalidModule)
    KOSZUL_KIND(WindowOverflow)
    KOSZUL_KIND(WindowTooSmall)
    KOSZUL_KIND(NotInSubspace)
    KOSZUL_KIND(InvalidBasis)
    KOSZUL_KIND(InconsistentSystem)
    KOSZUL_KIND(VerificationFailure)
#undef KOSZUL_KIND
    return "Error";
}

// Inputs ---------------------------------------------------------------------------------------

/// An existing file is loaded; otherwise a built-in name (su2, sl2, su2xsu2, abelian:n).
inline LieAlgebra load_algebra(const std::string& spec)
{
    if (std::filesystem::is_regular_file(spec))
        return load_lie_algebra_file(spec);
    if (is_builtin_algebra_name(spec))
        return builtin_algebra(spec);
    throw ParseError("'" + spec + "' is neither a readable file nor a built-in algebra (su2, sl2, su2xsu2, abelian:n)");
}

/// Factors joined by '*': trivial | exterior | forms:D | file:PATH.
/// forms:D is the slice of total polynomial degree D of the polynomial forms on g*
/// with g acting by the coadjoint action.
inline KgModule load_module(const std::string& spec, const LieAlgebra& g)
{
    if (spec.empty())
        throw ParseError("empty module spec");
    std::vector<std::string> factors;
    std::size_t start = 0;
    while (true) {
        const std::size_t star = spec.find('*', start);
        factors.push_back(spec.substr(start, star == std::string::npos ? std::string::npos : star - start));
        if (star == std::string::npos)
            break;
        start = star + 1;
    }
    std::optional<KgModule> out;
    for (const auto& f : factors) {
        KgModule m;
        if (f == "trivial") {
            m = trivial_module(g);
        } else if (f == "exterior") {
            m = exterior_model(g);
        } else if (f.rfind("forms:", 0) == 0) {
            const std::string d = f.substr(6);
            if (d.empty() || d.size() > 3 || d.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("bad polynomial degree in module spec '" + f + "'");
            m = polynomial_forms_module(g, adjoint_matrices(g).coad, std::stoi(d));
        } else if (f.rfind("file:", 0) == 0) {
            const std::string path = f.substr(5);
            m = kg_module_from_json(parse_json_text(read_file(path), path), g);
        } else {
            throw ParseError("unknown module factor '" + f + "' (expected trivial, exterior, forms:D or file:PATH)");
        }
        out = out ? tensor_module(*out, m) : m;
    }
    return *out;
}

// Commands ---------------------------------------------------------------------------------------

struct CommandResult {
    nlohmann::json report;
    std::string text;
    bool pass = true;
};

inline std::string betti_line(const std::map<int, std::size_t>& betti)
{
    std::string out;
    for (const auto& [d, b] : betti)
        out += (out.empty() ? "" : " ") + std::to_string(d) + ":" + std::to_string(b);
    return out.empty() ? "(none)" : out;
}

inline CommandResult cmd_validate(const RunConfig& c)
{
    CommandResult r;
    std::ostringstream text;
    nlohmann::json checks = nlohmann::json::array();
    auto record = [&](const std::string& name, bool passed, const std::string& witness) {
        checks.push_back({{"name", name}, {"passed", passed}, {"witness", witness}});
        text << (passed ? "PASS  " : "FAIL  ") << name << (witness.empty() ? "" : "  [" + witness + "]") << "\n";
        r.pass = r.pass && passed;
    };
    LieAlgebra g;
    try {
        g = load_algebra(c.algebra);
        record("antisymmetry and Jacobi identity", true, "");
    } catch (const AntisymmetryViolation& e) {
        record("antisymmetry and Jacobi identity", false, error_kind(e) + ": " + e.what());
    } catch (const JacobiViolation& e) {
        record("antisymmetry and Jacobi identity", false, error_kind(e) + ": " + e.what());
    }
    if (r.pass) {
        try {
            const auto dec = certify_reductive(g);
            record("reductive (dim z(g) = " + std::to_string(dec.center.size()) + ", dim [g,g] = " +
                       std::to_string(dec.derived.size()) + ")",
                   true, "");
        } catch (const NotReductive& e) {
            record("reductive", false, std::string("NotReductive: ") + e.what());
        }
        const KgModule m = load_module(c.module, g);
        for (const auto& check : validate_kg(m, g).checks)
            record(check.name, check.passed, check.witness);
    }
    r.report = {{"checks", checks}};
    r.text = text.str();
    return r;
}

inline void certify_or_throw(const LieAlgebra& g) { certify_reductive(g); }

inline CommandResult cmd_cohomology(const RunConfig& c)
{
    const LieAlgebra g = load_algebra(c.algebra);
    certify_or_throw(g);
    const KgModule m = load_module(c.module, g);
    const Truncation trunc{c.max_degree};
    CohomologyReport rep;
    if (c.model == "plain") {
        rep = cohomology(m.complex(), trunc);
    } else if (c.model == "invariant") {
        rep = cohomology(invariant_subcomplex(m, g, c.max_degree).sub, trunc);
    } else if (c.model == "cartan") {
        rep = cohomology(CartanModel(g, m, c.max_degree).sub(), trunc);
    } else {
        throw ParseError("unknown model '" + c.model + "' (expected plain, invariant or cartan)");
    }
    const std::map<std::string, std::string> names = {
        {"plain", "H(M)"}, {"invariant", "invariant cohomology H((M)^g)"}, {"cartan", "equivariant cohomology H((M)_g)"}};
    CommandResult r;
    r.report = {{"model", c.model}, {"name", names.at(c.model)}, {"cohomology", to_json(rep)}};
    std::ostringstream text;
    text << names.at(c.model) << " for " << g.name() << ", module " << c.module << ", degrees < " << c.max_degree
         << "\n";
    for (const auto& [d, b] : rep.betti) {
        text << "  H^" << d << " = " << b;
        const auto& reps = rep.representatives.at(d);
        for (std::size_t k = 0; k < reps.size(); ++k) {
            text << (k == 0 ? "   " : ", ") << "[";
            for (std::size_t t = 0; t < reps[k].size(); ++t)
                text << (t ? " + " : "") << to_string(reps[k][t].second) << "·" << reps[k][t].first;
            text << "]";
        }
        text << "\n";
    }
    for (const auto& [d, b] : rep.uncertified)
        text << "  H^" << d << " = " << b << " (uncertified: window edge)\n";
    r.text = text.str();
    return r;
}

inline CommandResult cmd_weil_check(const RunConfig& c)
{
    const LieAlgebra g = load_algebra(c.algebra);
    const WeilAlgebra w(g, c.max_degree);
    CommandResult r;
    std::ostringstream text;
    text << "Weil algebra of " << g.name() << " up to degree " << c.max_degree << "\n";
    nlohmann::json mc = nlohmann::json::array();
    const auto names = g.dual_labels();
    for (std::size_t k = 0; k < g.dim(); ++k) {
        const WeilElement res = maurer_cartan_residual(w, k);
        mc.push_back({{"generator", names[k]}, {"residual", w.format(res)}, {"zero", res.empty()}});
        text << "  d_W(1⊗" << names[k] << ") − 1⊗d_Λ" << names[k] << " − " << names[k] << "⊗1 = " << w.format(res)
             << "\n";
        r.pass = r.pass && res.empty();
    }
    const CohomologyReport rep = cohomology(w.module().complex(), Truncation{c.max_degree});
    bool acyclic = true;
    for (const auto& [d, b] : rep.betti)
        acyclic = acyclic && b == (d == 0 ? 1u : 0u);
    r.pass = r.pass && acyclic;
    text << "  H(W) " << betti_line(rep.betti) << (acyclic ? "  (acyclic)" : "  (NOT acyclic)") << "\n";
    r.report = {{"maurer_cartan", mc}, {"cohomology", to_json(rep)}, {"acyclic", acyclic}};
    r.text = text.str();
    return r;
}

inline CommandResult cmd_transgress(const RunConfig& c)
{
    const LieAlgebra g = load_algebra(c.algebra);
    certify_or_throw(g);
    const TransgressionData td = transgression_data(g);
    const auto names = g.dual_labels();
    auto lam = [&](const LambdaElement& x) {
        return format_comb(x, [&](const LambdaMonomial& w) { return lambda_label(w, names); });
    };
    auto sym = [&](const SymElement& x) {
        return format_comb(x, [&](const SymMonomial& s) { return sym_label(s, names); });
    };
    CommandResult r;
    std::ostringstream text;
    text << "Transgression for " << g.name() << "\n";
    nlohmann::json items = nlohmann::json::array();
    for (std::size_t k = 0; k < td.items.size(); ++k) {
        const auto& t = td.items[k];
        const TransgressionCheck chk = check_transgression(*td.weil, t.primitive.element, t.omega, t.xi_tilde);
        const bool ok = chk.all_passed() && t.unique_xi_tilde && t.permutation_invariant;
        r.pass = r.pass && ok;
        items.push_back({{"degree", t.primitive.degree},
                         {"xi", lam(t.primitive.element)},
                         {"omega", td.weil->format(t.omega)},
                         {"xi_tilde", sym(t.xi_tilde)},
                         {"restriction", chk.restriction},
                         {"contractions", chk.contractions},
                         {"differential", chk.differential},
                         {"invariant", chk.invariant},
                         {"unique_xi_tilde", t.unique_xi_tilde},
                         {"permutation_invariant", t.permutation_invariant}});
        text << "  ξ" << k + 1 << " (degree " << t.primitive.degree << ") = " << lam(t.primitive.element) << "\n"
             << "    ω  = " << td.weil->format(t.omega) << "\n"
             << "    ξ̃  = " << sym(t.xi_tilde) << "\n"
             << "    conditions " << (chk.all_passed() ? "hold" : "FAIL") << ", ξ̃ "
             << (t.unique_xi_tilde && t.permutation_invariant ? "unique" : "NOT unique") << "\n";
    }
    const GenerationCheck gen = verify_generation(g, td.items, c.max_degree);
    r.pass = r.pass && gen.passed;
    text << "  ξ̃ generate (S g*)^g up to degree " << c.max_degree << ": " << (gen.passed ? "yes" : "NO") << "\n";
    r.report = {{"primitives", items},
                {"generation",
                 {{"passed", gen.passed},
                  {"expected", degree_map_json(gen.expected)},
                  {"actual", degree_map_json(gen.actual)},
                  {"spanned", degree_map_json(gen.spanned)}}}};
    r.text = text.str();
    return r;
}

inline std::string duality_text(const DualityReport& d)
{
    std::ostringstream text;
    auto yes = [](bool b) { return b ? "pass" : "FAIL"; };
    text << "Koszul duality for " << d.algebra << ", module " << d.module << ", degrees < " << d.max_degree
         << (d.corrupt ? "  (corrupted transgression: ω(ξ) := 1⊗ξ)" : "") << "\n";
    for (std::size_t k = 0; k < d.primitives.size(); ++k) {
        const auto& p = d.primitives[k];
        text << "  ξ" << k + 1 << " (degree " << p.degree << ") = " << p.xi << "\n"
             << "    ω  = " << p.omega << "\n"
             << "    ξ̃  = " << p.xi_tilde << "\n";
    }
    text << "\n  degree | h((M)_g) | (W⊗M)^g | (M)^g\n";
    for (int m = 0; m < d.max_degree; ++m) {
        auto get = [&](const std::map<int, std::size_t>& b) {
            auto it = b.find(m);
            return it == b.end() ? std::string("-") : std::to_string(it->second);
        };
        if (!d.betti_h.count(m) && !d.betti_weil_tensor.count(m) && !d.betti_invariants.count(m))
            continue;
        text << "  " << std::setw(6) << m << " | " << std::setw(8) << get(d.betti_h) << " | " << std::setw(7)
             << get(d.betti_weil_tensor) << " | " << std::setw(5) << get(d.betti_invariants) << "\n";
    }
    text << "\n  d_h² = 0: " << yes(d.d_h_squared_zero) << "\n"
         << "  ψ lands in invariants: " << yes(d.psi_lands_in_invariants) << "\n"
         << "  ψ chain map: " << yes(d.psi_chain_map.pass) << "\n";
    if (!d.psi_chain_map.pass && d.psi_chain_map.degree) {
        text << "    defect at degree " << *d.psi_chain_map.degree << ", column " << *d.psi_chain_map.column << ":";
        for (const auto& [label, c] : d.psi_chain_map.defect)
            text << " " << (c < 0 ? "" : "+") << to_string(c) << "·(" << label << ")";
        text << "\n";
    }
    text << "  ψ quasi-isomorphism: " << yes(d.psi_quasi_iso.pass) << "\n"
         << "  inclusion chain map: " << yes(d.inclusion_chain_map.pass) << "\n"
         << "  inclusion quasi-isomorphism: " << yes(d.inclusion_quasi_iso.pass) << "\n"
         << "  ψ commutes with invariant contractions: " << yes(d.contraction_compatible) << "\n"
         << "  verdict: " << (d.verdict ? "pass" : "fail") << "\n";
    return text.str();
}

inline CommandResult cmd_duality(const RunConfig& c)
{
    const LieAlgebra g = load_algebra(c.algebra);
    certify_or_throw(g);
    const KgModule m = load_module(c.module, g);
    DualityReport d = verify_duality(g, m, c.max_degree, c.corrupt_transgression);
    d.module = c.module;
    CommandResult r;
    r.report = to_json(d);
    r.pass = d.verdict;
    r.text = duality_text(d);
    return r;
}

// Entry point ------------------------------------------------------------------------------------

/// The full JSON document written for a command run.
inline nlohmann::json report_document(const RunConfig& c, const CommandResult& r)
{
    return {{"tool", "koszul"},
            {"version", KOSZUL_VERSION},
            {"config", to_json(c)},
            {"status", r.pass ? "pass" : "fail"},
            {"report", r.report}};
}

/// Exit codes: 0 pass, 1 mathematical failure, 2 input error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact verification of Koszul duality for differential g-modules", "koszul_cli"};
    app.set_version_flag("--version", std::string(KOSZUL_VERSION));
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool with_module) {
        sub->add_option("--algebra", cfg.algebra, "Lie algebra JSON file or built-in name (su2, sl2, su2xsu2, abelian:n)")
            ->capture_default_str();
        if (with_module)
            sub->add_option("--module", cfg.module,
                            "Module: trivial | exterior | forms:D | file:PATH, factors joined by '*'")
                ->capture_default_str();
        sub->add_option("--max-degree", cfg.max_degree, "Window N; results are certified in degrees < N")
            ->check(CLI::Range(1, 64))
            ->capture_default_str();
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"json", "text"}))
            ->capture_default_str();
    };
    auto* validate = app.add_subcommand("validate", "Check the algebra and the K(g) identities of a module");
    common(validate, true);
    auto* coh = app.add_subcommand("cohomology", "Cohomology of a module, its invariants or its Cartan model");
    common(coh, true);
    coh->add_option("--model", cfg.model, "plain | invariant | cartan")
        ->check(CLI::IsMember({"plain", "invariant", "cartan"}))
        ->capture_default_str();
    auto* weil = app.add_subcommand("weil-check", "Maurer-Cartan residuals and acyclicity of W(g)");
    common(weil, false);
    auto* trans = app.add_subcommand("transgress", "Primitives and their distinguished transgressions");
    common(trans, false);
    auto* dual = app.add_subcommand("duality", "Verify h((M)_g) ≃ (M)^g through the explicit zig-zag");
    common(dual, true);
    dual->add_flag("--corrupt-transgression", cfg.corrupt_transgression, "Replace every ω(ξ) by 1⊗ξ");

    std::vector<const char*> argv{"koszul_cli"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInputError;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        CommandResult r;
        if (cfg.command == "validate")
            r = cmd_validate(cfg);
        else if (cfg.command == "cohomology")
            r = cmd_cohomology(cfg);
        else if (cfg.command == "weil-check")
            r = cmd_weil_check(cfg);
        else if (cfg.command == "transgress")
            r = cmd_transgress(cfg);
        else
            r = cmd_duality(cfg);
        if (cfg.format == "json")
            out << report_document(cfg, r).dump(2) << "\n";
        else
            out << "koszul " << KOSZUL_VERSION << "  " << cfg.command << "\n" << r.text;
        return r.pass ? kExitPass : kExitFail;
    } catch (const Error& e) {
        err << "error: " << error_kind(e) << ": " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace koszul

#endif
