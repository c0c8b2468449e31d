#ifndef KOSZUL_KG_MODULE_HPP
#define KOSZUL_KG_MODULE_HPP

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "errors.hpp"
#include "graded.hpp"
#include "lie_algebra.hpp"
#include "monomials.hpp"

namespace koszul {

/// An object of K(g): a complex with one degree -1 contraction per basis vector of g.
/// Lie derivatives are always derived as L_k = d i_k + i_k d.
///
/// For a truncated module the differential out of the top degree is missing, so
/// L_k is exact only up to exact_top().
class KgModule {
public:
    KgModule() = default;

    KgModule(Complex base, std::vector<LinMap> contractions)
        : base_(std::move(base)), contractions_(std::move(contractions))
    {
        for (const auto& i : contractions_) {
            if (i.shift() != -1 || !same_dims(*i.source(), *base_.space) || !same_dims(*i.target(), *base_.space))
                throw DimensionMismatch("contractions must be degree -1 endomorphisms");
        }
        for (const auto& i : contractions_)
            lie_.push_back(compose(base_.d, i) + compose(i, base_.d));
    }

    const Complex& complex() const { return base_; }
    const SpacePtr& space() const { return base_.space; }
    const LinMap& d() const { return base_.d; }
    const LinMap& contraction(std::size_t k) const { return contractions_.at(k); }
    const LinMap& lie_derivative(std::size_t k) const { return lie_.at(k); }
    const std::vector<LinMap>& contractions() const { return contractions_; }
    const std::vector<LinMap>& lie_derivatives() const { return lie_; }
    std::size_t lie_dim() const { return contractions_.size(); }

    int lo() const { return base_.lo(); }
    int hi() const { return base_.hi(); }
    bool truncated() const { return base_.truncated; }
    int exact_top() const { return base_.exact_top(); }

private:
    Complex base_;
    std::vector<LinMap> contractions_;
    std::vector<LinMap> lie_;
};

/// i_x for x = Σ c_J λ_{j1} ∧ ... ∧ λ_{jp}: the composite i_{j1} ∘ ... ∘ i_{jp}.
inline LinMap multivector_contraction(const KgModule& m, const LambdaElement& x, int degree)
{
    LinMap out(m.space(), m.space(), -degree);
    for (const auto& [mono, c] : x) {
        LinMap term = LinMap::identity(m.space());
        for (auto it = mono.rbegin(); it != mono.rend(); ++it)
            term = compose(m.contraction(*it), term);
        out += c * term;
    }
    return out;
}

// Validation -----------------------------------------------------------------------

struct IdentityCheck {
    std::string name;
    bool passed = true;
    std::string witness;
};

struct KgValidationReport {
    std::vector<IdentityCheck> checks;

    bool all_passed() const
    {
        for (const auto& c : checks) {
            if (!c.passed)
                return false;
        }
        return true;
    }
};

namespace detail {

inline std::string describe(const MapDifference& diff, const GradedSpace& space, const std::string& ops)
{
    const auto& labels = space.labels(diff.degree);
    const std::string basis = diff.column < labels.size() ? labels[diff.column] : std::to_string(diff.column);
    return ops + " on basis vector '" + basis + "' of degree " + std::to_string(diff.degree);
}

inline LinMap bracket_combination(const std::vector<LinMap>& ops, const LieAlgebra& g, std::size_t a, std::size_t b,
                                  const LinMap& zero)
{
    LinMap out = zero;
    for (const auto& t : g.bracket(a, b))
        out += t.c * ops[t.k];
    return out;
}

}  // namespace detail

/// Checks the defining identities on every basis vector of every degree where
/// the operators involved are exact:
///   d∘d = 0;  L_k = d i_k + i_k d;  i_j i_k = -i_k i_j;
///   [L_j, i_k] = i_[λ_k,λ_j];  [L_j, L_k] = L_[λ_k,λ_j].
/// The last two say L is a right action: with dλ^m = Σ_{i<j} c^m_ij λ^i∧λ^j on
/// the exterior model, this is the orientation the Lie derivative carries.
inline KgValidationReport validate_kg(const KgModule& m, const LieAlgebra& g)
{
    KgValidationReport report;
    const auto& space = *m.space();
    const int lo = m.lo();
    const int top = m.exact_top();
    const std::size_t n = g.dim();
    if (m.lie_dim() != n) {
        report.checks.push_back({"shape", false,
                                 "module has " + std::to_string(m.lie_dim()) + " contractions, g has dimension " +
                                     std::to_string(n)});
        return report;
    }

    auto record = [&](const std::string& name, const LinMap& a, const LinMap& b, int hi, const std::string& ops) {
        for (auto& c : report.checks) {
            if (c.name == name) {
                if (c.passed) {
                    if (auto diff = first_difference(a, b, lo, hi)) {
                        c.passed = false;
                        c.witness = detail::describe(*diff, space, ops);
                    }
                }
                return;
            }
        }
        IdentityCheck c{name, true, ""};
        if (auto diff = first_difference(a, b, lo, hi)) {
            c.passed = false;
            c.witness = detail::describe(*diff, space, ops);
        }
        report.checks.push_back(std::move(c));
    };

    const LinMap dd = compose(m.d(), m.d());
    record("d∘d = 0", dd, LinMap(m.space(), m.space(), 2), top - 1, "d∘d");

    const LinMap zero_i(m.space(), m.space(), -1);
    const LinMap zero_l(m.space(), m.space(), 0);
    const LinMap zero_ii(m.space(), m.space(), -2);
    for (std::size_t k = 0; k < n; ++k) {
        const LinMap formula = compose(m.d(), m.contraction(k)) + compose(m.contraction(k), m.d());
        record("L_k = d∘i_k + i_k∘d", m.lie_derivative(k), formula, top, "L_" + g.labels()[k]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            const LinMap anti = compose(m.contraction(j), m.contraction(k)) + compose(m.contraction(k), m.contraction(j));
            record("i_j∘i_k = -i_k∘i_j", anti, zero_ii, space.hi(),
                   "i_" + g.labels()[j] + " i_" + g.labels()[k] + " + i_" + g.labels()[k] + " i_" + g.labels()[j]);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const LinMap lhs = compose(m.lie_derivative(j), m.contraction(k)) - compose(m.contraction(k), m.lie_derivative(j));
            const LinMap rhs = detail::bracket_combination(m.contractions(), g, k, j, zero_i);
            record("[L_j, i_k] = i_[λ_k,λ_j]", lhs, rhs, top,
                   "[L_" + g.labels()[j] + ", i_" + g.labels()[k] + "]");
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const LinMap lhs = compose(m.lie_derivative(j), m.lie_derivative(k)) -
                               compose(m.lie_derivative(k), m.lie_derivative(j));
            const LinMap rhs = detail::bracket_combination(m.lie_derivatives(), g, k, j, zero_l);
            record("[L_j, L_k] = L_[λ_k,λ_j]", lhs, rhs, top,
                   "[L_" + g.labels()[j] + ", L_" + g.labels()[k] + "]");
        }
    }
    // Families with no pairs to check (dim g = 0 or 1) still appear in the report.
    for (const char* name : {"L_k = d∘i_k + i_k∘d", "i_j∘i_k = -i_k∘i_j", "[L_j, i_k] = i_[λ_k,λ_j]",
                             "[L_j, L_k] = L_[λ_k,λ_j]"}) {
        bool present = false;
        for (const auto& c : report.checks)
            present = present || c.name == name;
        if (!present)
            report.checks.push_back({name, true, ""});
    }
    return report;
}

// Constructors ------------------------------------------------------------------------

/// The ground field: Q in degree 0, d = 0, i = 0.
inline KgModule trivial_module(const LieAlgebra& g)
{
    auto space = make_space(0, {{"1"}});
    std::vector<LinMap> i(g.dim(), LinMap(space, space, -1));
    return KgModule(make_complex(space, LinMap(space, space, 1), false), std::move(i));
}

/// Basis of Λ^p g*, lexicographic, for p = 0..dim g.
inline std::vector<MonomialIndex<LambdaMonomial>> exterior_bases(std::size_t n)
{
    std::vector<MonomialIndex<LambdaMonomial>> out;
    for (std::size_t p = 0; p <= n; ++p)
        out.emplace_back(lambda_monomials(n, p));
    return out;
}

/// dλ^m = Σ_{i<j} c^m_ij λ^i ∧ λ^j
inline LambdaElement chevalley_eilenberg_generator(const LieAlgebra& g, std::size_t m)
{
    LambdaElement out;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j)
            add_term(out, LambdaMonomial{i, j}, g.c(i, j, m));
    return out;
}

/// d_Λ extended to λ^I as an odd derivation.
inline LambdaElement chevalley_eilenberg(const LieAlgebra& g, const LambdaMonomial& w)
{
    LambdaElement out;
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
        const LambdaMonomial before(w.begin(), w.begin() + static_cast<long>(pos));
        const LambdaMonomial after(w.begin() + static_cast<long>(pos) + 1, w.end());
        const LambdaElement dgen = chevalley_eilenberg_generator(g, w[pos]);
        const LambdaElement term = wedge(wedge(LambdaElement{{before, 1}}, dgen), LambdaElement{{after, 1}});
        add_scaled(out, term, Rational(parity_sign(static_cast<long>(pos))));
    }
    return out;
}

inline LambdaElement chevalley_eilenberg(const LieAlgebra& g, const LambdaElement& x)
{
    LambdaElement out;
    for (const auto& [m, c] : x)
        add_scaled(out, chevalley_eilenberg(g, m), c);
    return out;
}

/// Λ•g* with the Chevalley–Eilenberg differential and interior products.
inline KgModule exterior_model(const LieAlgebra& g)
{
    const std::size_t n = g.dim();
    const auto bases = exterior_bases(n);
    const auto names = g.dual_labels();
    std::vector<std::vector<std::string>> labels;
    for (const auto& b : bases) {
        std::vector<std::string> lab;
        for (const auto& w : b.keys())
            lab.push_back(lambda_label(w, names));
        labels.push_back(std::move(lab));
    }
    auto space = make_space(0, std::move(labels));
    LinMap d(space, space, 1);
    for (std::size_t p = 0; p < n; ++p) {
        Matrix m(bases[p + 1].size(), bases[p].size());
        for (std::size_t col = 0; col < bases[p].size(); ++col) {
            for (const auto& [w, c] : chevalley_eilenberg(g, bases[p].at(col)))
                m.add(bases[p + 1].index(w), col, c);
        }
        d.set_block(static_cast<int>(p), std::move(m));
    }
    std::vector<LinMap> contractions;
    for (std::size_t k = 0; k < n; ++k) {
        LinMap i(space, space, -1);
        for (std::size_t p = 1; p <= n; ++p) {
            Matrix m(bases[p - 1].size(), bases[p].size());
            for (std::size_t col = 0; col < bases[p].size(); ++col) {
                if (auto r = contract(k, bases[p].at(col)))
                    m.add(bases[p - 1].index(r->second), col, Rational(r->first));
            }
            i.set_block(static_cast<int>(p), std::move(m));
        }
        contractions.push_back(std::move(i));
    }
    return KgModule(make_complex(space, std::move(d), false), std::move(contractions));
}

/// V^g placed in degree `grade`, with d = 0 and i = 0.
inline KgModule invariant_rep_module(const LieAlgebra& g, const RepMatrices& rep, int grade)
{
    check_representation(g, rep);
    const auto inv = invariant_vectors(rep);
    std::vector<std::string> lab;
    for (std::size_t k = 0; k < inv.size(); ++k)
        lab.push_back("v" + std::to_string(k));
    auto space = make_space(grade, {lab});
    std::vector<LinMap> i(g.dim(), LinMap(space, space, -1));
    return KgModule(make_complex(space, LinMap(space, space, 1), false), std::move(i));
}

/// The representation of g on S^i g* induced by the coadjoint action (a right action).
inline RepMatrices symmetric_power_rep(const LieAlgebra& g, int i)
{
    const auto coad = adjoint_matrices(g).coad;
    const MonomialIndex<SymMonomial> basis(sym_monomials(g.dim(), i));
    RepMatrices rep;
    rep.orientation = Orientation::right;
    for (std::size_t k = 0; k < g.dim(); ++k) {
        const Matrix images = coad.ops[k].transpose();  // row v: ad*_k(λ^v)
        Matrix m(basis.size(), basis.size());
        for (std::size_t col = 0; col < basis.size(); ++col) {
            const SymMonomial& s = basis.at(col);
            for (std::size_t v = 0; v < s.size(); ++v) {
                if (s[v] == 0)
                    continue;
                SymMonomial rest = s;
                --rest[v];
                for (const auto& e : images.row(v)) {
                    SymMonomial t = rest;
                    ++t[e.col];
                    m.add(basis.index(t), col, Rational(s[v]) * e.value);
                }
            }
        }
        rep.ops.push_back(std::move(m));
    }
    return rep;
}

struct TensorWindow {
    int hi;
    bool truncated;
};

/// Top degree of A ⊗ B. If either factor is truncated the product is truncated
/// where the truncation first bites; `cap` truncates further.
inline TensorWindow tensor_window(const Complex& a, const Complex& b, std::optional<int> cap = std::nullopt)
{
    int hi = a.hi() + b.hi();
    bool truncated = false;
    if (a.truncated) {
        hi = std::min(hi, a.hi() + b.lo());
        truncated = true;
    }
    if (b.truncated) {
        hi = std::min(hi, b.hi() + a.lo());
        truncated = true;
    }
    if (cap && *cap < hi) {
        hi = *cap;
        truncated = true;
    }
    if (hi > kMaxAbsDegree || a.lo() + b.lo() < -kMaxAbsDegree)
        throw WindowOverflow("tensor product degrees exceed the supported range");
    return {hi, truncated};
}

/// M ⊗ N with Koszul signs: d(m⊗n) = dm⊗n + (-1)^{|m|} m⊗dn, likewise for i_k.
inline KgModule tensor_module(const KgModule& a, const KgModule& b, std::optional<int> cap = std::nullopt)
{
    if (a.lie_dim() != b.lie_dim())
        throw DimensionMismatch("tensor factors are modules over different Lie algebras");
    const auto [hi, truncated] = tensor_window(a.complex(), b.complex(), cap);
    const TensorLayout layout(a.space(), b.space(), hi);
    const LinMap id_a = LinMap::identity(a.space());
    const LinMap id_b = LinMap::identity(b.space());
    LinMap d = tensor_operator(layout, layout, a.d(), id_b, koszul_rule(0)) +
               tensor_operator(layout, layout, id_a, b.d(), koszul_rule(1));
    std::vector<LinMap> contractions;
    for (std::size_t k = 0; k < a.lie_dim(); ++k)
        contractions.push_back(tensor_operator(layout, layout, a.contraction(k), id_b, koszul_rule(0)) +
                               tensor_operator(layout, layout, id_a, b.contraction(k), koszul_rule(-1)));
    return KgModule(make_complex(layout.space(), std::move(d), truncated), std::move(contractions));
}

/// One homogeneous slice of the forms Ω(k[x_1..x_r]) with g acting on the
/// variables by `action` (a right action, e.g. the coadjoint one). Basis in form
/// degree p: f dx_I with deg f + p = poly_degree. d is de Rham, i_λ(x_a) = 0 and
/// i_λ(dx_a) = λ·x_a.
inline KgModule polynomial_forms_module(const LieAlgebra& g, const RepMatrices& action, int poly_degree,
                                        std::vector<std::string> variables = {})
{
    if (poly_degree < 0)
        throw InvalidRepresentation("polynomial degree must be nonnegative");
    check_representation(g, action);
    if (action.orientation != Orientation::right && !g.is_abelian())
        throw InvalidRepresentation("the variables must carry a right action (e.g. the coadjoint one)");
    const std::size_t r = action.space_dim();
    if (variables.empty())
        for (std::size_t a = 0; a < r; ++a)
            variables.push_back("x" + std::to_string(a + 1));
    if (variables.size() != r)
        throw InvalidRepresentation("variable name count does not match the representation");
    std::vector<std::string> dnames;
    for (const auto& v : variables)
        dnames.push_back("d" + v);

    const int top = std::min<int>(poly_degree, static_cast<int>(r));
    struct Slice {
        MonomialIndex<SymMonomial> coeffs;
        MonomialIndex<LambdaMonomial> forms;
        std::size_t index(std::size_t f, std::size_t w) const { return f * forms.size() + w; }
    };
    std::vector<Slice> slices;
    std::vector<std::vector<std::string>> labels;
    for (int p = 0; p <= top; ++p) {
        Slice s{MonomialIndex<SymMonomial>(sym_monomials(r, poly_degree - p)),
                MonomialIndex<LambdaMonomial>(lambda_monomials(r, static_cast<std::size_t>(p)))};
        std::vector<std::string> lab;
        for (const auto& f : s.coeffs.keys()) {
            for (const auto& w : s.forms.keys()) {
                const std::string fl = sym_label(f, variables);
                const std::string wl = lambda_label(w, dnames);
                lab.push_back(w.empty() ? fl : (fl == "1" ? wl : fl + " " + wl));
            }
        }
        labels.push_back(std::move(lab));
        slices.push_back(std::move(s));
    }
    auto space = make_space(0, std::move(labels));

    LinMap d(space, space, 1);
    for (int p = 0; p < top; ++p) {
        const auto& src = slices[static_cast<std::size_t>(p)];
        const auto& tgt = slices[static_cast<std::size_t>(p) + 1];
        Matrix m(space->dim(p + 1), space->dim(p));
        for (std::size_t fi = 0; fi < src.coeffs.size(); ++fi) {
            const SymMonomial& f = src.coeffs.at(fi);
            for (std::size_t wi = 0; wi < src.forms.size(); ++wi) {
                for (std::size_t a = 0; a < r; ++a) {
                    if (f[a] == 0)
                        continue;
                    auto w = wedge(LambdaMonomial{a}, src.forms.at(wi));
                    if (!w)
                        continue;
                    SymMonomial df = f;
                    --df[a];
                    m.add(tgt.index(tgt.coeffs.index(df), tgt.forms.index(w->second)), src.index(fi, wi),
                          Rational(f[a] * w->first));
                }
            }
        }
        d.set_block(p, std::move(m));
    }

    std::vector<LinMap> contractions;
    for (std::size_t k = 0; k < g.dim(); ++k) {
        const Matrix act_t = action.ops[k].transpose();  // row a: λ_k·x_a = Σ_b ρ_{ba} x_b
        LinMap i(space, space, -1);
        for (int p = 1; p <= top; ++p) {
            const auto& src = slices[static_cast<std::size_t>(p)];
            const auto& tgt = slices[static_cast<std::size_t>(p) - 1];
            Matrix m(space->dim(p - 1), space->dim(p));
            for (std::size_t fi = 0; fi < src.coeffs.size(); ++fi) {
                for (std::size_t wi = 0; wi < src.forms.size(); ++wi) {
                    const LambdaMonomial& w = src.forms.at(wi);
                    for (std::size_t pos = 0; pos < w.size(); ++pos) {
                        LambdaMonomial rest = w;
                        rest.erase(rest.begin() + static_cast<long>(pos));
                        const int sign = parity_sign(static_cast<long>(pos));
                        for (const auto& e : act_t.row(w[pos])) {
                            SymMonomial f = src.coeffs.at(fi);
                            ++f[e.col];
                            m.add(tgt.index(tgt.coeffs.index(f), tgt.forms.index(rest)), src.index(fi, wi),
                                  Rational(sign) * e.value);
                        }
                    }
                }
            }
            i.set_block(p, std::move(m));
        }
        contractions.push_back(std::move(i));
    }
    return KgModule(make_complex(space, std::move(d), false), std::move(contractions));
}

// Module files ---------------------------------------------------------------------------

/// {"degrees": {"0": [labels], ...},
///  "d": [{"deg": p, "src": j, "dst": i, "c": "p/q"}, ...],
///  "i": {"0": [entries], ...}}
/// An entry of d maps basis vector j of degree p to coefficient c on basis vector i
/// of degree p+1; entries of i_k go to degree p-1. The result is validated.
inline KgModule kg_module_from_json(const nlohmann::json& doc, const LieAlgebra& g)
{
    try {
        std::map<int, std::vector<std::string>> by_degree;
        for (const auto& [k, v] : doc.at("degrees").items())
            by_degree[std::stoi(k)] = v.get<std::vector<std::string>>();
        if (by_degree.empty())
            throw ParseError("module has no degrees");
        const int lo = by_degree.begin()->first;
        const int hi = by_degree.rbegin()->first;
        std::vector<std::vector<std::string>> labels;
        for (int m = lo; m <= hi; ++m)
            labels.push_back(by_degree.count(m) ? by_degree[m] : std::vector<std::string>{});
        auto space = make_space(lo, std::move(labels));

        auto read_map = [&](const nlohmann::json& entries, int shift) {
            LinMap out(space, space, shift);
            std::map<int, Matrix> blocks;
            for (const auto& e : entries) {
                const int deg = e.at("deg").get<int>();
                const auto src = e.at("src").get<std::size_t>();
                const auto dst = e.at("dst").get<std::size_t>();
                if (src >= space->dim(deg) || dst >= space->dim(deg + shift))
                    throw BadIndex("module entry at degree " + std::to_string(deg) + " out of range");
                auto it = blocks.try_emplace(deg, space->dim(deg + shift), space->dim(deg)).first;
                const auto& cj = e.at("c");
                it->second.add(dst, src, cj.is_string() ? parse_rational(cj.get<std::string>())
                                                        : Rational(cj.get<long long>()));
            }
            for (auto& [deg, m] : blocks)
                out.set_block(deg, std::move(m));
            return out;
        };

        LinMap d = read_map(doc.value("d", nlohmann::json::array()), 1);
        std::vector<LinMap> contractions(g.dim(), LinMap(space, space, -1));
        if (doc.contains("i")) {
            for (const auto& [k, entries] : doc.at("i").items()) {
                const auto idx = static_cast<std::size_t>(std::stoul(k));
                if (idx >= g.dim())
                    throw BadIndex("contraction index " + k + " out of range");
                contractions[idx] = read_map(entries, -1);
            }
        }
        KgModule m(make_complex(space, std::move(d), false), std::move(contractions));
        const auto report = validate_kg(m, g);
        for (const auto& c : report.checks) {
            if (!c.passed)
                throw InvalidModule("module violates " + c.name + ": " + c.witness);
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("module description: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ParseError("module description: degree keys must be integers");
    }
}

inline nlohmann::json kg_module_to_json(const KgModule& m)
{
    nlohmann::json degrees = nlohmann::json::object();
    for (int p = m.lo(); p <= m.hi(); ++p)
        degrees[std::to_string(p)] = m.space()->labels(p);
    auto entries = [&](const LinMap& f) {
        nlohmann::json out = nlohmann::json::array();
        for (int p = m.lo(); p <= m.hi(); ++p) {
            const Matrix& b = f.block(p);
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (const auto& e : b.row(r))
                    out.push_back({{"deg", p}, {"src", e.col}, {"dst", r}, {"c", to_string(e.value)}});
        }
        return out;
    };
    nlohmann::json i = nlohmann::json::object();
    for (std::size_t k = 0; k < m.lie_dim(); ++k)
        i[std::to_string(k)] = entries(m.contraction(k));
    return {{"degrees", degrees}, {"d", entries(m.d())}, {"i", i}};
}

}  // namespace koszul

#endif
