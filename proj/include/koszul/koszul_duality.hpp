#ifndef KOSZUL_KOSZUL_DUALITY_HPP
#define KOSZUL_KOSZUL_DUALITY_HPP

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "equivariant.hpp"
#include "errors.hpp"
#include "graded.hpp"
#include "kg_module.hpp"
#include "lie_algebra.hpp"
#include "monomials.hpp"
#include "transgression.hpp"
#include "twist.hpp"
#include "weil.hpp"

namespace koszul {

// The functor h ------------------------------------------------------------------------------

/// Λ[P] = Λ(ξ_1, ..., ξ_r) graded by Σ deg ξ_j; basis elements are index subsets J.
struct PrimitiveExterior {
    SpacePtr space;
    std::map<int, std::vector<LambdaMonomial>> basis;  // subsets J by degree

    std::size_t index(int degree, const LambdaMonomial& subset) const
    {
        const auto& list = basis.at(degree);
        for (std::size_t k = 0; k < list.size(); ++k)
            if (list[k] == subset)
                return k;
        throw BadIndex("subset is not a basis element of Λ[P]");
    }
};

inline PrimitiveExterior primitive_exterior(const std::vector<Primitive>& prims)
{
    PrimitiveExterior out;
    const std::size_t r = prims.size();
    int top = 0;
    for (std::size_t len = 0; len <= r; ++len) {
        for (const auto& subset : lambda_monomials(r, len)) {
            int deg = 0;
            for (auto j : subset)
                deg += prims[j].degree;
            out.basis[deg].push_back(subset);
            top = std::max(top, deg);
        }
    }
    std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(top + 1));
    for (const auto& [deg, subsets] : out.basis) {
        for (const auto& subset : subsets) {
            std::string label;
            for (auto j : subset)
                label += (label.empty() ? "" : "∧") + std::string("ξ") + std::to_string(j + 1);
            labels[static_cast<std::size_t>(deg)].push_back(label.empty() ? "1" : label);
        }
    }
    out.space = make_space(0, std::move(labels));
    return out;
}

/// ξ_J ↦ (−1)^{pos(j)} ξ_{J∖j} (zero if j ∉ J), of degree −deg ξ_j.
inline LinMap primitive_removal(const PrimitiveExterior& pe, const std::vector<Primitive>& prims, std::size_t j)
{
    LinMap out(pe.space, pe.space, -prims[j].degree);
    for (const auto& [deg, subsets] : pe.basis) {
        Matrix m(pe.space->dim(deg - prims[j].degree), subsets.size());
        for (std::size_t col = 0; col < subsets.size(); ++col) {
            const auto& subset = subsets[col];
            for (std::size_t pos = 0; pos < subset.size(); ++pos) {
                if (subset[pos] != j)
                    continue;
                LambdaMonomial rest = subset;
                rest.erase(rest.begin() + static_cast<long>(pos));
                m.add(pe.index(deg - prims[j].degree, rest), col, Rational(parity_sign(static_cast<long>(pos))));
            }
        }
        out.set_block(deg, std::move(m));
    }
    return out;
}

/// ξ_J ↦ (−1)^{|J|} ξ_J
inline LinMap primitive_parity(const PrimitiveExterior& pe)
{
    LinMap out(pe.space, pe.space, 0);
    for (const auto& [deg, subsets] : pe.basis) {
        Matrix m(subsets.size(), subsets.size());
        for (std::size_t col = 0; col < subsets.size(); ++col)
            m.add(col, col, Rational(parity_sign(static_cast<long>(subsets[col].size()))));
        out.set_block(deg, std::move(m));
    }
    return out;
}

/// h(A) = Λ[P] ⊗ A with
///   d_h(ξ_J ⊗ a) = Σ_j (−1)^{pos(j)} ξ_{J∖j} ⊗ ξ̃_j a + (−1)^{|J|} ξ_J ⊗ da,
/// in total degrees up to max_degree.
struct HComplex {
    Complex complex;
    PrimitiveExterior exterior;
    std::shared_ptr<TensorLayout> layout;
    bool d_squared_zero = true;
};

/// `xi_tilde_actions[j]` is the action of ξ̃_j on A, of degree deg ξ_j + 1.
inline HComplex h_of(const Complex& a, const std::vector<Primitive>& prims, const std::vector<LinMap>& xi_tilde_actions,
                     int max_degree)
{
    if (xi_tilde_actions.size() != prims.size())
        throw InvalidModule("h(A) needs the action of every ξ̃_j on A: got " +
                            std::to_string(xi_tilde_actions.size()) + " of " + std::to_string(prims.size()));
    for (std::size_t j = 0; j < prims.size(); ++j) {
        const LinMap& s = xi_tilde_actions[j];
        if (s.shift() != prims[j].degree + 1 || !same_dims(*s.source(), *a.space) || !same_dims(*s.target(), *a.space))
            throw InvalidModule("action of ξ̃" + std::to_string(j + 1) + " does not match A");
    }
    HComplex out;
    out.exterior = primitive_exterior(prims);
    out.layout = std::make_shared<TensorLayout>(out.exterior.space, a.space, max_degree);
    const LinMap id_a = LinMap::identity(a.space);
    LinMap d = tensor_operator(*out.layout, *out.layout, primitive_parity(out.exterior), a.d, plain_rule());
    for (std::size_t j = 0; j < prims.size(); ++j)
        d += tensor_operator(*out.layout, *out.layout, primitive_removal(out.exterior, prims, j), xi_tilde_actions[j],
                             plain_rule());
    const bool truncated = a.truncated || out.layout->space()->hi() < out.exterior.space->hi() + a.hi();
    out.complex = make_complex(out.layout->space(), std::move(d), truncated);
    const auto& c = out.complex;
    out.d_squared_zero =
        !first_difference(compose(c.d, c.d), LinMap(c.space, c.space, 2), c.lo(), c.exact_top() - 1);
    return out;
}

// ψ and the inclusion ------------------------------------------------------------------------

/// Ω_J = ω(ξ_{j1}) ··· ω(ξ_{jn}) in the fixed order of J.
inline WeilElement omega_product(const std::vector<WeilElement>& omegas, const LambdaMonomial& subset, std::size_t n)
{
    WeilElement out{{WeilMonomial{SymMonomial(n, 0), LambdaMonomial{}}, Rational(1)}};
    for (auto j : subset)
        out = weil_multiply(out, omegas[j]);
    return out;
}

/// ψ(ξ_J ⊗ a) = Ω_J · ψ₀(a) as a map h((M)_g) → W(g) ⊗ M.
inline LinMap build_psi(const HComplex& h, const std::vector<WeilElement>& omegas, const Psi0& psi0,
                        const WeilTensor& wt, const KgModule& m)
{
    const std::size_t n = wt.weil->algebra().dim();
    const TensorLayout& src = *h.layout;
    const auto& tgt = wt.module.space();
    // Ω_J · ψ₀ on each Cartan degree q, keyed by (|Ω_J|, index of J)
    std::map<std::pair<int, std::size_t>, LinMap> products;
    for (const auto& [deg, subsets] : h.exterior.basis) {
        for (std::size_t a = 0; a < subsets.size(); ++a) {
            const WeilElement omega = omega_product(omegas, subsets[a], n);
            products.emplace(std::make_pair(deg, a),
                             compose(weil_tensor_multiplication(wt, omega, deg, m), psi0.map));
        }
    }
    LinMap out(src.space(), tgt, 0);
    for (int t = src.space()->lo(); t <= src.space()->hi(); ++t) {
        if (!tgt->in_window(t))
            continue;
        Matrix block(tgt->dim(t), src.space()->dim(t));
        for (const auto& blk : src.blocks(t)) {
            const std::size_t da = src.right()->dim(blk.q);
            for (std::size_t a = 0; a < src.left()->dim(blk.p); ++a) {
                const Matrix& prod = products.at({blk.p, a}).block(blk.q);
                for (std::size_t r = 0; r < prod.rows(); ++r)
                    for (const auto& e : prod.row(r))
                        block.add(r, blk.offset + a * da + e.col, e.value);
            }
        }
        out.set_block(t, std::move(block));
    }
    return out;
}

/// m ↦ (1⊗1) ⊗ m as a map M → W(g) ⊗ M.
inline LinMap weil_unit_inclusion(const WeilTensor& wt, const KgModule& m)
{
    const auto& tgt = wt.module.space();
    LinMap out(m.space(), tgt, 0);
    for (int q = m.lo(); q <= m.hi(); ++q) {
        if (!tgt->in_window(q))
            continue;
        Matrix block(tgt->dim(q), m.space()->dim(q));
        for (std::size_t b = 0; b < m.space()->dim(q); ++b)
            block.add(*wt.layout->index(0, 0, q, b), b, 1);
        out.set_block(q, std::move(block));
    }
    return out;
}

/// i_x on Λ[P] ⊂ (Λ•g*)^g, written in the P-monomial basis. Throws NotInSubspace
/// if the image leaves the span of the P-monomials.
inline LinMap primitive_contraction(const PrimitiveExterior& pe, const std::vector<Primitive>& prims,
                                    const InvariantMultivector& x, std::size_t n)
{
    auto to_form = [&](const LambdaMonomial& subset) {
        LambdaElement f{{LambdaMonomial{}, Rational(1)}};
        for (auto j : subset)
            f = wedge(f, prims[j].element);
        return f;
    };
    LinMap out(pe.space, pe.space, -x.degree);
    for (const auto& [deg, subsets] : pe.basis) {
        const int tdeg = deg - x.degree;
        if (tdeg < 0)
            continue;
        const MonomialIndex<LambdaMonomial> basis(lambda_monomials(n, static_cast<std::size_t>(tdeg)));
        std::vector<Vector> images;
        for (const auto& subset : subsets) {
            LambdaElement img;
            for (const auto& [mono, c] : x.element) {
                LambdaElement t = to_form(subset);
                for (auto it = mono.rbegin(); it != mono.rend(); ++it)
                    t = contract(*it, t);
                add_scaled(img, t, c);
            }
            images.push_back(detail::from_lambda(img, basis));
        }
        const auto it = pe.basis.find(tdeg);
        std::vector<Vector> targets;
        if (it != pe.basis.end())
            for (const auto& subset : it->second)
                targets.push_back(detail::from_lambda(to_form(subset), basis));
        Matrix block(pe.space->dim(tdeg), subsets.size());
        if (targets.empty()) {
            for (const auto& v : images)
                if (!is_zero(v))
                    throw NotInSubspace("i_x of a P-monomial leaves Λ[P]");
        } else {
            const auto coords = solve_many(Matrix::from_columns(basis.size(), targets), images);
            std::vector<Vector> cols;
            for (const auto& c : coords) {
                if (!c)
                    throw NotInSubspace("i_x of a P-monomial leaves Λ[P]");
                cols.push_back(*c);
            }
            block = Matrix::from_columns(targets.size(), cols);
        }
        out.set_block(deg, std::move(block));
    }
    return out;
}

// Duality report ---------------------------------------------------------------------------------

struct PrimitiveRecord {
    int degree = 0;
    std::string xi;
    std::string omega;
    std::string xi_tilde;

    friend bool operator==(const PrimitiveRecord&, const PrimitiveRecord&) = default;
};

struct DualityReport {
    std::string algebra;
    std::string module;
    int max_degree = 0;
    bool corrupt = false;
    std::vector<PrimitiveRecord> primitives;

    bool d_h_squared_zero = true;
    bool psi_lands_in_invariants = true;
    ChainMapCheck psi_chain_map;  // against the full W(g) ⊗ M, defect in its basis labels
    QuasiIsoCheck psi_quasi_iso;  // h((M)_g) → (W(g)⊗M)^g
    ChainMapCheck inclusion_chain_map;
    QuasiIsoCheck inclusion_quasi_iso;  // (M)^g → (W(g)⊗M)^g
    bool contraction_compatible = true;
    std::string contraction_witness;

    std::map<int, std::size_t> betti_h;
    std::map<int, std::size_t> betti_weil_tensor;
    std::map<int, std::size_t> betti_invariants;

    bool verdict = false;

    friend bool operator==(const DualityReport&, const DualityReport&) = default;
};

/// Assembles h((M)_g), ψ and the inclusion and checks the zig-zag
/// (M)^g → (W(g)⊗M)^g ← h((M)_g) in degrees up to N − 1.
/// With `corrupt`, every ω(ξ) is replaced by the naive 1⊗ξ.
inline DualityReport verify_duality(const LieAlgebra& g, const KgModule& m, int max_degree, bool corrupt = false)
{
    if (max_degree < 1)
        throw WindowTooSmall("max degree must be at least 1");
    const std::size_t n = g.dim();
    const Truncation trunc{max_degree};
    DualityReport r;
    r.algebra = g.name();
    r.max_degree = max_degree;
    r.corrupt = corrupt;

    const TransgressionData td = transgression_data(g);
    std::vector<Primitive> prims;
    std::vector<WeilElement> omegas;
    const auto names = g.dual_labels();
    for (const auto& item : td.items) {
        prims.push_back(item.primitive);
        WeilElement omega = item.omega;
        if (corrupt) {
            omega.clear();
            for (const auto& [mono, c] : item.primitive.element)
                add_term(omega, WeilMonomial{SymMonomial(n, 0), mono}, c);
        }
        omegas.push_back(omega);
        r.primitives.push_back(
            {item.primitive.degree,
             format_comb(item.primitive.element, [&](const LambdaMonomial& w) { return lambda_label(w, names); }),
             td.weil->format(omega),
             format_comb(item.xi_tilde, [&](const SymMonomial& s) { return sym_label(s, names); })});
    }

    const CartanModel cm(g, m, max_degree);
    std::vector<LinMap> actions;
    for (const auto& item : td.items)
        actions.push_back(cm.s_action(item.xi_tilde, item.primitive.degree + 1));
    const HComplex h = h_of(cm.complex(), prims, actions, max_degree);
    r.d_h_squared_zero = h.d_squared_zero;

    const TwistOperators tw = twist_operators(g, m);
    const WeilTensor wt = weil_tensor(g, m, max_degree);
    const Psi0 psi0 = build_psi0(cm, tw, wt);
    const LinMap psi = build_psi(h, omegas, psi0, wt, m);
    const InvariantComplex target = invariant_subcomplex(wt.module, g, max_degree);
    const InvariantComplex source = invariant_subcomplex(m, g, max_degree);

    r.psi_chain_map = check_chain_map(psi, h.complex, wt.module.complex());
    try {
        const LinMap psi_inv = restrict_to_subcomplex(psi, target.sub);
        r.psi_quasi_iso = quasi_iso_check(psi_inv, h.complex, target.complex(), trunc);
    } catch (const NotInSubspace&) {
        r.psi_lands_in_invariants = false;
        r.psi_quasi_iso.pass = false;
        r.psi_quasi_iso.chain_map = r.psi_chain_map;
    }

    const LinMap incl = compose(weil_unit_inclusion(wt, m), embedding(source.sub));
    r.inclusion_chain_map = check_chain_map(incl, source.complex(), wt.module.complex());
    r.inclusion_quasi_iso =
        quasi_iso_check(restrict_to_subcomplex(incl, target.sub), source.complex(), target.complex(), trunc);

    // i_x ∘ ψ = ψ ∘ (i_x on the Λ[P] factor) for every invariant multivector x
    for (const auto& x : invariant_multivector_basis(g)) {
        std::optional<MapDifference> diff;
        try {
            const LinMap on_h = tensor_operator(*h.layout, *h.layout, primitive_contraction(h.exterior, prims, x, n),
                                                LinMap::identity(cm.complex().space), plain_rule());
            diff = first_difference(compose(multivector_contraction(wt.module, x.element, x.degree), psi),
                                    compose(psi, on_h), h.complex.lo(), h.complex.hi());
        } catch (const NotInSubspace& e) {
            r.contraction_compatible = false;
            if (r.contraction_witness.empty())
                r.contraction_witness = e.what();
            continue;
        }
        if (diff) {
            r.contraction_compatible = false;
            if (r.contraction_witness.empty())
                r.contraction_witness = "i_x∘ψ ≠ ψ∘i_x for an invariant multivector of degree " +
                                        std::to_string(x.degree) + " at degree " + std::to_string(diff->degree) +
                                        " on '" + h.complex.space->labels(diff->degree)[diff->column] + "'";
        }
    }

    r.betti_h = cohomology(h.complex, trunc).betti;
    r.betti_weil_tensor = cohomology(target.complex(), trunc).betti;
    r.betti_invariants = cohomology(source.complex(), trunc).betti;
    r.verdict = r.psi_lands_in_invariants && r.psi_chain_map.pass && r.psi_quasi_iso.pass &&
                r.inclusion_chain_map.pass && r.inclusion_quasi_iso.pass;
    return r;
}

inline nlohmann::json to_json(const DualityReport& r)
{
    nlohmann::json prims = nlohmann::json::array();
    for (const auto& p : r.primitives)
        prims.push_back({{"degree", p.degree}, {"xi", p.xi}, {"omega", p.omega}, {"xi_tilde", p.xi_tilde}});
    return {{"algebra", r.algebra},
            {"module", r.module},
            {"max_degree", r.max_degree},
            {"corrupt_transgression", r.corrupt},
            {"primitives", prims},
            {"d_h_squared_zero", r.d_h_squared_zero},
            {"psi",
             {{"lands_in_invariants", r.psi_lands_in_invariants},
              {"chain_map", to_json(r.psi_chain_map)},
              {"quasi_iso", to_json(r.psi_quasi_iso)}}},
            {"inclusion", {{"chain_map", to_json(r.inclusion_chain_map)}, {"quasi_iso", to_json(r.inclusion_quasi_iso)}}},
            {"contraction_compatible", r.contraction_compatible},
            {"contraction_witness", r.contraction_witness},
            {"betti",
             {{"h", degree_map_json(r.betti_h)},
              {"weil_tensor_invariants", degree_map_json(r.betti_weil_tensor)},
              {"invariants", degree_map_json(r.betti_invariants)}}},
            {"verdict", r.verdict ? "pass" : "fail"}};
}

inline DualityReport duality_report_from_json(const nlohmann::json& j)
{
    DualityReport r;
    r.algebra = j.at("algebra").get<std::string>();
    r.module = j.at("module").get<std::string>();
    r.max_degree = j.at("max_degree").get<int>();
    r.corrupt = j.at("corrupt_transgression").get<bool>();
    for (const auto& p : j.at("primitives"))
        r.primitives.push_back({p.at("degree").get<int>(), p.at("xi").get<std::string>(),
                                p.at("omega").get<std::string>(), p.at("xi_tilde").get<std::string>()});
    r.d_h_squared_zero = j.at("d_h_squared_zero").get<bool>();
    const auto& psi = j.at("psi");
    r.psi_lands_in_invariants = psi.at("lands_in_invariants").get<bool>();
    r.psi_chain_map = chain_map_check_from_json(psi.at("chain_map"));
    r.psi_quasi_iso = quasi_iso_check_from_json(psi.at("quasi_iso"));
    const auto& incl = j.at("inclusion");
    r.inclusion_chain_map = chain_map_check_from_json(incl.at("chain_map"));
    r.inclusion_quasi_iso = quasi_iso_check_from_json(incl.at("quasi_iso"));
    r.contraction_compatible = j.at("contraction_compatible").get<bool>();
    r.contraction_witness = j.at("contraction_witness").get<std::string>();
    const auto& betti = j.at("betti");
    r.betti_h = degree_map_from_json(betti.at("h"));
    r.betti_weil_tensor = degree_map_from_json(betti.at("weil_tensor_invariants"));
    r.betti_invariants = degree_map_from_json(betti.at("invariants"));
    r.verdict = j.at("verdict").get<std::string>() == "pass";
    return r;
}

}  // namespace koszul

#endif
