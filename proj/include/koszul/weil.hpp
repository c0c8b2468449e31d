#ifndef KOSZUL_WEIL_HPP
#define KOSZUL_WEIL_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "errors.hpp"
#include "graded.hpp"
#include "kg_module.hpp"
#include "lie_algebra.hpp"
#include "monomials.hpp"

namespace koszul {

/// s ⊗ w in S•g* ⊗ Λ•g*; degree 2|s| + |w|.
using WeilMonomial = std::pair<SymMonomial, LambdaMonomial>;
using WeilElement = LinComb<WeilMonomial>;

inline int weil_degree(const WeilMonomial& m) { return 2 * sym_degree(m.first) + static_cast<int>(m.second.size()); }

/// (s⊗w)(s'⊗w') = ss' ⊗ w∧w'. S is concentrated in even degrees, so no sign arises.
inline WeilElement weil_multiply(const WeilElement& a, const WeilElement& b)
{
    WeilElement out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            auto w = wedge(ma.second, mb.second);
            if (!w)
                continue;
            add_term(out, WeilMonomial{sym_multiply(ma.first, mb.first), w->second}, ca * cb * Rational(w->first));
        }
    }
    return out;
}

/// The coadjoint derivation ad*_k on S•g*.
inline SymElement coadjoint_on_sym(const Matrix& coad_k, const SymMonomial& s)
{
    SymElement out;
    const Matrix image = coad_k;  // column v is ad*_k(λ^v)
    for (std::size_t v = 0; v < s.size(); ++v) {
        if (s[v] == 0)
            continue;
        SymMonomial rest = s;
        --rest[v];
        for (std::size_t r = 0; r < image.rows(); ++r) {
            const Rational c = image.get(r, v);
            if (c == 0)
                continue;
            SymMonomial t = rest;
            ++t[r];
            add_term(out, t, Rational(s[v]) * c);
        }
    }
    return out;
}

/// Basis of (S^i g*)^g as columns in the sym_monomials(n, i) basis.
inline Matrix invariant_polynomials(const LieAlgebra& g, int i)
{
    const RepMatrices rep = symmetric_power_rep(g, i);
    const auto inv = invariant_vectors(rep);
    return Matrix::from_columns(sym_monomials(g.dim(), i).size(), inv);
}

/// W(g) = S•g* ⊗ Λ•g* materialized in total degrees 0..max_degree. Within a
/// degree the basis is ordered by S-degree, then symmetric monomial, then
/// exterior monomial.
class WeilAlgebra {
public:
    WeilAlgebra(const LieAlgebra& g, int max_degree) : g_(g), max_degree_(max_degree)
    {
        if (max_degree < 0)
            throw WindowTooSmall("Weil algebra needs a nonnegative maximal degree");
        if (max_degree > kMaxAbsDegree)
            throw WindowOverflow("Weil algebra degree exceeds the supported range");
        const std::size_t n = g.dim();
        const auto sym_names = g.dual_labels();
        coad_ = adjoint_matrices(g).coad.ops;
        std::vector<std::vector<std::string>> labels;
        for (int t = 0; t <= max_degree; ++t) {
            std::vector<WeilMonomial> keys;
            std::vector<std::string> lab;
            for (int i = 0; 2 * i <= t; ++i) {
                const auto p = static_cast<std::size_t>(t - 2 * i);
                if (p > n)
                    continue;
                for (const auto& s : sym_monomials(n, i)) {
                    for (const auto& w : lambda_monomials(n, p)) {
                        keys.emplace_back(s, w);
                        lab.push_back(sym_label(s, sym_names) + " ⊗ " + lambda_label(w, sym_names));
                    }
                }
            }
            bases_.emplace_back(std::move(keys));
            labels.push_back(std::move(lab));
        }
        space_ = make_space(0, std::move(labels));

        LinMap d(space_, space_, 1);
        for (int t = 0; t < max_degree; ++t)
            d.set_block(t, operator_block(t, 1, [&](const WeilMonomial& m) { return differential(m); }));
        std::vector<LinMap> contractions;
        for (std::size_t k = 0; k < n; ++k) {
            LinMap i(space_, space_, -1);
            for (int t = 1; t <= max_degree; ++t)
                i.set_block(t, operator_block(t, -1, [&](const WeilMonomial& m) { return contraction(k, m); }));
            contractions.push_back(std::move(i));
        }
        module_ = KgModule(make_complex(space_, std::move(d), true), std::move(contractions));
    }

    const LieAlgebra& algebra() const { return g_; }
    int max_degree() const { return max_degree_; }
    const SpacePtr& space() const { return space_; }
    const KgModule& module() const { return module_; }
    const MonomialIndex<WeilMonomial>& basis(int t) const { return bases_.at(static_cast<std::size_t>(t)); }

    /// d_W(s⊗w) = s⊗d_Λw + Σ_k λ^k s ⊗ i_k w + Σ_k ad*_k s ⊗ λ^k∧w
    WeilElement differential(const WeilMonomial& m) const
    {
        const auto& [s, w] = m;
        WeilElement out;
        for (const auto& [dw, c] : chevalley_eilenberg(g_, w))
            add_term(out, WeilMonomial{s, dw}, c);
        for (std::size_t k = 0; k < g_.dim(); ++k) {
            if (auto r = contract(k, w)) {
                SymMonomial ks = s;
                ++ks[k];
                add_term(out, WeilMonomial{ks, r->second}, Rational(r->first));
            }
            auto lw = wedge(LambdaMonomial{k}, w);
            if (!lw)
                continue;
            for (const auto& [as, c] : coadjoint_on_sym(coad_[k], s))
                add_term(out, WeilMonomial{as, lw->second}, c * Rational(lw->first));
        }
        return out;
    }

    WeilElement differential(const WeilElement& x) const
    {
        WeilElement out;
        for (const auto& [m, c] : x)
            add_scaled(out, differential(m), c);
        return out;
    }

    /// i_k acts on the Λ factor only.
    WeilElement contraction(std::size_t k, const WeilMonomial& m) const
    {
        WeilElement out;
        if (auto r = contract(k, m.second))
            add_term(out, WeilMonomial{m.first, r->second}, Rational(r->first));
        return out;
    }

    WeilElement contraction(std::size_t k, const WeilElement& x) const
    {
        WeilElement out;
        for (const auto& [m, c] : x)
            add_scaled(out, contraction(k, m), c);
        return out;
    }

    /// Coordinates of a homogeneous element of degree t. Throws if a term has another degree.
    Vector coords(const WeilElement& x, int t) const
    {
        Vector v(space_->dim(t));
        for (const auto& [m, c] : x) {
            if (weil_degree(m) != t)
                throw DimensionMismatch("Weil element is not homogeneous of degree " + std::to_string(t));
            v[basis(t).index(m)] += c;
        }
        return v;
    }

    WeilElement element(const Vector& v, int t) const
    {
        WeilElement out;
        for (std::size_t k = 0; k < v.size(); ++k)
            add_term(out, basis(t).at(k), v[k]);
        return out;
    }

    /// Left multiplication by a homogeneous x as a map W → W of degree |x|;
    /// products leaving the window are dropped.
    LinMap left_multiplication(const WeilElement& x, int degree) const
    {
        LinMap out(space_, space_, degree);
        for (int t = 0; t <= max_degree_; ++t) {
            if (t + degree > max_degree_ || t + degree < 0)
                continue;
            out.set_block(t, operator_block(t, degree, [&](const WeilMonomial& m) {
                              return weil_multiply(x, WeilElement{{m, Rational(1)}});
                          }));
        }
        return out;
    }

    std::string format(const WeilElement& x) const
    {
        const auto names = g_.dual_labels();
        return format_comb(x, [&](const WeilMonomial& m) {
            return sym_label(m.first, names) + " ⊗ " + lambda_label(m.second, names);
        });
    }

private:
    template <class Op>
    Matrix operator_block(int t, int shift, Op op) const
    {
        const auto& src = basis(t);
        const auto& tgt = basis(t + shift);
        Matrix m(tgt.size(), src.size());
        for (std::size_t col = 0; col < src.size(); ++col) {
            for (const auto& [key, c] : op(src.at(col)))
                m.add(tgt.index(key), col, c);
        }
        return m;
    }

    LieAlgebra g_;
    int max_degree_;
    std::vector<Matrix> coad_;
    std::vector<MonomialIndex<WeilMonomial>> bases_;
    SpacePtr space_;
    KgModule module_;
};

inline KgModule weil_model(const LieAlgebra& g, int max_degree) { return WeilAlgebra(g, max_degree).module(); }

/// d_W(1⊗λ^k) − 1⊗d_Λλ^k − λ^k⊗1, which vanishes by the Maurer–Cartan formula.
inline WeilElement maurer_cartan_residual(const WeilAlgebra& w, std::size_t k)
{
    const std::size_t n = w.algebra().dim();
    const SymMonomial one(n, 0);
    WeilElement out = w.differential(WeilMonomial{one, LambdaMonomial{k}});
    for (const auto& [m, c] : chevalley_eilenberg_generator(w.algebra(), k))
        add_term(out, WeilMonomial{one, m}, -c);
    add_term(out, WeilMonomial{sym_generator(n, k), LambdaMonomial{}}, Rational(-1));
    return out;
}

/// (S•g*)^g as a complex with zero differential in degrees 0..max_degree,
/// together with its basis polynomials per degree.
struct InvariantPolynomials {
    Complex complex;
    std::map<int, Matrix> basis;  // columns in sym_monomials(n, degree/2)
};

inline InvariantPolynomials invariant_polynomial_complex(const LieAlgebra& g, int max_degree)
{
    InvariantPolynomials out;
    const auto names = g.dual_labels();
    std::vector<std::vector<std::string>> labels;
    for (int t = 0; t <= max_degree; ++t) {
        std::vector<std::string> lab;
        if (t % 2 == 0) {
            const Matrix b = invariant_polynomials(g, t / 2);
            const auto monos = sym_monomials(g.dim(), t / 2);
            for (std::size_t c = 0; c < b.cols(); ++c) {
                SymElement p;
                for (std::size_t r = 0; r < b.rows(); ++r)
                    add_term(p, monos[r], b.get(r, c));
                lab.push_back(format_comb(p, [&](const SymMonomial& s) { return sym_label(s, names); }));
            }
            out.basis[t] = b;
        }
        labels.push_back(std::move(lab));
    }
    auto space = make_space(0, std::move(labels));
    out.complex = make_complex(space, LinMap(space, space, 1), true);
    return out;
}

struct WeilStructureMaps {
    InvariantPolynomials invariants;
    LinMap inclusion;    // (S•g*)^g → W(g), a ↦ a⊗1
    LinMap restriction;  // W(g) → Λ•g*, kills positive symmetric powers
    KgModule exterior;
};

inline WeilStructureMaps weil_structure_maps(const WeilAlgebra& w)
{
    const auto& g = w.algebra();
    WeilStructureMaps out{invariant_polynomial_complex(g, w.max_degree()), {}, {}, exterior_model(g)};
    out.inclusion = LinMap(out.invariants.complex.space, w.space(), 0);
    for (const auto& [t, b] : out.invariants.basis) {
        const auto monos = sym_monomials(g.dim(), t / 2);
        Matrix m(w.space()->dim(t), b.cols());
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (const auto& e : b.row(r))
                m.add(w.basis(t).index(WeilMonomial{monos[r], LambdaMonomial{}}), e.col, e.value);
        out.inclusion.set_block(t, std::move(m));
    }
    out.restriction = LinMap(w.space(), out.exterior.space(), 0);
    const SymMonomial one(g.dim(), 0);
    const auto lambda_bases = exterior_bases(g.dim());
    for (int t = 0; t <= w.max_degree(); ++t) {
        if (static_cast<std::size_t>(t) > g.dim())
            continue;
        Matrix m(out.exterior.space()->dim(t), w.space()->dim(t));
        for (std::size_t col = 0; col < w.basis(t).size(); ++col) {
            const auto& [s, lam] = w.basis(t).at(col);
            if (s == one)
                m.add(lambda_bases[static_cast<std::size_t>(t)].index(lam), col, 1);
        }
        out.restriction.set_block(t, std::move(m));
    }
    return out;
}

}  // namespace koszul

#endif
