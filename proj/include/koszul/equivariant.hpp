#ifndef KOSZUL_EQUIVARIANT_HPP
#define KOSZUL_EQUIVARIANT_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "errors.hpp"
#include "exact_linear.hpp"
#include "graded.hpp"
#include "kg_module.hpp"
#include "lie_algebra.hpp"
#include "monomials.hpp"
#include "weil.hpp"

namespace koszul {

// Invariant multivectors and forms ----------------------------------------------------

/// An element of (Λ^p g)^g written in the basis λ_{i1}∧...∧λ_{ip}.
struct InvariantMultivector {
    int degree = 0;
    LambdaElement element;
};

/// The adjoint action of λ_k extended to Λ^p g as a derivation.
inline Matrix adjoint_on_multivectors(const LieAlgebra& g, std::size_t k, const MonomialIndex<LambdaMonomial>& basis)
{
    Matrix m(basis.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const LambdaMonomial& w = basis.at(col);
        for (std::size_t pos = 0; pos < w.size(); ++pos) {
            for (const auto& t : g.bracket(k, w[pos])) {
                LambdaMonomial v = w;
                v[pos] = t.k;
                const int sign = sort_sign(v);
                if (sign == 0)
                    continue;
                m.add(basis.index(v), col, t.c * Rational(sign));
            }
        }
    }
    return m;
}

inline std::vector<LambdaElement> invariant_multivectors(const LieAlgebra& g, std::size_t p)
{
    const MonomialIndex<LambdaMonomial> basis(lambda_monomials(g.dim(), p));
    std::vector<Matrix> ops;
    for (std::size_t k = 0; k < g.dim(); ++k)
        ops.push_back(adjoint_on_multivectors(g, k, basis));
    std::vector<LambdaElement> out;
    for (const auto& v : common_kernel(ops, basis.size())) {
        LambdaElement x;
        for (std::size_t r = 0; r < v.size(); ++r)
            add_term(x, basis.at(r), v[r]);
        out.push_back(std::move(x));
    }
    return out;
}

/// A basis of the positive-degree part of (Λ•g)^g, by increasing degree.
inline std::vector<InvariantMultivector> invariant_multivector_basis(const LieAlgebra& g)
{
    std::vector<InvariantMultivector> out;
    for (std::size_t p = 1; p <= g.dim(); ++p)
        for (auto& x : invariant_multivectors(g, p))
            out.push_back({static_cast<int>(p), std::move(x)});
    return out;
}

/// Basis of (Λ^p g*)^g: common kernel of the Lie derivatives of the exterior model.
inline std::vector<Vector> invariant_forms(const KgModule& exterior, int p)
{
    std::vector<Matrix> ops;
    for (const auto& l : exterior.lie_derivatives())
        ops.push_back(l.block(p));
    return common_kernel(ops, exterior.space()->dim(p));
}

/// Basis of the g-invariants of M in degree m.
inline std::vector<Vector> module_invariants(const KgModule& m, int degree)
{
    std::vector<Matrix> ops;
    for (const auto& l : m.lie_derivatives())
        ops.push_back(l.block_or_zero(degree));
    return common_kernel(ops, m.space()->dim(degree));
}

// Invariant subcomplex ------------------------------------------------------------------------

/// (M)^g with the action of (Λ•g)^g by composite contractions.
struct InvariantComplex {
    Subcomplex sub;
    std::vector<InvariantMultivector> multivectors;
    std::vector<LinMap> actions;  // in subcomplex coordinates, one per multivector

    const Complex& complex() const { return sub.complex; }
};

/// Invariants of M in degrees up to `top`, clipped to where the Lie derivatives are exact.
inline InvariantComplex invariant_subcomplex(const KgModule& m, const LieAlgebra& g, int top)
{
    top = std::min(top, m.exact_top());
    std::map<int, std::vector<Vector>> bases;
    std::vector<int> degrees;
    for (int d = m.lo(); d <= top; ++d)
        degrees.push_back(d);
    std::vector<std::vector<Vector>> found(degrees.size());
    parallel_for(degrees.size(), [&](std::size_t k) { found[k] = module_invariants(m, degrees[k]); });
    for (std::size_t k = 0; k < degrees.size(); ++k)
        bases[degrees[k]] = std::move(found[k]);

    InvariantComplex out;
    out.sub = make_subcomplex(m.complex(), bases, top, "inv");
    out.multivectors = invariant_multivector_basis(g);
    for (const auto& x : out.multivectors)
        out.actions.push_back(restrict_operator(multivector_contraction(m, x.element, x.degree), out.sub));
    return out;
}

inline InvariantComplex invariant_subcomplex(const KgModule& m, const LieAlgebra& g)
{
    return invariant_subcomplex(m, g, m.hi());
}

struct ActionCheck {
    bool passed = true;
    std::string witness;
};

/// d∘a_x = (-1)^{|x|} a_x∘d and a_x a_y = (-1)^{|x||y|} a_y a_x on (M)^g.
inline ActionCheck verify_invariant_actions(const InvariantComplex& ic)
{
    const auto& c = ic.complex();
    for (std::size_t a = 0; a < ic.actions.size(); ++a) {
        const int p = ic.multivectors[a].degree;
        const LinMap lhs = compose(c.d, ic.actions[a]);
        const LinMap rhs = Rational(parity_sign(p)) * compose(ic.actions[a], c.d);
        if (auto diff = first_difference(lhs, rhs, c.lo(), c.exact_top()))
            return {false, "action of invariant multivector #" + std::to_string(a) +
                               " does not commute with d at degree " + std::to_string(diff->degree)};
        for (std::size_t b = 0; b < ic.actions.size(); ++b) {
            const int q = ic.multivectors[b].degree;
            const LinMap ab = compose(ic.actions[a], ic.actions[b]);
            const LinMap ba = Rational(koszul_sign(p, q)) * compose(ic.actions[b], ic.actions[a]);
            if (auto diff = first_difference(ab, ba, c.lo(), c.hi()))
                return {false, "actions #" + std::to_string(a) + " and #" + std::to_string(b) +
                                   " fail to super-commute at degree " + std::to_string(diff->degree)};
        }
    }
    return {};
}

// Symmetric algebra as a graded space --------------------------------------------------------

/// S•g* in degrees 0..max_degree, S^i in degree 2i, graded-lex monomials.
struct SymmetricSpace {
    SpacePtr space;
    std::vector<MonomialIndex<SymMonomial>> bases;  // bases[i] spans S^i

    const MonomialIndex<SymMonomial>& basis_at_degree(int t) const
    {
        static const MonomialIndex<SymMonomial> none;
        if (t < 0 || t % 2 != 0 || static_cast<std::size_t>(t / 2) >= bases.size())
            return none;
        return bases[static_cast<std::size_t>(t / 2)];
    }
};

inline SymmetricSpace symmetric_space(const LieAlgebra& g, int max_degree)
{
    SymmetricSpace out;
    const auto names = g.dual_labels();
    std::vector<std::vector<std::string>> labels;
    for (int t = 0; t <= max_degree; ++t) {
        std::vector<std::string> lab;
        if (t % 2 == 0) {
            out.bases.emplace_back(sym_monomials(g.dim(), t / 2));
            for (const auto& s : out.bases.back().keys())
                lab.push_back(sym_label(s, names));
        }
        labels.push_back(std::move(lab));
    }
    out.space = make_space(0, std::move(labels));
    return out;
}

/// Multiplication by a polynomial p of degree 2i, as a map S → S of degree 2i.
inline LinMap sym_multiplication(const SymmetricSpace& s, const SymElement& p, int degree)
{
    LinMap out(s.space, s.space, degree);
    for (int t = 0; t <= s.space->hi(); t += 2) {
        if (t + degree > s.space->hi())
            continue;
        const auto& src = s.basis_at_degree(t);
        const auto& tgt = s.basis_at_degree(t + degree);
        Matrix m(tgt.size(), src.size());
        for (std::size_t col = 0; col < src.size(); ++col)
            for (const auto& [mono, c] : p)
                m.add(tgt.index(sym_multiply(mono, src.at(col))), col, c);
        out.set_block(t, std::move(m));
    }
    return out;
}

/// The coadjoint derivation on S•g* as a degree-0 map.
inline LinMap sym_coadjoint(const SymmetricSpace& s, const Matrix& coad_k)
{
    LinMap out(s.space, s.space, 0);
    for (int t = 0; t <= s.space->hi(); t += 2) {
        const auto& basis = s.basis_at_degree(t);
        Matrix m(basis.size(), basis.size());
        for (std::size_t col = 0; col < basis.size(); ++col)
            for (const auto& [mono, c] : coadjoint_on_sym(coad_k, basis.at(col)))
                m.add(basis.index(mono), col, c);
        out.set_block(t, std::move(m));
    }
    return out;
}

// Cartan model ------------------------------------------------------------------------------

/// (S•g* ⊗ M)^g with d(a⊗m) = a⊗dm − Σ_k λ^k a ⊗ i_k m, in total degrees up to N.
/// The differential out of degree N is not materialized.
class CartanModel {
public:
    CartanModel(const LieAlgebra& g, const KgModule& m, int max_degree)
        : g_(g), module_(m), max_degree_(max_degree)
    {
        if (m.truncated())
            throw WindowTooSmall("the Cartan model needs a complete (untruncated) module");
        if (m.lie_dim() != g.dim())
            throw DimensionMismatch("module and Lie algebra have different dimensions");
        if (max_degree < m.lo())
            throw WindowTooSmall("maximal degree lies below the module");
        sym_ = symmetric_space(g, std::max(0, max_degree - m.lo()));
        layout_ = std::make_shared<TensorLayout>(sym_.space, m.space(), max_degree);
        const auto coad = adjoint_matrices(g).coad.ops;
        const LinMap id_s = LinMap::identity(sym_.space);
        const LinMap id_m = LinMap::identity(m.space());
        const SymMonomial one(g.dim(), 0);

        LinMap d = tensor_operator(*layout_, *layout_, id_s, m.d(), plain_rule());
        for (std::size_t k = 0; k < g.dim(); ++k) {
            const LinMap mult = sym_multiplication(sym_, SymElement{{sym_generator(g.dim(), k), Rational(1)}}, 2);
            d -= tensor_operator(*layout_, *layout_, mult, m.contraction(k), plain_rule());
            lie_.push_back(tensor_operator(*layout_, *layout_, sym_coadjoint(sym_, coad[k]), id_m, plain_rule()) +
                           tensor_operator(*layout_, *layout_, id_s, m.lie_derivative(k), plain_rule()));
        }
        ambient_ = make_complex(layout_->space(), std::move(d), true);

        std::map<int, std::vector<Vector>> bases;
        std::vector<int> degrees;
        for (int t = layout_->space()->lo(); t <= max_degree; ++t)
            degrees.push_back(t);
        std::vector<std::vector<Vector>> found(degrees.size());
        parallel_for(degrees.size(), [&](std::size_t k) {
            std::vector<Matrix> ops;
            for (const auto& l : lie_)
                ops.push_back(l.block(degrees[k]));
            found[k] = common_kernel(ops, layout_->space()->dim(degrees[k]));
        });
        for (std::size_t k = 0; k < degrees.size(); ++k)
            bases[degrees[k]] = std::move(found[k]);
        sub_ = make_subcomplex(ambient_, bases, max_degree, "cartan");

        for (int t = 0; t <= sym_.space->hi(); t += 2) {
            const Matrix inv = invariant_polynomials(g, t / 2);
            if (inv.cols() > 0)
                invariant_polys_[t] = inv;
        }
    }

    const LieAlgebra& algebra() const { return g_; }
    const KgModule& module() const { return module_; }
    int max_degree() const { return max_degree_; }
    const SymmetricSpace& symmetric() const { return sym_; }
    const TensorLayout& layout() const { return *layout_; }
    const Complex& ambient() const { return ambient_; }
    const Subcomplex& sub() const { return sub_; }
    const Complex& complex() const { return sub_.complex; }
    const std::vector<LinMap>& lie_derivatives() const { return lie_; }

    /// Basis of (S^{t/2} g*)^g, columns in the symmetric monomial basis.
    const std::map<int, Matrix>& invariant_polynomial_bases() const { return invariant_polys_; }

    SymElement invariant_polynomial(int t, std::size_t column) const
    {
        SymElement p;
        const Matrix& b = invariant_polys_.at(t);
        const auto& basis = sym_.basis_at_degree(t);
        for (std::size_t r = 0; r < b.rows(); ++r)
            add_term(p, basis.at(r), b.get(r, column));
        return p;
    }

    /// Multiplication by p ∈ S^{degree/2} on S ⊗ M.
    LinMap ambient_multiplication(const SymElement& p, int degree) const
    {
        return tensor_operator(*layout_, *layout_, sym_multiplication(sym_, p, degree),
                               LinMap::identity(module_.space()), plain_rule());
    }

    /// Multiplication by an invariant polynomial, in Cartan-model coordinates.
    LinMap s_action(const SymElement& p, int degree) const
    {
        return restrict_operator(ambient_multiplication(p, degree), sub_);
    }

private:
    LieAlgebra g_;
    KgModule module_;
    int max_degree_;
    SymmetricSpace sym_;
    std::shared_ptr<TensorLayout> layout_;
    std::vector<LinMap> lie_;
    Complex ambient_;
    Subcomplex sub_;
    std::map<int, Matrix> invariant_polys_;
};

/// d² = 0 on the Cartan model and every invariant polynomial acts by chain maps.
inline ActionCheck verify_cartan_model(const CartanModel& cm)
{
    const auto& c = cm.complex();
    const LinMap dd = compose(c.d, c.d);
    if (auto diff = first_difference(dd, LinMap(c.space, c.space, 2), c.lo(), c.exact_top() - 1))
        return {false, "d² ≠ 0 at degree " + std::to_string(diff->degree)};
    for (const auto& [t, b] : cm.invariant_polynomial_bases()) {
        if (t == 0)
            continue;
        for (std::size_t col = 0; col < b.cols(); ++col) {
            const LinMap s = cm.s_action(cm.invariant_polynomial(t, col), t);
            if (auto diff = first_difference(compose(c.d, s), compose(s, c.d), c.lo(), c.exact_top() - t))
                return {false, "multiplication by invariant polynomial #" + std::to_string(col) + " of degree " +
                                   std::to_string(t) + " is not a chain map at degree " +
                                   std::to_string(diff->degree)};
        }
    }
    return {};
}

}  // namespace koszul

#endif
