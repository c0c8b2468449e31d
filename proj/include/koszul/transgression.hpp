#ifndef KOSZUL_TRANSGRESSION_HPP
#define KOSZUL_TRANSGRESSION_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "equivariant.hpp"
#include "errors.hpp"
#include "exact_linear.hpp"
#include "kg_module.hpp"
#include "lie_algebra.hpp"
#include "monomials.hpp"
#include "weil.hpp"

namespace koszul {

// Primitive elements -------------------------------------------------------------------------

struct Primitive {
    int degree = 0;
    LambdaElement element;
};

/// P•: a complement of the decomposables in the positive-degree invariants of Λ•g*.
struct PrimitiveSpace {
    std::vector<Primitive> elements;                  // ordered by degree, then greedy order
    std::map<int, std::vector<LambdaElement>> invariants;  // basis of (Λ^p g*)^g
    std::map<int, std::size_t> decomposable_dims;
};

namespace detail {

inline LambdaElement to_lambda(const Vector& v, const MonomialIndex<LambdaMonomial>& basis)
{
    LambdaElement out;
    for (std::size_t r = 0; r < v.size(); ++r)
        add_term(out, basis.at(r), v[r]);
    return out;
}

inline Vector from_lambda(const LambdaElement& x, const MonomialIndex<LambdaMonomial>& basis)
{
    Vector v(basis.size());
    for (const auto& [m, c] : x)
        v[basis.index(m)] += c;
    return v;
}

}  // namespace detail

/// Products ξ_{j1}∧...∧ξ_{jr} (j1 < ... < jr) of primitives, grouped by degree.
inline std::map<int, std::vector<LambdaElement>> primitive_monomials(const std::vector<Primitive>& prims)
{
    std::map<int, std::vector<LambdaElement>> out;
    const std::size_t r = prims.size();
    for (std::size_t len = 0; len <= r; ++len) {
        for (const auto& subset : lambda_monomials(r, len)) {
            LambdaElement x{{LambdaMonomial{}, Rational(1)}};
            int deg = 0;
            for (auto j : subset) {
                x = wedge(x, prims[j].element);
                deg += prims[j].degree;
            }
            out[deg].push_back(std::move(x));
        }
    }
    return out;
}

/// Primitives by the greedy complement rule; verifies that the primitive
/// monomials form a basis of (Λ•g*)^g in every degree.
inline PrimitiveSpace primitive_basis(const LieAlgebra& g)
{
    const std::size_t n = g.dim();
    const KgModule ext = exterior_model(g);
    const auto bases = exterior_bases(n);
    PrimitiveSpace out;
    std::map<int, std::vector<Vector>> inv;
    for (std::size_t p = 0; p <= n; ++p) {
        inv[static_cast<int>(p)] = invariant_forms(ext, static_cast<int>(p));
        for (const auto& v : inv[static_cast<int>(p)])
            out.invariants[static_cast<int>(p)].push_back(detail::to_lambda(v, bases[p]));
    }
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<Vector> products;
        for (std::size_t p = 1; p < m; ++p) {
            for (const auto& a : out.invariants[static_cast<int>(p)])
                for (const auto& b : out.invariants[static_cast<int>(m - p)])
                    products.push_back(detail::from_lambda(wedge(a, b), bases[m]));
        }
        std::vector<Vector> dec;
        for (auto idx : independent_subset(products, bases[m].size()))
            dec.push_back(products[idx]);
        out.decomposable_dims[static_cast<int>(m)] = dec.size();
        for (const auto& v : complement_basis(dec, inv[static_cast<int>(m)], bases[m].size()))
            out.elements.push_back({static_cast<int>(m), detail::to_lambda(v, bases[m])});
    }

    const auto monomials = primitive_monomials(out.elements);
    for (std::size_t m = 0; m <= n; ++m) {
        const auto it = monomials.find(static_cast<int>(m));
        std::vector<Vector> vs;
        if (it != monomials.end())
            for (const auto& x : it->second)
                vs.push_back(detail::from_lambda(x, bases[m]));
        const std::size_t independent = independent_subset(vs, bases[m].size()).size();
        if (independent != vs.size() || independent != inv[static_cast<int>(m)].size())
            throw VerificationFailure("primitive monomials do not form a basis of the invariant forms in degree " +
                                      std::to_string(m));
    }
    return out;
}

// Distinguished transgression ------------------------------------------------------------------

struct Transgression {
    Primitive primitive;
    WeilElement omega;     // in W(g)^g, degree deg ξ
    SymElement xi_tilde;   // in (S•g*)^g, degree deg ξ + 1
    bool unique_xi_tilde = true;        // homogeneous solutions have zero ξ̃-part
    bool permutation_invariant = true;  // re-solve with permuted unknowns gives the same ξ̃
};

struct TransgressionCheck {
    bool restriction = true;   // ω restricted to Λ•g* is ξ
    bool contractions = true;  // i_x ω = i_x(1⊗ξ) for invariant multivectors x
    bool differential = true;  // d_W ω = ξ̃ ⊗ 1
    bool invariant = true;     // ω ∈ W(g)^g

    bool all_passed() const { return restriction && contractions && differential && invariant; }
};

/// Re-checks the three defining conditions by direct element computations.
inline TransgressionCheck check_transgression(const WeilAlgebra& w, const LambdaElement& xi, const WeilElement& omega,
                                              const SymElement& xi_tilde)
{
    const LieAlgebra& g = w.algebra();
    const std::size_t n = g.dim();
    const SymMonomial one(n, 0);
    TransgressionCheck r;

    LambdaElement restricted;
    for (const auto& [m, c] : omega)
        if (m.first == one)
            add_term(restricted, m.second, c);
    r.restriction = restricted == xi;

    WeilElement one_xi;
    for (const auto& [m, c] : xi)
        add_term(one_xi, WeilMonomial{one, m}, c);
    for (const auto& x : invariant_multivector_basis(g)) {
        WeilElement a;
        WeilElement b;
        for (const auto& [mono, c] : x.element) {
            WeilElement ta = omega;
            WeilElement tb = one_xi;
            for (auto it = mono.rbegin(); it != mono.rend(); ++it) {
                ta = w.contraction(*it, ta);
                tb = w.contraction(*it, tb);
            }
            add_scaled(a, ta, c);
            add_scaled(b, tb, c);
        }
        if (a != b)
            r.contractions = false;
    }

    WeilElement target;
    for (const auto& [s, c] : xi_tilde)
        add_term(target, WeilMonomial{s, LambdaMonomial{}}, c);
    r.differential = w.differential(omega) == target;

    if (!omega.empty()) {
        const int deg = weil_degree(omega.begin()->first);
        const Vector v = w.coords(omega, deg);
        for (const auto& l : w.module().lie_derivatives())
            if (!is_zero(l.block(deg).apply(v)))
                r.invariant = false;
    }
    return r;
}

namespace detail {

/// Solves A z = b with the columns of A visited in the order `perm`; returns z in the original order.
inline std::optional<Vector> solve_permuted(const Matrix& a, const Vector& b, const std::vector<std::size_t>& perm)
{
    const Matrix ap = a.select_columns(perm);
    auto z = solve_affine(ap, b);
    if (!z)
        return std::nullopt;
    Vector out(a.cols());
    for (std::size_t k = 0; k < perm.size(); ++k)
        out[perm[k]] = (*z)[k];
    return out;
}

}  // namespace detail

/// Solves for (ω, ξ̃) as an affine system over the unknowns
/// [coordinates of ω in a basis of W(g)^g at deg ξ; coordinates of ξ̃ in (S g*)^g]:
///   (a) the S-degree-0 part of ω equals ξ;
///   (b) i_x ω = i_x(1⊗ξ) for every positive-degree invariant multivector x;
///   (c) d_W ω − ξ̃⊗1 = 0.
inline Transgression distinguished_transgression(const WeilAlgebra& w, const Primitive& xi)
{
    const LieAlgebra& g = w.algebra();
    const std::size_t n = g.dim();
    const int p = xi.degree;
    if (w.max_degree() < p + 1)
        throw WindowTooSmall("Weil algebra must reach degree " + std::to_string(p + 1));
    const KgModule& wm = w.module();
    const SymMonomial one(n, 0);

    const auto w_inv = module_invariants(wm, p);
    const Matrix bw = Matrix::from_columns(w.space()->dim(p), w_inv);
    const std::size_t nw = w_inv.size();
    Matrix bs(0, 0);
    std::vector<SymMonomial> smonos;
    if ((p + 1) % 2 == 0) {
        bs = invariant_polynomials(g, (p + 1) / 2);
        smonos = sym_monomials(n, (p + 1) / 2);
    }
    const std::size_t ns = bs.cols();

    std::vector<Matrix> blocks;
    Vector rhs;
    auto append_rhs = [&](const Vector& v) { rhs.insert(rhs.end(), v.begin(), v.end()); };

    // (a) restriction to Λ•g*
    const auto ext_basis = MonomialIndex<LambdaMonomial>(lambda_monomials(n, static_cast<std::size_t>(p)));
    Matrix restrict(ext_basis.size(), w.space()->dim(p));
    for (std::size_t col = 0; col < w.basis(p).size(); ++col) {
        const auto& [s, lam] = w.basis(p).at(col);
        if (s == one)
            restrict.add(ext_basis.index(lam), col, 1);
    }
    blocks.push_back(Matrix::hstack({restrict * bw, Matrix(ext_basis.size(), ns)}, ext_basis.size()));
    append_rhs(detail::from_lambda(xi.element, ext_basis));

    // (b) contractions by invariant multivectors
    WeilElement one_xi;
    for (const auto& [m, c] : xi.element)
        add_term(one_xi, WeilMonomial{one, m}, c);
    const Vector one_xi_coords = w.coords(one_xi, p);
    for (const auto& x : invariant_multivector_basis(g)) {
        if (x.degree > p)
            continue;
        const Matrix ix = multivector_contraction(wm, x.element, x.degree).block(p);
        blocks.push_back(Matrix::hstack({ix * bw, Matrix(ix.rows(), ns)}, ix.rows()));
        append_rhs(ix.apply(one_xi_coords));
    }

    // (c) d_W ω = ξ̃ ⊗ 1
    const std::size_t top = w.space()->dim(p + 1);
    Matrix incl(top, ns);
    for (std::size_t r = 0; r < bs.rows(); ++r)
        for (const auto& e : bs.row(r))
            incl.add(w.basis(p + 1).index(WeilMonomial{smonos[r], LambdaMonomial{}}), e.col, e.value);
    blocks.push_back(Matrix::hstack({wm.d().block(p) * bw, -incl}, top));
    append_rhs(Vector(top));

    const Matrix a = Matrix::vstack(blocks, nw + ns);
    std::vector<std::size_t> order(nw + ns);
    std::iota(order.begin(), order.end(), 0);
    const auto z = detail::solve_permuted(a, rhs, order);
    if (!z)
        throw InconsistentSystem("no transgression exists for a primitive of degree " + std::to_string(p) +
                                 "; the sign conventions are inconsistent");

    Transgression out;
    out.primitive = xi;
    const Vector omega_coords = bw.apply(Vector(z->begin(), z->begin() + static_cast<long>(nw)));
    out.omega = w.element(omega_coords, p);
    const Vector ys(z->begin() + static_cast<long>(nw), z->end());
    const Vector s_coords = ns ? bs.apply(ys) : Vector{};
    for (std::size_t r = 0; r < s_coords.size(); ++r)
        add_term(out.xi_tilde, smonos[r], s_coords[r]);

    for (const auto& v : kernel_basis(a)) {
        for (std::size_t k = nw; k < nw + ns; ++k)
            if (v[k] != 0)
                out.unique_xi_tilde = false;
    }
    std::vector<std::size_t> reversed(order.rbegin(), order.rend());
    const auto z2 = detail::solve_permuted(a, rhs, reversed);
    out.permutation_invariant = z2 && Vector(z2->begin() + static_cast<long>(nw), z2->end()) == ys;
    return out;
}

/// The transgression data of g: primitives, their (ω, ξ̃), and the Weil algebra used.
struct TransgressionData {
    PrimitiveSpace primitives;
    std::vector<Transgression> items;
    std::shared_ptr<WeilAlgebra> weil;
};

inline TransgressionData transgression_data(const LieAlgebra& g)
{
    TransgressionData out;
    out.primitives = primitive_basis(g);
    int top = 1;
    for (const auto& x : out.primitives.elements)
        top = std::max(top, x.degree + 1);
    out.weil = std::make_shared<WeilAlgebra>(g, top);
    for (const auto& x : out.primitives.elements)
        out.items.push_back(distinguished_transgression(*out.weil, x));
    return out;
}

struct GenerationCheck {
    bool passed = true;
    std::map<int, std::size_t> expected;  // dimension of the polynomial algebra on the ξ̃
    std::map<int, std::size_t> actual;    // dim (S•g*)^g
    std::map<int, std::size_t> spanned;   // rank of the ξ̃ monomials
};

/// The ξ̃ freely generate (S•g*)^g in degrees up to max_degree: monomials in
/// the ξ̃ are independent and span, and their count matches dim (S•g*)^g.
inline GenerationCheck verify_generation(const LieAlgebra& g, const std::vector<Transgression>& items, int max_degree)
{
    GenerationCheck out;
    const std::size_t n = g.dim();
    // monomials in the generators by degree
    std::map<int, std::vector<SymElement>> monomials;
    monomials[0].push_back(SymElement{{SymMonomial(n, 0), Rational(1)}});
    for (const auto& item : items) {
        const int d = item.primitive.degree + 1;
        for (int t = d; t <= max_degree; ++t) {
            auto it = monomials.find(t - d);
            if (it == monomials.end())
                continue;
            for (const auto& m : it->second)
                monomials[t].push_back(sym_multiply(m, item.xi_tilde));
        }
    }
    for (int t = 0; t <= max_degree; t += 2) {
        const auto basis = MonomialIndex<SymMonomial>(sym_monomials(n, t / 2));
        std::vector<Vector> vs;
        for (const auto& m : monomials[t]) {
            Vector v(basis.size());
            for (const auto& [s, c] : m)
                v[basis.index(s)] += c;
            vs.push_back(std::move(v));
        }
        out.expected[t] = vs.size();
        out.spanned[t] = independent_subset(vs, basis.size()).size();
        out.actual[t] = invariant_polynomials(g, t / 2).cols();
        if (out.expected[t] != out.actual[t] || out.spanned[t] != out.actual[t])
            out.passed = false;
    }
    return out;
}

}  // namespace koszul

#endif
