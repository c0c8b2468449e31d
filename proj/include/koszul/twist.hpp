#ifndef KOSZUL_TWIST_HPP
#define KOSZUL_TWIST_HPP

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
#include "weil.hpp"

namespace koszul {

// Wedge operators on Λ•g* ---------------------------------------------------------------

/// ξ ↦ ξ ∧ λ^I on the exterior model.
inline LinMap right_wedge(const KgModule& exterior, const LambdaMonomial& factor)
{
    const std::size_t n = exterior.lie_dim();
    const auto bases = exterior_bases(n);
    const int q = static_cast<int>(factor.size());
    LinMap out(exterior.space(), exterior.space(), q);
    for (std::size_t p = 0; p + factor.size() <= n; ++p) {
        Matrix m(bases[p + factor.size()].size(), bases[p].size());
        for (std::size_t col = 0; col < bases[p].size(); ++col) {
            if (auto w = wedge(bases[p].at(col), factor))
                m.add(bases[p + factor.size()].index(w->second), col, Rational(w->first));
        }
        out.set_block(static_cast<int>(p), std::move(m));
    }
    return out;
}

/// ξ ↦ λ^k ∧ ξ on the exterior model.
inline LinMap left_wedge(const KgModule& exterior, std::size_t k)
{
    const std::size_t n = exterior.lie_dim();
    const auto bases = exterior_bases(n);
    LinMap out(exterior.space(), exterior.space(), 1);
    for (std::size_t p = 0; p < n; ++p) {
        Matrix m(bases[p + 1].size(), bases[p].size());
        for (std::size_t col = 0; col < bases[p].size(); ++col) {
            if (auto w = wedge(LambdaMonomial{k}, bases[p].at(col)))
                m.add(bases[p + 1].index(w->second), col, Rational(w->first));
        }
        out.set_block(static_cast<int>(p), std::move(m));
    }
    return out;
}

// Twist ---------------------------------------------------------------------------------

/// Operators on Λ•g* ⊗ M:
///   𝐢(ξ⊗m) = Σ_k ξ∧λ^k ⊗ i_k m,  T = exp(−𝐢),  T⁻¹ = exp(𝐢).
struct TwistOperators {
    KgModule exterior;
    KgModule product;  // Λ•g* ⊗ M with Koszul signs
    std::shared_ptr<TensorLayout> layout;
    LinMap bold_i;
    LinMap T;
    LinMap T_inv;
    std::size_t nilpotency = 0;  // smallest n with 𝐢^n = 0
};

inline TwistOperators twist_operators(const LieAlgebra& g, const KgModule& m)
{
    if (m.truncated())
        throw WindowTooSmall("the twist needs a complete (untruncated) module");
    TwistOperators out;
    out.exterior = exterior_model(g);
    out.product = tensor_module(out.exterior, m);
    out.layout = std::make_shared<TensorLayout>(out.exterior.space(), m.space(),
                                                tensor_window(out.exterior.complex(), m.complex()).hi);
    out.bold_i = LinMap(out.product.space(), out.product.space(), 0);
    for (std::size_t k = 0; k < g.dim(); ++k)
        out.bold_i += tensor_operator(*out.layout, *out.layout, right_wedge(out.exterior, LambdaMonomial{k}),
                                      m.contraction(k), plain_rule());

    // 𝐢 raises the Λ-degree, so 𝐢^{dim g + 1} = 0 and both series are finite.
    const LinMap id = LinMap::identity(out.product.space());
    out.T = id;
    out.T_inv = id;
    LinMap power = id;
    Rational factorial = 1;
    std::size_t n = 0;
    while (!power.is_zero()) {
        ++n;
        power = compose(out.bold_i, power);
        factorial *= n;
        const Rational c = Rational(1) / factorial;
        out.T += Rational(parity_sign(static_cast<long>(n))) * c * power;
        out.T_inv += c * power;
    }
    out.nilpotency = n;
    return out;
}

/// T(ξ⊗m) = Σ_{I={i1<...<iq}} (−1)^{q(q+1)/2} ξ∧λ^I ⊗ i_{i1}∘...∘i_{iq} m
inline LinMap twist_closed_form(const TwistOperators& tw, const KgModule& m)
{
    const std::size_t n = tw.exterior.lie_dim();
    LinMap out(tw.product.space(), tw.product.space(), 0);
    for (std::size_t q = 0; q <= n; ++q) {
        const Rational sign(parity_sign(static_cast<long>(q * (q + 1) / 2)));
        for (const auto& subset : lambda_monomials(n, q)) {
            LinMap contraction = LinMap::identity(m.space());
            for (auto it = subset.rbegin(); it != subset.rend(); ++it)
                contraction = compose(m.contraction(*it), contraction);
            out += sign * tensor_operator(*tw.layout, *tw.layout, right_wedge(tw.exterior, subset), contraction,
                                          plain_rule());
        }
    }
    return out;
}

struct TwistIdentityReport {
    bool inverse = true;          // T ∘ exp(𝐢) = 1
    bool nilpotent = true;        // 𝐢^{dim g + 1} = 0
    bool identity_a = true;       // i_k ∘ T = T ∘ (i_k ⊗ 1)
    bool identity_b = true;       // d ∘ T = T ∘ (d + Σ_k λ^k∧ ⊗ L_k)
    bool closed_form = true;      // series equals the closed form
    std::string witness;

    bool all_passed() const { return inverse && nilpotent && identity_a && identity_b && closed_form; }
};

inline TwistIdentityReport verify_twist(const TwistOperators& tw, const KgModule& m)
{
    TwistIdentityReport r;
    const auto& space = tw.product.space();
    const int lo = space->lo();
    const int hi = space->hi();
    auto note = [&](bool& flag, const std::string& what, const std::optional<MapDifference>& diff) {
        if (!diff)
            return;
        flag = false;
        if (r.witness.empty())
            r.witness = what + " fails at degree " + std::to_string(diff->degree) + " on '" +
                        space->labels(diff->degree)[diff->column] + "'";
    };
    const LinMap id = LinMap::identity(space);
    note(r.inverse, "T∘exp(𝐢) = 1", first_difference(compose(tw.T, tw.T_inv), id, lo, hi));
    note(r.inverse, "exp(𝐢)∘T = 1", first_difference(compose(tw.T_inv, tw.T), id, lo, hi));

    LinMap power = LinMap::identity(space);
    for (std::size_t k = 0; k <= tw.exterior.lie_dim(); ++k)
        power = compose(tw.bold_i, power);
    note(r.nilpotent, "𝐢^{dim g + 1} = 0", first_difference(power, LinMap(space, space, 0), lo, hi));

    const LinMap id_m = LinMap::identity(m.space());
    LinMap twisted_d = tw.product.d();
    for (std::size_t k = 0; k < tw.exterior.lie_dim(); ++k) {
        const LinMap ik_left = tensor_operator(*tw.layout, *tw.layout, tw.exterior.contraction(k), id_m, plain_rule());
        note(r.identity_a, "i_k∘T = T∘(i_k⊗1)",
             first_difference(compose(tw.product.contraction(k), tw.T), compose(tw.T, ik_left), lo, hi));
        twisted_d += tensor_operator(*tw.layout, *tw.layout, left_wedge(tw.exterior, k), m.lie_derivative(k),
                                     plain_rule());
    }
    note(r.identity_b, "d∘T = T∘(d + Σ λ^k∧ ⊗ L_k)",
         first_difference(compose(tw.product.d(), tw.T), compose(tw.T, twisted_d), lo, hi));
    note(r.closed_form, "closed form of T", first_difference(tw.T, twist_closed_form(tw, m), lo, hi));
    return r;
}

// Horizontal and basic elements ----------------------------------------------------------------

struct HorizontalBasic {
    std::map<int, std::vector<Vector>> horizontal;
    Subcomplex basic;
};

/// Horizontal: killed by every i_k. Basic: n with i_k n = 0 and i_k dn = 0 for all k,
/// computed up to `top` (clipped to where d is exact). Closure under d is verified.
inline HorizontalBasic horizontal_basic(const KgModule& n, int top)
{
    top = std::min(top, n.exact_top());
    HorizontalBasic out;
    std::map<int, std::vector<Vector>> basic;
    std::vector<int> degrees;
    for (int m = n.lo(); m <= std::max(top, n.lo()); ++m)
        degrees.push_back(m);
    std::vector<std::vector<Vector>> hor(degrees.size());
    std::vector<std::vector<Vector>> bas(degrees.size());
    parallel_for(degrees.size(), [&](std::size_t idx) {
        const int m = degrees[idx];
        std::vector<Matrix> h_ops;
        std::vector<Matrix> b_ops;
        for (std::size_t k = 0; k < n.lie_dim(); ++k) {
            const Matrix ik = n.contraction(k).block(m);
            h_ops.push_back(ik);
            b_ops.push_back(ik);
            if (m <= n.exact_top() && n.space()->in_window(m + 1))
                b_ops.push_back(n.contraction(k).block(m + 1) * n.d().block(m));
        }
        hor[idx] = common_kernel(h_ops, n.space()->dim(m));
        bas[idx] = common_kernel(b_ops, n.space()->dim(m));
    });
    for (std::size_t idx = 0; idx < degrees.size(); ++idx) {
        out.horizontal[degrees[idx]] = std::move(hor[idx]);
        basic[degrees[idx]] = std::move(bas[idx]);
    }
    out.basic = make_subcomplex(n.complex(), basic, top, "basic");
    return out;
}

inline HorizontalBasic horizontal_basic(const KgModule& n) { return horizontal_basic(n, n.hi()); }

// W(g) ⊗ M and ψ₀ ------------------------------------------------------------------------------

/// W(g) ⊗ M with enough of W materialized that the product is exact through degree N.
struct WeilTensor {
    std::shared_ptr<WeilAlgebra> weil;
    KgModule module;
    std::shared_ptr<TensorLayout> layout;
    int max_degree = 0;
};

inline WeilTensor weil_tensor(const LieAlgebra& g, const KgModule& m, int max_degree)
{
    if (m.truncated())
        throw WindowTooSmall("W(g) ⊗ M needs a complete (untruncated) module");
    WeilTensor out;
    out.max_degree = max_degree;
    out.weil = std::make_shared<WeilAlgebra>(g, std::max(0, max_degree + 1 - m.lo()));
    out.module = tensor_module(out.weil->module(), m, max_degree + 1);
    out.layout = std::make_shared<TensorLayout>(
        out.weil->space(), m.space(), tensor_window(out.weil->module().complex(), m.complex(), max_degree + 1).hi);
    return out;
}

/// Left multiplication by a homogeneous Weil element x on W(g) ⊗ M: x·(w⊗m) = (xw)⊗m.
inline LinMap weil_tensor_multiplication(const WeilTensor& wt, const WeilElement& x, int degree,
                                         const KgModule& m)
{
    return tensor_operator(*wt.layout, *wt.layout, wt.weil->left_multiplication(x, degree),
                           LinMap::identity(m.space()), plain_rule());
}

/// ψ₀(a⊗m) = a · T(1⊗m), the twist composed with S ⊗ Λ ⊗ M = W ⊗ M.
/// `ambient` is defined on all of S ⊗ M; `map` on the Cartan model.
struct Psi0 {
    LinMap ambient;
    LinMap map;
};

inline Psi0 build_psi0(const CartanModel& cm, const TwistOperators& tw, const WeilTensor& wt)
{
    const KgModule& m = cm.module();
    const TensorLayout& src = cm.layout();
    const auto& sym = cm.symmetric();
    const auto ext_bases = exterior_bases(cm.algebra().dim());
    Psi0 out;
    out.ambient = LinMap(src.space(), wt.module.space(), 0);
    for (int t = src.space()->lo(); t <= src.space()->hi(); ++t) {
        if (!wt.module.space()->in_window(t))
            continue;
        Matrix block(wt.module.space()->dim(t), src.space()->dim(t));
        for (const auto& blk : src.blocks(t)) {
            const auto& smonos = sym.basis_at_degree(blk.p);
            const std::size_t dm = m.space()->dim(blk.q);
            // T(1⊗m) lives in (Λ ⊗ M)_q; 1⊗m sits in the Λ^0 ⊗ M_q block.
            const auto one_off = tw.layout->offset(0, blk.q);
            const Matrix& tq = tw.T.block(blk.q);
            for (std::size_t b = 0; b < dm; ++b) {
                const std::size_t tcol = *one_off + b;
                std::vector<std::pair<std::size_t, Rational>> image;  // (row in (Λ⊗M)_q, coeff)
                const Vector v = tq.column(tcol);
                for (const auto& tb : tw.layout->blocks(blk.q)) {
                    const std::size_t dq = m.space()->dim(tb.q);
                    for (std::size_t a = 0; a < ext_bases[static_cast<std::size_t>(tb.p)].size(); ++a) {
                        for (std::size_t bb = 0; bb < dq; ++bb) {
                            const Rational& c = v[tb.offset + a * dq + bb];
                            if (c == 0)
                                continue;
                            for (std::size_t s = 0; s < smonos.size(); ++s) {
                                const WeilMonomial wm{smonos.at(s), ext_bases[static_cast<std::size_t>(tb.p)].at(a)};
                                const int wdeg = blk.p + tb.p;
                                const auto row = wt.layout->index(wdeg, wt.weil->basis(wdeg).index(wm), tb.q, bb);
                                if (!row)
                                    throw WindowTooSmall("ψ₀ image leaves the W(g) ⊗ M window");
                                block.add(*row, blk.offset + s * dm + b, c);
                            }
                        }
                    }
                }
            }
        }
        out.ambient.set_block(t, std::move(block));
    }
    out.map = compose(out.ambient, embedding(cm.sub()));
    return out;
}

struct Psi0Report {
    bool horizontal = true;
    bool lands_in_basic = true;
    bool bijective = true;
    ChainMapCheck chain_map;
    bool s_linear = true;
    std::string witness;

    bool all_passed() const { return horizontal && lands_in_basic && bijective && chain_map.pass && s_linear; }
};

/// Checks ψ₀ in every degree up to the Cartan model's top: image horizontal and
/// inside the basic subcomplex, bijective onto it, a chain map, and S•-linear.
inline Psi0Report verify_psi0(const Psi0& psi, const CartanModel& cm, const WeilTensor& wt,
                              const HorizontalBasic& hb)
{
    Psi0Report r;
    const KgModule& m = cm.module();
    const auto& cartan = cm.complex();
    const int lo = cartan.lo();
    const int top = cartan.hi();
    auto fail = [&](bool& flag, const std::string& what) {
        flag = false;
        if (r.witness.empty())
            r.witness = what;
    };
    for (std::size_t k = 0; k < wt.module.lie_dim(); ++k) {
        if (auto diff = first_difference(compose(wt.module.contraction(k), psi.map),
                                         LinMap(cartan.space, wt.module.space(), -1), lo, top))
            fail(r.horizontal, "i_k∘ψ₀ ≠ 0 at degree " + std::to_string(diff->degree));
    }
    LinMap into_basic;
    try {
        into_basic = restrict_to_subcomplex(psi.map, hb.basic);
    } catch (const NotInSubspace& e) {
        fail(r.lands_in_basic, std::string("ψ₀ leaves the basic subcomplex: ") + e.what());
        r.bijective = false;
        r.chain_map.pass = false;
        return r;
    }
    for (int t = lo; t <= top; ++t) {
        const std::size_t dc = cartan.space->dim(t);
        const std::size_t db = hb.basic.complex.space->dim(t);
        if (dc != db || (dc > 0 && rank(into_basic.block(t)) != dc))
            fail(r.bijective, "ψ₀ is not bijective onto the basic subcomplex at degree " + std::to_string(t) +
                                  " (dims " + std::to_string(dc) + " → " + std::to_string(db) + ")");
    }
    r.chain_map = check_chain_map(into_basic, cartan, hb.basic.complex);
    for (const auto& [deg, basis] : cm.invariant_polynomial_bases()) {
        if (deg == 0)
            continue;
        for (std::size_t col = 0; col < basis.cols(); ++col) {
            const SymElement p = cm.invariant_polynomial(deg, col);
            WeilElement s_one;
            for (const auto& [mono, c] : p)
                add_term(s_one, WeilMonomial{mono, LambdaMonomial{}}, c);
            const LinMap lhs = compose(psi.map, cm.s_action(p, deg));
            const LinMap rhs = compose(weil_tensor_multiplication(wt, s_one, deg, m), psi.map);
            if (auto diff = first_difference(lhs, rhs, lo, top - deg))
                fail(r.s_linear, "ψ₀ is not S-linear for invariant polynomial #" + std::to_string(col) +
                                     " of degree " + std::to_string(deg) + " at degree " +
                                     std::to_string(diff->degree));
        }
    }
    return r;
}

}  // namespace koszul

#endif
