#include <catch2/catch_amalgamated.hpp>

#include <koszul/builtin_algebras.hpp>
#include <koszul/equivariant.hpp>
#include <koszul/transgression.hpp>
#include <koszul/weil.hpp>

#include "oracles.hpp"
#include "support.hpp"

using namespace koszul;

namespace {

SymMonomial sym(std::size_t n, std::initializer_list<std::size_t> factors)
{
    SymMonomial s(n, 0);
    for (std::size_t k : factors)
        ++s[k];
    return s;
}

/// The Killing form as a quadratic polynomial Σ_{a,b} K_ab λ^a λ^b.
SymElement killing_quadratic(const LieAlgebra& g)
{
    const auto k = oracle::killing(g);
    SymElement out;
    for (std::size_t a = 0; a < g.dim(); ++a)
        for (std::size_t b = 0; b < g.dim(); ++b)
            if (k[a][b] != 0)
                add_term(out, sym(g.dim(), {a, b}), k[a][b]);
    return out;
}

std::optional<Rational> ratio(const SymElement& x, const SymElement& y)
{
    if (x.size() != y.size() || x.empty())
        return std::nullopt;
    const Rational r = x.begin()->second / y.begin()->second;
    for (const auto& [m, c] : x) {
        const auto it = y.find(m);
        if (it == y.end() || c != r * it->second)
            return std::nullopt;
    }
    return r;
}

/// dim Λ^t of an exterior algebra on generators of the given degrees.
std::size_t exterior_algebra_dim(const std::vector<int>& degrees, int t)
{
    std::vector<std::size_t> coef(static_cast<std::size_t>(t + 1), 0);
    coef[0] = 1;
    for (int d : degrees)
        for (int s = t; s >= d; --s)
            coef[static_cast<std::size_t>(s)] += coef[static_cast<std::size_t>(s - d)];
    return coef[static_cast<std::size_t>(t)];
}

}  // namespace

TEST_CASE("primitive elements")
{
    const auto su = primitive_basis(su2());
    REQUIRE(su.elements.size() == 1);
    CHECK(su.elements[0].degree == 3);
    CHECK(su.elements[0].element == LambdaElement{{LambdaMonomial{0, 1, 2}, Rational(1)}});

    const auto ab = primitive_basis(abelian_algebra(2));
    REQUIRE(ab.elements.size() == 2);
    for (const auto& p : ab.elements)
        CHECK(p.degree == 1);
    CHECK(ab.decomposable_dims.at(2) == 1);

    const auto pp = primitive_basis(su2xsu2());
    REQUIRE(pp.elements.size() == 2);
    CHECK(pp.elements[0].degree == 3);
    CHECK(pp.elements[1].degree == 3);
    CHECK(pp.decomposable_dims.at(6) == 1);
    CHECK(pp.invariants.at(6).size() == 1);
}

TEST_CASE("the exterior algebra on the primitives matches the invariant forms")
{
    for (const auto& g : support::all_algebras()) {
        INFO(g.name());
        const auto ps = primitive_basis(g);
        std::vector<int> degrees;
        for (const auto& p : ps.elements)
            degrees.push_back(p.degree);
        const auto ext = exterior_model(g);
        for (int t = 0; t <= static_cast<int>(g.dim()); ++t)
            CHECK(invariant_forms(ext, t).size() == exterior_algebra_dim(degrees, t));
    }
}

TEST_CASE("su2 transgression")
{
    const auto g = su2();
    const auto td = transgression_data(g);
    REQUIRE(td.items.size() == 1);
    const auto& item = td.items[0];
    const SymElement half_casimir{{sym(3, {0, 0}), Rational(1, 2)},
                                  {sym(3, {1, 1}), Rational(1, 2)},
                                  {sym(3, {2, 2}), Rational(1, 2)}};
    CHECK(item.xi_tilde == half_casimir);

    // The hand-written ω = 1⊗i*∧j*∧k* + ½(i*⊗i* + j*⊗j* + k*⊗k*) is a solution.
    WeilElement omega{{{sym(3, {}), LambdaMonomial{0, 1, 2}}, Rational(1)}};
    for (std::size_t k = 0; k < 3; ++k)
        add_term(omega, WeilMonomial{sym(3, {k}), LambdaMonomial{k}}, Rational(1, 2));
    const auto check = check_transgression(*td.weil, item.primitive.element, omega, half_casimir);
    CHECK(check.restriction);
    CHECK(check.contractions);
    CHECK(check.differential);
    CHECK(check.invariant);

    // d_W(1⊗ξ) = i*⊗j*∧k* − j*⊗i*∧k* + k*⊗i*∧j*
    const auto d = td.weil->differential(WeilMonomial{sym(3, {}), LambdaMonomial{0, 1, 2}});
    const WeilElement expected{{{sym(3, {0}), LambdaMonomial{1, 2}}, Rational(1)},
                               {{sym(3, {1}), LambdaMonomial{0, 2}}, Rational(-1)},
                               {{sym(3, {2}), LambdaMonomial{0, 1}}, Rational(1)}};
    CHECK(d == expected);

    // A wrong ξ̃ is rejected.
    SymElement doubled = half_casimir;
    for (auto& [m, c] : doubled)
        c *= 2;
    CHECK_FALSE(check_transgression(*td.weil, item.primitive.element, omega, doubled).differential);
    // Dropping the S-part breaks the differential condition.
    const WeilElement bare{{{sym(3, {}), LambdaMonomial{0, 1, 2}}, Rational(1)}};
    CHECK_FALSE(check_transgression(*td.weil, item.primitive.element, bare, half_casimir).all_passed());
}

TEST_CASE("abelian transgression is forced by Maurer–Cartan")
{
    const auto g = abelian_algebra(2);
    const auto td = transgression_data(g);
    REQUIRE(td.items.size() == 2);
    for (const auto& item : td.items) {
        REQUIRE(item.primitive.element.size() == 1);
        const std::size_t k = item.primitive.element.begin()->first.front();
        const Rational c = item.primitive.element.begin()->second;
        CHECK(item.omega == WeilElement{{{sym(2, {}), LambdaMonomial{k}}, c}});
        CHECK(item.xi_tilde == SymElement{{sym(2, {k}), c}});
    }
}

TEST_CASE("su2 ⊕ su2 transgression is blockwise")
{
    const auto td = transgression_data(su2xsu2());
    REQUIRE(td.items.size() == 2);
    for (std::size_t f = 0; f < 2; ++f) {
        const std::size_t o = 3 * f;
        const auto& item = td.items[f];
        CHECK(item.primitive.element == LambdaElement{{LambdaMonomial{o, o + 1, o + 2}, Rational(1)}});
        const SymElement expected{{sym(6, {o, o}), Rational(1, 2)},
                                  {sym(6, {o + 1, o + 1}), Rational(1, 2)},
                                  {sym(6, {o + 2, o + 2}), Rational(1, 2)}};
        CHECK(item.xi_tilde == expected);
    }
}

TEST_CASE("transgression properties on every algebra")
{
    for (const auto& g : support::all_algebras()) {
        INFO(g.name());
        const auto td = transgression_data(g);
        const auto coad = adjoint_matrices(g).coad.ops;
        for (const auto& item : td.items) {
            const auto check = check_transgression(*td.weil, item.primitive.element, item.omega, item.xi_tilde);
            CHECK(check.all_passed());
            CHECK(item.unique_xi_tilde);
            CHECK(item.permutation_invariant);
            REQUIRE_FALSE(item.xi_tilde.empty());
            for (const auto& [m, c] : item.xi_tilde)
                CHECK(2 * sym_degree(m) == item.primitive.degree + 1);
            // Invariance, checked term by term with the coadjoint derivation.
            for (const auto& ck : coad) {
                SymElement image;
                for (const auto& [m, c] : item.xi_tilde)
                    add_scaled(image, coadjoint_on_sym(ck, m), c);
                CHECK(image.empty());
            }
        }
        const int n = g.dim() > 3 ? 6 : 8;
        const auto gen = verify_generation(g, td.items, n);
        CHECK(gen.passed);
        CHECK(gen.expected == gen.actual);
    }
}

TEST_CASE("for simple algebras the generator is proportional to the Killing form")
{
    for (const auto& g : {su2(), sl2()}) {
        INFO(g.name());
        const auto td = transgression_data(g);
        REQUIRE(td.items.size() == 1);
        CHECK(ratio(td.items[0].xi_tilde, killing_quadratic(g)));
    }
    const auto sl = transgression_data(sl2());
    const SymElement expected{{sym(3, {0, 0}), Rational(1)}, {sym(3, {1, 2}), Rational(1)}};
    CHECK(sl.items[0].xi_tilde == expected);
}

TEST_CASE("transgression needs enough of the Weil algebra")
{
    const auto ps = primitive_basis(su2());
    const WeilAlgebra w(su2(), 3);
    CHECK_THROWS_AS(distinguished_transgression(w, ps.elements[0]), WindowTooSmall);
}
