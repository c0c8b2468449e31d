#include <catch2/catch_amalgamated.hpp>

#include <koszul/builtin_algebras.hpp>
#include <koszul/cohomology.hpp>
#include <koszul/graded.hpp>
#include <koszul/kg_module.hpp>
#include <koszul/weil.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "support.hpp"

using namespace koszul;

namespace {

/// Q --id--> Q in degrees 0, 1.
Complex identity_pair()
{
    auto space = make_space(0, {{"a"}, {"b"}});
    LinMap d(space, space, 1);
    d.set_block(0, Matrix::identity(1));
    return make_complex(space, d, false);
}

/// Q in degree 0 with zero differential.
Complex point()
{
    auto space = make_space(0, {{"p"}});
    return make_complex(space, LinMap(space, space, 1), false);
}

Matrix permutation(std::mt19937& rng, std::size_t n)
{
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k)
        m.set(p[k], k, Rational(1));
    return m;
}

/// The same complex written in a shuffled and rescaled basis.
Complex change_basis(const Complex& c, std::mt19937& rng)
{
    std::map<int, Matrix> p;
    std::map<int, Matrix> p_inv;
    for (int m = c.lo(); m <= c.hi(); ++m) {
        const std::size_t n = c.space->dim(m);
        Matrix perm = permutation(rng, n);
        Matrix scale(n, n);
        Matrix scale_inv(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const Rational s(static_cast<long>(1 + rng() % 4), static_cast<long>(1 + rng() % 3));
            scale.set(k, k, s);
            scale_inv.set(k, k, 1 / s);
        }
        p[m] = perm * scale;
        p_inv[m] = scale_inv * perm.transpose();
    }
    LinMap d(c.space, c.space, 1);
    for (int m = c.lo(); m < c.hi(); ++m)
        d.set_block(m, p[m + 1] * c.d.block(m) * p_inv[m]);
    return make_complex(c.space, d, c.truncated);
}

}  // namespace

TEST_CASE("graded spaces and maps")
{
    auto s = make_space(-1, {{"a"}, {}, {"b", "c"}});
    CHECK(s->lo() == -1);
    CHECK(s->hi() == 1);
    CHECK(s->dim(1) == 2);
    CHECK(s->dim(5) == 0);
    CHECK(s->total_dim() == 3);
    CHECK_THROWS_AS(make_space(251, {{"a"}, {"b"}, {"c"}, {"d"}, {"e"}, {"f"}, {"g"}}), WindowOverflow);

    LinMap f(s, s, 2);
    CHECK(f.block(-1).rows() == 2);
    CHECK_THROWS_AS(f.set_block(-1, Matrix(1, 1)), DimensionMismatch);
    CHECK_THROWS_AS(f.set_block(4, Matrix(0, 0)), BadIndex);
    CHECK(f.is_zero());
    CHECK_THROWS_AS(make_complex(s, f, false), DimensionMismatch);
}

TEST_CASE("tensor layouts add degrees and multiply dimensions")
{
    auto a = make_space(0, {{"1"}, {"x", "y"}});
    auto b = make_space(-1, {{"u"}, {"v"}, {"w", "z"}});
    TensorLayout t(a, b);
    CHECK(t.space()->lo() == -1);
    CHECK(t.space()->hi() == 2);
    for (int d = -1; d <= 2; ++d) {
        std::size_t expected = 0;
        for (int p = 0; p <= 1; ++p)
            expected += a->dim(p) * b->dim(d - p);
        CHECK(t.space()->dim(d) == expected);
    }
    CHECK(t.space()->labels(0).front() == "1 ⊗ v");
    TensorLayout capped(a, b, 1);
    CHECK(capped.space()->hi() == 1);
}

TEST_CASE("cohomology examples")
{
    const auto r = cohomology(identity_pair(), Truncation{3});
    CHECK(r.betti == std::map<int, std::size_t>{{0, 0}, {1, 0}, {2, 0}});

    const WeilAlgebra w(su2(), 8);
    const auto rw = cohomology(w.module().complex(), Truncation{8});
    for (int m = 0; m < 8; ++m)
        CHECK(rw.betti.at(m) == (m == 0 ? 1u : 0u));
    CHECK(rw.uncertified.count(8) == 1);
    CHECK(rw.betti.count(8) == 0);
    CHECK(rw.representatives.at(0).size() == 1);
    CHECK(rw.representatives.at(0)[0] == LabeledVector{{"1 ⊗ 1", Rational(1)}});

    const auto ext = exterior_model(su2());
    const auto re = cohomology(ext.complex(), Truncation{4});
    CHECK(betti_table(re, 0, 3) == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(re.representatives.at(3)[0].size() == 1);

    CHECK_THROWS_AS(cohomology(w.module().complex(), Truncation{9}), WindowTooSmall);
    CHECK_THROWS_AS(cohomology(ext.complex(), Truncation{-1}), WindowTooSmall);
}

TEST_CASE("cohomology agrees with a dense-rank oracle")
{
    std::vector<Complex> cases = {identity_pair(), point()};
    for (const auto& g : support::all_algebras()) {
        cases.push_back(exterior_model(g).complex());
        cases.push_back(WeilAlgebra(g, 5).module().complex());
    }
    for (const auto& c : cases) {
        const int n = c.truncated ? c.hi() : c.hi() + 1;
        const auto r = cohomology(c, Truncation{n});
        CHECK(r.betti == oracle::betti_table(c, n));
    }
}

TEST_CASE("property: Betti numbers do not depend on the basis")
{
    std::mt19937 rng(314);
    for (const auto& g : support::all_algebras()) {
        INFO(g.name());
        for (const Complex& c : {exterior_model(g).complex(), WeilAlgebra(g, 5).module().complex()}) {
            const int n = c.truncated ? c.hi() : c.hi() + 1;
            const auto base = cohomology(c, Truncation{n}).betti;
            for (int trial = 0; trial < 3; ++trial)
                CHECK(cohomology(change_basis(c, rng), Truncation{n}).betti == base);
        }
    }
}

TEST_CASE("property: widening the window leaves lower degrees unchanged")
{
    for (const auto& g : support::all_algebras()) {
        INFO(g.name());
        const int top = g.dim() > 3 ? 5 : 7;
        for (int n = 2; n < top; ++n) {
            const auto small = cohomology(WeilAlgebra(g, n).module().complex(), Truncation{n});
            const auto large = cohomology(WeilAlgebra(g, n + 1).module().complex(), Truncation{n + 1});
            for (const auto& [m, b] : small.betti)
                CHECK(large.betti.at(m) == b);
            CHECK(large.betti.at(n) == 0);
        }
    }
}

TEST_CASE("chain map checks")
{
    const Complex c = identity_pair();
    CHECK(check_chain_map(LinMap::identity(c.space), c, c).pass);
    CHECK(check_chain_map(LinMap(c.space, c.space, 0), c, c).pass);

    // Killing only degree 0 does not commute with d.
    LinMap half(c.space, c.space, 0);
    half.set_block(1, Matrix::identity(1));
    const auto bad = check_chain_map(half, c, c);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.degree);
    CHECK(*bad.degree == 0);
    CHECK(bad.defect == LabeledVector{{"b", Rational(-1)}});  // d∘f − f∘d
    CHECK_THROWS_AS(check_chain_map(LinMap::identity(point().space), c, c), DimensionMismatch);
}

TEST_CASE("quasi-isomorphism checks")
{
    const auto ext = exterior_model(su2()).complex();
    CHECK(quasi_iso_check(LinMap::identity(ext.space), ext, ext, Truncation{4}).pass);

    const Complex p = point();
    auto zero_space = make_space(0, {{}});
    const Complex zero = make_complex(zero_space, LinMap(zero_space, zero_space, 1), false);
    const auto q = quasi_iso_check(LinMap(p.space, zero_space, 0), p, zero, Truncation{2});
    CHECK_FALSE(q.pass);
    REQUIRE(q.failed_degree);
    CHECK(*q.failed_degree == 0);

    // The unit of the Weil algebra is a quasi-isomorphism from Q.
    const WeilAlgebra w(sl2(), 6);
    LinMap unit(p.space, w.space(), 0);
    Matrix col(1, 1);
    col.set(0, 0, Rational(1));
    unit.set_block(0, col);
    const auto qw = quasi_iso_check(unit, p, w.module().complex(), Truncation{6});
    CHECK(qw.pass);
    CHECK(qw.degrees.at(0).rank == 1);
}

TEST_CASE("subcomplexes")
{
    const auto ext = exterior_model(su2()).complex();
    Vector one(1);
    one[0] = 1;
    Vector top(1);
    top[0] = 1;
    const auto sub = make_subcomplex(ext, {{0, {one}}, {3, {top}}}, 3, "c");
    CHECK(sub.complex.space->dim(0) == 1);
    CHECK(sub.complex.space->dim(1) == 0);
    CHECK(betti_table(cohomology(sub, Truncation{4}), 0, 3) == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(check_chain_map(embedding(sub), sub.complex, ext).pass);

    const auto w = WeilAlgebra(su2(), 4).module().complex();
    Vector gen(3);
    gen[0] = 1;
    CHECK_THROWS_AS(make_subcomplex(w, {{1, {gen}}}, 4, "s"), NotInSubspace);
}

TEST_CASE("reports round-trip through json")
{
    const auto ext = exterior_model(sl2()).complex();
    const auto r = cohomology(ext, Truncation{4});
    CHECK(cohomology_report_from_json(to_json(r)) == r);
    const auto q = quasi_iso_check(LinMap::identity(ext.space), ext, ext, Truncation{4});
    CHECK(quasi_iso_check_from_json(to_json(q)) == q);
    const Complex c = identity_pair();
    LinMap half(c.space, c.space, 0);
    half.set_block(1, Matrix::identity(1));
    const auto bad = check_chain_map(half, c, c);
    CHECK(chain_map_check_from_json(to_json(bad)) == bad);
    CHECK(to_json(r).dump() == to_json(cohomology(ext, Truncation{4})).dump());
}
