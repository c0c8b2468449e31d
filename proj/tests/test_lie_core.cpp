#include <catch2/catch_amalgamated.hpp>

#include <koszul/builtin_algebras.hpp>
#include <koszul/kg_module.hpp>
#include <koszul/lie_algebra.hpp>

#include <string>

#include "oracles.hpp"
#include "support.hpp"

using namespace koszul;

namespace {

using Brackets = std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>>>;

LieAlgebra make(std::size_t n, const Brackets& b)
{
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < n; ++k)
        labels.push_back("e" + std::to_string(k + 1));
    return LieAlgebra("test", labels, b);
}

}  // namespace

TEST_CASE("builtin algebras load with the expected brackets")
{
    const auto g = su2();
    CHECK(g.dim() == 3);
    CHECK(g.labels() == std::vector<std::string>{"i", "j", "k"});
    CHECK(g.dual_labels() == std::vector<std::string>{"i*", "j*", "k*"});
    CHECK(g.c(0, 1, 2) == 2);
    CHECK(g.c(1, 0, 2) == -2);
    CHECK(g.c(1, 2, 0) == 2);
    CHECK(g.c(2, 0, 1) == 2);
    CHECK_FALSE(g.is_abelian());

    const auto s = sl2();
    CHECK(s.c(0, 1, 1) == 2);
    CHECK(s.c(0, 2, 2) == -2);
    CHECK(s.c(1, 2, 0) == 1);

    const auto a = abelian_algebra(2);
    CHECK(a.is_abelian());
    CHECK(a.labels() == std::vector<std::string>{"t1", "t2"});
    CHECK(builtin_algebra("abelian:2") == a);
    CHECK(builtin_algebra("su2xsu2").dim() == 6);
    CHECK_THROWS_AS(builtin_algebra("abelian:x"), ParseError);
    CHECK_THROWS_AS(builtin_algebra("e8"), ParseError);
}

TEST_CASE("malformed structure constants are rejected")
{
    // [x,y]=y, [x,z]=z, [y,z]=x: the Jacobiator is 2x.
    CHECK_THROWS_AS(make(3, {{{0, 1}, {{1, 1}}}, {{0, 2}, {{2, 1}}}, {{1, 2}, {{0, 1}}}}), JacobiViolation);
    CHECK_THROWS_AS(make(2, {{{0, 0}, {{1, 1}}}}), AntisymmetryViolation);
    CHECK_THROWS_AS(make(2, {{{0, 1}, {{1, 1}}}, {{1, 0}, {{1, 1}}}}), AntisymmetryViolation);
    CHECK_NOTHROW(make(2, {{{0, 1}, {{1, 1}}}, {{1, 0}, {{1, -1}}}}));
    CHECK_THROWS_AS(make(2, {{{0, 2}, {{1, 1}}}}), BadIndex);
    CHECK_THROWS_AS(make(2, {{{0, 1}, {{5, 1}}}}), BadIndex);
}

TEST_CASE("Killing form matches a structure-constant oracle")
{
    for (const auto& g : support::all_algebras()) {
        INFO(g.name());
        CHECK(oracle::dense(killing_form(g)) == oracle::killing(g));
    }
    CHECK(killing_form(su2()) == Rational(-8) * Matrix::identity(3));
    const Matrix ks = killing_form(sl2());
    CHECK(ks.get(0, 0) == 8);
    CHECK(ks.get(1, 2) == 4);
    CHECK(ks.get(1, 1) == 0);
}

TEST_CASE("reductivity certificates")
{
    const auto s = certify_reductive(su2());
    CHECK(s.center.empty());
    CHECK(s.derived.size() == 3);

    const auto a = certify_reductive(abelian_algebra(2));
    CHECK(a.center.size() == 2);
    CHECK(a.derived.empty());

    CHECK_NOTHROW(certify_reductive(sl2()));
    CHECK_NOTHROW(certify_reductive(su2xsu2()));
    CHECK_THROWS_AS(certify_reductive(load_lie_algebra_file(support::data_path("nonreductive.json"))), NotReductive);
    // Heisenberg: the center equals the derived algebra.
    CHECK_THROWS_AS(certify_reductive(make(3, {{{0, 1}, {{2, 1}}}})), NotReductive);
}

TEST_CASE("adjoint and coadjoint matrices")
{
    const auto adj = adjoint_matrices(su2());
    // ad_i: i -> 0, j -> 2k, k -> -2j.
    const Matrix& ad_i = adj.ad.ops[0];
    CHECK(ad_i.column(0) == Vector(3));
    CHECK(ad_i.get(2, 1) == 2);
    CHECK(ad_i.get(1, 2) == -2);
    CHECK(ad_i.nonzeros() == 2);

    const auto sl = adjoint_matrices(sl2());
    const Matrix& ad_h = sl.ad.ops[0];
    CHECK(ad_h.get(0, 0) == 0);
    CHECK(ad_h.get(1, 1) == 2);
    CHECK(ad_h.get(2, 2) == -2);
    CHECK(ad_h.nonzeros() == 2);

    for (const auto& g : support::all_algebras()) {
        INFO(g.name());
        const auto m = adjoint_matrices(g);
        CHECK_NOTHROW(check_representation(g, m.ad));
        CHECK_NOTHROW(check_representation(g, m.coad));
        if (!g.is_abelian()) {
            RepMatrices flipped = m.ad;
            flipped.orientation = Orientation::right;
            CHECK_THROWS_AS(check_representation(g, flipped), InvalidRepresentation);
        }
    }
}

TEST_CASE("invariant vectors")
{
    const auto g = su2();
    RepMatrices trivial;
    trivial.ops.assign(3, Matrix(2, 2));
    CHECK(invariant_vectors(trivial).size() == 2);
    CHECK(invariant_vectors(adjoint_matrices(g).coad).empty());
    CHECK(invariant_vectors(adjoint_matrices(abelian_algebra(2)).coad).size() == 2);

    // Lie derivatives of the exterior model on top forms: i*∧j*∧k* is invariant.
    const auto ext = exterior_model(g);
    for (int p = 0; p <= 3; ++p) {
        RepMatrices on_p;
        on_p.orientation = Orientation::right;
        for (std::size_t k = 0; k < 3; ++k)
            on_p.ops.push_back(ext.lie_derivative(k).block(p));
        CHECK_NOTHROW(check_representation(g, on_p));
        CHECK(invariant_vectors(on_p).size() == ((p == 0 || p == 3) ? 1u : 0u));
    }
}

TEST_CASE("json round trip and file loading")
{
    for (const auto& g : support::all_algebras()) {
        INFO(g.name());
        CHECK(lie_algebra_from_json(lie_algebra_to_json(g)) == g);
        CHECK(lie_algebra_to_json(lie_algebra_from_json(lie_algebra_to_json(g))).dump() ==
              lie_algebra_to_json(g).dump());
    }
    CHECK(load_lie_algebra_file(support::data_path("su2.json")) == su2());
    CHECK(load_lie_algebra_file(support::data_path("sl2.json")) == sl2());
    CHECK(load_lie_algebra_file(support::data_path("su2xsu2.json")) == su2xsu2());
    CHECK_THROWS_AS(load_lie_algebra_file(support::data_path("missing.json")), ParseError);
    try {
        load_lie_algebra_file(support::data_path("malformed.json"));
        FAIL("malformed file accepted");
    } catch (const ParseError& e) {
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 4"));
    }
    CHECK_THROWS_AS(lie_algebra_from_json(nlohmann::json::parse(R"({"dim": 2, "basis": ["a"]})")), ParseError);
    CHECK_THROWS_AS(lie_algebra_from_json(nlohmann::json::parse(R"({"basis": ["a"]})")), ParseError);
    CHECK(lie_algebra_from_json(nlohmann::json::parse(
              R"({"dim": 2, "brackets": [{"i": 0, "j": 1, "terms": [{"k": 1, "c": "2/4"}]}]})"))
              .c(0, 1, 1) == Rational(1, 2));
}
