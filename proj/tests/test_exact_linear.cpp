#include <catch2/catch_amalgamated.hpp>

#include <koszul/exact_linear.hpp>
#include <koszul/rational.hpp>
#include <koszul/sparse_matrix.hpp>

#include <random>

#include "oracles.hpp"

using namespace koszul;

namespace {

Vector vec(std::initializer_list<long> xs)
{
    Vector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

Matrix dense(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<Vector> r;
    for (const auto& row : rows)
        r.push_back(vec(row));
    return Matrix::from_dense(r);
}

}  // namespace

TEST_CASE("rationals are canonical and parse strictly")
{
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("-4/2")) == "-2");
    CHECK(to_string(parse_rational("+7")) == "7");
    CHECK(to_string(parse_rational("0/5")) == "0");
    CHECK(parse_rational("1/3") + parse_rational("1/6") == parse_rational("1/2"));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
    CHECK_THROWS_AS(parse_rational("-"), ParseError);
}

TEST_CASE("kernel examples")
{
    CHECK(kernel_basis(Matrix::identity(3)).empty());

    const auto k = kernel_basis(Matrix(1, 2));
    REQUIRE(k.size() == 2);
    CHECK(k[0] == vec({1, 0}));
    CHECK(k[1] == vec({0, 1}));

    const auto k2 = kernel_basis(dense({{1, 2}, {2, 4}}));
    REQUIRE(k2.size() == 1);
    CHECK(k2[0] == vec({-2, 1}));
}

TEST_CASE("rank examples")
{
    CHECK(rank(Matrix::identity(3)) == 3);
    CHECK(rank(Matrix(2, 2)) == 0);
    CHECK(rank(dense({{1, 2}, {2, 4}})) == 1);
    CHECK(image_rank(dense({{1, 2}, {2, 4}})).basis.size() == 1);
}

TEST_CASE("solve examples")
{
    const auto x = solve_affine(Matrix::identity(2), vec({3, -5}));
    REQUIRE(x);
    CHECK(*x == vec({3, -5}));

    CHECK_FALSE(solve_affine(Matrix(2, 2), vec({1, 0})));

    const auto y = solve_affine(dense({{1, 1}}), vec({2}));
    REQUIRE(y);
    CHECK(*y == vec({2, 0}));

    CHECK_THROWS_AS(solve_affine(Matrix::identity(2), vec({1})), DimensionMismatch);
}

TEST_CASE("complement examples")
{
    const std::vector<Vector> v = {vec({1, 0}), vec({0, 1})};
    CHECK(complement_basis({}, v, 2) == v);
    CHECK(complement_basis(v, v, 2).empty());
    const auto c = complement_basis({vec({1, 1})}, v, 2);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == vec({1, 0}));

    CHECK_THROWS_AS(complement_basis({vec({1, 0}), vec({2, 0})}, v, 2), InvalidBasis);
    CHECK_THROWS_AS(complement_basis({vec({0, 1})}, {vec({1, 0})}, 2), InvalidBasis);
}

TEST_CASE("independent subset keeps the first independent vectors")
{
    const std::vector<Vector> v = {vec({1, 1}), vec({2, 2}), vec({0, 1}), vec({1, 0})};
    CHECK(independent_subset(v, 2) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("sparse matrices store no zeros")
{
    Matrix m(2, 2);
    m.set(0, 0, Rational(3));
    m.add(0, 0, Rational(-3));
    CHECK(m.nonzeros() == 0);
    CHECK(m == Matrix(2, 2));
    const Matrix a = dense({{1, 2}, {3, 4}});
    CHECK(a - a == Matrix(2, 2));
    CHECK((a * Matrix::identity(2)) == a);
    CHECK(a.transpose().transpose() == a);
}

TEST_CASE("random matrices: rank matches a dense oracle and rank + nullity = cols")
{
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng() % 7;
        const std::size_t cols = 1 + rng() % 7;
        const Matrix a = oracle::random_matrix(rng, rows, cols, 20 + static_cast<int>(rng() % 70));
        const std::size_t r = rank(a);
        INFO("trial " << trial);
        CHECK(r == oracle::matrix_rank(a));
        CHECK(r == rank(a.transpose()));
        const auto k = kernel_basis(a);
        CHECK(r + k.size() == cols);
        for (const auto& v : k)
            CHECK(is_zero(a.apply(v)));
        CHECK(oracle::matrix_rank(Matrix::from_columns(cols, k)) == k.size());
    }
}

TEST_CASE("random systems: solving Ax = A x0 round-trips")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng() % 6;
        const std::size_t cols = 1 + rng() % 6;
        const Matrix a = oracle::random_matrix(rng, rows, cols);
        Vector x0(cols);
        for (auto& x : x0)
            x = Rational(val(rng), 1 + rng() % 3);
        const Vector b = a.apply(x0);
        const auto x = solve_affine(a, b);
        REQUIRE(x);
        CHECK(a.apply(*x) == b);
    }
}

TEST_CASE("results are deterministic")
{
    std::mt19937 rng(99);
    const Matrix a = oracle::random_matrix(rng, 6, 9);
    CHECK(kernel_basis(a) == kernel_basis(a));
    CHECK(image_rank(a).basis == image_rank(a).basis);
}
