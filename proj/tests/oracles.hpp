#ifndef KOSZUL_TESTS_ORACLES_HPP
#define KOSZUL_TESTS_ORACLES_HPP

// Independent reference computations for the tests. Nothing here calls the
// library's elimination code: ranks come from a plain dense Gaussian elimination
// and dimension counts from closed formulas.

#include <cstddef>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <koszul/graded.hpp>
#include <koszul/lie_algebra.hpp>
#include <koszul/rational.hpp>
#include <koszul/sparse_matrix.hpp>

namespace oracle {

using koszul::Rational;
using Dense = std::vector<std::vector<Rational>>;

inline Dense dense(const koszul::Matrix& m)
{
    Dense out(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out[r][c] = m.get(r, c);
    return out;
}

/// Textbook elimination with full row swaps.
inline std::size_t dense_rank(Dense a)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(a[piv], a[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            const Rational f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols; ++j)
                a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

inline std::size_t matrix_rank(const koszul::Matrix& m) { return dense_rank(dense(m)); }

/// dim ker d_m − rank d_{m−1}, from dense ranks.
inline std::size_t betti(const koszul::Complex& c, int m)
{
    const std::size_t dim = c.space->dim(m);
    if (dim == 0)
        return 0;
    const std::size_t out_rank = c.d.has_block(m) ? matrix_rank(c.d.block(m)) : 0;
    const std::size_t in_rank = c.d.has_block(m - 1) ? matrix_rank(c.d.block(m - 1)) : 0;
    return dim - out_rank - in_rank;
}

inline std::map<int, std::size_t> betti_table(const koszul::Complex& c, int below)
{
    std::map<int, std::size_t> out;
    for (int m = c.lo(); m < below; ++m)
        out[m] = betti(c, m);
    return out;
}

/// K_ab = Σ_{k,m} c^m_{ak} c^k_{bm}, the trace of ad_a ad_b from structure constants.
inline Dense killing(const koszul::LieAlgebra& g)
{
    const std::size_t n = g.dim();
    Dense out(n, std::vector<Rational>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t m = 0; m < n; ++m)
                    out[a][b] += g.c(a, k, m) * g.c(b, m, k);
    return out;
}

inline std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

/// dim S^i of an n-dimensional space.
inline std::size_t sym_dim(std::size_t n, std::size_t i) { return n == 0 ? (i == 0) : binomial(n + i - 1, i); }

/// dim W(g)_t = Σ_i dim S^i · dim Λ^{t−2i}.
inline std::size_t weil_dim(std::size_t n, int t)
{
    std::size_t out = 0;
    for (int i = 0; 2 * i <= t; ++i)
        out += sym_dim(n, static_cast<std::size_t>(i)) * binomial(n, static_cast<std::size_t>(t - 2 * i));
    return out;
}

/// Coefficient of x^t in Π_j 1/(1 − x^{d_j}): the dimension in degree t of a
/// polynomial algebra on generators of degrees d_j.
inline std::size_t polynomial_algebra_dim(const std::vector<int>& degrees, int t)
{
    std::vector<std::size_t> coef(static_cast<std::size_t>(t + 1), 0);
    coef[0] = 1;
    for (int d : degrees)
        for (int s = d; s <= t; ++s)
            coef[static_cast<std::size_t>(s)] += coef[static_cast<std::size_t>(s - d)];
    return coef[static_cast<std::size_t>(t)];
}

/// Small random integer matrix, deterministic for a seed.
inline koszul::Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int density_percent = 50)
{
    std::uniform_int_distribution<int> val(-3, 3);
    std::uniform_int_distribution<int> pct(0, 99);
    koszul::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (pct(rng) < density_percent)
                m.set(r, c, Rational(val(rng)));
    return m;
}

}  // namespace oracle

#endif
