#ifndef KOSZUL_EXACT_LINEAR_HPP
#define KOSZUL_EXACT_LINEAR_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "sparse_matrix.hpp"

namespace koszul {

/// Reduced row echelon form restricted to pivots in columns [0, pivot_limit).
///
/// Rows whose reduction leaves entries only at columns >= pivot_limit are kept
/// in `residual`; for an augmented system [A | B] they witness inconsistency.
struct RowEchelon {
    std::vector<std::size_t> pivots;  // ascending
    std::vector<SparseRow> rows;      // rows[k] has a leading 1 at pivots[k]
    std::vector<SparseRow> residual;
};

namespace detail {

inline SparseRow to_sparse(const Vector& v)
{
    SparseRow row;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0)
            row.push_back({i, v[i]});
    }
    return row;
}

inline Vector to_dense(const SparseRow& row, std::size_t size)
{
    Vector v(size);
    for (const auto& e : row)
        v[e.col] = e.value;
    return v;
}

/// Eliminates every entry of `row` sitting in a pivot column below `limit`.
inline void reduce_against(SparseRow& row, const std::map<std::size_t, SparseRow>& by_pivot,
                           std::size_t limit)
{
    std::size_t k = 0;
    while (k < row.size() && row[k].col < limit) {
        auto it = by_pivot.find(row[k].col);
        if (it == by_pivot.end()) {
            ++k;
            continue;
        }
        const Rational factor = -row[k].value;
        axpy(row, factor, it->second);
    }
}

}  // namespace detail

inline RowEchelon reduced_row_echelon(const Matrix& a, std::size_t pivot_limit)
{
    std::map<std::size_t, SparseRow> by_pivot;
    RowEchelon out;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        SparseRow row = a.row(r);
        detail::reduce_against(row, by_pivot, pivot_limit);
        if (row.empty())
            continue;
        if (row.front().col >= pivot_limit) {
            out.residual.push_back(std::move(row));
            continue;
        }
        const Rational inv = 1 / row.front().value;
        detail::scale(row, inv);
        by_pivot.emplace(row.front().col, std::move(row));
    }
    // Back substitution: clear each pivot column from the rows above it.
    for (auto it = by_pivot.rbegin(); it != by_pivot.rend(); ++it) {
        const std::size_t p = it->first;
        for (auto& [q, row] : by_pivot) {
            if (q >= p)
                break;
            if (const Rational* v = detail::find(row, p)) {
                const Rational factor = -*v;
                detail::axpy(row, factor, it->second);
            }
        }
    }
    for (auto& [p, row] : by_pivot) {
        out.pivots.push_back(p);
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline RowEchelon reduced_row_echelon(const Matrix& a)
{
    return reduced_row_echelon(a, a.cols());
}

/// Basis of {v : A v = 0}: one vector per free column (ascending), with a 1 in
/// that column and zeros in the other free columns.
inline std::vector<Vector> kernel_basis(const Matrix& a)
{
    const RowEchelon ref = reduced_row_echelon(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t p : ref.pivots)
        is_pivot[p] = true;
    std::vector<std::size_t> slot(a.cols(), 0);
    std::vector<Vector> basis;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        if (is_pivot[c])
            continue;
        slot[c] = basis.size();
        Vector v(a.cols());
        v[c] = 1;
        basis.push_back(std::move(v));
    }
    for (std::size_t k = 0; k < ref.rows.size(); ++k) {
        for (const auto& e : ref.rows[k]) {
            if (!is_pivot[e.col])
                basis[slot[e.col]][ref.pivots[k]] = -e.value;
        }
    }
    return basis;
}

struct ImageRank {
    std::size_t rank = 0;
    std::vector<Vector> basis;  // columns of A at the pivot positions
};

inline ImageRank image_rank(const Matrix& a)
{
    const RowEchelon ref = reduced_row_echelon(a);
    ImageRank out;
    out.rank = ref.pivots.size();
    const Matrix t = a.transpose();
    for (std::size_t p : ref.pivots)
        out.basis.push_back(detail::to_dense(t.row(p), a.rows()));
    return out;
}

inline std::size_t rank(const Matrix& a)
{
    return reduced_row_echelon(a).pivots.size();
}

/// Solves A x = b_j for several right-hand sides at once. Free variables are
/// set to zero; std::nullopt marks an inconsistent system.
inline std::vector<std::optional<Vector>> solve_many(const Matrix& a, const std::vector<Vector>& rhs)
{
    for (const auto& b : rhs) {
        if (b.size() != a.rows())
            throw DimensionMismatch("right-hand side has " + std::to_string(b.size()) +
                                    " entries, matrix has " + std::to_string(a.rows()) + " rows");
    }
    const Matrix augmented = Matrix::hstack({a, Matrix::from_columns(a.rows(), rhs)}, a.rows());
    const RowEchelon ref = reduced_row_echelon(augmented, a.cols());
    std::vector<bool> consistent(rhs.size(), true);
    for (const auto& row : ref.residual) {
        for (const auto& e : row)
            consistent[e.col - a.cols()] = false;
    }
    std::vector<std::optional<Vector>> out(rhs.size());
    for (std::size_t j = 0; j < rhs.size(); ++j) {
        if (consistent[j])
            out[j] = Vector(a.cols());
    }
    for (std::size_t k = 0; k < ref.rows.size(); ++k) {
        for (const auto& e : ref.rows[k]) {
            if (e.col < a.cols())
                continue;
            const std::size_t j = e.col - a.cols();
            if (out[j])
                (*out[j])[ref.pivots[k]] = e.value;
        }
    }
    return out;
}

inline std::optional<Vector> solve_affine(const Matrix& a, const Vector& b)
{
    return solve_many(a, {b}).front();
}

/// Incrementally built echelon basis of a subspace of Q^dim.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return by_pivot_.size(); }

    /// Residual of v modulo the current span; zero iff v lies in the span.
    SparseRow reduce(const Vector& v) const
    {
        if (v.size() != dim_)
            throw DimensionMismatch("vector length does not match ambient dimension");
        SparseRow row = detail::to_sparse(v);
        detail::reduce_against(row, by_pivot_, dim_);
        return row;
    }

    bool contains(const Vector& v) const { return reduce(v).empty(); }

    /// Adds v if independent; returns whether it was added.
    bool insert(const Vector& v)
    {
        SparseRow row = reduce(v);
        if (row.empty())
            return false;
        const Rational inv = 1 / row.front().value;
        detail::scale(row, inv);
        by_pivot_.emplace(row.front().col, std::move(row));
        return true;
    }

private:
    std::size_t dim_;
    std::map<std::size_t, SparseRow> by_pivot_;
};

/// Extends `u` to a basis of span(v) by greedily taking vectors of `v` in order.
/// Throws InvalidBasis if `u` is dependent or not contained in span(v).
inline std::vector<Vector> complement_basis(const std::vector<Vector>& u, const std::vector<Vector>& v,
                                            std::size_t dim)
{
    EchelonBasis span_v(dim);
    for (const auto& x : v)
        span_v.insert(x);
    EchelonBasis current(dim);
    for (const auto& x : u) {
        if (!span_v.contains(x))
            throw InvalidBasis("vector of U is not contained in span(V)");
        if (!current.insert(x))
            throw InvalidBasis("U is linearly dependent");
    }
    std::vector<Vector> out;
    for (const auto& x : v) {
        if (current.insert(x))
            out.push_back(x);
    }
    return out;
}

/// Indices of a maximal independent subset of `vectors`, greedy in order.
inline std::vector<std::size_t> independent_subset(const std::vector<Vector>& vectors, std::size_t dim)
{
    EchelonBasis basis(dim);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        if (basis.insert(vectors[k]))
            out.push_back(k);
    }
    return out;
}

}  // namespace koszul

#endif
