#ifndef KOSZUL_SPARSE_MATRIX_HPP
#define KOSZUL_SPARSE_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace koszul {

struct Entry {
    std::size_t col;
    Rational value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sorted by column, no stored zeros.
using SparseRow = std::vector<Entry>;

/// Dense column vector.
using Vector = std::vector<Rational>;

inline bool is_zero(const Vector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

namespace detail {

/// row += factor * other
inline void axpy(SparseRow& row, const Rational& factor, const SparseRow& other)
{
    if (factor == 0 || other.empty())
        return;
    SparseRow out;
    out.reserve(row.size() + other.size());
    auto a = row.begin();
    auto b = other.begin();
    while (a != row.end() || b != other.end()) {
        if (b == other.end() || (a != row.end() && a->col < b->col)) {
            out.push_back(std::move(*a));
            ++a;
        } else if (a == row.end() || b->col < a->col) {
            out.push_back({b->col, factor * b->value});
            ++b;
        } else {
            Rational v = a->value + factor * b->value;
            if (v != 0)
                out.push_back({a->col, std::move(v)});
            ++a;
            ++b;
        }
    }
    row = std::move(out);
}

inline void scale(SparseRow& row, const Rational& factor)
{
    for (auto& e : row)
        e.value *= factor;
}

inline const Rational* find(const SparseRow& row, std::size_t col)
{
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const Entry& e, std::size_t c) { return e.col < c; });
    if (it != row.end() && it->col == col)
        return &it->value;
    return nullptr;
}

}  // namespace detail

/// Sparse row-major matrix over the rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.data_[i].push_back({i, Rational(1)});
        return m;
    }

    static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns)
    {
        Matrix m(rows, columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].size() != rows)
                throw DimensionMismatch("column length does not match row count");
            for (std::size_t r = 0; r < rows; ++r) {
                if (columns[c][r] != 0)
                    m.data_[r].push_back({c, columns[c][r]});
            }
        }
        return m;
    }

    static Matrix from_dense(const std::vector<Vector>& rows)
    {
        const std::size_t cols = rows.empty() ? 0 : rows.front().size();
        Matrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols)
                throw DimensionMismatch("ragged dense matrix");
            for (std::size_t c = 0; c < cols; ++c) {
                if (rows[r][c] != 0)
                    m.data_[r].push_back({c, rows[r][c]});
            }
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const SparseRow& row(std::size_t r) const { return data_.at(r); }

    void set_row(std::size_t r, SparseRow row)
    {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k].col >= cols_ || row[k].value == 0 || (k > 0 && row[k - 1].col >= row[k].col))
                throw DimensionMismatch("malformed sparse row");
        }
        data_.at(r) = std::move(row);
    }

    Rational get(std::size_t r, std::size_t c) const
    {
        check(r, c);
        const Rational* v = detail::find(data_[r], c);
        return v ? *v : Rational(0);
    }

    /// entry(r, c) += v
    void add(std::size_t r, std::size_t c, const Rational& v)
    {
        check(r, c);
        if (v == 0)
            return;
        auto& row = data_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const Entry& e, std::size_t col) { return e.col < col; });
        if (it != row.end() && it->col == c) {
            it->value += v;
            if (it->value == 0)
                row.erase(it);
        } else {
            row.insert(it, {c, v});
        }
    }

    void set(std::size_t r, std::size_t c, const Rational& v)
    {
        check(r, c);
        auto& row = data_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const Entry& e, std::size_t col) { return e.col < col; });
        if (it != row.end() && it->col == c) {
            if (v == 0)
                row.erase(it);
            else
                it->value = v;
        } else if (v != 0) {
            row.insert(it, {c, v});
        }
    }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto& r : data_)
            n += r.size();
        return n;
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const SparseRow& r) { return r.empty(); });
    }

    Vector column(std::size_t c) const
    {
        Vector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            if (const Rational* x = detail::find(data_[r], c))
                v[r] = *x;
        }
        return v;
    }

    std::vector<Vector> columns() const
    {
        std::vector<Vector> out(cols_, Vector(rows_));
        for (std::size_t r = 0; r < rows_; ++r) {
            for (const auto& e : data_[r])
                out[e.col][r] = e.value;
        }
        return out;
    }

    Vector apply(const Vector& v) const
    {
        if (v.size() != cols_)
            throw DimensionMismatch("matrix-vector size mismatch");
        Vector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (const auto& e : data_[r])
                out[r] += e.value * v[e.col];
        }
        return out;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (const auto& e : data_[r])
                t.data_[e.col].push_back({r, e.value});
        }
        return t;
    }

    Matrix select_columns(const std::vector<std::size_t>& which) const
    {
        std::vector<std::size_t> position(cols_, which.size());
        for (std::size_t k = 0; k < which.size(); ++k)
            position.at(which[k]) = k;
        Matrix out(rows_, which.size());
        for (std::size_t r = 0; r < rows_; ++r) {
            for (const auto& e : data_[r]) {
                if (position[e.col] < which.size())
                    out.data_[r].push_back({position[e.col], e.value});
            }
            std::sort(out.data_[r].begin(), out.data_[r].end(),
                      [](const Entry& a, const Entry& b) { return a.col < b.col; });
        }
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("matrix product: " + std::to_string(a.rows_) + "x" +
                                    std::to_string(a.cols_) + " times " + std::to_string(b.rows_) +
                                    "x" + std::to_string(b.cols_));
        Matrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            if (a.data_[r].empty())
                continue;
            std::map<std::size_t, Rational> acc;
            for (const auto& ea : a.data_[r]) {
                for (const auto& eb : b.data_[ea.col])
                    acc[eb.col] += ea.value * eb.value;
            }
            auto& row = out.data_[r];
            for (auto& [c, v] : acc) {
                if (v != 0)
                    row.push_back({c, std::move(v)});
            }
        }
        return out;
    }

    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        a += b;
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        a -= b;
        return a;
    }

    Matrix& operator+=(const Matrix& b)
    {
        same_shape(b);
        for (std::size_t r = 0; r < rows_; ++r)
            detail::axpy(data_[r], Rational(1), b.data_[r]);
        return *this;
    }

    Matrix& operator-=(const Matrix& b)
    {
        same_shape(b);
        for (std::size_t r = 0; r < rows_; ++r)
            detail::axpy(data_[r], Rational(-1), b.data_[r]);
        return *this;
    }

    Matrix& operator*=(const Rational& s)
    {
        if (s == 0) {
            for (auto& r : data_)
                r.clear();
            return *this;
        }
        for (auto& r : data_)
            detail::scale(r, s);
        return *this;
    }

    friend Matrix operator*(const Rational& s, Matrix a)
    {
        a *= s;
        return a;
    }

    Matrix operator-() const
    {
        Matrix out = *this;
        out *= Rational(-1);
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Blocks stacked vertically; all must share the column count.
    static Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols)
    {
        std::size_t rows = 0;
        for (const auto& b : blocks) {
            if (b.cols_ != cols)
                throw DimensionMismatch("vstack column mismatch");
            rows += b.rows_;
        }
        Matrix out(rows, cols);
        std::size_t at = 0;
        for (const auto& b : blocks) {
            for (std::size_t r = 0; r < b.rows_; ++r)
                out.data_[at++] = b.data_[r];
        }
        return out;
    }

    /// Blocks placed side by side; all must share the row count.
    static Matrix hstack(const std::vector<Matrix>& blocks, std::size_t rows)
    {
        std::size_t cols = 0;
        for (const auto& b : blocks) {
            if (b.rows_ != rows)
                throw DimensionMismatch("hstack row mismatch");
            cols += b.cols_;
        }
        Matrix out(rows, cols);
        std::size_t offset = 0;
        for (const auto& b : blocks) {
            for (std::size_t r = 0; r < rows; ++r) {
                for (const auto& e : b.data_[r])
                    out.data_[r].push_back({e.col + offset, e.value});
            }
            offset += b.cols_;
        }
        return out;
    }

private:
    void check(std::size_t r, std::size_t c) const
    {
        if (r >= rows_ || c >= cols_)
            throw BadIndex("matrix index (" + std::to_string(r) + "," + std::to_string(c) +
                           ") out of range");
    }

    void same_shape(const Matrix& b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw DimensionMismatch("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<SparseRow> data_;
};

/// Kronecker product; (a ⊗ b)[(ia, ib), (ja, jb)] = a[ia, ja] * b[ib, jb].
inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ra = 0; ra < a.rows(); ++ra) {
        for (std::size_t rb = 0; rb < b.rows(); ++rb) {
            SparseRow row;
            for (const auto& ea : a.row(ra)) {
                for (const auto& eb : b.row(rb))
                    row.push_back({ea.col * b.cols() + eb.col, ea.value * eb.value});
            }
            out.set_row(ra * b.rows() + rb, std::move(row));
        }
    }
    return out;
}

}  // namespace koszul

#endif
