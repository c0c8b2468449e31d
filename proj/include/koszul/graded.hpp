#ifndef KOSZUL_GRADED_HPP
#define KOSZUL_GRADED_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "monomials.hpp"
#include "sparse_matrix.hpp"

namespace koszul {

/// Degrees are confined to this range; anything wider is a WindowOverflow.
inline constexpr int kMaxAbsDegree = 256;

/// Finite-window graded vector space with labelled bases; zero outside [lo, hi].
class GradedSpace {
public:
    GradedSpace() = default;

    GradedSpace(int lo, std::vector<std::vector<std::string>> labels) : lo_(lo), labels_(std::move(labels))
    {
        if (lo_ < -kMaxAbsDegree || hi() > kMaxAbsDegree)
            throw WindowOverflow("degree window [" + std::to_string(lo_) + ", " + std::to_string(hi()) +
                                 "] exceeds the supported range");
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(labels_.size()) - 1; }
    bool in_window(int deg) const { return deg >= lo_ && deg <= hi(); }

    std::size_t dim(int deg) const
    {
        return in_window(deg) ? labels_[static_cast<std::size_t>(deg - lo_)].size() : 0;
    }

    const std::vector<std::string>& labels(int deg) const
    {
        static const std::vector<std::string> none;
        return in_window(deg) ? labels_[static_cast<std::size_t>(deg - lo_)] : none;
    }

    std::size_t total_dim() const
    {
        std::size_t n = 0;
        for (const auto& l : labels_)
            n += l.size();
        return n;
    }

private:
    int lo_ = 0;
    std::vector<std::vector<std::string>> labels_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

inline SpacePtr make_space(int lo, std::vector<std::vector<std::string>> labels)
{
    return std::make_shared<const GradedSpace>(lo, std::move(labels));
}

/// Dimensions agree in every degree.
inline bool same_dims(const GradedSpace& a, const GradedSpace& b)
{
    const int lo = std::min(a.lo(), b.lo());
    const int hi = std::max(a.hi(), b.hi());
    for (int d = lo; d <= hi; ++d) {
        if (a.dim(d) != b.dim(d))
            return false;
    }
    return true;
}

/// Homogeneous linear map of degree `shift`; block(d): source_d -> target_{d+shift}.
class LinMap {
public:
    LinMap() = default;

    LinMap(SpacePtr source, SpacePtr target, int shift)
        : source_(std::move(source)), target_(std::move(target)), shift_(shift)
    {
        for (int d = source_->lo(); d <= source_->hi(); ++d)
            blocks_.emplace_back(target_->dim(d + shift_), source_->dim(d));
    }

    static LinMap identity(const SpacePtr& space)
    {
        LinMap m(space, space, 0);
        for (int d = space->lo(); d <= space->hi(); ++d)
            m.set_block(d, Matrix::identity(space->dim(d)));
        return m;
    }

    const SpacePtr& source() const { return source_; }
    const SpacePtr& target() const { return target_; }
    int shift() const { return shift_; }

    bool has_block(int deg) const { return source_ && source_->in_window(deg); }

    const Matrix& block(int deg) const
    {
        if (!has_block(deg))
            throw BadIndex("no block at degree " + std::to_string(deg));
        return blocks_[static_cast<std::size_t>(deg - source_->lo())];
    }

    /// Zero matrix of the right shape outside the source window.
    Matrix block_or_zero(int deg) const
    {
        if (has_block(deg))
            return block(deg);
        return Matrix(target_->dim(deg + shift_), source_->dim(deg));
    }

    void set_block(int deg, Matrix m)
    {
        if (!has_block(deg))
            throw BadIndex("no block at degree " + std::to_string(deg));
        if (m.rows() != target_->dim(deg + shift_) || m.cols() != source_->dim(deg))
            throw DimensionMismatch("block at degree " + std::to_string(deg) + " must be " +
                                    std::to_string(target_->dim(deg + shift_)) + "x" +
                                    std::to_string(source_->dim(deg)) + ", got " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()));
        blocks_[static_cast<std::size_t>(deg - source_->lo())] = std::move(m);
    }

    Vector apply(int deg, const Vector& v) const
    {
        if (!has_block(deg))
            return Vector(target_->dim(deg + shift_));
        return block(deg).apply(v);
    }

    LinMap& operator+=(const LinMap& other)
    {
        check_compatible(other);
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            blocks_[k] += other.blocks_[k];
        return *this;
    }

    LinMap& operator-=(const LinMap& other)
    {
        check_compatible(other);
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            blocks_[k] -= other.blocks_[k];
        return *this;
    }

    LinMap& operator*=(const Rational& s)
    {
        for (auto& b : blocks_)
            b *= s;
        return *this;
    }

    friend LinMap operator+(LinMap a, const LinMap& b) { return a += b; }
    friend LinMap operator-(LinMap a, const LinMap& b) { return a -= b; }
    friend LinMap operator*(const Rational& s, LinMap a) { return a *= s; }

    bool is_zero() const
    {
        return std::all_of(blocks_.begin(), blocks_.end(), [](const Matrix& m) { return m.is_zero(); });
    }

private:
    void check_compatible(const LinMap& other) const
    {
        if (shift_ != other.shift_ || !same_dims(*source_, *other.source_) ||
            !same_dims(*target_, *other.target_))
            throw DimensionMismatch("linear maps have different shapes");
    }

    SpacePtr source_;
    SpacePtr target_;
    int shift_ = 0;
    std::vector<Matrix> blocks_;
};

/// g ∘ f
inline LinMap compose(const LinMap& g, const LinMap& f)
{
    if (!same_dims(*f.target(), *g.source()))
        throw DimensionMismatch("composition: target of f does not match source of g");
    LinMap out(f.source(), g.target(), f.shift() + g.shift());
    const auto& src = *f.source();
    for (int d = src.lo(); d <= src.hi(); ++d) {
        const int mid = d + f.shift();
        if (!g.has_block(mid) || g.source()->dim(mid) == 0)
            continue;
        out.set_block(d, g.block(mid) * f.block(d));
    }
    return out;
}

struct MapDifference {
    int degree;
    std::size_t column;
    Vector defect;
};

/// First (degree, column) where a and b differ, scanning degrees in [lo, hi].
inline std::optional<MapDifference> first_difference(const LinMap& a, const LinMap& b, int lo, int hi)
{
    for (int d = lo; d <= hi; ++d) {
        if (!a.has_block(d) && !b.has_block(d))
            continue;
        const Matrix diff = a.block_or_zero(d) - b.block_or_zero(d);
        if (diff.is_zero())
            continue;
        const Matrix t = diff.transpose();
        for (std::size_t c = 0; c < t.rows(); ++c) {
            if (!t.row(c).empty())
                return MapDifference{d, c, diff.column(c)};
        }
    }
    return std::nullopt;
}

/// Cochain complex over a finite window. When `truncated` is set, the space is a
/// brutal truncation of a larger complex: the differential out of the top degree
/// is missing, so only degrees <= hi - 1 carry the true differential.
struct Complex {
    SpacePtr space;
    LinMap d;
    bool truncated = false;

    int lo() const { return space->lo(); }
    int hi() const { return space->hi(); }
    /// Highest degree whose outgoing differential is exact.
    int exact_top() const { return truncated ? hi() - 1 : hi(); }
};

inline Complex make_complex(SpacePtr space, LinMap d, bool truncated)
{
    if (d.shift() != 1 || !same_dims(*d.source(), *space) || !same_dims(*d.target(), *space))
        throw DimensionMismatch("differential must be a degree +1 endomorphism");
    return Complex{std::move(space), std::move(d), truncated};
}

// Tensor products of graded spaces ---------------------------------------------

/// Basis of (A ⊗ B)_t ordered by the degree p of the left factor, then by the
/// left index, then by the right index. Total degree may be capped.
class TensorLayout {
public:
    struct Block {
        int p;
        int q;
        std::size_t offset;
    };

    TensorLayout(SpacePtr left, SpacePtr right, std::optional<int> cap = std::nullopt)
        : left_(std::move(left)), right_(std::move(right))
    {
        const int lo = left_->lo() + right_->lo();
        int hi = left_->hi() + right_->hi();
        if (cap)
            hi = std::min(hi, *cap);
        std::vector<std::vector<std::string>> labels;
        for (int t = lo; t <= hi; ++t) {
            std::vector<Block> blocks;
            std::vector<std::string> lab;
            std::size_t offset = 0;
            for (int p = left_->lo(); p <= left_->hi(); ++p) {
                const int q = t - p;
                const std::size_t da = left_->dim(p);
                const std::size_t db = right_->dim(q);
                if (da == 0 || db == 0)
                    continue;
                blocks.push_back({p, q, offset});
                for (std::size_t a = 0; a < da; ++a)
                    for (std::size_t b = 0; b < db; ++b)
                        lab.push_back(left_->labels(p)[a] + " ⊗ " + right_->labels(q)[b]);
                offset += da * db;
            }
            blocks_.push_back(std::move(blocks));
            labels.push_back(std::move(lab));
        }
        space_ = make_space(lo, std::move(labels));
    }

    const SpacePtr& space() const { return space_; }
    const SpacePtr& left() const { return left_; }
    const SpacePtr& right() const { return right_; }

    const std::vector<Block>& blocks(int t) const
    {
        static const std::vector<Block> none;
        if (!space_->in_window(t))
            return none;
        return blocks_[static_cast<std::size_t>(t - space_->lo())];
    }

    std::optional<std::size_t> offset(int p, int q) const
    {
        for (const auto& b : blocks(p + q)) {
            if (b.p == p)
                return b.offset;
        }
        return std::nullopt;
    }

    std::optional<std::size_t> index(int p, std::size_t a, int q, std::size_t b) const
    {
        auto off = offset(p, q);
        if (!off)
            return std::nullopt;
        return *off + a * right_->dim(q) + b;
    }

private:
    SpacePtr left_;
    SpacePtr right_;
    SpacePtr space_;
    std::vector<std::vector<Block>> blocks_;
};

/// Scalar attached to the block (p, q) of a tensor operator.
using BlockSign = std::function<int(int p, int q)>;

/// (f ⊗ g)(a ⊗ b) = (-1)^{|g| |a|} f(a) ⊗ g(b)
inline BlockSign koszul_rule(int right_shift)
{
    return [right_shift](int p, int) { return koszul_sign(right_shift, p); };
}

inline BlockSign plain_rule()
{
    return [](int, int) { return 1; };
}

/// Σ_{(p,q)} sign(p,q) · f_p ⊗ g_q between two tensor layouts. Terms landing
/// outside the target layout are dropped (truncation).
inline LinMap tensor_operator(const TensorLayout& source, const TensorLayout& target, const LinMap& f,
                              const LinMap& g, const BlockSign& sign)
{
    const int shift = f.shift() + g.shift();
    LinMap out(source.space(), target.space(), shift);
    const auto& src = *source.space();
    for (int t = src.lo(); t <= src.hi(); ++t) {
        if (!target.space()->in_window(t + shift))
            continue;
        Matrix m(target.space()->dim(t + shift), src.dim(t));
        for (const auto& blk : source.blocks(t)) {
            if (!f.has_block(blk.p) || !g.has_block(blk.q))
                continue;
            const int p2 = blk.p + f.shift();
            const int q2 = blk.q + g.shift();
            auto toff = target.offset(p2, q2);
            if (!toff)
                continue;
            const Matrix& fa = f.block(blk.p);
            const Matrix& gb = g.block(blk.q);
            const std::size_t db_src = source.right()->dim(blk.q);
            const std::size_t db_tgt = target.right()->dim(q2);
            const Rational s(sign(blk.p, blk.q));
            for (std::size_t ra = 0; ra < fa.rows(); ++ra) {
                for (const auto& ea : fa.row(ra)) {
                    for (std::size_t rb = 0; rb < gb.rows(); ++rb) {
                        for (const auto& eb : gb.row(rb)) {
                            m.add(*toff + ra * db_tgt + rb, blk.offset + ea.col * db_src + eb.col,
                                  s * ea.value * eb.value);
                        }
                    }
                }
            }
        }
        out.set_block(t, std::move(m));
    }
    return out;
}

}  // namespace koszul

#endif
