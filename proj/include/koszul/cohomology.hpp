#ifndef KOSZUL_COHOMOLOGY_HPP
#define KOSZUL_COHOMOLOGY_HPP

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exact_linear.hpp"
#include "graded.hpp"
#include "parallel.hpp"

namespace koszul {

/// Cohomology is certified for degrees <= max_degree - 1; the window must reach max_degree.
struct Truncation {
    int max_degree = 8;
};

struct DegreeCohomology {
    std::vector<Vector> cocycles;        // echelon kernel basis of d_m
    std::vector<Vector> boundaries;      // basis of im d_{m-1}
    std::vector<Vector> representatives; // greedy complement of boundaries in cocycles

    std::size_t betti() const { return representatives.size(); }
};

inline DegreeCohomology cohomology_at(const Complex& c, int m)
{
    DegreeCohomology out;
    const std::size_t dim = c.space->dim(m);
    if (dim == 0)
        return out;
    out.cocycles = kernel_basis(c.d.block(m));
    if (c.d.has_block(m - 1))
        out.boundaries = image_rank(c.d.block(m - 1)).basis;
    out.representatives = complement_basis(out.boundaries, out.cocycles, dim);
    return out;
}

/// Sparse vector written against basis labels.
using LabeledVector = std::vector<std::pair<std::string, Rational>>;

inline LabeledVector label_vector(const Vector& v, const std::vector<std::string>& labels)
{
    LabeledVector out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] != 0)
            out.emplace_back(labels.at(k), v[k]);
    }
    return out;
}

struct CohomologyReport {
    std::map<int, std::size_t> betti;        // certified degrees
    std::map<int, std::size_t> uncertified;  // the boundary degree N
    std::map<int, std::vector<LabeledVector>> representatives;

    friend bool operator==(const CohomologyReport&, const CohomologyReport&) = default;
};

inline CohomologyReport cohomology(const Complex& c, Truncation trunc,
                                   const std::function<LabeledVector(int, const Vector&)>& labeler = {})
{
    const int n = trunc.max_degree;
    if (n < 0)
        throw WindowTooSmall("max degree must be nonnegative");
    if (c.truncated && c.hi() < n)
        throw WindowTooSmall("complex is truncated at degree " + std::to_string(c.hi()) +
                             ", cannot certify cohomology below " + std::to_string(n));
    const int lo = c.lo();
    std::vector<int> degrees;
    for (int m = std::min(lo, n); m <= n; ++m)
        degrees.push_back(m);
    std::vector<DegreeCohomology> results(degrees.size());
    parallel_for(degrees.size(), [&](std::size_t k) { results[k] = cohomology_at(c, degrees[k]); });

    CohomologyReport report;
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        const int m = degrees[k];
        if (m < lo)
            continue;
        if (m == n) {
            report.uncertified[m] = results[k].betti();
            continue;
        }
        report.betti[m] = results[k].betti();
        auto& reps = report.representatives[m];
        for (const auto& v : results[k].representatives)
            reps.push_back(labeler ? labeler(m, v) : label_vector(v, c.space->labels(m)));
    }
    return report;
}

inline std::vector<std::size_t> betti_table(const CohomologyReport& r, int lo, int hi)
{
    std::vector<std::size_t> out;
    for (int m = lo; m <= hi; ++m) {
        auto it = r.betti.find(m);
        out.push_back(it == r.betti.end() ? 0 : it->second);
    }
    return out;
}

// Chain maps ------------------------------------------------------------------

struct ChainMapCheck {
    bool pass = true;
    std::optional<int> degree;
    std::optional<std::size_t> column;
    LabeledVector defect;

    friend bool operator==(const ChainMapCheck&, const ChainMapCheck&) = default;
};

/// d_D ∘ f = f ∘ d_C in every degree where both differentials are exact.
inline ChainMapCheck check_chain_map(const LinMap& f, const Complex& c, const Complex& d)
{
    if (f.shift() != 0 || !same_dims(*f.source(), *c.space) || !same_dims(*f.target(), *d.space))
        throw DimensionMismatch("chain map shape does not match the complexes");
    const int lo = std::min(c.lo(), d.lo());
    const int hi = std::min(c.exact_top(), d.exact_top());
    const LinMap lhs = compose(d.d, f);
    const LinMap rhs = compose(f, c.d);
    ChainMapCheck out;
    if (auto diff = first_difference(lhs, rhs, lo, hi)) {
        out.pass = false;
        out.degree = diff->degree;
        out.column = diff->column;
        out.defect = label_vector(diff->defect, d.space->labels(diff->degree + 1));
    }
    return out;
}

struct InducedDegree {
    std::size_t source_betti = 0;
    std::size_t target_betti = 0;
    std::size_t rank = 0;

    friend bool operator==(const InducedDegree&, const InducedDegree&) = default;
};

struct QuasiIsoCheck {
    bool pass = true;
    ChainMapCheck chain_map;
    std::map<int, InducedDegree> degrees;
    std::optional<int> failed_degree;

    friend bool operator==(const QuasiIsoCheck&, const QuasiIsoCheck&) = default;
};

/// Induced map on H^m for m <= N-1, expressed against the target's representatives
/// modulo coboundaries; passes iff every induced matrix is invertible.
inline QuasiIsoCheck quasi_iso_check(const LinMap& f, const Complex& c, const Complex& d, Truncation trunc)
{
    QuasiIsoCheck out;
    out.chain_map = check_chain_map(f, c, d);
    if (!out.chain_map.pass) {
        out.pass = false;
        out.failed_degree = out.chain_map.degree;
        return out;
    }
    for (const Complex* x : {&c, &d}) {
        if (x->truncated && x->hi() < trunc.max_degree)
            throw WindowTooSmall("complex window does not reach the requested degree");
    }
    const int lo = std::min(c.lo(), d.lo());
    std::vector<int> degrees;
    for (int m = lo; m <= trunc.max_degree - 1; ++m)
        degrees.push_back(m);
    std::vector<InducedDegree> induced(degrees.size());
    parallel_for(degrees.size(), [&](std::size_t k) {
        const int m = degrees[k];
        const DegreeCohomology hc = cohomology_at(c, m);
        const DegreeCohomology hd = cohomology_at(d, m);
        InducedDegree& rec = induced[k];
        rec.source_betti = hc.betti();
        rec.target_betti = hd.betti();
        if (hc.betti() == 0 || hd.betti() == 0)
            return;
        std::vector<Vector> images;
        for (const auto& h : hc.representatives)
            images.push_back(f.apply(m, h));
        std::vector<Vector> basis = hd.representatives;
        basis.insert(basis.end(), hd.boundaries.begin(), hd.boundaries.end());
        const auto coords = solve_many(Matrix::from_columns(d.space->dim(m), basis), images);
        std::vector<Vector> induced_columns;
        for (const auto& x : coords) {
            if (!x)
                throw InconsistentSystem("image of a cocycle is not a cocycle");
            induced_columns.emplace_back(x->begin(), x->begin() + static_cast<long>(hd.betti()));
        }
        rec.rank = rank(Matrix::from_columns(hd.betti(), induced_columns));
    });
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        const auto& rec = induced[k];
        out.degrees[degrees[k]] = rec;
        const bool iso = rec.source_betti == rec.target_betti && rec.rank == rec.source_betti;
        if (!iso && out.pass) {
            out.pass = false;
            out.failed_degree = degrees[k];
        }
    }
    return out;
}

// Subcomplexes ------------------------------------------------------------------

/// A subcomplex given by per-degree bases (columns in ambient coordinates) together
/// with the intrinsic complex on those bases.
struct Subcomplex {
    Complex ambient;
    std::map<int, Matrix> basis;  // ambient_dim(m) x sub_dim(m)
    Complex complex;

    const Matrix& basis_at(int m) const
    {
        static const Matrix none;
        auto it = basis.find(m);
        return it == basis.end() ? none : it->second;
    }

    Vector embed(int m, const Vector& coords) const
    {
        if (coords.empty())
            return Vector(ambient.space->dim(m));
        return basis_at(m).apply(coords);
    }
};

/// Coordinates of ambient vectors in the subcomplex basis; throws NotInSubspace.
inline std::vector<Vector> sub_coordinates(const Subcomplex& sub, int m, const std::vector<Vector>& vectors)
{
    const std::size_t dim = sub.basis_at(m).cols();
    std::vector<Vector> out;
    if (dim == 0) {
        for (const auto& v : vectors) {
            if (!is_zero(v))
                throw NotInSubspace("nonzero vector in a degree where the subcomplex vanishes");
            out.emplace_back();
        }
        return out;
    }
    const auto coords = solve_many(sub.basis.at(m), vectors);
    for (const auto& x : coords) {
        if (!x)
            throw NotInSubspace("vector does not lie in the subcomplex at degree " + std::to_string(m));
        out.push_back(*x);
    }
    return out;
}

/// Builds the subcomplex spanned by `bases` for degrees in [ambient.lo, top].
/// The result is truncated at `top` unless the ambient complex is complete and
/// ends there. Throws NotInSubspace if d does not preserve the span.
inline Subcomplex make_subcomplex(const Complex& ambient, const std::map<int, std::vector<Vector>>& bases,
                                  int top, const std::string& prefix)
{
    Subcomplex sub;
    sub.ambient = ambient;
    const int lo = ambient.lo();
    if (ambient.truncated)
        top = std::min(top, ambient.hi());
    std::vector<std::vector<std::string>> labels;
    for (int m = lo; m <= top; ++m) {
        std::vector<std::string> lab;
        auto it = bases.find(m);
        const std::size_t count = it == bases.end() ? 0 : it->second.size();
        for (std::size_t k = 0; k < count; ++k)
            lab.push_back(prefix + "[" + std::to_string(m) + "," + std::to_string(k) + "]");
        sub.basis[m] = Matrix::from_columns(ambient.space->dim(m),
                                            it == bases.end() ? std::vector<Vector>{} : it->second);
        labels.push_back(std::move(lab));
    }
    auto space = make_space(lo, std::move(labels));
    LinMap d(space, space, 1);
    const bool truncated = ambient.truncated || top < ambient.hi();
    const int last = truncated ? top - 1 : top;
    std::vector<int> degrees;
    for (int m = lo; m <= last; ++m)
        degrees.push_back(m);
    std::vector<Matrix> blocks(degrees.size());
    parallel_for(degrees.size(), [&](std::size_t k) {
        const int m = degrees[k];
        if (space->dim(m) == 0 || !ambient.d.has_block(m))
            return;
        const Matrix image = ambient.d.block(m) * sub.basis.at(m);
        const auto coords = sub_coordinates(sub, m + 1, image.columns());
        blocks[k] = Matrix::from_columns(space->dim(m + 1), coords);
    });
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        const int m = degrees[k];
        if (space->dim(m) != 0 && ambient.d.has_block(m))
            d.set_block(m, std::move(blocks[k]));
    }
    sub.complex = make_complex(space, std::move(d), truncated);
    return sub;
}

/// Restricts an ambient-valued map on a source space to target subcomplex coordinates.
inline LinMap restrict_to_subcomplex(const LinMap& ambient_map, const Subcomplex& target)
{
    LinMap out(ambient_map.source(), target.complex.space, ambient_map.shift());
    const auto& src = *ambient_map.source();
    for (int m = src.lo(); m <= src.hi(); ++m) {
        const int t = m + ambient_map.shift();
        if (!target.complex.space->in_window(t) || src.dim(m) == 0)
            continue;
        const auto coords = sub_coordinates(target, t, ambient_map.block(m).columns());
        out.set_block(m, Matrix::from_columns(target.complex.space->dim(t), coords));
    }
    return out;
}

/// The inclusion of a subcomplex into its ambient complex.
inline LinMap embedding(const Subcomplex& sub)
{
    LinMap out(sub.complex.space, sub.ambient.space, 0);
    for (const auto& [m, b] : sub.basis) {
        if (sub.complex.space->in_window(m))
            out.set_block(m, b);
    }
    return out;
}

/// An ambient operator preserving the subcomplex, written in subcomplex coordinates.
/// Throws NotInSubspace if it does not preserve it.
inline LinMap restrict_operator(const LinMap& op, const Subcomplex& sub)
{
    return restrict_to_subcomplex(compose(op, embedding(sub)), sub);
}

/// Cohomology of a subcomplex with representatives written in ambient labels.
inline CohomologyReport cohomology(const Subcomplex& sub, Truncation trunc)
{
    return cohomology(sub.complex, trunc, [&](int m, const Vector& v) {
        return label_vector(sub.embed(m, v), sub.ambient.space->labels(m));
    });
}

/// Simultaneous kernel of the given degree-0 operators at degree m.
inline std::vector<Vector> common_kernel(const std::vector<Matrix>& ops, std::size_t dim)
{
    if (dim == 0)
        return {};
    if (ops.empty())
        return kernel_basis(Matrix(0, dim));
    return kernel_basis(Matrix::vstack(ops, dim));
}

// JSON -----------------------------------------------------------------------------

inline nlohmann::json to_json(const LabeledVector& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [label, c] : v)
        out.push_back({{"basis", label}, {"c", to_string(c)}});
    return out;
}

inline LabeledVector labeled_vector_from_json(const nlohmann::json& j)
{
    LabeledVector out;
    for (const auto& e : j)
        out.emplace_back(e.at("basis").get<std::string>(), parse_rational(e.at("c").get<std::string>()));
    return out;
}

inline nlohmann::json degree_map_json(const std::map<int, std::size_t>& m)
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [d, b] : m)
        out[std::to_string(d)] = b;
    return out;
}

inline std::map<int, std::size_t> degree_map_from_json(const nlohmann::json& j)
{
    std::map<int, std::size_t> out;
    for (const auto& [k, v] : j.items())
        out[std::stoi(k)] = v.get<std::size_t>();
    return out;
}

inline nlohmann::json to_json(const CohomologyReport& r)
{
    nlohmann::json reps = nlohmann::json::object();
    for (const auto& [d, list] : r.representatives) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : list)
            arr.push_back(to_json(v));
        reps[std::to_string(d)] = arr;
    }
    return {{"betti", degree_map_json(r.betti)},
            {"uncertified", degree_map_json(r.uncertified)},
            {"representatives", reps}};
}

inline CohomologyReport cohomology_report_from_json(const nlohmann::json& j)
{
    CohomologyReport r;
    r.betti = degree_map_from_json(j.at("betti"));
    r.uncertified = degree_map_from_json(j.at("uncertified"));
    for (const auto& [k, arr] : j.at("representatives").items()) {
        auto& list = r.representatives[std::stoi(k)];
        for (const auto& v : arr)
            list.push_back(labeled_vector_from_json(v));
    }
    return r;
}

inline nlohmann::json to_json(const ChainMapCheck& c)
{
    nlohmann::json out = {{"pass", c.pass}};
    if (c.degree) {
        out["degree"] = *c.degree;
        out["column"] = *c.column;
        out["defect"] = to_json(c.defect);
    }
    return out;
}

inline ChainMapCheck chain_map_check_from_json(const nlohmann::json& j)
{
    ChainMapCheck c;
    c.pass = j.at("pass").get<bool>();
    if (j.contains("degree")) {
        c.degree = j.at("degree").get<int>();
        c.column = j.at("column").get<std::size_t>();
        c.defect = labeled_vector_from_json(j.at("defect"));
    }
    return c;
}

inline nlohmann::json to_json(const QuasiIsoCheck& q)
{
    nlohmann::json degrees = nlohmann::json::object();
    for (const auto& [d, rec] : q.degrees)
        degrees[std::to_string(d)] = {
            {"source_betti", rec.source_betti}, {"target_betti", rec.target_betti}, {"rank", rec.rank}};
    nlohmann::json out = {{"pass", q.pass}, {"chain_map", to_json(q.chain_map)}, {"degrees", degrees}};
    if (q.failed_degree)
        out["failed_degree"] = *q.failed_degree;
    return out;
}

inline QuasiIsoCheck quasi_iso_check_from_json(const nlohmann::json& j)
{
    QuasiIsoCheck q;
    q.pass = j.at("pass").get<bool>();
    q.chain_map = chain_map_check_from_json(j.at("chain_map"));
    for (const auto& [k, v] : j.at("degrees").items())
        q.degrees[std::stoi(k)] = {v.at("source_betti").get<std::size_t>(),
                                   v.at("target_betti").get<std::size_t>(), v.at("rank").get<std::size_t>()};
    if (j.contains("failed_degree"))
        q.failed_degree = j.at("failed_degree").get<int>();
    return q;
}

}  // namespace koszul

#endif
