#ifndef KOSZUL_LIE_ALGEBRA_HPP
#define KOSZUL_LIE_ALGEBRA_HPP

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exact_linear.hpp"
#include "monomials.hpp"
#include "rational.hpp"
#include "sparse_matrix.hpp"

namespace koszul {

struct BracketTerm {
    std::size_t k;
    Rational c;
};

/// A finite-dimensional Lie algebra over Q given by structure constants
/// [λ_i, λ_j] = Σ_k c^k_{ij} λ_k. Construction validates antisymmetry and Jacobi.
class LieAlgebra {
public:
    LieAlgebra() = default;

    /// `upper` holds brackets for i < j; the i > j half is filled by antisymmetry.
    /// Entries with i > j are accepted and must agree with any (j, i) entry.
    LieAlgebra(std::string name, std::vector<std::string> labels,
               const std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>>>& brackets)
        : name_(std::move(name)), labels_(std::move(labels)), dim_(labels_.size()),
          c_(dim_ * dim_ * dim_)
    {
        std::vector<bool> seen(dim_ * dim_, false);
        for (const auto& [ij, terms] : brackets) {
            const auto [i, j] = ij;
            if (i >= dim_ || j >= dim_)
                throw BadIndex("bracket index (" + std::to_string(i) + "," + std::to_string(j) +
                               ") out of range for dimension " + std::to_string(dim_));
            std::vector<Rational> coeffs(dim_);
            for (const auto& t : terms) {
                if (t.k >= dim_)
                    throw BadIndex("bracket term index " + std::to_string(t.k) + " out of range");
                coeffs[t.k] += t.c;
            }
            if (i == j) {
                if (!is_zero(coeffs))
                    throw AntisymmetryViolation("[" + labels_[i] + "," + labels_[i] + "] must vanish");
                continue;
            }
            for (std::size_t k = 0; k < dim_; ++k) {
                if (seen[i * dim_ + j] && at(i, j, k) != coeffs[k])
                    throw AntisymmetryViolation("conflicting entries for [" + labels_[i] + "," +
                                                labels_[j] + "]");
                at(i, j, k) = coeffs[k];
                at(j, i, k) = -coeffs[k];
            }
            seen[i * dim_ + j] = seen[j * dim_ + i] = true;
        }
        check_jacobi();
    }

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Labels of the dual basis λ^k, e.g. "i*".
    std::vector<std::string> dual_labels() const
    {
        std::vector<std::string> out;
        for (const auto& l : labels_)
            out.push_back(l + "*");
        return out;
    }

    /// c^k_{ij}
    const Rational& c(std::size_t i, std::size_t j, std::size_t k) const
    {
        return c_[(i * dim_ + j) * dim_ + k];
    }

    std::vector<BracketTerm> bracket(std::size_t i, std::size_t j) const
    {
        std::vector<BracketTerm> out;
        for (std::size_t k = 0; k < dim_; ++k) {
            if (c(i, j, k) != 0)
                out.push_back({k, c(i, j, k)});
        }
        return out;
    }

    Vector bracket_vector(std::size_t i, std::size_t j) const
    {
        Vector v(dim_);
        for (std::size_t k = 0; k < dim_; ++k)
            v[k] = c(i, j, k);
        return v;
    }

    bool is_abelian() const
    {
        for (const auto& x : c_) {
            if (x != 0)
                return false;
        }
        return true;
    }

    friend bool operator==(const LieAlgebra& a, const LieAlgebra& b)
    {
        return a.labels_ == b.labels_ && a.c_ == b.c_;
    }

private:
    Rational& at(std::size_t i, std::size_t j, std::size_t k) { return c_[(i * dim_ + j) * dim_ + k]; }

    void check_jacobi() const
    {
        // [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
        for (std::size_t a = 0; a < dim_; ++a) {
            for (std::size_t b = a + 1; b < dim_; ++b) {
                for (std::size_t cc = b + 1; cc < dim_; ++cc) {
                    for (std::size_t m = 0; m < dim_; ++m) {
                        Rational sum = 0;
                        for (std::size_t k = 0; k < dim_; ++k) {
                            sum += c(a, b, k) * c(k, cc, m);
                            sum += c(b, cc, k) * c(k, a, m);
                            sum += c(cc, a, k) * c(k, b, m);
                        }
                        if (sum != 0)
                            throw JacobiViolation({a, b, cc}, "Jacobi identity fails on (" + labels_[a] +
                                                                  ", " + labels_[b] + ", " + labels_[cc] + ")");
                    }
                }
            }
        }
    }

    std::string name_;
    std::vector<std::string> labels_;
    std::size_t dim_ = 0;
    std::vector<Rational> c_;
};

// JSON I/O ---------------------------------------------------------------------

/// {"name": str, "dim": n, "basis": [labels], "brackets": [{"i":, "j":, "terms": [{"k":, "c": "p/q"}]}]}
inline LieAlgebra lie_algebra_from_json(const nlohmann::json& doc)
{
    try {
        const std::string name = doc.value("name", std::string("g"));
        const auto dim = doc.at("dim").get<std::size_t>();
        std::vector<std::string> labels;
        if (doc.contains("basis"))
            labels = doc.at("basis").get<std::vector<std::string>>();
        else
            for (std::size_t k = 0; k < dim; ++k)
                labels.push_back("e" + std::to_string(k + 1));
        if (labels.size() != dim)
            throw ParseError("basis has " + std::to_string(labels.size()) + " labels, dim is " +
                             std::to_string(dim));
        std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>>> brackets;
        if (doc.contains("brackets")) {
            for (const auto& b : doc.at("brackets")) {
                std::vector<BracketTerm> terms;
                for (const auto& t : b.at("terms")) {
                    const auto& cj = t.at("c");
                    Rational c = cj.is_string() ? parse_rational(cj.get<std::string>())
                                                : Rational(cj.get<long long>());
                    terms.push_back({t.at("k").get<std::size_t>(), c});
                }
                brackets.push_back({{b.at("i").get<std::size_t>(), b.at("j").get<std::size_t>()}, terms});
            }
        }
        return LieAlgebra(name, labels, brackets);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("Lie algebra description: ") + e.what());
    }
}

inline nlohmann::json lie_algebra_to_json(const LieAlgebra& g)
{
    nlohmann::json brackets = nlohmann::json::array();
    for (std::size_t i = 0; i < g.dim(); ++i) {
        for (std::size_t j = i + 1; j < g.dim(); ++j) {
            auto terms = g.bracket(i, j);
            if (terms.empty())
                continue;
            nlohmann::json tj = nlohmann::json::array();
            for (const auto& t : terms)
                tj.push_back({{"k", t.k}, {"c", to_string(t.c)}});
            brackets.push_back({{"i", i}, {"j", j}, {"terms", tj}});
        }
    }
    return {{"name", g.name()}, {"dim", g.dim()}, {"basis", g.labels()}, {"brackets", brackets}};
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& source)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline LieAlgebra load_lie_algebra_file(const std::string& path)
{
    return lie_algebra_from_json(parse_json_text(read_file(path), path));
}

// Representations ----------------------------------------------------------------

/// Whether ρ is a homomorphism from g (left) or from the opposite algebra (right):
///   left:  ρ([x,y]) = ρ(x)ρ(y) - ρ(y)ρ(x)
///   right: ρ([x,y]) = ρ(y)ρ(x) - ρ(x)ρ(y)
enum class Orientation { left, right };

struct RepMatrices {
    std::vector<Matrix> ops;  // ops[k] = action of λ_k
    Orientation orientation = Orientation::left;

    std::size_t space_dim() const { return ops.empty() ? 0 : ops.front().rows(); }
};

/// Throws InvalidRepresentation naming the first failing pair.
inline void check_representation(const LieAlgebra& g, const RepMatrices& rep)
{
    if (rep.ops.size() != g.dim())
        throw InvalidRepresentation("expected " + std::to_string(g.dim()) + " action matrices, got " +
                                    std::to_string(rep.ops.size()));
    const std::size_t n = rep.space_dim();
    for (const auto& m : rep.ops) {
        if (m.rows() != n || m.cols() != n)
            throw InvalidRepresentation("action matrices must be square of a common size");
    }
    for (std::size_t i = 0; i < g.dim(); ++i) {
        for (std::size_t j = i + 1; j < g.dim(); ++j) {
            Matrix lhs(n, n);
            for (const auto& t : g.bracket(i, j))
                lhs += t.c * rep.ops[t.k];
            Matrix commutator = rep.ops[i] * rep.ops[j] - rep.ops[j] * rep.ops[i];
            if (rep.orientation == Orientation::right)
                commutator = -commutator;
            if (!(lhs == commutator))
                throw InvalidRepresentation("bracket compatibility fails for (" + g.labels()[i] + ", " +
                                            g.labels()[j] + ")");
        }
    }
}

/// Basis of V^g: the simultaneous kernel of all action matrices.
inline std::vector<Vector> invariant_vectors(const RepMatrices& rep)
{
    const std::size_t n = rep.space_dim();
    if (rep.ops.empty()) {
        std::vector<Vector> all;
        for (std::size_t k = 0; k < n; ++k) {
            Vector v(n);
            v[k] = 1;
            all.push_back(v);
        }
        return all;
    }
    return kernel_basis(Matrix::vstack(rep.ops, n));
}

struct AdjointMatrices {
    RepMatrices ad;    // on g, left
    RepMatrices coad;  // on g*, right
};

/// ad_k(λ_j) = [λ_k, λ_j]. coad_k(λ^m) = Σ_j c^m_{kj} λ^j, the Lie derivative of
/// the exterior model on degree-one forms.
inline AdjointMatrices adjoint_matrices(const LieAlgebra& g)
{
    const std::size_t n = g.dim();
    AdjointMatrices out;
    out.ad.orientation = Orientation::left;
    out.coad.orientation = Orientation::right;
    for (std::size_t k = 0; k < n; ++k) {
        Matrix ad(n, n);
        Matrix coad(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t m = 0; m < n; ++m) {
                ad.set(m, j, g.c(k, j, m));
                coad.set(j, m, g.c(k, j, m));
            }
        }
        out.ad.ops.push_back(std::move(ad));
        out.coad.ops.push_back(std::move(coad));
    }
    return out;
}

/// K(x, y) = trace(ad_x ad_y) in the given basis.
inline Matrix killing_form(const LieAlgebra& g)
{
    const auto ad = adjoint_matrices(g).ad;
    const std::size_t n = g.dim();
    Matrix k(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const Matrix prod = ad.ops[a] * ad.ops[b];
            Rational tr = 0;
            for (std::size_t i = 0; i < n; ++i)
                tr += prod.get(i, i);
            k.set(a, b, tr);
        }
    }
    return k;
}

struct ReductiveDecomposition {
    std::vector<Vector> center;
    std::vector<Vector> derived;
};

/// Certifies g = z(g) ⊕ [g,g] with the Killing form nondegenerate on [g,g].
inline ReductiveDecomposition certify_reductive(const LieAlgebra& g)
{
    const std::size_t n = g.dim();
    ReductiveDecomposition out;
    if (n == 0)
        return out;
    const auto ad = adjoint_matrices(g).ad;
    out.center = kernel_basis(Matrix::vstack(ad.ops, n));

    std::vector<Vector> brackets;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            brackets.push_back(g.bracket_vector(i, j));
    for (std::size_t k : independent_subset(brackets, n))
        out.derived.push_back(brackets[k]);

    if (out.center.size() + out.derived.size() != n)
        throw NotReductive("dim z(g) + dim [g,g] = " + std::to_string(out.center.size()) + " + " +
                           std::to_string(out.derived.size()) + " != " + std::to_string(n));
    std::vector<Vector> both = out.center;
    both.insert(both.end(), out.derived.begin(), out.derived.end());
    if (independent_subset(both, n).size() != n)
        throw NotReductive("z(g) and [g,g] intersect nontrivially");
    if (!out.derived.empty()) {
        const Matrix d = Matrix::from_columns(n, out.derived);
        const Matrix restricted = d.transpose() * killing_form(g) * d;
        if (rank(restricted) != out.derived.size())
            throw NotReductive("Killing form is degenerate on [g,g]");
    }
    return out;
}

}  // namespace koszul

#endif
