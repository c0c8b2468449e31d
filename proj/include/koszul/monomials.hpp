#ifndef KOSZUL_MONOMIALS_HPP
#define KOSZUL_MONOMIALS_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace koszul {

/// Strictly increasing generator indices; λ^{i1} ∧ ... ∧ λ^{ip}. Degree = length.
using LambdaMonomial = std::vector<std::size_t>;

/// Exponent vector (e_1, ..., e_n) of a monomial in the symmetric algebra.
using SymMonomial = std::vector<int>;

/// Finite linear combination keyed by a monomial type; zero coefficients are never stored.
template <class Key>
using LinComb = std::map<Key, Rational>;

template <class Key>
void add_term(LinComb<Key>& comb, const Key& key, const Rational& coef)
{
    if (coef == 0)
        return;
    auto [it, inserted] = comb.try_emplace(key, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0)
            comb.erase(it);
    }
}

template <class Key>
void add_scaled(LinComb<Key>& comb, const LinComb<Key>& other, const Rational& factor)
{
    for (const auto& [k, v] : other)
        add_term(comb, k, factor * v);
}

using LambdaElement = LinComb<LambdaMonomial>;
using SymElement = LinComb<SymMonomial>;

// ---------------------------------------------------------------------------
// Sign oracle. Every graded sign in the library is produced here.
// ---------------------------------------------------------------------------

/// (-1)^(a*b): the Koszul sign for moving a degree-a object past a degree-b one.
inline int koszul_sign(int a, int b)
{
    return ((a * b) % 2 == 0) ? 1 : -1;
}

inline int parity_sign(long k)
{
    return (k % 2 == 0) ? 1 : -1;
}

/// Sign of the permutation sorting `indices`; 0 if an index repeats.
inline int sort_sign(std::vector<std::size_t>& indices)
{
    int sign = 1;
    for (std::size_t i = 1; i < indices.size(); ++i) {
        for (std::size_t j = i; j > 0 && indices[j - 1] >= indices[j]; --j) {
            if (indices[j - 1] == indices[j])
                return 0;
            std::swap(indices[j - 1], indices[j]);
            sign = -sign;
        }
    }
    return sign;
}

/// a ∧ b, normalized: returns the sign and the sorted monomial, or nothing if zero.
inline std::optional<std::pair<int, LambdaMonomial>> wedge(const LambdaMonomial& a, const LambdaMonomial& b)
{
    LambdaMonomial joined(a);
    joined.insert(joined.end(), b.begin(), b.end());
    const int sign = sort_sign(joined);
    if (sign == 0)
        return std::nullopt;
    return std::make_pair(sign, std::move(joined));
}

/// Interior product by the k-th basis vector: deletes index k with sign (-1)^position.
inline std::optional<std::pair<int, LambdaMonomial>> contract(std::size_t k, const LambdaMonomial& w)
{
    auto it = std::find(w.begin(), w.end(), k);
    if (it == w.end())
        return std::nullopt;
    const auto position = static_cast<long>(it - w.begin());
    LambdaMonomial rest(w);
    rest.erase(rest.begin() + position);
    return std::make_pair(parity_sign(position), std::move(rest));
}

inline LambdaElement wedge(const LambdaElement& a, const LambdaElement& b)
{
    LambdaElement out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            if (auto w = wedge(ma, mb))
                add_term(out, w->second, ca * cb * w->first);
        }
    }
    return out;
}

inline LambdaElement contract(std::size_t k, const LambdaElement& x)
{
    LambdaElement out;
    for (const auto& [m, c] : x) {
        if (auto r = contract(k, m))
            add_term(out, r->second, c * r->first);
    }
    return out;
}

inline int sym_degree(const SymMonomial& s)
{
    return std::accumulate(s.begin(), s.end(), 0);
}

inline SymMonomial sym_multiply(const SymMonomial& a, const SymMonomial& b)
{
    SymMonomial out(a);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += b.at(i);
    return out;
}

inline SymMonomial sym_generator(std::size_t n, std::size_t k)
{
    SymMonomial s(n, 0);
    s.at(k) = 1;
    return s;
}

inline SymElement sym_multiply(const SymElement& a, const SymElement& b)
{
    SymElement out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b)
            add_term(out, sym_multiply(ma, mb), ca * cb);
    }
    return out;
}

/// All strictly increasing index tuples of length p from {0..n-1}, lexicographic.
inline std::vector<LambdaMonomial> lambda_monomials(std::size_t n, std::size_t p)
{
    std::vector<LambdaMonomial> out;
    if (p > n)
        return out;
    LambdaMonomial current(p);
    std::iota(current.begin(), current.end(), std::size_t{0});
    while (true) {
        out.push_back(current);
        std::size_t i = p;
        while (i > 0 && current[i - 1] == n - p + (i - 1))
            --i;
        if (i == 0)
            break;
        ++current[i - 1];
        for (std::size_t j = i; j < p; ++j)
            current[j] = current[j - 1] + 1;
    }
    return out;
}

namespace detail {

inline void sym_rec(std::size_t pos, int remaining, SymMonomial& current, std::vector<SymMonomial>& out)
{
    if (pos + 1 == current.size()) {
        current[pos] = remaining;
        out.push_back(current);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[pos] = e;
        sym_rec(pos + 1, remaining - e, current, out);
    }
    current[pos] = 0;
}

}  // namespace detail

/// Exponent vectors of total degree i in n variables, graded-lexicographic
/// (x_0^i first).
inline std::vector<SymMonomial> sym_monomials(std::size_t n, int i)
{
    std::vector<SymMonomial> out;
    if (n == 0) {
        if (i == 0)
            out.emplace_back();
        return out;
    }
    SymMonomial current(n, 0);
    detail::sym_rec(0, i, current, out);
    return out;
}

/// Ordered list of monomials with reverse lookup.
template <class Key>
class MonomialIndex {
public:
    MonomialIndex() = default;
    explicit MonomialIndex(std::vector<Key> keys) : keys_(std::move(keys))
    {
        for (std::size_t k = 0; k < keys_.size(); ++k)
            lookup_.emplace(keys_[k], k);
    }

    std::size_t size() const { return keys_.size(); }
    const Key& at(std::size_t k) const { return keys_.at(k); }
    const std::vector<Key>& keys() const { return keys_; }

    std::optional<std::size_t> find(const Key& key) const
    {
        auto it = lookup_.find(key);
        if (it == lookup_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t index(const Key& key) const
    {
        auto it = lookup_.find(key);
        if (it == lookup_.end())
            throw BadIndex("monomial not in basis");
        return it->second;
    }

private:
    std::vector<Key> keys_;
    std::map<Key, std::size_t> lookup_;
};

// Formatting -----------------------------------------------------------------

inline std::string lambda_label(const LambdaMonomial& w, const std::vector<std::string>& names)
{
    if (w.empty())
        return "1";
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k > 0)
            out += "∧";
        out += names.at(w[k]);
    }
    return out;
}

inline std::string sym_label(const SymMonomial& s, const std::vector<std::string>& names)
{
    std::string out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == 0)
            continue;
        if (!out.empty())
            out += " ";
        out += names.at(k);
        if (s[k] > 1)
            out += "^" + std::to_string(s[k]);
    }
    return out.empty() ? "1" : out;
}

template <class Key, class LabelFn>
std::string format_comb(const LinComb<Key>& comb, LabelFn label)
{
    if (comb.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, coef] : comb) {
        Rational c = coef;
        if (!first)
            out += c < 0 ? " - " : " + ";
        else if (c < 0)
            out += "-";
        if (c < 0)
            c = -c;
        if (c != 1)
            out += to_string(c) + "·";
        out += label(key);
        first = false;
    }
    return out;
}

}  // namespace koszul

#endif
