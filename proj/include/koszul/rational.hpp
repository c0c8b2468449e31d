#ifndef KOSZUL_RATIONAL_HPP
#define KOSZUL_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace koszul {

// GMP-backed rationals are canonical after every operation.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// "p/q", or "p" when q = 1.
inline std::string to_string(const Rational& r)
{
    const Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

namespace detail {

inline Integer parse_integer(std::string_view text, std::string_view whole)
{
    std::size_t pos = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+'))
        pos = 1;
    if (pos == text.size())
        throw ParseError("invalid rational '" + std::string(whole) + "'");
    for (std::size_t i = pos; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw ParseError("invalid rational '" + std::string(whole) + "'");
    }
    std::string digits(text[0] == '+' ? text.substr(1) : text);
    return Integer(digits);
}

}  // namespace detail

/// Parses "p/q" or "p"; the result is canonical and q must be nonzero.
inline Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(detail::parse_integer(text, text));
    const Integer num = detail::parse_integer(text.substr(0, slash), text);
    const Integer den = detail::parse_integer(text.substr(slash + 1), text);
    if (den == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

}  // namespace koszul

#endif
