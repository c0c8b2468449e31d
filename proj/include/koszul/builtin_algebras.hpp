#ifndef KOSZUL_BUILTIN_ALGEBRAS_HPP
#define KOSZUL_BUILTIN_ALGEBRAS_HPP

#include <string>
#include <vector>

#include "errors.hpp"
#include "lie_algebra.hpp"

namespace koszul {

namespace builtin_json {

inline constexpr const char* su2 = R"({
  "name": "su2", "dim": 3, "basis": ["i", "j", "k"],
  "brackets": [
    {"i": 0, "j": 1, "terms": [{"k": 2, "c": "2"}]},
    {"i": 1, "j": 2, "terms": [{"k": 0, "c": "2"}]},
    {"i": 0, "j": 2, "terms": [{"k": 1, "c": "-2"}]}
  ]
})";

inline constexpr const char* sl2 = R"({
  "name": "sl2", "dim": 3, "basis": ["h", "e", "f"],
  "brackets": [
    {"i": 0, "j": 1, "terms": [{"k": 1, "c": "2"}]},
    {"i": 0, "j": 2, "terms": [{"k": 2, "c": "-2"}]},
    {"i": 1, "j": 2, "terms": [{"k": 0, "c": "1"}]}
  ]
})";

inline constexpr const char* su2xsu2 = R"({
  "name": "su2xsu2", "dim": 6, "basis": ["i1", "j1", "k1", "i2", "j2", "k2"],
  "brackets": [
    {"i": 0, "j": 1, "terms": [{"k": 2, "c": "2"}]},
    {"i": 1, "j": 2, "terms": [{"k": 0, "c": "2"}]},
    {"i": 0, "j": 2, "terms": [{"k": 1, "c": "-2"}]},
    {"i": 3, "j": 4, "terms": [{"k": 5, "c": "2"}]},
    {"i": 4, "j": 5, "terms": [{"k": 3, "c": "2"}]},
    {"i": 3, "j": 5, "terms": [{"k": 4, "c": "-2"}]}
  ]
})";

}  // namespace builtin_json

inline LieAlgebra abelian_algebra(std::size_t n)
{
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < n; ++k)
        labels.push_back("t" + std::to_string(k + 1));
    return LieAlgebra("abelian" + std::to_string(n), labels, {});
}

inline LieAlgebra su2() { return lie_algebra_from_json(nlohmann::json::parse(builtin_json::su2)); }
inline LieAlgebra sl2() { return lie_algebra_from_json(nlohmann::json::parse(builtin_json::sl2)); }
inline LieAlgebra su2xsu2() { return lie_algebra_from_json(nlohmann::json::parse(builtin_json::su2xsu2)); }

/// Names accepted: su2, sl2, su2xsu2, abelian:n.
inline bool is_builtin_algebra_name(const std::string& name)
{
    return name == "su2" || name == "sl2" || name == "su2xsu2" || name.rfind("abelian:", 0) == 0;
}

inline LieAlgebra builtin_algebra(const std::string& name)
{
    if (name == "su2")
        return su2();
    if (name == "sl2")
        return sl2();
    if (name == "su2xsu2")
        return su2xsu2();
    if (name.rfind("abelian:", 0) == 0) {
        const std::string count = name.substr(8);
        if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad abelian dimension in '" + name + "'");
        return abelian_algebra(std::stoul(count));
    }
    throw ParseError("unknown built-in algebra '" + name + "'");
}

}  // namespace koszul

#endif
