#ifndef KOSZUL_TESTS_SUPPORT_HPP
#define KOSZUL_TESTS_SUPPORT_HPP

#include <cstdlib>
#include <string>
#include <vector>

#include <koszul/builtin_algebras.hpp>
#include <koszul/lie_algebra.hpp>

namespace support {

/// Sample data directory; ctest sets KOSZUL_DATA_DIR.
inline std::string data_path(const std::string& name)
{
    const char* dir = std::getenv("KOSZUL_DATA_DIR");
    return std::string(dir ? dir : "data") + "/" + name;
}

inline std::vector<koszul::LieAlgebra> all_algebras()
{
    return {koszul::abelian_algebra(1), koszul::abelian_algebra(2), koszul::su2(), koszul::sl2(),
            koszul::su2xsu2()};
}

}  // namespace support

#endif
