#ifndef KOSZUL_KOSZUL_HPP
#define KOSZUL_KOSZUL_HPP

#include "builtin_algebras.hpp"
#include "cohomology.hpp"
#include "equivariant.hpp"
#include "errors.hpp"
#include "exact_linear.hpp"
#include "graded.hpp"
#include "kg_module.hpp"
#include "koszul_duality.hpp"
#include "lie_algebra.hpp"
#include "monomials.hpp"
#include "rational.hpp"
#include "sparse_matrix.hpp"
#include "transgression.hpp"
#include "twist.hpp"
#include "weil.hpp"

#endif
