#pragma once

#include "cartier/groebner.hpp"

namespace cartier {

/// Largest e accepted by the Frobenius operations below. Defaults to 6 and
/// can be raised with the CARTIER_MAX_E environment variable.
unsigned max_frobenius_level();
void check_frobenius_level(unsigned e);

/// W^{[p^e]}: entrywise p^e-th powers of the generators.
FreeSubmodule bracket_power(const FreeSubmodule& W, unsigned e);

/// W^{[1/p^e]}: smallest V with W inside V^{[p^e]}, spanned by all base-p^e
/// digits of the generators.
FreeSubmodule frobenius_root(const FreeSubmodule& W, unsigned e);

/// Digits of a vector, taken entrywise; zero digits are skipped.
std::vector<Vec> vector_digits(const Vec& v, unsigned e);

}  // namespace cartier
