#pragma once

#include <vector>

#include "mahler/exact/intlattice.hpp"

namespace mahler {

/// LLL reduction of linearly independent integer rows with parameter
/// delta = delta_num / delta_den in (1/4, 1]. Exact integral arithmetic
/// (Gram determinants and scaled Gram-Schmidt coefficients).
/// Throws DomainError when the rows are linearly dependent.
std::vector<IntVector> lll_reduce(std::vector<IntVector> basis, long delta_num = 99,
                                  long delta_den = 100);

/// True when the rows satisfy size reduction and the Lovasz condition.
bool is_lll_reduced(const std::vector<IntVector>& basis, long delta_num = 99,
                    long delta_den = 100);

}  // namespace mahler
