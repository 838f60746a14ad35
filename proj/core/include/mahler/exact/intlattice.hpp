#pragma once

#include <vector>

#include "mahler/exact/rational.hpp"

namespace mahler {

using IntVector = std::vector<BigInt>;

/// Row Hermite normal form of the lattice spanned by `rows`: nonzero rows
/// only, pivots positive and strictly moving right, entries above a pivot
/// reduced into [0, pivot).
std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows);

/// Basis (in Hermite normal form) of {x in Z^r : sum_i x_i rows[i] = 0}.
std::vector<IntVector> integer_left_kernel(const std::vector<IntVector>& rows,
                                           std::size_t ncols);

/// Membership of v in the lattice with the given Hermite basis.
bool lattice_contains(const std::vector<IntVector>& hnf_basis, const IntVector& v);

BigInt dot(const IntVector& a, const IntVector& b);

/// Pairwise coprime integers > 1 such that every |x| (x != 0) of the input
/// is a product of their powers. Built by gcd refinement, no factoring.
std::vector<BigInt> coprime_basis(const std::vector<BigInt>& values);

/// Exponents of |x| over a coprime basis. Throws DomainError if |x| does not
/// factor over it.
IntVector factor_over(const std::vector<BigInt>& basis, const BigInt& x);

}  // namespace mahler
