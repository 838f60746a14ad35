#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace mahler {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Builds a canonical p/q. Throws DomainError when q is zero.
BigRational make_rational(const BigInt& num, const BigInt& den);

/// Parses "p", "-p" or "p/q" (no spaces). Throws DomainError on bad input.
BigRational parse_rational(std::string_view text);

/// "p" when the denominator is one, "p/q" otherwise.
std::string to_string(const BigRational& q);
std::string to_string(const BigInt& z);

/// q^e for any integer e; e < 0 requires q != 0.
BigRational pow(const BigRational& base, long exponent);
BigRational pow(const BigRational& base, const BigInt& exponent);
BigInt pow(const BigInt& base, unsigned long exponent);

BigRational abs(const BigRational& q);

/// Least common multiple of the denominators.
BigInt lcm_denominators(const std::vector<BigRational>& values);

}  // namespace mahler
