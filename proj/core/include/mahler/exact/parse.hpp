#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mahler/exact/multipoly.hpp"
#include "mahler/exact/ratfunc.hpp"

namespace mahler {

/// Parses a rational-function literal over the given variables.
///
/// Grammar: expr = term {("+"|"-") term}; term = unary {("*"|"/") unary};
/// unary = ("+"|"-") unary | power; power = atom ["^" ["-"] integer];
/// atom = integer | identifier | "(" expr ")".
/// Errors are reported as ParseError at (line, column + offset).
RatFunc parse_ratfunc(std::string_view text, const std::vector<std::string>& variables,
                      std::size_t line = 1, std::size_t column = 1);

/// Same grammar; the result must be a polynomial.
MultiPoly parse_polynomial(std::string_view text,
                           const std::vector<std::string>& variables,
                           std::size_t line = 1, std::size_t column = 1);

}  // namespace mahler
