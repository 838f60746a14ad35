#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mahler/eval/bigfloat.hpp"
#include "mahler/points/rational_point.hpp"
#include "mahler/systems/systems.hpp"

namespace mahler {

struct EvalOptions {
  /// Iteration depth: f(alpha) = A_k(alpha) f(T^k alpha).
  unsigned k = 4;
  /// Series truncation order at the deep orbit point.
  unsigned order = 16;
  mpfr_prec_t prec = 128;
  /// Bound on every coefficient of the solution. When absent, the default
  /// 1 + sum |c| over the truncation at `majorant_order` is assumed.
  std::optional<BigRational> majorant;
  unsigned majorant_order = 32;
  /// Throw ToleranceError when some component's bound exceeds this.
  std::optional<BigRational> tolerance;
};

struct EvalResult {
  std::vector<BigFloat> values;
  /// Componentwise absolute error bounds, rounded upward.
  std::vector<BigFloat> error_bound;
  /// Exact value for components whose series is a verified polynomial.
  std::vector<std::optional<BigRational>> exact;
  unsigned k_used = 0;
  unsigned order_used = 0;
  BigRational majorant;
  /// True when the majorant is the default heuristic rather than user supplied.
  bool majorant_assumed = true;
  /// max_i |(T^k alpha)_i|.
  BigRational orbit_radius;

  /// "v +- b" for component i, v with `digits` significant digits.
  std::string to_string(std::size_t i, int digits) const;
};

/// f(alpha) for the solution with f(0) = f0. Throws DomainError when A is
/// undefined or singular along the first k orbit points or T^k alpha is not
/// inside the open unit polydisk, plus the errors of series_solve.
EvalResult eval_function(const MahlerSystem& sys, const std::vector<BigRational>& f0,
                         const RationalPoint& alpha, const EvalOptions& options = {});

/// sum_{d >= order} binom(d + n - 1, n - 1) r^d, rounded upward. Requires 0 <= r < 1.
BigFloat monomial_tail_bound(const BigRational& r, unsigned order, std::size_t n,
                             mpfr_prec_t prec);

struct DecayRow {
  std::vector<unsigned long> k;
  unsigned long k_norm = 0;
  /// log max_i |(T_k alpha)_i|.
  BigFloat log_norm;
  /// -log_norm / rho^{|k|} with rho = exp(1 / |Theta|).
  BigFloat ratio;
};

/// Rows for each iteration vector, T_k = diag(T_1^{k_1}, ..., T_r^{k_r}).
/// Throws DomainError unless every T_i is in class M and the orbit of
/// alpha_i is certified to tend to zero.
std::vector<DecayRow> orbit_decay_report(const std::vector<Transform>& transforms,
                                         const std::vector<RationalPoint>& points,
                                         const std::vector<std::vector<unsigned long>>& k_vectors,
                                         mpfr_prec_t prec = 256);

}  // namespace mahler
