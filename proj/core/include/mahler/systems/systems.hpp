#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mahler/exact/ratfunc.hpp"
#include "mahler/exact/series.hpp"
#include "mahler/points/rational_point.hpp"
#include "mahler/transform/transform.hpp"

namespace mahler {

/// Linear Mahler system f(z) = A(z) f(Tz).
class MahlerSystem {
 public:
  MahlerSystem() = default;
  /// Throws DimensionError when the variable count differs from T's size or
  /// A is not square over exactly these variables, DomainError on repeated
  /// variable names, SingularError when det A is identically zero.
  MahlerSystem(Transform t, RFMatrix a, std::vector<std::string> variables);

  /// Builds the system from the orientation f(Tz) = A(z) f(z) by inverting A.
  static MahlerSystem from_inverse_orientation(Transform t, const RFMatrix& a,
                                               std::vector<std::string> variables);

  const Transform& transform() const noexcept { return t_; }
  const RFMatrix& matrix() const noexcept { return a_; }
  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t size() const noexcept { return a_.rows(); }
  std::size_t nvars() const noexcept { return vars_.size(); }

 private:
  Transform t_;
  RFMatrix a_;
  std::vector<std::string> vars_;
};

/// A(z) A(Tz) ... A(T^{k-1} z); the identity for k = 0.
RFMatrix iterate_matrix(const MahlerSystem& sys, unsigned k);

/// diag(A_{1,k1}, ..., A_{r,kr}) over diag(T_1^k1, ..., T_r^kr), variables
/// concatenated. Throws DomainError when two systems share a variable name.
MahlerSystem block_combine(const std::vector<MahlerSystem>& systems,
                           const std::vector<unsigned>& k);

RFMatrix kronecker_product(const RFMatrix& a, const RFMatrix& b);
/// A^{(x)d} over the same T. Solution components are the products
/// f_{i1} ... f_{id} over index tuples in lexicographic order.
MahlerSystem kronecker_power(const MahlerSystem& sys, unsigned d);

/// Truncation mod total degree `order` of the solution with f(0) = f0.
/// If T does not raise the degree of every variable, an iterate A_k with
/// k <= max_iterate is used instead. Throws PoleError when A has a pole at 0,
/// DomainError when f0 is not fixed by A(0) or no suitable iterate exists.
std::vector<TruncSeries> series_solve(const MahlerSystem& sys,
                                      const std::vector<BigRational>& f0, unsigned order,
                                      unsigned max_iterate = 8);

/// Smallest k >= 1 with every row sum of T^k at least 2, if k <= bound.
std::optional<unsigned> degree_raising_iterate(const Transform& t, unsigned bound);

struct GaugeTransform {
  SeriesMatrix phi;
  SeriesMatrix phi_inv;
  QMatrix b;
  unsigned order = 0;
};

/// B = A(0) and Phi(0) = I with Phi(z) = A(z) Phi(Tz) B^{-1} mod degree `order`.
/// Throws PoleError or SingularError when A(0) is undefined or singular and
/// ResonanceError when the linear system for some degree is singular.
GaugeTransform gauge_construct(const MahlerSystem& sys, unsigned order);

struct GaugeCheck {
  bool ok = true;
  /// First failing identity and coefficient, empty when ok.
  std::string witness;
};

/// Checks Phi Phi_inv = I, Phi^{-1}(z) A(z) Phi(Tz) = B and
/// A_k(z) = Phi(z) B^k Phi^{-1}(T^k z) for k <= 3, all mod degree `order`.
GaugeCheck gauge_verify(const MahlerSystem& sys, const GaugeTransform& g, unsigned order);

struct RegularityReport {
  enum class Verdict { regular_certified, regular_up_to_k, not_regular };
  Verdict verdict = Verdict::regular_up_to_k;
  std::size_t k_checked = 0;
  bool a0_invertible = false;
  /// Iterates where A is undefined or singular.
  std::vector<std::size_t> failures;
  /// Iterate at which the polydisk bound took over, when certified.
  std::optional<std::size_t> certified_from;
  std::string detail;
};

/// Exact check that A is defined and invertible at T^k alpha for k <= k_max.
/// Certification: once ||T^k alpha|| <= r < 1 the orbit stays in the polydisk
/// of radius r, where |p(z)| >= |p(0)| - r * sum_{mu != 0} |p_mu| keeps every
/// denominator and the numerator of det A away from zero.
RegularityReport regular_point_check(const MahlerSystem& sys, const RationalPoint& alpha,
                                     std::size_t k_max = 16);

std::string to_string(RegularityReport::Verdict v);

}  // namespace mahler
