#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mahler/eval/bigfloat.hpp"
#include "mahler/exact/intlattice.hpp"
#include "mahler/points/rational_point.hpp"
#include "mahler/transform/transform.hpp"

namespace mahler {

/// {mu in Z^n : alpha^mu = 1}, signs included.
struct ExponentLattice {
  std::size_t dimension = 0;
  /// Hermite normal form basis.
  std::vector<IntVector> basis;
  /// Which coordinates of alpha are negative; alpha^mu = 1 needs
  /// sum of mu_i over these to be even.
  std::vector<bool> negative;
  /// Pairwise coprime integers over which every |alpha_i| factors.
  std::vector<BigInt> primes;
  /// exponents[i][c]: exponent of primes[c] in |alpha_i|.
  std::vector<IntVector> exponents;

  std::size_t rank() const noexcept { return basis.size(); }
  bool contains(const IntVector& mu) const;
};

ExponentLattice multiplicative_relation_lattice(const RationalPoint& alpha);

/// alpha^mu, exactly.
BigRational power_product(const RationalPoint& alpha, const IntVector& mu);

struct TIndependence {
  enum class Kind { independent, dependent, unknown };
  Kind kind = Kind::unknown;
  /// Witness when dependent: (T^{a+kb} alpha)^mu = 1 for every k >= 0.
  IntVector mu;
  long a = 0;
  long b = 0;
  /// Largest modulus examined when unknown.
  long bound = 0;
  std::string detail;
};

/// Decides T-independence of alpha. Moduli b = 1..b_max are searched first;
/// then a certificate at the modulus b0 = lcm{k : phi(k) <= n(n-1)} settles
/// the question whenever T^b0 is small enough to compute. Every dependence
/// can be witnessed with a = 0, so a_max only bounds the reported search.
/// Throws SingularError if T is singular, DimensionError on size mismatch.
TIndependence is_t_independent(const Transform& t, const RationalPoint& alpha,
                               long b_max = 12, long a_max = 12);

struct TendsToZero {
  enum class Kind { yes, no, unknown };
  Kind kind = Kind::unknown;
  /// First k with every |(T^k alpha)_i| < 1 when yes.
  std::size_t k0 = 0;
  std::size_t k_max = 0;
  std::string detail;
};

/// Looks for an iterate inside the open unit polydisk. Answers no only when
/// every |alpha_i| >= 1, since then no iterate can shrink.
/// Throws DomainError unless T is in class M.
TendsToZero tends_to_zero(const Transform& t, const RationalPoint& alpha,
                          std::size_t k_max = 64);

struct AdmissibilityBounds {
  std::size_t k_max = 64;
  long b_max = 12;
  long a_max = 12;
};

struct AdmissibilityReport {
  enum class Verdict { admissible, not_admissible, unknown };
  ClassMReport class_m;
  TendsToZero tends_to_zero;
  TIndependence t_independent;
  Verdict verdict = Verdict::unknown;
};

AdmissibilityReport admissible_pair(const Transform& t, const RationalPoint& alpha,
                                    const AdmissibilityBounds& bounds = {});

std::string to_string(TIndependence::Kind k);
std::string to_string(TendsToZero::Kind k);
std::string to_string(AdmissibilityReport::Verdict v);

/// Absolute multiplicative Weil height of (alpha_1 : ... : alpha_n : 1).
BigRational weil_height(const RationalPoint& alpha);

struct ProfileRow {
  std::size_t k = 0;
  /// -log max_i |(T^k alpha)_i|.
  BigFloat neg_log_norm;
  /// neg_log_norm / rho^k.
  BigFloat ratio;
};

/// Rows k = 0..k_max. Throws DomainError unless T is in class M and the orbit
/// of alpha is certified to tend to zero.
std::vector<ProfileRow> condition_b_profile(const Transform& t, const RationalPoint& alpha,
                                            std::size_t k_max, mpfr_prec_t prec = 256);

}  // namespace mahler
