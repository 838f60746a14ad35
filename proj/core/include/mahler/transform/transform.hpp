#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mahler/exact/matrix.hpp"
#include "mahler/exact/upoly.hpp"
#include "mahler/points/rational_point.hpp"

namespace mahler {

/// Square matrix with non-negative integer entries acting monomially:
/// (T z)_i = prod_j z_j^{t_ij}.
class Transform {
 public:
  Transform() = default;
  /// Throws DimensionError unless square and nonempty, DomainError on a
  /// negative entry.
  explicit Transform(IntMatrix m);

  static Transform identity(std::size_t n);
  static Transform diagonal(const std::vector<long>& d);
  /// Block-diagonal transform diag(t_1, ..., t_r).
  static Transform block_diagonal(const std::vector<Transform>& blocks);

  std::size_t n() const noexcept { return m_.rows(); }
  const IntMatrix& matrix() const noexcept { return m_; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  Transform pow(unsigned long k) const;
  friend Transform operator*(const Transform& a, const Transform& b) {
    return Transform(a.m_ * b.m_);
  }
  friend bool operator==(const Transform& a, const Transform& b) { return a.m_ == b.m_; }

  /// Row-major "[[a,b],[c,d]]".
  std::string to_string() const;

 private:
  IntMatrix m_;
};

/// T alpha, exactly. Throws DimensionError on size mismatch.
RationalPoint act_point(const Transform& t, const RationalPoint& alpha);
/// T^k alpha for k = 0..k_max.
std::vector<RationalPoint> orbit(const Transform& t, const RationalPoint& alpha,
                                 std::size_t k_max);

/// Block-lower-triangular permutation form with irreducible diagonal blocks.
struct NormalForm {
  /// Original indices in their new order.
  std::vector<std::size_t> permutation;
  /// Original indices belonging to each diagonal block, blocks in order.
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<Transform> diagonal_blocks;
  /// Top blocks (no incoming edge from another block) come first.
  std::size_t kappa = 0;
  std::size_t nu = 0;
  /// For each lower block, whether some block to its left in its block row is nonzero.
  std::vector<bool> subdiagonal_nonzero;
};

NormalForm normal_form(const Transform& t);
/// P T P^t for the permutation of a normal form.
IntMatrix permuted_matrix(const Transform& t, const std::vector<std::size_t>& permutation);

/// Smallest k with phi(k) <= n and gcd(charpoly(T), Phi_k) nonconstant.
std::optional<unsigned long> root_of_unity_eigenvalue(const Transform& t);

struct SpectralData {
  UPoly char_poly;
  BigRational lo;
  BigRational hi;
  BigRational enclosure_width;
  bool exact = false;
};

/// Largest real root of the characteristic polynomial, which for a
/// non-negative matrix equals its spectral radius.
RealRoot perron_root(const IntMatrix& m);

/// Closed enclosure [lo, hi] of rho(T) of width <= width, taken as the
/// maximum over diagonal blocks of the normal form.
SpectralData spectral_radius(const Transform& t, const BigRational& width);

struct ClassMReport {
  bool nonsingular = false;
  bool root_of_unity_eigenvalue = false;
  std::optional<unsigned long> cyclotomic_index;
  bool perron_condition = false;
  /// Human-readable reason when perron_condition fails.
  std::string perron_detail;
  bool verdict = false;
  NormalForm normal_form;
};

ClassMReport class_m_check(const Transform& t);

struct LogRatio {
  enum class Kind { rational, irrational_certified, unknown };
  Kind kind = Kind::unknown;
  /// log rho1 / log rho2 = p / q when kind == rational.
  long p = 0;
  long q = 0;
};

/// Decides log rho(T1) / log rho(T2) in Q by searching rho1^q = rho2^p for
/// p, q <= exp_bound; definitive when both Perron roots are integers.
/// Throws DomainError when a spectral radius is <= 1.
LogRatio spectral_log_ratio(const Transform& t1, const Transform& t2, long exp_bound);

}  // namespace mahler
