#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mahler/exact/matrix.hpp"
#include "mahler/exact/rational.hpp"

namespace mahler {

/// Dense univariate polynomial over Q, coefficients from degree 0 upwards.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<BigRational> coeffs);

  static UPoly constant(const BigRational& c);
  static UPoly x_power(unsigned k);

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<BigRational>& coeffs() const noexcept { return c_; }
  BigRational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigRational(0); }
  const BigRational& leading() const;

  BigRational operator()(const BigRational& x) const;
  int sign_at(const BigRational& x) const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const BigRational& c);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  UPoly derivative() const;
  UPoly monic() const;
  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<BigRational> c_;
};

/// Quotient and remainder. Throws DomainError when b = 0.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& p);

/// det(x I - A).
UPoly charpoly(const QMatrix& a);
UPoly charpoly(const IntMatrix& a);

unsigned long euler_phi(unsigned long k);
/// The k-th cyclotomic polynomial.
UPoly cyclotomic(unsigned long k);

/// Sturm chain of a square-free polynomial.
std::vector<UPoly> sturm_chain(const UPoly& p);
/// Number of distinct real roots of chain[0] in (a, b].
int sturm_count(const std::vector<UPoly>& chain, const BigRational& a, const BigRational& b);

/// A real root of an integer polynomial, isolated in (lo, hi] or exact.
class RealRoot {
 public:
  /// Largest real root of p, if any.
  static std::optional<RealRoot> largest_of(const UPoly& p);

  const BigRational& lo() const noexcept { return lo_; }
  const BigRational& hi() const noexcept { return hi_; }
  bool exact() const noexcept { return exact_; }
  /// Square-free polynomial having this root.
  const UPoly& polynomial() const noexcept { return p_; }
  BigRational width() const { return hi_ - lo_; }

  void bisect();
  void refine(const BigRational& width);
  /// True when g vanishes at this root.
  bool is_root_of(const UPoly& g) const;

 private:
  UPoly p_;
  std::vector<UPoly> chain_;
  BigRational lo_, hi_;
  bool exact_ = false;
};

/// Exact equality of two real algebraic numbers.
bool equal(RealRoot a, RealRoot b);
/// -1, 0 or 1 for a < b, a = b, a > b.
int compare(RealRoot a, RealRoot b);

}  // namespace mahler
