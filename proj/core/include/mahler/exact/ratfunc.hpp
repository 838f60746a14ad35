#pragma once

#include <span>
#include <string>
#include <vector>

#include "mahler/exact/matrix.hpp"
#include "mahler/exact/multipoly.hpp"

namespace mahler {

/// Rational function num/den over Q in normalized form.
///
/// Normal form: gcd(num, den) = 1, num and den have integer coefficients
/// with joint content 1, and the leading coefficient of den is positive.
/// Zero is 0/1.
class RatFunc {
 public:
  RatFunc() : den_(MultiPoly::constant({}, 1)) {}
  explicit RatFunc(const MultiPoly& polynomial);

  static RatFunc constant(std::vector<std::string> variables, const BigRational& c);

  const MultiPoly& num() const noexcept { return num_; }
  const MultiPoly& den() const noexcept { return den_; }
  const std::vector<std::string>& variables() const noexcept {
    return num_.variables();
  }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Value of a constant function. Throws DomainError otherwise.
  BigRational constant_value() const;
  /// num/den when den is constant. Throws DomainError otherwise.
  MultiPoly as_polynomial() const;

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFunc pow(long e) const;

  /// Exact value at a point. Throws PoleError when den vanishes there.
  BigRational evaluate(std::span<const BigRational> point) const;
  bool is_defined_at(std::span<const BigRational> point) const;

  /// f(Tz).
  RatFunc substitute_monomials(const IntMatrix& t) const;
  RatFunc embed(const std::vector<std::string>& variables) const;

  std::string to_string() const;

 private:
  friend RatFunc ratfunc_normalize(MultiPoly num, MultiPoly den);
  MultiPoly num_;
  MultiPoly den_;
};

/// Unique normalized representative of num/den. Throws DomainError if den = 0.
RatFunc ratfunc_normalize(MultiPoly num, MultiPoly den);

using RFMatrix = Matrix<RatFunc>;

template <>
struct FieldTraits<RatFunc> {
  static bool is_zero(const RatFunc& x) { return x.is_zero(); }
  static RatFunc zero_like(const RatFunc& x) {
    return RatFunc::constant(x.variables(), 0);
  }
  static RatFunc one_like(const RatFunc& x) {
    return RatFunc::constant(x.variables(), 1);
  }
};

RFMatrix rf_identity(const std::vector<std::string>& variables, std::size_t n);
RFMatrix rf_from_rational(const std::vector<std::string>& variables, const QMatrix& a);
/// Entrywise evaluation. Throws PoleError at a pole of any entry.
QMatrix evaluate(const RFMatrix& a, std::span<const BigRational> point);
RFMatrix substitute_monomials(const RFMatrix& a, const IntMatrix& t);

}  // namespace mahler
