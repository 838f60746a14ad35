#pragma once

#include <mpfr.h>

#include <string>

#include "mahler/exact/rational.hpp"

namespace mahler {

/// Binary floating-point number with explicit precision (MPFR).
///
/// Arithmetic operators round to nearest at the larger operand precision.
/// Functions taking an mpfr_rnd_t allow directed rounding for enclosures.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128);
  BigFloat(long v, mpfr_prec_t prec);
  BigFloat(const BigInt& v, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);
  BigFloat(const BigRational& v, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Exact value (the number is finite).
  BigRational to_rational() const;
  /// Scientific notation with `digits` significant digits, e.g. "8.1642150902e-1".
  std::string to_scientific(int digits) const;
  /// Fixed notation with `digits` digits after the point.
  std::string to_fixed(int digits) const;

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  BigFloat operator-() const;
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) {
    return mpfr_lessequal_p(a.v_, b.v_);
  }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return b <= a; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_);
  }

 private:
  mpfr_t v_;
};

/// Widens the MPFR exponent range once so that values such as 2^(-2^40)
/// stay representable.
void ensure_wide_exponent_range();

BigFloat add(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd);
BigFloat sub(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd);
BigFloat mul(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd);
BigFloat div(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd);
BigFloat abs(const BigFloat& a);
BigFloat log(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN);
BigFloat exp(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN);
BigFloat pow(const BigFloat& a, const BigInt& e, mpfr_rnd_t rnd = MPFR_RNDN);
BigFloat max(const BigFloat& a, const BigFloat& b);
BigFloat min(const BigFloat& a, const BigFloat& b);
/// |x| as an upper bound at the given precision.
BigFloat abs_upper(const BigRational& x, mpfr_prec_t prec);
/// 2^e.
BigFloat power_of_two(long e, mpfr_prec_t prec);

}  // namespace mahler
