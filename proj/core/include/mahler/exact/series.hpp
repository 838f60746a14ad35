#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mahler/exact/matrix.hpp"
#include "mahler/exact/multipoly.hpp"
#include "mahler/exact/ratfunc.hpp"

namespace mahler {

/// Multivariate power series over Q truncated at total degree `order`:
/// only terms of total degree < order are kept.
class TruncSeries {
 public:
  using Terms = MultiPoly::Terms;

  TruncSeries() = default;
  TruncSeries(std::vector<std::string> variables, unsigned order);

  static TruncSeries constant(std::vector<std::string> variables, unsigned order,
                              const BigRational& c);
  static TruncSeries from_polynomial(const MultiPoly& p, unsigned order);
  /// Expansion of num/den at the origin. Throws PoleError when den(0) = 0.
  static TruncSeries from_ratfunc(const RatFunc& f, unsigned order);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t nvars() const noexcept { return vars_.size(); }
  unsigned order() const noexcept { return order_; }
  const Terms& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  BigRational constant_term() const;
  BigRational coefficient(const Exponent& e) const;
  /// Adds c z^e; terms of total degree >= order are dropped.
  void add_term(const Exponent& e, const BigRational& c);

  TruncSeries operator-() const;
  TruncSeries& operator+=(const TruncSeries& o);
  TruncSeries& operator-=(const TruncSeries& o);
  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
  friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator*(TruncSeries a, const BigRational& c);
  /// Division by a series with nonzero constant term.
  friend TruncSeries operator/(const TruncSeries& a, const TruncSeries& b);
  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.vars_ == b.vars_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

  /// Same series with a smaller or equal order.
  TruncSeries truncate(unsigned order) const;
  MultiPoly to_polynomial() const;
  /// Exact value of the truncation (a polynomial) at a rational point.
  BigRational evaluate(std::span<const BigRational> point) const;
  /// 1 + sum of |coefficients|.
  BigRational coefficient_majorant() const;

  std::string to_string() const;

 private:
  void check_compatible(const TruncSeries& o) const;

  std::vector<std::string> vars_;
  unsigned order_ = 0;
  Terms terms_;
};

/// s(Tz): z^mu becomes z^(T^t mu), terms pushed past the order are dropped.
TruncSeries series_substitute_transform(const TruncSeries& s, const IntMatrix& t);

/// Multiplicative inverse modulo total degree `order`. Throws SingularError
/// when the constant term is zero.
TruncSeries series_invert(const TruncSeries& s);

using SeriesMatrix = Matrix<TruncSeries>;

SeriesMatrix series_identity(const std::vector<std::string>& variables, unsigned order,
                             std::size_t n);
SeriesMatrix series_from_rational(const std::vector<std::string>& variables,
                                  unsigned order, const QMatrix& a);
SeriesMatrix series_from_rfmatrix(const RFMatrix& a, unsigned order);
SeriesMatrix series_substitute_transform(const SeriesMatrix& a, const IntMatrix& t);
QMatrix constant_terms(const SeriesMatrix& a);
SeriesMatrix truncate(const SeriesMatrix& a, unsigned order);
/// Inverse modulo the order, by Newton iteration X <- X + X(I - A X).
/// Throws SingularError when A(0) is singular.
SeriesMatrix series_matrix_inverse(const SeriesMatrix& a);
QMatrix evaluate(const SeriesMatrix& a, std::span<const BigRational> point);

}  // namespace mahler
