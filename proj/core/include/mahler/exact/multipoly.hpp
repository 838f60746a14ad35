#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mahler/exact/matrix.hpp"
#include "mahler/exact/rational.hpp"

namespace mahler {

/// Exponent vector of a monomial, one entry per variable.
using Exponent = std::vector<unsigned>;

unsigned total_degree(const Exponent& e);

/// Graded lexicographic order: total degree first, then the first variable
/// with a differing exponent decides (larger exponent is larger).
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Image of the monomial z^e under z -> Tz, i.e. the exponent T^t e.
Exponent transform_exponent(const IntMatrix& t, const Exponent& e);

/// Sparse polynomial over Q in an ordered list of named variables.
class MultiPoly {
 public:
  using Terms = std::map<Exponent, BigRational, GrlexLess>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> variables);

  static MultiPoly constant(std::vector<std::string> variables,
                            const BigRational& c);
  static MultiPoly variable(std::vector<std::string> variables, std::size_t i);
  static MultiPoly monomial(std::vector<std::string> variables, Exponent e,
                            const BigRational& c);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t nvars() const noexcept { return vars_.size(); }
  const Terms& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  BigRational constant_term() const;
  BigRational coefficient(const Exponent& e) const;

  /// Largest total degree of a term; -1 for the zero polynomial.
  int total_degree() const;
  unsigned degree_in(std::size_t var) const;
  /// Term that is largest in graded lexicographic order. Requires nonzero.
  const Terms::value_type& leading() const;

  void add_term(const Exponent& e, const BigRational& c);

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const BigRational& c);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  MultiPoly pow(unsigned e) const;

  /// Exact value at a rational point (one coordinate per variable).
  BigRational evaluate(std::span<const BigRational> point) const;

  /// p(Tz): every monomial z^e becomes z^(T^t e).
  MultiPoly substitute_monomials(const IntMatrix& t) const;

  /// Re-expresses the polynomial over a larger variable list that contains
  /// all of its variables.
  MultiPoly embed(const std::vector<std::string>& variables) const;

  /// Graded-lex printing, parseable by parse_ratfunc.
  std::string to_string() const;

 private:
  void check_compatible(const MultiPoly& o) const;

  std::vector<std::string> vars_;
  Terms terms_;
};

/// a / b when b divides a exactly, otherwise nullopt. Requires b != 0.
std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b);

/// Greatest common divisor over Q, normalized to integer coefficients with
/// unit content and positive leading coefficient. gcd(0, 0) = 0.
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

/// Scales p so that its coefficients are coprime integers and its leading
/// coefficient is positive. Returns the factor that was applied.
BigRational make_primitive(MultiPoly& p);

}  // namespace mahler
