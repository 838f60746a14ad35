#include "mahler/exact/ratfunc.hpp"

#include "mahler/exact/errors.hpp"

namespace mahler {

RatFunc::RatFunc(const MultiPoly& polynomial)
    : num_(polynomial),
      den_(MultiPoly::constant(polynomial.variables(), 1)) {
  *this = ratfunc_normalize(num_, den_);
}

RatFunc RatFunc::constant(std::vector<std::string> variables, const BigRational& c) {
  RatFunc r;
  r.num_ = MultiPoly::constant(variables, c.get_num());
  r.den_ = MultiPoly::constant(std::move(variables), c.get_den());
  return r;
}

BigRational RatFunc::constant_value() const {
  if (!is_constant()) throw DomainError("rational function is not constant");
  return num_.constant_term() / den_.constant_term();
}

MultiPoly RatFunc::as_polynomial() const {
  if (!is_polynomial()) throw DomainError("rational function is not a polynomial");
  return num_ * BigRational(1 / den_.constant_term());
}

RatFunc ratfunc_normalize(MultiPoly num, MultiPoly den) {
  if (den.is_zero()) throw DomainError("zero denominator");
  if (num.variables() != den.variables())
    throw DimensionError("numerator and denominator over different variables");
  RatFunc r;
  if (num.is_zero()) {
    r.num_ = std::move(num);
    r.den_ = MultiPoly::constant(den.variables(), 1);
    return r;
  }
  if (!den.is_constant()) {
    MultiPoly g = gcd(num, den);
    if (!g.is_constant()) {
      num = *divide_exact(num, g);
      den = *divide_exact(den, g);
    }
  }
  std::vector<BigRational> coeffs;
  for (const auto& [e, c] : num.terms()) coeffs.push_back(c);
  for (const auto& [e, c] : den.terms()) coeffs.push_back(c);
  BigInt l = lcm_denominators(coeffs);
  BigInt g = 0;
  for (const auto& c : coeffs) {
    BigInt v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  BigRational factor = make_rational(l, g);
  if (den.leading().second < 0) factor = -factor;
  r.num_ = num * factor;
  r.den_ = den * factor;
  return r;
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return ratfunc_normalize(a.num_ + b.num_, a.den_);
  return ratfunc_normalize(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.variables() != b.variables())
      throw DimensionError("rational functions over different variables");
    return RatFunc::constant(a.variables(), 0);
  }
  if (a.is_polynomial() && b.is_polynomial())
    return ratfunc_normalize(a.num_ * b.num_, a.den_ * b.den_);
  // Cross-cancel first to keep intermediate sizes small.
  MultiPoly g1 = gcd(a.num_, b.den_);
  MultiPoly g2 = gcd(b.num_, a.den_);
  MultiPoly an = *divide_exact(a.num_, g1), bd = *divide_exact(b.den_, g1);
  MultiPoly bn = *divide_exact(b.num_, g2), ad = *divide_exact(a.den_, g2);
  return ratfunc_normalize(an * bn, ad * bd);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw SingularError("division by zero rational function");
  RatFunc inv;
  inv.num_ = b.den_;
  inv.den_ = b.num_;
  return a * ratfunc_normalize(inv.num_, inv.den_);
}

RatFunc RatFunc::pow(long e) const {
  if (e < 0) return (constant(variables(), 1) / *this).pow(-e);
  RatFunc r;
  r.num_ = num_.pow(static_cast<unsigned>(e));
  r.den_ = den_.pow(static_cast<unsigned>(e));
  return ratfunc_normalize(r.num_, r.den_);
}

BigRational RatFunc::evaluate(std::span<const BigRational> point) const {
  BigRational d = den_.evaluate(point);
  if (d == 0) throw PoleError("denominator " + den_.to_string() + " vanishes");
  return num_.evaluate(point) / d;
}

bool RatFunc::is_defined_at(std::span<const BigRational> point) const {
  return den_.evaluate(point) != 0;
}

RatFunc RatFunc::substitute_monomials(const IntMatrix& t) const {
  return ratfunc_normalize(num_.substitute_monomials(t), den_.substitute_monomials(t));
}

RatFunc RatFunc::embed(const std::vector<std::string>& variables) const {
  RatFunc r;
  r.num_ = num_.embed(variables);
  r.den_ = den_.embed(variables);
  return r;
}

std::string RatFunc::to_string() const {
  if (den_.is_constant() && den_.constant_term() == 1) return num_.to_string();
  auto wrap = [](const MultiPoly& p) {
    bool single = p.terms().size() == 1;
    if (single && p.leading().second > 0) return p.to_string();
    return "(" + p.to_string() + ")";
  };
  return wrap(num_) + "/" + wrap(den_);
}

RFMatrix rf_identity(const std::vector<std::string>& variables, std::size_t n) {
  return RFMatrix::identity(n, RatFunc::constant(variables, 0),
                            RatFunc::constant(variables, 1));
}

RFMatrix rf_from_rational(const std::vector<std::string>& variables, const QMatrix& a) {
  return a.map([&](const BigRational& x) { return RatFunc::constant(variables, x); });
}

QMatrix evaluate(const RFMatrix& a, std::span<const BigRational> point) {
  return a.map([&](const RatFunc& f) { return f.evaluate(point); });
}

RFMatrix substitute_monomials(const RFMatrix& a, const IntMatrix& t) {
  return a.map([&](const RatFunc& f) { return f.substitute_monomials(t); });
}

}  // namespace mahler
