#include "mahler/exact/rational.hpp"

#include "mahler/exact/errors.hpp"

namespace mahler {

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

BigRational parse_rational(std::string_view text) {
  if (text.empty()) throw DomainError("empty rational literal");
  auto slash = text.find('/');
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw DomainError("empty integer in rational literal");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw DomainError("sign without digits");
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9')
        throw DomainError("invalid rational literal '" + std::string(s) + "'");
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return BigInt(digits, 10);
  };
  if (slash == std::string_view::npos) return BigRational(parse_int(text));
  return make_rational(parse_int(text.substr(0, slash)),
                       parse_int(text.substr(slash + 1)));
}

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

BigRational pow(const BigRational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("negative power of zero");
    BigRational inv = 1 / base;
    return pow(inv, -exponent);
  }
  auto e = static_cast<unsigned long>(exponent);
  BigRational r(pow(base.get_num(), e), pow(base.get_den(), e));
  r.canonicalize();
  return r;
}

BigRational pow(const BigRational& base, const BigInt& exponent) {
  if (!exponent.fits_slong_p())
    throw DomainError("exponent too large for exact rational power");
  return pow(base, exponent.get_si());
}

BigRational abs(const BigRational& q) { return q < 0 ? BigRational(-q) : q; }

BigInt lcm_denominators(const std::vector<BigRational>& values) {
  BigInt l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace mahler
