#include "mahler/eval/bigfloat.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <mutex>

namespace mahler {

void ensure_wide_exponent_range() {
  static std::once_flag once;
  std::call_once(once, [] {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
  });
}

BigFloat::BigFloat(mpfr_prec_t prec) {
  ensure_wide_exponent_range();
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long v, mpfr_prec_t prec) : BigFloat(prec) {
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const BigInt& v, mpfr_prec_t prec, mpfr_rnd_t rnd) : BigFloat(prec) {
  mpfr_set_z(v_, v.get_mpz_t(), rnd);
}

BigFloat::BigFloat(const BigRational& v, mpfr_prec_t prec, mpfr_rnd_t rnd) : BigFloat(prec) {
  mpfr_set_q(v_, v.get_mpq_t(), rnd);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, o.precision());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigRational BigFloat::to_rational() const {
  BigRational q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return q;
}

std::string BigFloat::to_scientific(int digits) const {
  if (is_zero()) return "0";
  mpfr_exp_t e = 0;
  std::unique_ptr<char, void (*)(char*)> s(
      mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(std::max(digits, 2)), v_,
                   MPFR_RNDN),
      mpfr_free_str);
  std::string m(s.get());
  std::string sign;
  if (!m.empty() && m[0] == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  return sign + m.substr(0, 1) + "." + m.substr(1) + "e" + std::to_string(e - 1);
}

std::string BigFloat::to_fixed(int digits) const {
  std::unique_ptr<char, void (*)(char*)> s(nullptr, mpfr_free_str);
  char* out = nullptr;
  mpfr_asprintf(&out, "%.*Rf", digits, v_);
  std::string r(out);
  mpfr_free_str(out);
  return r;
}

namespace {

mpfr_prec_t joint(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

BigFloat add(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
  BigFloat r(joint(a, b));
  mpfr_add(r.get(), a.get(), b.get(), rnd);
  return r;
}

BigFloat sub(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
  BigFloat r(joint(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), rnd);
  return r;
}

BigFloat mul(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
  BigFloat r(joint(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), rnd);
  return r;
}

BigFloat div(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
  BigFloat r(joint(a, b));
  mpfr_div(r.get(), a.get(), b.get(), rnd);
  return r;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) { return add(a, b, MPFR_RNDN); }
BigFloat operator-(const BigFloat& a, const BigFloat& b) { return sub(a, b, MPFR_RNDN); }
BigFloat operator*(const BigFloat& a, const BigFloat& b) { return mul(a, b, MPFR_RNDN); }
BigFloat operator/(const BigFloat& a, const BigFloat& b) { return div(a, b, MPFR_RNDN); }

BigFloat BigFloat::operator-() const {
  BigFloat r(precision());
  mpfr_neg(r.get(), v_, MPFR_RNDN);
  return r;
}

BigFloat abs(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& a, mpfr_rnd_t rnd) {
  BigFloat r(a.precision());
  mpfr_log(r.get(), a.get(), rnd);
  return r;
}

BigFloat exp(const BigFloat& a, mpfr_rnd_t rnd) {
  BigFloat r(a.precision());
  mpfr_exp(r.get(), a.get(), rnd);
  return r;
}

BigFloat pow(const BigFloat& a, const BigInt& e, mpfr_rnd_t rnd) {
  BigFloat r(a.precision());
  mpfr_pow_z(r.get(), a.get(), e.get_mpz_t(), rnd);
  return r;
}

BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
BigFloat min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }

BigFloat abs_upper(const BigRational& x, mpfr_prec_t prec) {
  return BigFloat(BigRational(abs(x)), prec, MPFR_RNDU);
}

BigFloat power_of_two(long e, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
  return r;
}

}  // namespace mahler
