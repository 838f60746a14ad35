#include "mahler/exact/series.hpp"

#include <sstream>

#include "mahler/exact/errors.hpp"

namespace mahler {

TruncSeries::TruncSeries(std::vector<std::string> variables, unsigned order)
    : vars_(std::move(variables)), order_(order) {}

TruncSeries TruncSeries::constant(std::vector<std::string> variables, unsigned order,
                                  const BigRational& c) {
  TruncSeries s(std::move(variables), order);
  s.add_term(Exponent(s.nvars(), 0), c);
  return s;
}

TruncSeries TruncSeries::from_polynomial(const MultiPoly& p, unsigned order) {
  TruncSeries s(p.variables(), order);
  for (const auto& [e, c] : p.terms()) s.add_term(e, c);
  return s;
}

TruncSeries TruncSeries::from_ratfunc(const RatFunc& f, unsigned order) {
  TruncSeries num = from_polynomial(f.num(), order);
  if (f.is_polynomial()) return num * BigRational(1 / f.den().constant_term());
  TruncSeries den = from_polynomial(f.den(), order);
  if (den.constant_term() == 0)
    throw PoleError("denominator " + f.den().to_string() + " vanishes at the origin");
  return num * series_invert(den);
}

BigRational TruncSeries::constant_term() const {
  return coefficient(Exponent(nvars(), 0));
}

BigRational TruncSeries::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BigRational(0) : it->second;
}

void TruncSeries::add_term(const Exponent& e, const BigRational& c) {
  if (e.size() != nvars()) throw DimensionError("exponent length mismatch");
  if (c == 0 || total_degree(e) >= order_) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void TruncSeries::check_compatible(const TruncSeries& o) const {
  if (vars_ != o.vars_) throw DimensionError("series over different variables");
  if (order_ != o.order_) throw DimensionError("series with different orders");
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  a.check_compatible(b);
  TruncSeries r(a.vars_, a.order_);
  Exponent e(a.nvars());
  for (const auto& [ea, ca] : a.terms_) {
    unsigned da = total_degree(ea);
    for (const auto& [eb, cb] : b.terms_) {
      // Terms are sorted by total degree, so the rest of b is too large.
      if (da + total_degree(eb) >= a.order_) break;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = r.terms_.try_emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
  return r;
}

TruncSeries operator*(TruncSeries a, const BigRational& c) {
  if (c == 0) {
    a.terms_.clear();
    return a;
  }
  for (auto& [e, x] : a.terms_) x *= c;
  return a;
}

TruncSeries operator/(const TruncSeries& a, const TruncSeries& b) {
  return a * series_invert(b);
}

TruncSeries TruncSeries::truncate(unsigned order) const {
  if (order > order_) throw DomainError("cannot raise the order of a truncation");
  TruncSeries r(vars_, order);
  for (const auto& [e, c] : terms_) r.add_term(e, c);
  return r;
}

MultiPoly TruncSeries::to_polynomial() const {
  MultiPoly p(vars_);
  for (const auto& [e, c] : terms_) p.add_term(e, c);
  return p;
}

BigRational TruncSeries::evaluate(std::span<const BigRational> point) const {
  return to_polynomial().evaluate(point);
}

BigRational TruncSeries::coefficient_majorant() const {
  BigRational s = 1;
  for (const auto& [e, c] : terms_) s += abs(c);
  return s;
}

std::string TruncSeries::to_string() const {
  std::ostringstream out;
  out << to_polynomial().to_string() << " + O(deg " << order_ << ")";
  return out.str();
}

TruncSeries series_substitute_transform(const TruncSeries& s, const IntMatrix& t) {
  if (t.rows() != s.nvars() || t.cols() != s.nvars())
    throw DimensionError("transform size does not match variable count");
  TruncSeries r(s.variables(), s.order());
  for (const auto& [e, c] : s.terms()) {
    // Skip the exponent computation when it cannot stay below the order.
    Exponent f(e.size(), 0);
    BigInt total = 0;
    for (std::size_t j = 0; j < t.cols(); ++j) {
      BigInt acc = 0;
      for (std::size_t i = 0; i < t.rows(); ++i) acc += t(i, j) * e[i];
      total += acc;
      if (total >= s.order()) break;
      f[j] = static_cast<unsigned>(acc.get_ui());
    }
    if (total >= s.order()) continue;
    r.add_term(f, c);
  }
  return r;
}

TruncSeries series_invert(const TruncSeries& s) {
  BigRational c0 = s.constant_term();
  if (c0 == 0) throw SingularError("series with zero constant term is not invertible");
  const unsigned n = s.order();
  // Homogeneous components S_d and R_d of s and of its inverse.
  std::vector<TruncSeries> sd(n, TruncSeries(s.variables(), n));
  for (const auto& [e, c] : s.terms()) sd[total_degree(e)].add_term(e, c);
  std::vector<TruncSeries> rd(n, TruncSeries(s.variables(), n));
  if (n == 0) return TruncSeries(s.variables(), 0);
  BigRational inv0 = 1 / c0;
  rd[0] = TruncSeries::constant(s.variables(), n, inv0);
  TruncSeries result = rd[0];
  for (unsigned d = 1; d < n; ++d) {
    TruncSeries acc(s.variables(), n);
    for (unsigned j = 1; j <= d; ++j) {
      if (sd[j].is_zero() || rd[d - j].is_zero()) continue;
      acc += sd[j] * rd[d - j];
    }
    rd[d] = acc * BigRational(-inv0);
    result += rd[d];
  }
  return result;
}

SeriesMatrix series_identity(const std::vector<std::string>& variables, unsigned order,
                             std::size_t n) {
  return SeriesMatrix::identity(n, TruncSeries(variables, order),
                                TruncSeries::constant(variables, order, 1));
}

SeriesMatrix series_from_rational(const std::vector<std::string>& variables,
                                  unsigned order, const QMatrix& a) {
  return a.map(
      [&](const BigRational& x) { return TruncSeries::constant(variables, order, x); });
}

SeriesMatrix series_from_rfmatrix(const RFMatrix& a, unsigned order) {
  return a.map([&](const RatFunc& f) { return TruncSeries::from_ratfunc(f, order); });
}

SeriesMatrix series_substitute_transform(const SeriesMatrix& a, const IntMatrix& t) {
  return a.map([&](const TruncSeries& s) { return series_substitute_transform(s, t); });
}

QMatrix constant_terms(const SeriesMatrix& a) {
  return a.map([](const TruncSeries& s) { return s.constant_term(); });
}

SeriesMatrix truncate(const SeriesMatrix& a, unsigned order) {
  return a.map([&](const TruncSeries& s) { return s.truncate(order); });
}

SeriesMatrix series_matrix_inverse(const SeriesMatrix& a) {
  if (!a.is_square() || a.rows() == 0)
    throw DimensionError("inverse of a non-square series matrix");
  const auto& vars = a(0, 0).variables();
  const unsigned order = a(0, 0).order();
  QMatrix c0 = constant_terms(a);
  QMatrix c0_inv = inverse(c0);
  SeriesMatrix x = series_from_rational(vars, order, c0_inv);
  SeriesMatrix id = series_identity(vars, order, a.rows());
  // Each step doubles the number of correct degrees.
  for (unsigned correct = 1; correct < order; correct *= 2) x = x + x * (id - a * x);
  return x;
}

QMatrix evaluate(const SeriesMatrix& a, std::span<const BigRational> point) {
  return a.map([&](const TruncSeries& s) { return s.evaluate(point); });
}

}  // namespace mahler
