#include "mahler/exact/multipoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "mahler/exact/errors.hpp"

namespace mahler {

unsigned total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), 0U);
}

bool GrlexLess::operator()(const Exponent& a, const Exponent& b) const {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  // Lexicographic with z1 > z2 > ...: the first larger exponent wins.
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return a.size() < b.size();
}

Exponent transform_exponent(const IntMatrix& t, const Exponent& e) {
  if (t.rows() != e.size()) throw DimensionError("transform/exponent size mismatch");
  Exponent out(t.cols(), 0);
  for (std::size_t j = 0; j < t.cols(); ++j) {
    BigInt acc = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) acc += t(i, j) * e[i];
    if (!acc.fits_uint_p()) throw DomainError("monomial exponent overflow");
    out[j] = static_cast<unsigned>(acc.get_ui());
  }
  return out;
}

MultiPoly::MultiPoly(std::vector<std::string> variables)
    : vars_(std::move(variables)) {}

MultiPoly MultiPoly::constant(std::vector<std::string> variables,
                              const BigRational& c) {
  MultiPoly p(std::move(variables));
  p.add_term(Exponent(p.nvars(), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(std::vector<std::string> variables, std::size_t i) {
  MultiPoly p(std::move(variables));
  if (i >= p.nvars()) throw DimensionError("variable index out of range");
  Exponent e(p.nvars(), 0);
  e[i] = 1;
  p.add_term(e, 1);
  return p;
}

MultiPoly MultiPoly::monomial(std::vector<std::string> variables, Exponent e,
                              const BigRational& c) {
  MultiPoly p(std::move(variables));
  if (e.size() != p.nvars()) throw DimensionError("exponent length mismatch");
  p.add_term(e, c);
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && ::mahler::total_degree(terms_.begin()->first) == 0);
}

BigRational MultiPoly::constant_term() const {
  return coefficient(Exponent(nvars(), 0));
}

BigRational MultiPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BigRational(0) : it->second;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(::mahler::total_degree(terms_.rbegin()->first));
}

unsigned MultiPoly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

const MultiPoly::Terms::value_type& MultiPoly::leading() const {
  if (terms_.empty()) throw DomainError("leading term of zero polynomial");
  return *terms_.rbegin();
}

void MultiPoly::add_term(const Exponent& e, const BigRational& c) {
  if (e.size() != nvars()) throw DimensionError("exponent length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (vars_ != o.vars_) throw DimensionError("polynomials over different variables");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_compatible(b);
  MultiPoly r(a.vars_);
  Exponent e(a.nvars());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = r.terms_.try_emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
  return r;
}

MultiPoly operator*(MultiPoly a, const BigRational& c) {
  if (c == 0) {
    a.terms_.clear();
    return a;
  }
  for (auto& [e, x] : a.terms_) x *= c;
  return a;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(vars_, 1);
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

BigRational MultiPoly::evaluate(std::span<const BigRational> point) const {
  if (point.size() != nvars()) throw DimensionError("evaluation point size mismatch");
  BigRational sum = 0;
  for (const auto& [e, c] : terms_) {
    BigRational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t *= ::mahler::pow(point[i], static_cast<long>(e[i]));
    sum += t;
  }
  return sum;
}

MultiPoly MultiPoly::substitute_monomials(const IntMatrix& t) const {
  if (t.rows() != nvars() || t.cols() != nvars())
    throw DimensionError("transform size does not match variable count");
  MultiPoly r(vars_);
  for (const auto& [e, c] : terms_) r.add_term(transform_exponent(t, e), c);
  return r;
}

MultiPoly MultiPoly::embed(const std::vector<std::string>& variables) const {
  std::vector<std::size_t> where(nvars());
  for (std::size_t i = 0; i < nvars(); ++i) {
    auto it = std::find(variables.begin(), variables.end(), vars_[i]);
    if (it == variables.end())
      throw DimensionError("variable '" + vars_[i] + "' missing from target list");
    where[i] = static_cast<std::size_t>(it - variables.begin());
  }
  MultiPoly r(variables);
  for (const auto& [e, c] : terms_) {
    Exponent f(variables.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) f[where[i]] = e[i];
    r.add_term(f, c);
  }
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    BigRational mag = c < 0 ? BigRational(-c) : c;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool has_monomial = ::mahler::total_degree(e) > 0;
    bool wrote = false;
    if (!has_monomial || mag != 1) {
      out << ::mahler::to_string(mag);
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << "*";
      out << vars_[i];
      if (e[i] > 1) out << "^" << e[i];
      wrote = true;
    }
  }
  return out.str();
}

BigRational make_primitive(MultiPoly& p) {
  if (p.is_zero()) return 1;
  std::vector<BigRational> coeffs;
  for (const auto& [e, c] : p.terms()) coeffs.push_back(c);
  BigInt l = lcm_denominators(coeffs);
  BigInt g = 0;
  for (const auto& c : coeffs) {
    BigInt v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  BigRational factor = make_rational(l, g);
  if (p.leading().second < 0) factor = -factor;
  p = p * factor;
  return factor;
}

std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw DomainError("division by zero polynomial");
  if (a.variables() != b.variables())
    throw DimensionError("polynomials over different variables");
  MultiPoly q(a.variables());
  MultiPoly r = a;
  const auto& [lb_e, lb_c] = b.leading();
  while (!r.is_zero()) {
    const auto& [lr_e, lr_c] = r.leading();
    Exponent e(lr_e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (lr_e[i] < lb_e[i]) return std::nullopt;
      e[i] = lr_e[i] - lb_e[i];
    }
    BigRational c = lr_c / lb_c;
    MultiPoly t = MultiPoly::monomial(a.variables(), e, c);
    q += t;
    r -= t * b;
  }
  return q;
}

namespace {

int highest_variable(const MultiPoly& p) {
  int v = -1;
  for (const auto& [e, c] : p.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) v = std::max(v, static_cast<int>(i));
  return v;
}

std::map<unsigned, MultiPoly> coefficients_in(const MultiPoly& p, std::size_t v) {
  std::map<unsigned, MultiPoly> out;
  for (const auto& [e, c] : p.terms()) {
    Exponent f = e;
    f[v] = 0;
    auto [it, inserted] = out.try_emplace(e[v], MultiPoly(p.variables()));
    it->second.add_term(f, c);
  }
  return out;
}

MultiPoly leading_coefficient_in(const MultiPoly& p, std::size_t v) {
  unsigned d = p.degree_in(v);
  MultiPoly out(p.variables());
  for (const auto& [e, c] : p.terms()) {
    if (e[v] != d) continue;
    Exponent f = e;
    f[v] = 0;
    out.add_term(f, c);
  }
  return out;
}

MultiPoly content_in(const MultiPoly& p, std::size_t v) {
  MultiPoly g(p.variables());
  for (const auto& [d, c] : coefficients_in(p, v)) {
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

MultiPoly exact_quotient(const MultiPoly& a, const MultiPoly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw Error("internal error: expected exact polynomial division");
  return *q;
}

MultiPoly primitive_part_in(const MultiPoly& p, std::size_t v) {
  if (p.is_zero()) return p;
  MultiPoly q = exact_quotient(p, content_in(p, v));
  make_primitive(q);
  return q;
}

MultiPoly pseudo_remainder(MultiPoly r, const MultiPoly& b, std::size_t v) {
  const unsigned db = b.degree_in(v);
  const MultiPoly lb = leading_coefficient_in(b, v);
  while (!r.is_zero() && r.degree_in(v) >= db) {
    unsigned dr = r.degree_in(v);
    MultiPoly lr = leading_coefficient_in(r, v);
    Exponent shift(r.nvars(), 0);
    shift[v] = dr - db;
    MultiPoly xs = MultiPoly::monomial(r.variables(), shift, 1);
    r = r * lb - lr * xs * b;
    make_primitive(r);
  }
  return r;
}

}  // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.variables() != b.variables())
    throw DimensionError("polynomials over different variables");
  if (a.is_zero() && b.is_zero()) return a;
  if (a.is_zero() || b.is_zero()) {
    MultiPoly g = a.is_zero() ? b : a;
    make_primitive(g);
    return g;
  }
  if (a.is_constant() || b.is_constant()) return MultiPoly::constant(a.variables(), 1);

  int hv = std::max(highest_variable(a), highest_variable(b));
  auto v = static_cast<std::size_t>(hv);
  MultiPoly ca = content_in(a, v);
  MultiPoly cb = content_in(b, v);
  MultiPoly c = gcd(ca, cb);

  MultiPoly r0 = exact_quotient(a, ca);
  MultiPoly r1 = exact_quotient(b, cb);
  make_primitive(r0);
  make_primitive(r1);
  if (r0.degree_in(v) < r1.degree_in(v)) std::swap(r0, r1);

  MultiPoly g(a.variables());
  while (true) {
    if (r1.is_zero()) {
      g = primitive_part_in(r0, v);
      break;
    }
    if (r1.degree_in(v) == 0) {
      g = MultiPoly::constant(a.variables(), 1);
      break;
    }
    MultiPoly r = pseudo_remainder(r0, r1, v);
    r0 = std::move(r1);
    r1 = primitive_part_in(r, v);
  }
  MultiPoly result = c * g;
  make_primitive(result);
  return result;
}

}  // namespace mahler
