#include "mahler/exact/upoly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "mahler/exact/errors.hpp"

namespace mahler {

UPoly::UPoly(std::vector<BigRational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::constant(const BigRational& c) { return UPoly({c}); }

UPoly UPoly::x_power(unsigned k) {
  std::vector<BigRational> c(k + 1, BigRational(0));
  c[k] = 1;
  return UPoly(std::move(c));
}

const BigRational& UPoly::leading() const {
  if (c_.empty()) throw DomainError("leading coefficient of zero polynomial");
  return c_.back();
}

BigRational UPoly::operator()(const BigRational& x) const {
  BigRational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int UPoly::sign_at(const BigRational& x) const { return sgn((*this)(x)); }

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<BigRational> c(std::max(a.c_.size(), b.c_.size()), BigRational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + b * BigRational(-1); }

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<BigRational> c(a.c_.size() + b.c_.size() - 1, BigRational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const BigRational& s) {
  std::vector<BigRational> c = a.c_;
  for (auto& x : c) x *= s;
  return UPoly(std::move(c));
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly();
  std::vector<BigRational> c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * static_cast<long>(i);
  return UPoly(std::move(c));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return *this * BigRational(1 / leading());
}

std::string UPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const BigRational& c = c_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    BigRational mag = abs(c);
    if (first) out << (c < 0 ? "-" : "");
    else out << (c < 0 ? " - " : " + ");
    first = false;
    if (i == 0 || mag != 1) out << ::mahler::to_string(mag) << (i > 0 ? "*" : "");
    if (i > 0) out << var;
    if (i > 1) out << "^" << i;
  }
  return out.str();
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<BigRational> r = a.coeffs();
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<BigRational> q(static_cast<std::size_t>(a.degree() - b.degree() + 1),
                             BigRational(0));
  const auto db = static_cast<std::size_t>(b.degree());
  const BigRational inv = 1 / b.leading();
  for (std::size_t k = q.size(); k-- > 0;) {
    BigRational f = r[k + db] * inv;
    q[k] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) r[k + j] -= f * b.coeffs()[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p.monic();
  UPoly g = gcd(p, p.derivative());
  return divmod(p, g).first.monic();
}

UPoly charpoly(const QMatrix& a) {
  if (!a.is_square()) throw DimensionError("characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
  std::vector<BigRational> c(n + 1, BigRational(0));
  c[n] = 1;
  if (n == 0) return UPoly(std::move(c));
  QMatrix m(n, n, BigRational(0));
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    QMatrix am = a * m;
    BigRational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return UPoly(std::move(c));
}

UPoly charpoly(const IntMatrix& a) { return charpoly(to_rational(a)); }

unsigned long euler_phi(unsigned long k) {
  unsigned long result = k;
  for (unsigned long p = 2; p * p <= k; ++p) {
    if (k % p != 0) continue;
    while (k % p == 0) k /= p;
    result -= result / p;
  }
  if (k > 1) result -= result / k;
  return result;
}

UPoly cyclotomic(unsigned long k) {
  if (k == 0) throw DomainError("cyclotomic index must be positive");
  // Phi_k = (x^k - 1) / prod_{d | k, d < k} Phi_d.
  std::map<unsigned long, UPoly> cache;
  auto rec = [&](auto&& self, unsigned long m) -> UPoly {
    if (auto it = cache.find(m); it != cache.end()) return it->second;
    UPoly num = UPoly::x_power(static_cast<unsigned>(m)) - UPoly::constant(1);
    for (unsigned long d = 1; d < m; ++d)
      if (m % d == 0) num = divmod(num, self(self, d)).first;
    cache.emplace(m, num);
    return num;
  };
  return rec(rec, k);
}

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    UPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    chain.push_back(r * BigRational(-1));
  }
  chain.pop_back();
  return chain;
}

namespace {

int sign_variations(const std::vector<UPoly>& chain, const BigRational& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    int s = q.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

BigRational cauchy_bound(const UPoly& p) {
  BigRational m = 0;
  const BigRational& lc = p.leading();
  for (int i = 0; i < p.degree(); ++i) {
    BigRational q = p.coeffs()[i] / lc;
    if (abs(q) > m) m = abs(q);
  }
  return m + 1;
}

}  // namespace

int sturm_count(const std::vector<UPoly>& chain, const BigRational& a, const BigRational& b) {
  if (chain.empty() || chain[0].is_zero()) return 0;
  return sign_variations(chain, a) - sign_variations(chain, b);
}

std::optional<RealRoot> RealRoot::largest_of(const UPoly& poly) {
  if (poly.degree() < 1) return std::nullopt;
  RealRoot r;
  r.p_ = squarefree_part(poly);
  r.chain_ = sturm_chain(r.p_);
  if (r.p_.degree() == 1) {
    r.lo_ = r.hi_ = -r.p_.coeff(0) / r.p_.coeff(1);
    r.exact_ = true;
    return r;
  }
  BigRational bound = cauchy_bound(r.p_);
  r.lo_ = -bound;
  r.hi_ = bound;
  if (sturm_count(r.chain_, r.lo_, r.hi_) == 0) return std::nullopt;
  while (sturm_count(r.chain_, r.lo_, r.hi_) > 1) {
    BigRational mid = (r.lo_ + r.hi_) / 2;
    if (sturm_count(r.chain_, mid, r.hi_) >= 1) r.lo_ = mid;
    else r.hi_ = mid;
  }
  if (r.p_(r.hi_) == 0) {
    r.lo_ = r.hi_;
    r.exact_ = true;
  }
  return r;
}

void RealRoot::bisect() {
  if (exact_) return;
  BigRational mid = (lo_ + hi_) / 2;
  if (p_.sign_at(mid) == 0) {
    lo_ = hi_ = mid;
    exact_ = true;
    return;
  }
  if (sturm_count(chain_, lo_, mid) == 1) hi_ = mid;
  else lo_ = mid;
}

void RealRoot::refine(const BigRational& width) {
  while (!exact_ && hi_ - lo_ > width) bisect();
}

bool RealRoot::is_root_of(const UPoly& g) const {
  if (g.is_zero()) return true;
  if (exact_) return g(lo_) == 0;
  UPoly h = gcd(g, p_);
  if (h.degree() < 1) return false;
  return sturm_count(sturm_chain(h), lo_, hi_) > 0;
}

namespace {

// Root sets are (lo, hi], or {lo} when exact.
bool disjoint(const RealRoot& a, const RealRoot& b) {
  return a.hi() < b.lo() || (a.hi() == b.lo() && !b.exact()) || b.hi() < a.lo() ||
         (b.hi() == a.lo() && !a.exact());
}

}  // namespace

bool equal(RealRoot a, RealRoot b) {
  if (a.exact() && b.exact()) return a.lo() == b.lo();
  if (a.exact()) return b.is_root_of(UPoly({-a.lo(), 1}));
  if (b.exact()) return a.is_root_of(UPoly({-b.lo(), 1}));
  UPoly h = gcd(a.polynomial(), b.polynomial());
  if (h.degree() < 1 || !a.is_root_of(h) || !b.is_root_of(h)) return false;
  // Both are roots of h; they coincide iff a common enclosure holds one root of h.
  auto chain = sturm_chain(h);
  while (true) {
    if (a.exact() || b.exact()) return equal(a, b);
    if (disjoint(a, b)) return false;
    if (sturm_count(chain, std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())) == 1)
      return true;
    a.bisect();
    b.bisect();
  }
}

int compare(RealRoot a, RealRoot b) {
  if (equal(a, b)) return 0;
  while (!disjoint(a, b)) {
    a.bisect();
    b.bisect();
  }
  return a.hi() <= b.lo() ? -1 : 1;
}

}  // namespace mahler
