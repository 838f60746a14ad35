#include "mahler/points/points.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mahler/exact/errors.hpp"

namespace mahler {

namespace {

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

bool is_zero_vector(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; });
}

void check_sizes(const Transform& t, const RationalPoint& alpha) {
  if (t.n() != alpha.size())
    throw DimensionError("transform of size " + std::to_string(t.n()) +
                         " applied to a point of size " + std::to_string(alpha.size()));
}

// Primitive integer vector on the line of a nonzero rational vector.
IntVector primitive_integer(const std::vector<BigRational>& v) {
  BigInt den = lcm_denominators(v);
  IntVector out;
  BigInt g = 0;
  for (const auto& x : v) {
    BigRational y = x * den;
    out.push_back(y.get_num());
    g = gcd(g, y.get_num());
  }
  auto lead = std::find_if(out.begin(), out.end(), [](const BigInt& x) { return x != 0; });
  if (lead != out.end() && *lead < 0) g = -g;
  for (auto& x : out) x /= g;
  return out;
}

// Rational basis of the largest S-invariant subspace inside {x : A x = 0},
// where A has rows `constraints`.
std::vector<std::vector<BigRational>> invariant_subspace(
    const std::vector<IntVector>& constraints, const IntMatrix& s) {
  const std::size_t n = s.rows();
  if (constraints.empty()) {
    std::vector<std::vector<BigRational>> all;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<BigRational> e(n, BigRational(0));
      e[i] = 1;
      all.push_back(std::move(e));
    }
    return all;
  }
  // By Cayley-Hamilton the powers S^0..S^{n-1} suffice.
  std::vector<IntVector> rows;
  IntMatrix p = int_identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& a : constraints) {
      IntVector r(n, BigInt(0));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) r[j] += a[l] * p(l, j);
      rows.push_back(std::move(r));
    }
    if (k + 1 < n) p = p * s;
  }
  rows = hermite_normal_form(std::move(rows));
  if (rows.size() == n) return {};
  QMatrix q(rows.size(), n, BigRational(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = rows[i][j];
  return null_space(q);
}

// Does sum over negative coordinates of (S^k nu) stay even for every k?
// The sequence S^k nu mod 2 is eventually periodic; we stop at the first repeat.
bool parity_stays_even(const IntMatrix& s, IntVector nu, const std::vector<bool>& negative) {
  const std::size_t n = nu.size();
  if (n > 20) return false;
  std::set<std::vector<int>> seen;
  while (true) {
    std::vector<int> state(n);
    int parity = 0;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = mpz_odd_p(nu[i].get_mpz_t()) ? 1 : 0;
      if (negative[i]) parity ^= state[i];
    }
    if (parity) return false;
    if (!seen.insert(state).second) return true;
    IntVector next(n, BigInt(0));
    for (std::size_t i = 0; i < n; ++i) {
      int acc = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (state[j] && mpz_odd_p(s(i, j).get_mpz_t())) acc ^= 1;
      next[i] = acc;
    }
    nu = std::move(next);
  }
}

std::optional<IntVector> dependence_witness(const ExponentLattice& lat,
                                            const std::vector<IntVector>& constraints,
                                            const IntMatrix& sb) {
  auto v = invariant_subspace(constraints, sb);
  if (v.empty()) return std::nullopt;
  IntVector nu = primitive_integer(v.front());
  if (!parity_stays_even(sb, nu, lat.negative))
    for (auto& x : nu) x *= 2;
  return nu;
}

unsigned long euler_phi_ul(unsigned long k) { return euler_phi(k); }

// lcm{k : phi(k) <= m}; phi(k) >= sqrt(k/2) bounds the search.
BigInt root_of_unity_modulus(unsigned long m) {
  BigInt l = 1;
  if (m == 0) return l;
  for (unsigned long k = 1; k <= 2 * m * m + 2; ++k)
    if (euler_phi_ul(k) <= m) l = lcm(l, BigInt(k));
  return l;
}

std::size_t max_row_sum_bits(const IntMatrix& m) {
  std::size_t best = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
    best = std::max(best, mpz_sizeinbase(s.get_mpz_t(), 2));
  }
  return best;
}

constexpr std::size_t kCertificateBitBudget = std::size_t{1} << 18;

}  // namespace

bool ExponentLattice::contains(const IntVector& mu) const {
  if (mu.size() != dimension) throw DimensionError("exponent vector size mismatch");
  return lattice_contains(basis, mu);
}

ExponentLattice multiplicative_relation_lattice(const RationalPoint& alpha) {
  ExponentLattice lat;
  const std::size_t n = alpha.size();
  lat.dimension = n;
  std::vector<BigInt> values;
  for (const auto& a : alpha.coords()) {
    values.push_back(a.get_num());
    values.push_back(a.get_den());
  }
  lat.primes = coprime_basis(values);
  const std::size_t p = lat.primes.size();
  std::vector<IntVector> rows;
  for (const auto& a : alpha.coords()) {
    IntVector e = factor_over(lat.primes, a.get_num());
    IntVector d = factor_over(lat.primes, a.get_den());
    for (std::size_t c = 0; c < p; ++c) e[c] -= d[c];
    lat.exponents.push_back(e);
    lat.negative.push_back(a < 0);
    e.push_back(a < 0 ? 1 : 0);
    rows.push_back(std::move(e));
  }
  // Auxiliary row forcing the sign exponent to vanish modulo 2.
  IntVector two(p + 1, BigInt(0));
  two[p] = 2;
  rows.push_back(two);
  std::vector<IntVector> projected;
  for (auto& k : integer_left_kernel(rows, p + 1)) {
    k.resize(n);
    projected.push_back(std::move(k));
  }
  lat.basis = hermite_normal_form(std::move(projected));
  return lat;
}

BigRational power_product(const RationalPoint& alpha, const IntVector& mu) {
  if (mu.size() != alpha.size()) throw DimensionError("exponent vector size mismatch");
  BigRational r = 1;
  for (std::size_t i = 0; i < mu.size(); ++i) r *= pow(alpha[i], mu[i]);
  return r;
}

TIndependence is_t_independent(const Transform& t, const RationalPoint& alpha, long b_max,
                               long a_max) {
  check_sizes(t, alpha);
  if (b_max < 1 || a_max < 0) throw DomainError("search bounds must be b_max >= 1, a_max >= 0");
  if (determinant(to_rational(t.matrix())) == 0)
    throw SingularError("T-independence needs a nonsingular transform");
  const std::size_t n = t.n();
  ExponentLattice lat = multiplicative_relation_lattice(alpha);
  TIndependence out;
  if (lat.rank() == 0) {
    out.kind = TIndependence::Kind::independent;
    out.detail = "coordinates are multiplicatively independent";
    return out;
  }
  // (T^k alpha)^mu = alpha^{S^k mu} with S = T^t; L spans {x : E x = 0}.
  const IntMatrix s = transpose(t.matrix());
  std::vector<IntVector> constraints;
  for (std::size_t c = 0; c < lat.primes.size(); ++c) {
    IntVector row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = lat.exponents[i][c];
    constraints.push_back(std::move(row));
  }
  auto dependent = [&](IntVector mu, long b) {
    out.kind = TIndependence::Kind::dependent;
    out.mu = std::move(mu);
    out.a = 0;
    out.b = b;
    return out;
  };

  IntMatrix sb = s;
  for (long b = 1; b <= b_max; ++b) {
    if (auto mu = dependence_witness(lat, constraints, sb)) {
      out.detail = "invariant sublattice found for modulus " + std::to_string(b);
      return dependent(std::move(*mu), b);
    }
    if (b < b_max) sb = sb * s;
  }

  // Every modulus that works has its invariant space inside the one for b0.
  const BigInt b0 = root_of_unity_modulus(static_cast<unsigned long>(n * (n - 1)));
  if (b0 <= b_max) {
    out.kind = TIndependence::Kind::independent;
    out.detail = "no invariant sublattice for the certificate modulus " + to_string(b0);
    return out;
  }
  const std::size_t bits = max_row_sum_bits(s);
  if (!b0.fits_ulong_p() || b0.get_ui() * bits * n > kCertificateBitBudget) {
    out.kind = TIndependence::Kind::unknown;
    out.bound = b_max;
    out.detail = "bounds exhausted; certificate modulus " + to_string(b0) + " is too large";
    return out;
  }
  const unsigned long m = b0.get_ui();
  if (invariant_subspace(constraints, int_pow(s, m)).empty()) {
    out.kind = TIndependence::Kind::independent;
    out.detail = "no invariant sublattice for the certificate modulus " + to_string(b0);
    return out;
  }
  for (unsigned long d = static_cast<unsigned long>(b_max) + 1; d <= m; ++d) {
    if (m % d != 0) continue;
    if (auto mu = dependence_witness(lat, constraints, int_pow(s, d))) {
      out.detail = "invariant sublattice found for modulus " + std::to_string(d);
      return dependent(std::move(*mu), static_cast<long>(d));
    }
  }
  throw Error("internal: certificate modulus admits no witness");
}

namespace {

struct LogBox {
  BigFloat lo, hi;
};

LogBox log_abs(const BigRational& x, mpfr_prec_t prec) {
  BigRational a = abs(x);
  return {log(BigFloat(a, prec, MPFR_RNDD), MPFR_RNDD),
          log(BigFloat(a, prec, MPFR_RNDU), MPFR_RNDU)};
}

// Sign of sum_j w_j log|alpha_j| for non-negative integer weights, or 0 when
// the product is exactly 1.
int log_form_sign(const ExponentLattice& lat, const RationalPoint& alpha, const IntVector& w) {
  IntVector e(lat.primes.size(), BigInt(0));
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t c = 0; c < e.size(); ++c) e[c] += w[j] * lat.exponents[j][c];
  if (is_zero_vector(e)) return 0;
  for (mpfr_prec_t prec = 128; prec <= (1 << 16); prec *= 2) {
    BigFloat lo(0L, prec), hi(0L, prec);
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] == 0) continue;
      LogBox b = log_abs(alpha[j], prec);
      BigFloat wj(w[j], prec);
      lo = add(lo, mul(wj, b.lo, MPFR_RNDD), MPFR_RNDD);
      hi = add(hi, mul(wj, b.hi, MPFR_RNDU), MPFR_RNDU);
    }
    if (hi.sign() < 0) return -1;
    if (lo.sign() > 0) return 1;
  }
  throw Error("log form sign unresolved at maximal precision");
}

}  // namespace

TendsToZero tends_to_zero(const Transform& t, const RationalPoint& alpha, std::size_t k_max) {
  check_sizes(t, alpha);
  if (!class_m_check(t).verdict)
    throw DomainError("tends_to_zero requires T in class M");
  TendsToZero out;
  out.k_max = k_max;
  const auto& c = alpha.coords();
  if (std::all_of(c.begin(), c.end(), [](const BigRational& x) { return abs(x) >= 1; })) {
    out.kind = TendsToZero::Kind::no;
    out.detail = "every coordinate has absolute value >= 1, so every iterate does";
    return out;
  }
  ExponentLattice lat = multiplicative_relation_lattice(alpha);
  const std::size_t n = t.n();
  IntMatrix p = int_identity(n);
  for (std::size_t k = 0; k <= k_max; ++k) {
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) {
      IntVector row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = p(i, j);
      inside = log_form_sign(lat, alpha, row) < 0;
    }
    if (inside) {
      out.kind = TendsToZero::Kind::yes;
      out.k0 = k;
      out.detail = "iterate " + std::to_string(k) + " lies in the open unit polydisk";
      return out;
    }
    if (k < k_max) p = t.matrix() * p;
  }
  out.detail = "no iterate up to k = " + std::to_string(k_max) + " lies in the unit polydisk";
  return out;
}

AdmissibilityReport admissible_pair(const Transform& t, const RationalPoint& alpha,
                                    const AdmissibilityBounds& bounds) {
  check_sizes(t, alpha);
  using V = AdmissibilityReport::Verdict;
  AdmissibilityReport r;
  r.class_m = class_m_check(t);
  if (r.class_m.verdict) {
    r.tends_to_zero = tends_to_zero(t, alpha, bounds.k_max);
  } else {
    r.tends_to_zero.kind = TendsToZero::Kind::unknown;
    r.tends_to_zero.detail = "not examined: T is not in class M";
  }
  if (r.class_m.nonsingular) {
    r.t_independent = is_t_independent(t, alpha, bounds.b_max, bounds.a_max);
  } else {
    r.t_independent.kind = TIndependence::Kind::unknown;
    r.t_independent.detail = "not examined: T is singular";
  }
  if (!r.class_m.verdict || r.tends_to_zero.kind == TendsToZero::Kind::no ||
      r.t_independent.kind == TIndependence::Kind::dependent)
    r.verdict = V::not_admissible;
  else if (r.tends_to_zero.kind == TendsToZero::Kind::yes &&
           r.t_independent.kind == TIndependence::Kind::independent)
    r.verdict = V::admissible;
  else
    r.verdict = V::unknown;
  return r;
}

std::string to_string(TIndependence::Kind k) {
  switch (k) {
    case TIndependence::Kind::independent: return "independent";
    case TIndependence::Kind::dependent: return "dependent";
    case TIndependence::Kind::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(TendsToZero::Kind k) {
  switch (k) {
    case TendsToZero::Kind::yes: return "yes";
    case TendsToZero::Kind::no: return "no";
    case TendsToZero::Kind::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(AdmissibilityReport::Verdict v) {
  switch (v) {
    case AdmissibilityReport::Verdict::admissible: return "admissible";
    case AdmissibilityReport::Verdict::not_admissible: return "not_admissible";
    case AdmissibilityReport::Verdict::unknown: return "unknown";
  }
  return "unknown";
}

BigRational weil_height(const RationalPoint& alpha) {
  BigInt b = lcm_denominators(alpha.coords());
  IntVector coords;
  BigInt g = b;
  for (const auto& a : alpha.coords()) {
    BigRational x = a * b;
    coords.push_back(x.get_num());
    g = gcd(g, x.get_num());
  }
  coords.push_back(b);
  BigInt best = 0;
  for (const auto& x : coords) {
    BigInt y = abs(x) / g;
    if (y > best) best = y;
  }
  return BigRational(best);
}

std::vector<ProfileRow> condition_b_profile(const Transform& t, const RationalPoint& alpha,
                                            std::size_t k_max, mpfr_prec_t prec) {
  check_sizes(t, alpha);
  if (!class_m_check(t).verdict) throw DomainError("condition (b) profile requires T in class M");
  if (tends_to_zero(t, alpha, std::max<std::size_t>(k_max, 64)).kind != TendsToZero::Kind::yes)
    throw DomainError("condition (b) profile requires an orbit certified to tend to zero");
  const std::size_t n = t.n();
  SpectralData sd = spectral_radius(t, BigRational(1, 1) / pow(BigInt(2), 120));
  // Matrix powers grow like rho^k; carry enough extra bits to absorb cancellation.
  mpfr_prec_t work = prec + 64 +
                     static_cast<mpfr_prec_t>(k_max) *
                         static_cast<mpfr_prec_t>(max_row_sum_bits(t.matrix()));
  BigFloat rho((sd.lo + sd.hi) / 2, work);
  std::vector<BigFloat> neg_log;
  for (const auto& a : alpha.coords()) neg_log.push_back(-log(BigFloat(BigRational(abs(a)), work)));
  std::vector<ProfileRow> rows;
  IntMatrix p = int_identity(n);
  BigFloat rho_k(1L, work);
  for (std::size_t k = 0; k <= k_max; ++k) {
    BigFloat best(work);
    for (std::size_t i = 0; i < n; ++i) {
      BigFloat v(0L, work);
      for (std::size_t j = 0; j < n; ++j) v = v + BigFloat(p(i, j), work) * neg_log[j];
      if (i == 0 || v < best) best = v;
    }
    ProfileRow row;
    row.k = k;
    row.ratio = best / rho_k;
    row.neg_log_norm = std::move(best);
    rows.push_back(std::move(row));
    if (k < k_max) {
      p = t.matrix() * p;
      rho_k = rho_k * rho;
    }
  }
  return rows;
}

}  // namespace mahler
