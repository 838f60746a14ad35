#include "mahler/multiseq/multiseq.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mahler/exact/errors.hpp"
#include "mahler/points/points.hpp"

namespace mahler {

namespace {

BigInt floor_of(const BigFloat& x) {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDD);
  return z;
}

std::size_t bit_length(const BigInt& x) {
  return x == 0 ? 0 : mpz_sizeinbase(BigInt(abs(x)).get_mpz_t(), 2);
}

BigRational distance_inf(const ThetaVector& th, unsigned long l, const IntVector& k) {
  BigRational worst = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    BigRational lo = BigRational(BigInt(l)) * th.lo[i].to_rational();
    BigRational hi = BigRational(BigInt(l)) * th.hi[i].to_rational();
    BigRational a = abs(BigRational(BigRational(k[i]) - lo));
    BigRational b = abs(BigRational(BigRational(k[i]) - hi));
    worst = std::max({worst, a, b});
  }
  return worst;
}

IntVector primitive(const IntVector& v) {
  BigInt g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  IntVector out = v;
  if (g != 0)
    for (auto& x : out) x /= g;
  return out;
}

bool same_gammas(const std::vector<Gamma>& a, const std::vector<Gamma>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i].value == b[i].value)) return false;
  return true;
}

bool coefficient_is_zero(const std::variant<BigRational, TruncSeries>& c) {
  if (auto q = std::get_if<BigRational>(&c)) return *q == 0;
  return std::get<TruncSeries>(c).is_zero();
}

std::variant<BigRational, TruncSeries> add_coefficients(
    const std::variant<BigRational, TruncSeries>& a,
    const std::variant<BigRational, TruncSeries>& b) {
  auto qa = std::get_if<BigRational>(&a);
  auto qb = std::get_if<BigRational>(&b);
  if (qa && qb) return BigRational(*qa + *qb);
  if (!qa && !qb) return std::get<TruncSeries>(a) + std::get<TruncSeries>(b);
  const TruncSeries& s = qa ? std::get<TruncSeries>(b) : std::get<TruncSeries>(a);
  const BigRational& q = qa ? *qa : *qb;
  return s + TruncSeries::constant(s.variables(), s.order(), q);
}

}  // namespace

ThetaVector theta(const std::vector<Transform>& transforms, mpfr_prec_t prec) {
  if (transforms.empty()) throw DimensionError("theta needs at least one transformation");
  ThetaVector out;
  out.precision = prec;
  const mpfr_prec_t q = prec + 32;
  const BigRational width = pow(BigRational(2), -static_cast<long>(prec) - 16);
  for (const auto& t : transforms) {
    if (!class_m_check(t).verdict) throw DomainError("transformation is not in class M");
    SpectralData sd = spectral_radius(t, width);
    if (sd.lo <= 1) throw DomainError("spectral radius must exceed 1");
    BigFloat log_hi = log(BigFloat(sd.hi, q, MPFR_RNDU), MPFR_RNDU);
    BigFloat log_lo = log(BigFloat(sd.lo, q, MPFR_RNDD), MPFR_RNDD);
    BigFloat one(1, q);
    // Directed rounding to `prec` keeps the nearest-rounded midpoint inside.
    out.lo.emplace_back(div(one, log_hi, MPFR_RNDD).to_rational(), prec, MPFR_RNDD);
    out.hi.emplace_back(div(one, log_lo, MPFR_RNDU).to_rational(), prec, MPFR_RNDU);
    BigFloat mid = div(one, log(BigFloat(BigRational((sd.lo + sd.hi) / 2), q)), MPFR_RNDN);
    out.components.emplace_back(mid.to_rational(), prec);
    out.exact_flags.push_back(sd.exact);
    out.integer_rho.push_back(sd.exact ? std::optional<BigInt>(sd.lo.get_num())
                                       : std::nullopt);
  }
  return out;
}

ThetaRelations integer_theta_relations(const ThetaVector& th) {
  const std::size_t r = th.size();
  std::vector<BigInt> rho;
  for (std::size_t i = 0; i < r; ++i) {
    if (!th.exact_flags[i] || !th.integer_rho[i])
      throw DomainError("exact relations need integer spectral radii");
    rho.push_back(*th.integer_rho[i]);
  }
  const std::vector<BigInt> basis = coprime_basis(rho);
  // Radii with proportional exponent vectors are powers of a common integer.
  std::map<IntVector, std::vector<std::size_t>> classes;
  std::vector<IntVector> exps;
  for (std::size_t i = 0; i < r; ++i) {
    exps.push_back(factor_over(basis, rho[i]));
    classes[primitive(exps[i])].push_back(i);
  }
  ThetaRelations out;
  out.complete = classes.size() <= 2;
  for (const auto& [gen, members] : classes) {
    if (members.size() < 2) continue;
    std::size_t pivot = 0;
    while (gen[pivot] == 0) ++pivot;
    // Theta_i = 1 / (a_i log g): sum mu_i / a_i = 0, scaled by lcm(a).
    std::vector<BigInt> a;
    BigInt l = 1;
    for (std::size_t i : members) {
      a.push_back(exps[i][pivot] / gen[pivot]);
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.back().get_mpz_t());
    }
    std::vector<IntVector> rows;
    for (const auto& ai : a) rows.push_back({l / ai});
    for (const auto& kv : integer_left_kernel(rows, 1)) {
      IntVector mu(r, BigInt(0));
      for (std::size_t m = 0; m < members.size(); ++m) mu[members[m]] = kv[m];
      out.basis.push_back(std::move(mu));
    }
  }
  return out;
}

IterationSequence iteration_vectors(const ThetaVector& th, unsigned long l_min,
                                    unsigned long l_max, const std::vector<IntVector>& relations) {
  const std::size_t r = th.size();
  if (l_min > l_max) throw DomainError("empty l range");
  for (const auto& mu : relations) {
    if (mu.size() != r) throw DimensionError("relation length differs from Theta");
    BigRational lower = 0, upper = 0;
    for (std::size_t i = 0; i < r; ++i) {
      BigRational a = BigRational(mu[i]) * th.lo[i].to_rational();
      BigRational b = BigRational(mu[i]) * th.hi[i].to_rational();
      lower += std::min(a, b);
      upper += std::max(a, b);
    }
    if (lower > 0 || upper < 0) throw DomainError("relation is not orthogonal to Theta");
  }

  IterationSequence seq;
  seq.l_min = l_min;
  seq.l_max = l_max;
  const mpfr_prec_t q = th.precision + 80;
  for (unsigned long l = l_min; l <= l_max; ++l) {
    IntVector k(r);
    for (std::size_t i = 0; i < r; ++i) {
      BigFloat lf(BigInt(l), q);
      BigInt a = floor_of(mul(lf, th.lo[i], MPFR_RNDD));
      BigInt b = floor_of(mul(lf, th.hi[i], MPFR_RNDU));
      if (a != b)
        throw DomainError("Theta enclosure too wide to decide floor(l Theta) at l = " +
                          std::to_string(l));
      k[i] = a;
    }
    seq.entries.emplace_back(l, std::move(k));
  }

  for (const auto& mu : relations) {
    std::map<BigInt, std::size_t> freq;
    for (const auto& [l, k] : seq.entries) ++freq[dot(mu, k)];
    if (freq.empty()) throw DomainError("empty selection while applying relations");
    // Most frequent value, smallest on ties.
    auto best = freq.begin();
    for (auto it = freq.begin(); it != freq.end(); ++it)
      if (it->second > best->second) best = it;
    ShiftStage stage{mu, best->first, {}, 0};
    std::vector<std::pair<unsigned long, IntVector>> kept;
    for (auto& e : seq.entries)
      if (dot(mu, e.second) == stage.c) kept.push_back(std::move(e));
    stage.nu = kept.front().second;
    for (auto& [l, k] : kept)
      for (std::size_t i = 0; i < r; ++i) k[i] -= stage.nu[i];
    stage.kept = kept.size();
    seq.entries = std::move(kept);
    seq.stages.push_back(std::move(stage));
  }

  BigRational worst = 0;
  for (const auto& [l, k] : seq.entries) worst = std::max(worst, distance_inf(th, l, k));
  seq.distance_bound = BigFloat(worst, th.precision, MPFR_RNDU);
  return seq;
}

bool check_distance_bound(const ThetaVector& th, const IterationSequence& seq) {
  const BigRational bound = seq.distance_bound.to_rational();
  for (const auto& [l, k] : seq.entries) {
    if (k.size() != th.size()) return false;
    for (std::size_t i = 0; i < k.size(); ++i) {
      // Both ends of the enclosure of l Theta_i must lie within the bound.
      for (const BigFloat* end : {&th.lo[i], &th.hi[i]}) {
        BigRational d = BigRational(k[i]) - BigRational(BigInt(l)) * end->to_rational();
        if (d > bound || -d > bound) return false;
      }
    }
  }
  return true;
}

FiniteWindow::FiniteWindow(unsigned long width, std::vector<unsigned long> elements)
    : width_(width), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (!elements_.empty() && elements_.back() >= width_)
    throw DomainError("window element outside [0, width)");
}

FiniteWindow FiniteWindow::interval(unsigned long width) {
  std::vector<unsigned long> all(width);
  std::iota(all.begin(), all.end(), 0UL);
  return FiniteWindow(width, std::move(all));
}

bool FiniteWindow::contains(unsigned long x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::optional<std::vector<unsigned long>> piecewise_syndetic_window(const FiniteWindow& s,
                                                                    unsigned long bound,
                                                                    std::size_t count) {
  if (count < 2 || bound < 1) throw DomainError("window test needs M >= 2 and B >= 1");
  const auto& e = s.elements();
  std::size_t start = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > start && e[i] - e[i - 1] > bound) start = i;
    if (i + 1 - start == count)
      return std::vector<unsigned long>(e.begin() + static_cast<std::ptrdiff_t>(start),
                                        e.begin() + static_cast<std::ptrdiff_t>(i + 1));
  }
  return std::nullopt;
}

BrownSplit brown_split(const std::vector<FiniteWindow>& parts, unsigned long bound,
                       std::size_t count) {
  if (parts.empty()) throw DomainError("brown_split needs at least one part");
  std::vector<unsigned long> all;
  for (const auto& p : parts) {
    if (p.width() != parts.front().width()) throw DomainError("parts use different windows");
    all.insert(all.end(), p.elements().begin(), p.elements().end());
  }
  BrownSplit out;
  out.bound = bound;
  out.count = count;
  out.union_count = parts.size() * count;
  if (!piecewise_syndetic_window(FiniteWindow(parts.front().width(), std::move(all)), bound,
                                 out.union_count))
    throw DomainError("the union fails the window test at the configured parameters");
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (piecewise_syndetic_window(parts[i], bound, count)) {
      out.part = i;
      return out;
    }
  out.detail = "no part has " + std::to_string(count) + " elements with gaps <= " +
               std::to_string(bound) + " in this window";
  return out;
}

std::optional<Progression> progression_search(const FiniteWindow& s, std::size_t length) {
  if (length < 3) throw DomainError("progression length must be at least 3");
  const unsigned long steps = length - 1;
  for (unsigned long a : s.elements()) {
    if (a >= s.width()) break;
    for (unsigned long b = 1; a + steps * b < s.width(); ++b) {
      bool ok = true;
      for (unsigned long i = 1; i <= steps && ok; ++i) ok = s.contains(a + i * b);
      if (ok) return Progression{a, b};
    }
  }
  return std::nullopt;
}

ExpPoly::ExpPoly(std::size_t r, std::vector<ExpPolyTerm> terms) : r_(r) {
  const std::vector<std::string>* vars = nullptr;
  for (auto& t : terms) {
    if (t.gamma.size() != r || t.j.size() != r) throw DimensionError("ragged exponential term");
    for (const auto& g : t.gamma)
      if (g.value.is_zero()) throw DomainError("gamma must be nonzero");
    if (auto s = std::get_if<TruncSeries>(&t.c)) {
      if (vars && *vars != s->variables())
        throw DomainError("series coefficients over different variables");
      vars = &s->variables();
    }
    auto same = std::find_if(terms_.begin(), terms_.end(), [&](const ExpPolyTerm& u) {
      return u.j == t.j && same_gammas(u.gamma, t.gamma);
    });
    if (same == terms_.end())
      terms_.push_back(std::move(t));
    else
      same->c = add_coefficients(same->c, t.c);
  }
  std::erase_if(terms_, [](const ExpPolyTerm& t) { return coefficient_is_zero(t.c); });
}

bool ExpPoly::has_series() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const ExpPolyTerm& t) { return std::holds_alternative<TruncSeries>(t.c); });
}

std::vector<std::pair<std::vector<Gamma>, unsigned>> ExpPoly::degree_profile() const {
  std::vector<std::pair<std::vector<Gamma>, unsigned>> out;
  for (const auto& t : terms_) {
    unsigned d = std::accumulate(t.j.begin(), t.j.end(), 0u);
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& p) { return same_gammas(p.first, t.gamma); });
    if (it == out.end())
      out.emplace_back(t.gamma, d);
    else
      it->second = std::max(it->second, d);
  }
  return out;
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
  if (a.r() != b.r() && !a.is_zero() && !b.is_zero())
    throw DimensionError("exponential polynomials of different arity");
  std::vector<ExpPolyTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return ExpPoly(a.is_zero() ? b.r() : a.r(), std::move(terms));
}

std::variant<BigFloat, NumericSeries> exp_poly_eval(const ExpPoly& psi, const IntVector& k,
                                                    mpfr_prec_t prec) {
  if (k.size() != psi.r()) throw DimensionError("k has the wrong length");
  for (const auto& x : k)
    if (x < 0) throw DomainError("k must be non-negative");
  const mpfr_prec_t w = prec + 32;
  std::vector<BigFloat> factors;
  for (const auto& t : psi.terms()) {
    BigFloat f(1, w);
    for (std::size_t i = 0; i < psi.r(); ++i) {
      BigFloat g(t.gamma[i].value.to_rational(), w);
      f = mul(f, pow(g, k[i]), MPFR_RNDN);
      if (t.j[i] > 0) f = mul(f, BigFloat(pow(k[i], t.j[i]), w), MPFR_RNDN);
    }
    factors.push_back(std::move(f));
  }
  if (!psi.has_series()) {
    BigFloat sum(0, w);
    for (std::size_t n = 0; n < factors.size(); ++n)
      sum = add(sum,
                mul(factors[n], BigFloat(std::get<BigRational>(psi.terms()[n].c), w), MPFR_RNDN),
                MPFR_RNDN);
    return BigFloat(sum.to_rational(), prec);
  }
  NumericSeries out;
  std::map<Exponent, BigFloat, GrlexLess> acc;
  for (std::size_t n = 0; n < factors.size(); ++n) {
    const auto& c = psi.terms()[n].c;
    if (auto q = std::get_if<BigRational>(&c)) {
      auto it = acc.try_emplace(Exponent{}, BigFloat(0, w)).first;
      it->second = add(it->second, mul(factors[n], BigFloat(*q, w), MPFR_RNDN), MPFR_RNDN);
      continue;
    }
    const auto& s = std::get<TruncSeries>(c);
    out.variables = s.variables();
    for (const auto& [e, v] : s.terms()) {
      auto it = acc.try_emplace(e, BigFloat(0, w)).first;
      it->second = add(it->second, mul(factors[n], BigFloat(v, w), MPFR_RNDN), MPFR_RNDN);
    }
  }
  for (auto& [e, v] : acc) {
    // Scalar terms were keyed by the empty exponent; move them to the constant slot.
    Exponent key = e.empty() ? Exponent(out.variables.size(), 0) : e;
    auto it = std::find_if(out.terms.begin(), out.terms.end(),
                           [&](const auto& p) { return p.first == key; });
    if (it == out.terms.end())
      out.terms.emplace_back(key, BigFloat(v.to_rational(), prec));
    else
      it->second = BigFloat(BigRational(it->second.to_rational() + v.to_rational()), prec);
  }
  std::sort(out.terms.begin(), out.terms.end(),
            [](const auto& a, const auto& b) { return GrlexLess{}(a.first, b.first); });
  return out;
}

VanishingProbe vanishing_probe(const TruncSeries& g, const std::vector<Transform>& transforms,
                               const std::vector<RationalPoint>& alphas,
                               const IterationSequence& seq, mpfr_prec_t prec,
                               unsigned long bound, std::size_t count) {
  if (g.is_zero()) throw DomainError("vanishing probe needs a nonzero g");
  const std::size_t r = transforms.size();
  if (alphas.size() != r) throw DimensionError("one point per transformation");
  std::size_t nvars = 0;
  for (std::size_t i = 0; i < r; ++i) {
    if (alphas[i].size() != transforms[i].n())
      throw DimensionError("point dimension differs from its transformation");
    nvars += alphas[i].size();
  }
  if (g.nvars() != nvars) throw DimensionError("g must have one variable per coordinate");

  VanishingProbe out;
  out.precision = prec;
  out.bound = bound;
  out.count = count;
  out.hypotheses_certified = true;
  for (std::size_t i = 0; i < r; ++i) {
    AdmissibilityReport rep = admissible_pair(transforms[i], alphas[i]);
    if (rep.verdict == AdmissibilityReport::Verdict::not_admissible)
      throw DomainError("pair " + std::to_string(i) + " is not admissible");
    if (rep.verdict != AdmissibilityReport::Verdict::admissible) out.hypotheses_certified = false;
  }

  const MultiPoly poly = g.to_polynomial();
  const unsigned deg = static_cast<unsigned>(std::max(poly.total_degree(), 0));
  const mpfr_prec_t w = prec + 16;
  constexpr std::size_t exact_bits = 1u << 16;

  for (const auto& [l, k] : seq.entries) {
    if (k.size() != r) throw DimensionError("iteration vector length differs");
    out.l_values.push_back(l);
    std::vector<IntMatrix> powers;
    std::size_t height = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (k[i] < 0) throw DomainError("iteration vectors must be non-negative");
      powers.push_back(int_pow(transforms[i].matrix(), k[i].get_ui()));
      const IntMatrix& m = powers.back();
      for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = 0; b < m.cols(); ++b) {
          const BigRational& x = alphas[i][b];
          std::size_t h = bit_length(x.get_num()) + bit_length(x.get_den());
          if (bit_length(m(a, b)) + bit_length(BigInt(h)) > 40) height = exact_bits + 1;
          else if (height <= exact_bits) height += m(a, b).get_ui() * h;
        }
    }

    if (height <= exact_bits) {
      std::vector<BigRational> pt;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t a = 0; a < powers[i].rows(); ++a) {
          BigRational c = 1;
          for (std::size_t b = 0; b < powers[i].cols(); ++b) c *= pow(alphas[i][b], powers[i](a, b));
          pt.push_back(c);
        }
      if (poly.evaluate(pt) == 0) out.zero_set.push_back(l);
      continue;
    }

    // Numeric route: coordinates with relative error <= 2^-w each.
    std::vector<BigFloat> pt;
    bool underflow = false;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t a = 0; a < powers[i].rows(); ++a) {
        std::size_t ebits = 0;
        for (std::size_t b = 0; b < powers[i].cols(); ++b)
          ebits = std::max(ebits, bit_length(powers[i](a, b)));
        const mpfr_prec_t q = w + static_cast<mpfr_prec_t>(ebits) + 16;
        BigFloat lg(0, q);
        int sign = 1;
        for (std::size_t b = 0; b < powers[i].cols(); ++b) {
          const BigInt& e = powers[i](a, b);
          if (e == 0) continue;
          const BigRational& x = alphas[i][b];
          if (x < 0 && mpz_odd_p(e.get_mpz_t())) sign = -sign;
          lg = add(lg, mul(BigFloat(e, q), log(BigFloat(BigRational(abs(x)), q)), MPFR_RNDN),
                   MPFR_RNDN);
        }
        BigFloat c = exp(lg);
        if (c.is_zero() || !c.is_finite()) underflow = true;
        // Stay in floating point: these values can have exponents near 2^60.
        BigFloat rounded(w);
        mpfr_set(rounded.get(), c.get(), MPFR_RNDN);
        if (sign < 0) mpfr_neg(rounded.get(), rounded.get(), MPFR_RNDN);
        pt.push_back(std::move(rounded));
      }
    if (underflow) {
      out.undecided.push_back(l);
      continue;
    }
    BigFloat sum(0, w), mag(0, w);
    for (const auto& [e, c] : poly.terms()) {
      BigFloat term(c, w);
      for (std::size_t v = 0; v < e.size(); ++v)
        if (e[v] > 0) term = mul(term, pow(pt[v], BigInt(e[v])), MPFR_RNDN);
      sum = add(sum, term, MPFR_RNDN);
      mag = add(mag, abs(term), MPFR_RNDU);
    }
    // Each term carries relative error <= (deg + 2) 2^-w, the sum adds one
    // rounding per term.
    BigFloat err = mul(mag, power_of_two(-static_cast<long>(w) + 2, w), MPFR_RNDU);
    err = mul(err, BigFloat(static_cast<long>(deg + 2 + poly.terms().size()), w), MPFR_RNDU);
    if (abs(sum) <= err) out.undecided.push_back(l);
  }

  const unsigned long width = seq.entries.empty() ? 1 : seq.entries.back().first + 1;
  out.window_test_passed =
      piecewise_syndetic_window(FiniteWindow(width, out.zero_set), bound, count).has_value();
  out.detail = std::to_string(out.zero_set.size()) + " zeros and " +
               std::to_string(out.undecided.size()) + " undecided among " +
               std::to_string(out.l_values.size()) + " orbit points";
  return out;
}

}  // namespace mahler
