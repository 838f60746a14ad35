#include "mahler/eval/eval.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mahler/exact/errors.hpp"
#include "mahler/points/points.hpp"

namespace mahler {

namespace {

BigFloat upper(const BigRational& x, mpfr_prec_t prec) {
  return BigFloat(x, prec, MPFR_RNDU);
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Components reachable from i through nonzero entries of A.
std::set<std::size_t> closure(const RFMatrix& a, std::size_t i) {
  std::set<std::size_t> seen = {i};
  std::vector<std::size_t> stack = {i};
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t t = 0; t < a.cols(); ++t)
      if (!a(s, t).is_zero() && seen.insert(t).second) stack.push_back(t);
  }
  return seen;
}

// Components whose truncated series already solves the closed subsystem
// containing them exactly; by uniqueness these truncations are the solution.
std::vector<bool> polynomial_components(const MahlerSystem& sys,
                                        const std::vector<TruncSeries>& f) {
  const std::size_t m = sys.size();
  const RFMatrix& a = sys.matrix();
  std::vector<RatFunc> p, p_t;
  for (const auto& s : f) {
    p.emplace_back(s.to_polynomial());
    p_t.push_back(p.back().substitute_monomials(sys.transform().matrix()));
  }
  std::map<std::set<std::size_t>, bool> cache;
  std::vector<bool> exact(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    std::set<std::size_t> s = closure(a, i);
    auto it = cache.find(s);
    if (it == cache.end()) {
      bool ok = true;
      for (std::size_t r : s) {
        RatFunc acc = RatFunc::constant(sys.variables(), 0);
        for (std::size_t c : s) acc = acc + a(r, c) * p_t[c];
        if (!(acc == p[r])) {
          ok = false;
          break;
        }
      }
      it = cache.emplace(s, ok).first;
    }
    exact[i] = it->second;
  }
  return exact;
}

}  // namespace

BigFloat monomial_tail_bound(const BigRational& r, unsigned order, std::size_t n,
                             mpfr_prec_t prec) {
  if (r < 0 || r >= 1) throw DomainError("tail bound needs 0 <= r < 1");
  if (n == 0) throw DimensionError("tail bound needs at least one variable");
  if (r == 0) return order == 0 ? BigFloat(1L, prec) : BigFloat(0L, prec);
  const BigFloat r_up = upper(r, prec);
  const BigFloat half_gap = div(add(BigFloat(1L, prec), r_up, MPFR_RNDU), BigFloat(2L, prec),
                                MPFR_RNDU);
  BigFloat sum(0L, prec);
  // term_{d+1} / term_d = r (d + n) / (d + 1) decreases towards r; once it
  // drops below (1 + r) / 2 the rest is dominated by a geometric series.
  for (unsigned long d = order; d < order + 10'000'000UL; ++d) {
    BigFloat term = mul(BigFloat(binomial(d + n - 1, n - 1), prec, MPFR_RNDU),
                        pow(r_up, BigInt(static_cast<unsigned long>(d)), MPFR_RNDU), MPFR_RNDU);
    BigFloat q = div(mul(r_up, BigFloat(static_cast<long>(d + n), prec), MPFR_RNDU),
            BigFloat(static_cast<long>(d + 1), prec), MPFR_RNDU);
    if (q <= half_gap) {
      BigFloat one_minus = sub(BigFloat(1L, prec), q, MPFR_RNDD);
      return add(sum, div(term, one_minus, MPFR_RNDU), MPFR_RNDU);
    }
    sum = add(sum, term, MPFR_RNDU);
  }
  throw Error("tail bound did not reach its geometric regime");
}

std::string EvalResult::to_string(std::size_t i, int digits) const {
  return values.at(i).to_scientific(digits) + " +- " + error_bound.at(i).to_scientific(3);
}

EvalResult eval_function(const MahlerSystem& sys, const std::vector<BigRational>& f0,
                         const RationalPoint& alpha, const EvalOptions& options) {
  const std::size_t m = sys.size();
  const std::size_t n = sys.nvars();
  const mpfr_prec_t prec = options.prec;
  if (alpha.size() != n) throw DimensionError("point size differs from variable count");
  if (f0.size() != m) throw DimensionError("initial vector has the wrong size");

  QMatrix ak = rational_identity(m);
  RationalPoint p = alpha;
  for (unsigned j = 0; j < options.k; ++j) {
    QMatrix aj;
    try {
      aj = evaluate(sys.matrix(), p.span());
    } catch (const PoleError&) {
      throw DomainError("A is undefined at orbit point " + std::to_string(j));
    }
    if (determinant(aj) == 0) throw DomainError("A is singular at orbit point " + std::to_string(j));
    ak = ak * aj;
    p = act_point(sys.transform(), p);
  }
  EvalResult out;
  out.k_used = options.k;
  out.order_used = options.order;
  for (const auto& c : p.coords()) out.orbit_radius = std::max(out.orbit_radius, BigRational(abs(c)));
  if (out.orbit_radius >= 1)
    throw DomainError("T^k alpha is not inside the open unit polydisk; increase k");

  std::vector<TruncSeries> f = series_solve(sys, f0, options.order);
  std::vector<bool> exact = polynomial_components(sys, f);
  if (options.majorant) {
    out.majorant = *options.majorant;
    out.majorant_assumed = false;
  } else {
    std::vector<TruncSeries> ref = series_solve(sys, f0, options.majorant_order);
    out.majorant = 1;
    for (const auto& s : ref) out.majorant = std::max(out.majorant, s.coefficient_majorant());
  }
  BigFloat tail = mul(upper(out.majorant, prec),
                      monomial_tail_bound(out.orbit_radius, options.order, n, prec), MPFR_RNDU);

  std::vector<BigRational> fb;
  for (const auto& s : f) fb.push_back(s.evaluate(p.span()));
  for (std::size_t i = 0; i < m; ++i) {
    BigRational v = 0;
    BigFloat err(0L, prec);
    bool row_exact = true;
    for (std::size_t j = 0; j < m; ++j) {
      v += ak(i, j) * fb[j];
      if (ak(i, j) == 0 || exact[j]) continue;
      row_exact = false;
      err = add(err, mul(upper(abs(ak(i, j)), prec), tail, MPFR_RNDU), MPFR_RNDU);
    }
    BigFloat x(v, prec, MPFR_RNDN);
    BigRational rounding = abs(BigRational(x.to_rational() - v));
    err = add(err, upper(rounding, prec), MPFR_RNDU);
    out.values.push_back(std::move(x));
    out.error_bound.push_back(std::move(err));
    out.exact.push_back(row_exact ? std::optional<BigRational>(v) : std::nullopt);
  }
  if (options.tolerance) {
    BigFloat tol = BigFloat(*options.tolerance, prec, MPFR_RNDD);
    for (std::size_t i = 0; i < m; ++i)
      if (out.error_bound[i] > tol)
        throw ToleranceError("error bound exceeds the requested tolerance",
                             out.error_bound[i].to_scientific(6));
  }
  return out;
}

std::vector<DecayRow> orbit_decay_report(const std::vector<Transform>& transforms,
                                         const std::vector<RationalPoint>& points,
                                         const std::vector<std::vector<unsigned long>>& k_vectors,
                                         mpfr_prec_t prec) {
  const std::size_t r = transforms.size();
  if (points.size() != r) throw DimensionError("one point per transform");
  BigFloat theta_norm(0L, prec);
  std::vector<std::vector<BigFloat>> neg_logs(r);
  for (std::size_t i = 0; i < r; ++i) {
    if (transforms[i].n() != points[i].size())
      throw DimensionError("point size differs from transform size");
    if (tends_to_zero(transforms[i], points[i]).kind != TendsToZero::Kind::yes)
      throw DomainError("orbit of point " + std::to_string(i) + " is not certified to tend to zero");
    SpectralData sd = spectral_radius(transforms[i], BigRational(1, 1) / pow(BigInt(2), 100));
    theta_norm = theta_norm + BigFloat(1L, prec) / log(BigFloat((sd.lo + sd.hi) / 2, prec));
    for (const auto& c : points[i].coords())
      neg_logs[i].push_back(-log(BigFloat(BigRational(abs(c)), prec)));
  }
  const BigFloat rho = exp(BigFloat(1L, prec) / theta_norm);
  std::vector<DecayRow> rows;
  for (const auto& k : k_vectors) {
    if (k.size() != r) throw DimensionError("iteration vector size differs from block count");
    DecayRow row;
    row.k = k;
    BigFloat best(prec);
    bool first = true;
    for (std::size_t i = 0; i < r; ++i) {
      row.k_norm += k[i];
      IntMatrix pk = int_pow(transforms[i].matrix(), k[i]);
      for (std::size_t a = 0; a < pk.rows(); ++a) {
        BigFloat v(0L, prec);
        for (std::size_t b = 0; b < pk.cols(); ++b)
          v = v + BigFloat(pk(a, b), prec) * neg_logs[i][b];
        if (first || v < best) best = v;
        first = false;
      }
    }
    row.log_norm = -best;
    row.ratio = best / pow(rho, BigInt(row.k_norm));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mahler
