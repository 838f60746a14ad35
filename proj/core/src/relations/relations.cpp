#include "mahler/relations/relations.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mahler/exact/errors.hpp"

namespace mahler {

namespace {

std::size_t bit_length(const BigInt& x) {
  return x == 0 ? 0 : mpz_sizeinbase(BigInt(abs(x)).get_mpz_t(), 2);
}

BigRational scale_pow2(const BigRational& x, long e) {
  BigRational r;
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

BigInt round_nearest(const BigRational& x) {
  BigRational shifted = x + BigRational(1, 2);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return q;
}

std::vector<BigRational> rounded_values(const ValueSource& source, mpfr_prec_t p) {
  std::vector<BigFloat> v = source(p);
  std::vector<BigRational> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_finite()) throw DomainError("relation search on a non-finite value");
    out.push_back(BigFloat(x.to_rational(), p).to_rational());
  }
  return out;
}

BigRational max_abs(const std::vector<BigRational>& v) {
  BigRational m = 0;
  for (const auto& x : v) {
    BigRational a = abs(x);
    if (a > m) m = a;
  }
  return m;
}

void normalize_sign(IntVector& c) {
  for (const auto& x : c) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : c) y = -y;
    return;
  }
}

struct Check {
  bool ok = false;
  BigFloat residual;
};

// |sum c_i v_i| against max|v| (1 + |c|_1) 2^(16 - p).
Check check_relation(const IntVector& c, const std::vector<BigRational>& v, mpfr_prec_t p) {
  BigRational sum = 0, l1 = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    sum += BigRational(c[i]) * v[i];
    l1 += BigRational(abs(c[i]));
  }
  BigRational res = abs(sum);
  BigRational tol = scale_pow2(max_abs(v) * l1, 16 - static_cast<long>(p));
  return {res <= tol, BigFloat(res, p, MPFR_RNDU)};
}

bool relation_order(const IntegerRelation& a, const IntegerRelation& b) {
  BigInt na = dot(a.coeffs, a.coeffs), nb = dot(b.coeffs, b.coeffs);
  if (na != nb) return na < nb;
  return a.coeffs < b.coeffs;
}

ValueSource fixed_source(const std::vector<BigFloat>& values, mpfr_prec_t prec) {
  for (const auto& v : values)
    if (v.precision() < 2 * prec)
      throw DomainError("values carry " + std::to_string(v.precision()) +
                        " bits, the doubled-precision check needs " +
                        std::to_string(2 * prec));
  return [values](mpfr_prec_t p) {
    std::vector<BigFloat> out;
    out.reserve(values.size());
    for (const auto& v : values) out.emplace_back(v.to_rational(), p);
    return out;
  };
}

void enumerate_monomials(std::size_t m, unsigned remaining, Exponent& cur, std::size_t i,
                         bool exact, std::vector<Exponent>& out) {
  if (i + 1 == m) {
    if (exact) {
      cur[i] = remaining;
      out.push_back(cur);
    } else {
      for (unsigned k = 0; k <= remaining; ++k) {
        cur[i] = k;
        out.push_back(cur);
      }
    }
    cur[i] = 0;
    return;
  }
  for (unsigned k = 0; k <= remaining; ++k) {
    cur[i] = k;
    enumerate_monomials(m, remaining - k, cur, i + 1, exact, out);
  }
  cur[i] = 0;
}

bool disjoint_names(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return false;
  return true;
}

BigRational monomial_value(const Exponent& e, std::span<const BigRational> point) {
  BigRational v = 1;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) v *= pow(point[i], static_cast<long>(e[i]));
  return v;
}

}  // namespace

mpfr_prec_t required_precision(std::size_t m, const BigInt& coeff_bound) {
  return static_cast<mpfr_prec_t>(m * (bit_length(coeff_bound) + (m + 1) / 2) + 16);
}

std::vector<IntegerRelation> relation_candidates(const ValueSource& source,
                                                 const BigInt& coeff_bound, mpfr_prec_t prec) {
  if (coeff_bound < 1) throw DomainError("coefficient bound must be positive");
  std::vector<BigRational> v = rounded_values(source, prec);
  const std::size_t m = v.size();
  if (m == 0) throw DimensionError("relation search needs at least one value");
  const mpfr_prec_t need = required_precision(m, coeff_bound);
  if (prec < need)
    throw DomainError("precision insufficient for the coefficient bound: need " +
                      std::to_string(need) + " bits, have " + std::to_string(prec));

  const BigRational big = max_abs(v);
  long shift = prec;
  if (big != 0) shift = prec - mpfr_get_exp(BigFloat(big, 64).get());
  std::vector<IntVector> rows(m, IntVector(m + 1, BigInt(0)));
  for (std::size_t i = 0; i < m; ++i) {
    rows[i][i] = 1;
    rows[i][m] = round_nearest(scale_pow2(v[i], shift));
  }
  std::vector<IntVector> reduced = lll_reduce(std::move(rows));

  std::set<IntVector> seen;
  std::vector<IntegerRelation> out;
  std::optional<std::vector<BigRational>> doubled;
  for (const auto& row : reduced) {
    IntVector c(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m));
    if (std::all_of(c.begin(), c.end(), [](const BigInt& x) { return x == 0; })) continue;
    if (std::any_of(c.begin(), c.end(), [&](const BigInt& x) { return abs(x) > coeff_bound; }))
      continue;
    normalize_sign(c);
    if (!seen.insert(c).second) continue;
    Check first = check_relation(c, v, prec);
    if (!first.ok) continue;
    if (!doubled) doubled = rounded_values(source, 2 * prec);
    if (doubled->size() != m) throw DimensionError("value source changed length");
    Check second = check_relation(c, *doubled, 2 * prec);
    IntegerRelation r;
    r.coeffs = std::move(c);
    r.residual = first.residual;
    r.precision = prec;
    r.status = second.ok ? IntegerRelation::Status::verified_numeric
                         : IntegerRelation::Status::refuted;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), relation_order);
  return out;
}

std::vector<IntegerRelation> find_integer_relations(const ValueSource& source,
                                                    const BigInt& coeff_bound,
                                                    mpfr_prec_t prec) {
  std::vector<IntegerRelation> all = relation_candidates(source, coeff_bound, prec);
  std::erase_if(all, [](const IntegerRelation& r) {
    return r.status != IntegerRelation::Status::verified_numeric;
  });
  return all;
}

std::vector<IntegerRelation> find_integer_relations(const std::vector<BigFloat>& values,
                                                    const BigInt& coeff_bound,
                                                    mpfr_prec_t prec) {
  return find_integer_relations(fixed_source(values, prec), coeff_bound, prec);
}

std::vector<Exponent> monomials(std::size_t m, unsigned degree, MonomialMode mode) {
  std::vector<Exponent> out;
  if (m == 0) return out;
  Exponent cur(m, 0);
  enumerate_monomials(m, degree, cur, 0, mode == MonomialMode::homogeneous, out);
  std::sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

std::vector<PolyRelation> find_polynomial_relations(const std::vector<BigFloat>& values,
                                                    unsigned degree,
                                                    const BigInt& coeff_bound, mpfr_prec_t prec,
                                                    MonomialMode mode,
                                                    std::vector<std::string> names) {
  const std::size_t m = values.size();
  if (names.empty())
    for (std::size_t i = 0; i < m; ++i) names.push_back("X" + std::to_string(i));
  if (names.size() != m) throw DimensionError("one name per value is required");
  if (degree == 0) throw DomainError("polynomial relations need degree >= 1");
  std::vector<BigRational> exact;
  for (const auto& v : values) {
    if (v.precision() < 2 * prec)
      throw DomainError("values carry too few bits for the doubled-precision check");
    exact.push_back(v.to_rational());
  }
  const std::vector<Exponent> exps = monomials(m, degree, mode);
  std::vector<BigFloat> mono;
  mono.reserve(exps.size());
  for (const auto& e : exps) mono.emplace_back(monomial_value(e, exact), 2 * prec);

  std::vector<PolyRelation> out;
  for (auto& r : find_integer_relations(mono, coeff_bound, prec)) {
    PolyRelation pr;
    pr.p = MultiPoly(names);
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (r.coeffs[i] != 0) pr.p.add_term(exps[i], BigRational(r.coeffs[i]));
    if (pr.p.leading().second < 0) pr.p = -pr.p;
    for (std::size_t j = 0; j < m; ++j) pr.degree_profile.push_back(pr.p.degree_in(j));
    pr.residual = r.residual;
    pr.precision = r.precision;
    out.push_back(std::move(pr));
  }
  return out;
}

bool is_homogeneous(const MultiPoly& p) {
  if (p.is_zero()) return true;
  const unsigned d = total_degree(p.terms().begin()->first);
  return std::all_of(p.terms().begin(), p.terms().end(),
                     [&](const auto& t) { return total_degree(t.first) == d; });
}

MultiPoly homogenize(const MultiPoly& p, const std::string& new_variable) {
  const auto& old = p.variables();
  if (std::find(old.begin(), old.end(), new_variable) != old.end())
    throw DomainError("homogenizing variable " + new_variable + " is already in use");
  std::vector<std::string> vars{new_variable};
  vars.insert(vars.end(), old.begin(), old.end());
  MultiPoly h(vars);
  if (p.is_zero()) return h;
  const unsigned d = static_cast<unsigned>(p.total_degree());
  for (const auto& [e, c] : p.terms()) {
    Exponent f{d - total_degree(e)};
    f.insert(f.end(), e.begin(), e.end());
    h.add_term(f, c);
  }
  return h;
}

Homogenized homogenize(const MultiPoly& p, const MahlerSystem& sys,
                       const std::vector<BigRational>& f0, const std::string& new_variable) {
  const std::size_t n = sys.size();
  if (p.nvars() != n || f0.size() != n)
    throw DimensionError("relation and initial values must match the system size");
  if (!disjoint_names({new_variable}, sys.variables()))
    throw DomainError("homogenizing variable clashes with a system variable");
  Homogenized out;
  out.p = homogenize(p, new_variable);
  const auto& zv = sys.variables();
  RFMatrix a(n + 1, n + 1, RatFunc::constant(zv, 0));
  a(0, 0) = RatFunc::constant(zv, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i + 1, j + 1) = sys.matrix()(i, j);
  out.system = MahlerSystem(sys.transform(), a, zv);
  out.f0.push_back(1);
  out.f0.insert(out.f0.end(), f0.begin(), f0.end());
  return out;
}

LiftOutcome lift_relation(const MahlerSystem& sys, const std::vector<BigRational>& f0,
                          const MultiPoly& p, const RationalPoint& alpha, unsigned d_max,
                          unsigned order) {
  const std::size_t m = sys.size(), n = sys.nvars();
  if (p.nvars() != m) throw DimensionError("relation must have one variable per component");
  if (alpha.size() != n) throw DimensionError("point dimension differs from the system");
  if (p.is_zero()) throw DomainError("cannot lift the zero relation");
  if (!is_homogeneous(p)) throw DomainError("lift_relation needs a homogeneous relation");
  if (!disjoint_names(p.variables(), sys.variables()))
    throw DomainError("value and system variable names overlap");

  const unsigned g = static_cast<unsigned>(p.total_degree());
  const std::vector<TruncSeries> f = series_solve(sys, f0, order);
  const std::vector<Exponent> xs = monomials(m, g, MonomialMode::homogeneous);

  // f^e for every X-monomial, built incrementally from a lower-degree one.
  std::map<Exponent, TruncSeries, GrlexLess> power;
  power.emplace(Exponent(m, 0), TruncSeries::constant(sys.variables(), order, 1));
  for (const auto& e : monomials(m, g, MonomialMode::up_to_degree)) {
    if (total_degree(e) == 0) continue;
    std::size_t j = 0;
    while (e[j] == 0) ++j;
    Exponent lower = e;
    --lower[j];
    power.emplace(e, power.at(lower) * f[j]);
  }
  const std::vector<Exponent> zrows = monomials(n, order == 0 ? 0 : order - 1,
                                                MonomialMode::up_to_degree);

  std::vector<std::string> qvars = sys.variables();
  qvars.insert(qvars.end(), p.variables().begin(), p.variables().end());

  LiftOutcome outcome;
  outcome.d_max = d_max;
  outcome.order = order;
  for (unsigned d = 0; d <= d_max; ++d) {
    const std::vector<Exponent> zs = monomials(n, d, MonomialMode::up_to_degree);
    const std::size_t cols = zs.size() * xs.size();
    const std::size_t nrows = xs.size() + (order == 0 ? 0 : zrows.size());
    QMatrix a(nrows, cols, BigRational(0));
    std::vector<BigRational> rhs(nrows, BigRational(0));
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      rhs[xi] = p.coefficient(xs[xi]);
      for (std::size_t zi = 0; zi < zs.size(); ++zi)
        a(xi, zi * xs.size() + xi) = monomial_value(zs[zi], alpha.span());
    }
    if (order > 0)
      for (std::size_t ri = 0; ri < zrows.size(); ++ri) {
        const Exponent& nu = zrows[ri];
        for (std::size_t zi = 0; zi < zs.size(); ++zi) {
          Exponent rest(n);
          bool fits = true;
          for (std::size_t k = 0; k < n && fits; ++k) {
            fits = nu[k] >= zs[zi][k];
            if (fits) rest[k] = nu[k] - zs[zi][k];
          }
          if (!fits) continue;
          for (std::size_t xi = 0; xi < xs.size(); ++xi)
            a(xs.size() + ri, zi * xs.size() + xi) = power.at(xs[xi]).coefficient(rest);
        }
      }
    auto sol = solve_linear(a, rhs);
    if (!sol) continue;
    MultiPoly q(qvars);
    for (std::size_t zi = 0; zi < zs.size(); ++zi)
      for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        const BigRational& c = (*sol)[zi * xs.size() + xi];
        if (c == 0) continue;
        Exponent e = zs[zi];
        e.insert(e.end(), xs[xi].begin(), xs[xi].end());
        q.add_term(e, c);
      }
    LiftCheck check = verify_lift(sys, f0, p, alpha, q, order);
    if (!check.specialization_ok || !check.series_ok) {
      outcome.detail = "solution at z-degree " + std::to_string(d) +
                       " failed re-verification: " + check.detail;
      return outcome;
    }
    outcome.result = LiftResult{q, d, order, true, true};
    return outcome;
  }
  outcome.detail = "no Q with z-degree <= " + std::to_string(d_max) +
                   " satisfies both constraints mod degree " + std::to_string(order);
  return outcome;
}

LiftCheck verify_lift(const MahlerSystem& sys, const std::vector<BigRational>& f0,
                      const MultiPoly& p, const RationalPoint& alpha, const MultiPoly& q,
                      unsigned order) {
  const std::size_t n = sys.nvars(), m = sys.size();
  LiftCheck out;
  if (q.nvars() != n + m) {
    out.detail = "Q has the wrong number of variables";
    return out;
  }
  // Specialization: substitute alpha for z and compare with P termwise.
  MultiPoly specialized(p.variables());
  for (const auto& [e, c] : q.terms()) {
    BigRational zc = c;
    for (std::size_t k = 0; k < n; ++k) zc *= pow(alpha[k], static_cast<long>(e[k]));
    specialized.add_term(Exponent(e.begin() + static_cast<std::ptrdiff_t>(n), e.end()), zc);
  }
  out.specialization_ok = specialized == p;
  if (!out.specialization_ok) out.detail = "Q(alpha, X) = " + specialized.to_string();

  // Functional identity: Q(z, f(z)) term by term with fresh series.
  const std::vector<TruncSeries> f = series_solve(sys, f0, order);
  TruncSeries total(sys.variables(), order);
  for (const auto& [e, c] : q.terms()) {
    TruncSeries term(sys.variables(), order);
    term.add_term(Exponent(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n)), c);
    for (std::size_t j = 0; j < m; ++j)
      for (unsigned k = 0; k < e[n + j]; ++k) term = term * f[j];
    total += term;
  }
  out.series_ok = total.is_zero();
  if (!out.series_ok) {
    const auto& [e, c] = *total.terms().begin();
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("Q(z, f(z)) has coefficient ") +
                  to_string(c) + " at degree " + std::to_string(total_degree(e));
  }
  return out;
}

PurityResult purity_decompose(const MultiPoly& p,
                              const std::vector<std::vector<std::size_t>>& groups,
                              const std::vector<std::vector<MultiPoly>>& pure_gens,
                              unsigned degree_bound, PurityMode mode,
                              const std::vector<BigFloat>* values) {
  const std::size_t nv = p.nvars();
  if (groups.size() != pure_gens.size())
    throw DimensionError("one generator list per group is required");
  std::vector<int> group_of(nv, -1);
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t v : groups[i]) {
      if (v >= nv || group_of[v] != -1) throw DomainError("groups must partition the variables");
      group_of[v] = static_cast<int>(i);
    }
  if (std::find(group_of.begin(), group_of.end(), -1) != group_of.end())
    throw DomainError("groups must partition the variables");

  auto group_degrees = [&](const Exponent& e) {
    std::vector<unsigned> d(groups.size(), 0);
    for (std::size_t v = 0; v < nv; ++v) d[static_cast<std::size_t>(group_of[v])] += e[v];
    return d;
  };

  for (std::size_t i = 0; i < pure_gens.size(); ++i)
    for (const auto& g : pure_gens[i]) {
      if (g.variables() != p.variables())
        throw DomainError("generators must use the relation's variables");
      for (const auto& [e, c] : g.terms()) {
        auto d = group_degrees(e);
        for (std::size_t j = 0; j < d.size(); ++j)
          if (j != i && d[j] != 0) throw DomainError("generator is not pure for its group");
        if (mode == PurityMode::multilinear && d[i] != 1)
          throw DomainError("multilinear mode needs linear-form generators");
      }
      if (values) {
        if (values->size() != nv) throw DimensionError("one value per variable is required");
        std::vector<BigRational> pt;
        mpfr_prec_t prec = 0;
        for (const auto& v : *values) {
          pt.push_back(v.to_rational());
          prec = prec == 0 ? v.precision() : std::min(prec, v.precision());
        }
        BigRational res = abs(g.evaluate(pt)), scale = 1;
        for (const auto& [e, c] : g.terms()) scale += abs(c * monomial_value(e, pt));
        if (res > scale_pow2(scale, 16 - static_cast<long>(prec)))
          throw DomainError("generator " + g.to_string() + " does not vanish on the values");
      }
    }

  if (mode == PurityMode::multilinear)
    for (const auto& [e, c] : p.terms())
      for (unsigned d : group_degrees(e))
        if (d != 1) throw DomainError("relation is not multilinear in the groups");

  // Spanning set: (group, generator, multiplier monomial).
  struct Column {
    std::size_t group, gen;
    Exponent mu;
  };
  std::vector<Column> cols;
  std::vector<MultiPoly> products;
  for (std::size_t i = 0; i < pure_gens.size(); ++i)
    for (std::size_t k = 0; k < pure_gens[i].size(); ++k) {
      const MultiPoly& g = pure_gens[i][k];
      if (g.is_zero()) continue;
      const unsigned gd = static_cast<unsigned>(g.total_degree());
      std::vector<Exponent> mus;
      if (mode == PurityMode::bounded_degree) {
        if (gd > degree_bound) continue;
        mus = monomials(nv, degree_bound - gd, MonomialMode::up_to_degree);
      } else {
        for (const auto& mu : monomials(nv, static_cast<unsigned>(groups.size()) - 1,
                                        MonomialMode::homogeneous)) {
          auto d = group_degrees(mu);
          bool ok = true;
          for (std::size_t j = 0; j < d.size(); ++j) ok = ok && d[j] == (j == i ? 0u : 1u);
          if (ok) mus.push_back(mu);
        }
      }
      for (auto& mu : mus) {
        products.push_back(MultiPoly::monomial(p.variables(), mu, 1) * g);
        cols.push_back({i, k, std::move(mu)});
      }
    }

  PurityResult out;
  out.degree_bound = degree_bound;
  std::set<Exponent, GrlexLess> support;
  for (const auto& [e, c] : p.terms()) support.insert(e);
  for (const auto& q : products)
    for (const auto& [e, c] : q.terms()) support.insert(e);
  std::vector<Exponent> rows(support.begin(), support.end());
  QMatrix a(rows.size(), cols.size(), BigRational(0));
  std::vector<BigRational> rhs(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rhs[r] = p.coefficient(rows[r]);
    for (std::size_t c = 0; c < cols.size(); ++c) a(r, c) = products[c].coefficient(rows[r]);
  }
  out.span_dimension = cols.empty() ? 0 : rank(a);
  if (p.is_zero()) {
    out.kind = PurityResult::Kind::decomposed;
    return out;
  }
  if (cols.empty()) return out;
  auto sol = solve_linear(a, rhs);
  if (!sol) return out;

  std::map<std::pair<std::size_t, std::size_t>, MultiPoly> mult;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if ((*sol)[c] == 0) continue;
    auto key = std::make_pair(cols[c].group, cols[c].gen);
    auto it = mult.try_emplace(key, MultiPoly(p.variables())).first;
    it->second.add_term(cols[c].mu, (*sol)[c]);
  }
  for (auto& [key, m] : mult) out.witness.push_back({key.first, key.second, std::move(m)});
  if (!check_purity_witness(p, pure_gens, out.witness))
    throw DomainError("purity witness failed to re-expand");
  out.kind = PurityResult::Kind::decomposed;
  return out;
}

bool check_purity_witness(const MultiPoly& p,
                          const std::vector<std::vector<MultiPoly>>& pure_gens,
                          const std::vector<PurityTerm>& witness) {
  MultiPoly sum(p.variables());
  for (const auto& t : witness) {
    if (t.group >= pure_gens.size() || t.generator >= pure_gens[t.group].size()) return false;
    sum += t.multiplier * pure_gens[t.group][t.generator];
  }
  return sum == p;
}

std::string to_string(IntegerRelation::Status s) {
  return s == IntegerRelation::Status::verified_numeric ? "verified_numeric" : "refuted";
}

std::string to_string(PurityResult::Kind k) {
  return k == PurityResult::Kind::decomposed ? "decomposed" : "not_decomposed_at_bound";
}

std::string relation_to_string(const IntVector& coeffs, const std::vector<std::string>& names) {
  if (coeffs.size() != names.size()) throw DimensionError("one name per coefficient");
  std::string s;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const BigInt& c = coeffs[i];
    if (c == 0) continue;
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    BigInt a = abs(c);
    if (a != 1) s += a.get_str() + "*";
    s += names[i];
  }
  return s.empty() ? "0" : s;
}

}  // namespace mahler
