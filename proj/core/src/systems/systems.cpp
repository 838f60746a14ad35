#include "mahler/systems/systems.hpp"

#include <algorithm>
#include <set>

#include "mahler/exact/errors.hpp"

namespace mahler {

namespace {

std::vector<std::string> check_variables(std::vector<std::string> vars) {
  std::set<std::string> seen;
  for (const auto& v : vars)
    if (!seen.insert(v).second) throw DomainError("repeated variable name '" + v + "'");
  return vars;
}

BigInt row_sum(const IntMatrix& m, std::size_t i) {
  BigInt s = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
  return s;
}

bool all_row_sums_at_least(const IntMatrix& m, long bound) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (row_sum(m, i) < bound) return false;
  return true;
}

// Every exponent of total degree d in n variables, in grlex order.
std::vector<Exponent> monomials_of_degree(std::size_t n, unsigned d) {
  std::vector<Exponent> out;
  Exponent e(n, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == n) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned x = 0; x <= left; ++x) {
      e[i] = x;
      self(self, i + 1, left - x);
    }
  };
  if (n == 0) return d == 0 ? std::vector<Exponent>{Exponent{}} : out;
  rec(rec, 0, d);
  return out;
}

std::string exponent_string(const std::vector<std::string>& vars, const Exponent& e) {
  MultiPoly m = MultiPoly::monomial(vars, e, 1);
  return m.to_string();
}

// First coefficient where two series matrices differ, described for a report.
std::optional<std::string> first_difference(const SeriesMatrix& got, const SeriesMatrix& want,
                                            const std::string& label) {
  for (std::size_t i = 0; i < got.rows(); ++i)
    for (std::size_t j = 0; j < got.cols(); ++j) {
      if (got(i, j) == want(i, j)) continue;
      TruncSeries diff = got(i, j) - want(i, j);
      const auto& [e, c] = *diff.terms().begin();
      return label + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
             ") coefficient of " + exponent_string(got(i, j).variables(), e) + " is " +
             to_string(got(i, j).coefficient(e)) + ", expected " +
             to_string(want(i, j).coefficient(e));
    }
  return std::nullopt;
}

QMatrix q_pow(const QMatrix& b, unsigned k) {
  QMatrix r = rational_identity(b.rows());
  for (unsigned i = 0; i < k; ++i) r = r * b;
  return r;
}

}  // namespace

MahlerSystem::MahlerSystem(Transform t, RFMatrix a, std::vector<std::string> variables)
    : t_(std::move(t)), a_(std::move(a)), vars_(check_variables(std::move(variables))) {
  if (vars_.size() != t_.n())
    throw DimensionError("system has " + std::to_string(vars_.size()) +
                         " variables but T has size " + std::to_string(t_.n()));
  if (!a_.is_square() || a_.rows() == 0) throw DimensionError("system matrix must be square");
  for (const auto& x : a_.data())
    if (x.variables() != vars_)
      throw DimensionError("system matrix entry over a different variable list");
  if (determinant(a_).is_zero()) throw SingularError("det A vanishes identically");
}

MahlerSystem MahlerSystem::from_inverse_orientation(Transform t, const RFMatrix& a,
                                                    std::vector<std::string> variables) {
  return MahlerSystem(std::move(t), inverse(a), std::move(variables));
}

RFMatrix iterate_matrix(const MahlerSystem& sys, unsigned k) {
  RFMatrix p = rf_identity(sys.variables(), sys.size());
  IntMatrix tj = int_identity(sys.nvars());
  for (unsigned j = 0; j < k; ++j) {
    p = p * substitute_monomials(sys.matrix(), tj);
    tj = sys.transform().matrix() * tj;
  }
  return p;
}

MahlerSystem block_combine(const std::vector<MahlerSystem>& systems,
                           const std::vector<unsigned>& k) {
  if (systems.empty()) throw DimensionError("block_combine needs at least one system");
  if (systems.size() != k.size()) throw DimensionError("one iteration count per system");
  std::vector<std::string> vars;
  std::set<std::string> seen;
  for (const auto& s : systems)
    for (const auto& v : s.variables()) {
      if (!seen.insert(v).second)
        throw DomainError("variable name '" + v + "' used by two systems");
      vars.push_back(v);
    }
  std::vector<Transform> ts;
  std::vector<RFMatrix> blocks;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    ts.push_back(systems[i].transform().pow(k[i]));
    RFMatrix a = iterate_matrix(systems[i], k[i]);
    blocks.push_back(a.map([&](const RatFunc& f) { return f.embed(vars); }));
  }
  return MahlerSystem(Transform::block_diagonal(ts),
                      block_diagonal(blocks, RatFunc::constant(vars, 0)), vars);
}

RFMatrix kronecker_product(const RFMatrix& a, const RFMatrix& b) { return kronecker(a, b); }

MahlerSystem kronecker_power(const MahlerSystem& sys, unsigned d) {
  if (d == 0) throw DomainError("Kronecker power needs d >= 1");
  RFMatrix p = sys.matrix();
  for (unsigned i = 1; i < d; ++i) p = kronecker(p, sys.matrix());
  return MahlerSystem(sys.transform(), std::move(p), sys.variables());
}

std::optional<unsigned> degree_raising_iterate(const Transform& t, unsigned bound) {
  IntMatrix p = t.matrix();
  for (unsigned k = 1; k <= bound; ++k) {
    if (all_row_sums_at_least(p, 2)) return k;
    p = p * t.matrix();
  }
  return std::nullopt;
}

std::vector<TruncSeries> series_solve(const MahlerSystem& sys,
                                      const std::vector<BigRational>& f0, unsigned order,
                                      unsigned max_iterate) {
  const std::size_t m = sys.size();
  if (f0.size() != m) throw DimensionError("initial vector has the wrong size");
  SeriesMatrix a_ser = series_from_rfmatrix(sys.matrix(), std::max(order, 1u));
  QMatrix a0 = constant_terms(a_ser);
  for (std::size_t i = 0; i < m; ++i) {
    BigRational s = 0;
    for (std::size_t j = 0; j < m; ++j) s += a0(i, j) * f0[j];
    if (s != f0[i]) throw DomainError("initial vector is not fixed by A(0)");
  }
  auto k = degree_raising_iterate(sys.transform(), max_iterate);
  if (!k)
    throw DomainError("no iterate T^k with k <= " + std::to_string(max_iterate) +
                      " raises the degree of every variable");
  if (*k > 1) a_ser = series_from_rfmatrix(iterate_matrix(sys, *k), std::max(order, 1u));
  const IntMatrix tk = sys.transform().pow(*k).matrix();

  SeriesMatrix g(m, 1, TruncSeries(sys.variables(), order));
  for (std::size_t i = 0; i < m; ++i)
    g(i, 0) = TruncSeries::constant(sys.variables(), order, f0[i]);
  if (order == 0) return std::vector<TruncSeries>(g.data());
  a_ser = truncate(a_ser, order);
  // Each pass fixes at least one more degree.
  for (unsigned pass = 0; pass <= order + 1; ++pass) {
    SeriesMatrix next = a_ser * series_substitute_transform(g, tk);
    if (next == g) return std::vector<TruncSeries>(g.data());
    g = std::move(next);
  }
  throw Error("internal: series iteration did not stabilise");
}

GaugeTransform gauge_construct(const MahlerSystem& sys, unsigned order) {
  const std::size_t m = sys.size();
  const std::size_t n = sys.nvars();
  const auto& vars = sys.variables();
  const IntMatrix& t = sys.transform().matrix();
  if (!all_row_sums_at_least(t, 1))
    throw DomainError("gauge construction needs every variable to appear in its image");
  const unsigned ord = std::max(order, 1u);
  SeriesMatrix a_ser = series_from_rfmatrix(sys.matrix(), ord);
  GaugeTransform g;
  g.order = order;
  g.b = constant_terms(a_ser);
  QMatrix b_inv = inverse(g.b);
  g.phi = series_identity(vars, ord, m);
  SeriesMatrix b_inv_ser = series_from_rational(vars, ord, b_inv);

  for (unsigned d = 1; d < order; ++d) {
    // Degree-d part of A(z) Phi_{<d}(Tz) B^{-1}.
    SeriesMatrix rhs = a_ser * series_substitute_transform(g.phi, t) * b_inv_ser;
    std::vector<Exponent> mons = monomials_of_degree(n, d);
    // Degree-d monomials whose image under T still has degree d feed back
    // into the same degree through A(0) Phi_d(Tz) B^{-1}.
    std::vector<std::pair<std::size_t, std::size_t>> feedback;
    for (std::size_t u = 0; u < mons.size(); ++u) {
      Exponent img = transform_exponent(t, mons[u]);
      if (total_degree(img) != d) continue;
      auto it = std::find(mons.begin(), mons.end(), img);
      feedback.emplace_back(u, static_cast<std::size_t>(it - mons.begin()));
    }
    if (feedback.empty()) {
      for (const auto& e : mons)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            BigRational c = rhs(i, j).coefficient(e);
            if (c != 0) g.phi(i, j).add_term(e, c);
          }
      continue;
    }
    const std::size_t block = m * m;
    const std::size_t size = mons.size() * block;
    QMatrix sys_mat(size, size, BigRational(0));
    std::vector<BigRational> rhs_vec(size);
    for (std::size_t v = 0; v < mons.size(); ++v)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          std::size_t row = v * block + i * m + j;
          sys_mat(row, row) += 1;
          rhs_vec[row] = rhs(i, j).coefficient(mons[v]);
        }
    for (auto [u, v] : feedback)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l)
              sys_mat(v * block + i * m + j, u * block + k * m + l) -= g.b(i, k) * b_inv(l, j);
    if (rank(sys_mat) < size)
      throw ResonanceError("gauge equation is singular in degree " + std::to_string(d),
                           static_cast<int>(d));
    auto sol = solve_linear(sys_mat, rhs_vec);
    for (std::size_t u = 0; u < mons.size(); ++u)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          const BigRational& c = (*sol)[u * block + i * m + j];
          if (c != 0) g.phi(i, j).add_term(mons[u], c);
        }
  }
  if (order == 0) g.phi = truncate(g.phi, 0);
  g.phi_inv = order == 0 ? g.phi : series_matrix_inverse(g.phi);
  return g;
}

GaugeCheck gauge_verify(const MahlerSystem& sys, const GaugeTransform& g, unsigned order) {
  GaugeCheck out;
  if (order > g.order) {
    out.ok = false;
    out.witness = "requested order exceeds the gauge order";
    return out;
  }
  if (order == 0) return out;
  const auto& vars = sys.variables();
  const std::size_t m = sys.size();
  SeriesMatrix phi = truncate(g.phi, order);
  SeriesMatrix phi_inv = truncate(g.phi_inv, order);
  auto fail = [&](std::optional<std::string> w) {
    if (!w) return false;
    out.ok = false;
    out.witness = *w;
    return true;
  };
  if (fail(first_difference(phi * phi_inv, series_identity(vars, order, m), "Phi Phi^-1 = I")))
    return out;
  const IntMatrix& t = sys.transform().matrix();
  SeriesMatrix a_ser = series_from_rfmatrix(sys.matrix(), order);
  if (fail(first_difference(phi_inv * a_ser * series_substitute_transform(phi, t),
                            series_from_rational(vars, order, g.b),
                            "Phi^-1(z) A(z) Phi(Tz) = B")))
    return out;
  for (unsigned k = 0; k <= 3; ++k) {
    SeriesMatrix lhs = series_from_rfmatrix(iterate_matrix(sys, k), order);
    SeriesMatrix rhs = phi * series_from_rational(vars, order, q_pow(g.b, k)) *
                       series_substitute_transform(phi_inv, sys.transform().pow(k).matrix());
    if (fail(first_difference(lhs, rhs, "A_" + std::to_string(k) + " = Phi B^k Phi^-1(T^k z)")))
      return out;
  }
  return out;
}

namespace {

// |p(0)| - r * sum_{mu != 0} |p_mu| > 0.
bool stays_nonzero_on_polydisk(const MultiPoly& p, const BigRational& r) {
  BigRational tail = 0;
  for (const auto& [e, c] : p.terms())
    if (total_degree(e) > 0) tail += abs(c);
  return abs(p.constant_term()) - r * tail > 0;
}

std::size_t point_bits(const RationalPoint& p) {
  std::size_t bits = 0;
  for (const auto& c : p.coords())
    bits += mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2);
  return bits;
}

constexpr std::size_t kOrbitBitBudget = std::size_t{1} << 20;

}  // namespace

RegularityReport regular_point_check(const MahlerSystem& sys, const RationalPoint& alpha,
                                     std::size_t k_max) {
  if (alpha.size() != sys.nvars()) throw DimensionError("point size differs from variable count");
  RegularityReport r;
  std::vector<MultiPoly> guards;
  for (const auto& x : sys.matrix().data()) guards.push_back(x.den());
  guards.push_back(determinant(sys.matrix()).num());
  {
    std::vector<BigRational> zero(sys.nvars(), BigRational(0));
    r.a0_invertible = std::all_of(guards.begin(), guards.end(),
                                  [&](const MultiPoly& p) { return p.evaluate(zero) != 0; });
  }
  const bool disk_invariant = all_row_sums_at_least(sys.transform().matrix(), 1);
  RationalPoint p = alpha;
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) {
      if (point_bits(p) > kOrbitBitBudget) {
        r.detail = "orbit point " + std::to_string(k) + " is too large to evaluate exactly";
        break;
      }
      p = act_point(sys.transform(), p);
    }
    r.k_checked = k;
    bool ok = true;
    try {
      ok = determinant(evaluate(sys.matrix(), p.span())) != 0;
    } catch (const PoleError&) {
      ok = false;
    }
    if (!ok) {
      r.failures.push_back(k);
      continue;
    }
    if (!r.failures.empty() || r.certified_from || !r.a0_invertible || !disk_invariant) continue;
    BigRational radius = 0;
    for (const auto& c : p.coords()) radius = std::max(radius, BigRational(abs(c)));
    if (radius >= 1) continue;
    if (std::all_of(guards.begin(), guards.end(),
                    [&](const MultiPoly& g) { return stays_nonzero_on_polydisk(g, radius); })) {
      r.certified_from = k;
      break;
    }
  }
  if (!r.failures.empty()) {
    r.verdict = RegularityReport::Verdict::not_regular;
    r.detail = "A is undefined or singular at iterate " + std::to_string(r.failures.front());
  } else if (r.certified_from) {
    r.verdict = RegularityReport::Verdict::regular_certified;
    r.detail = "orbit enters a polydisk where the guards cannot vanish at iterate " +
               std::to_string(*r.certified_from);
  } else {
    r.verdict = RegularityReport::Verdict::regular_up_to_k;
    if (r.detail.empty())
      r.detail = "regular at iterates 0.." + std::to_string(r.k_checked) + ", no certificate";
  }
  return r;
}

std::string to_string(RegularityReport::Verdict v) {
  switch (v) {
    case RegularityReport::Verdict::regular_certified: return "regular_certified";
    case RegularityReport::Verdict::regular_up_to_k: return "regular_up_to_k";
    case RegularityReport::Verdict::not_regular: return "not_regular";
  }
  return "regular_up_to_k";
}

}  // namespace mahler
