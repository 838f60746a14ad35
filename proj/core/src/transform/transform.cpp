#include "mahler/transform/transform.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "mahler/exact/errors.hpp"
#include "mahler/exact/intlattice.hpp"

namespace mahler {

Transform::Transform(IntMatrix m) : m_(std::move(m)) {
  if (!m_.is_square() || m_.rows() == 0)
    throw DimensionError("transform must be a nonempty square matrix");
  for (const auto& x : m_.data())
    if (x < 0) throw DomainError("transform entries must be non-negative");
}

Transform Transform::identity(std::size_t n) { return Transform(int_identity(n)); }

Transform Transform::diagonal(const std::vector<long>& d) {
  IntMatrix m(d.size(), d.size(), BigInt(0));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return Transform(std::move(m));
}

Transform Transform::block_diagonal(const std::vector<Transform>& blocks) {
  std::vector<IntMatrix> ms;
  for (const auto& b : blocks) ms.push_back(b.matrix());
  return Transform(::mahler::block_diagonal(ms, BigInt(0)));
}

Transform Transform::pow(unsigned long k) const { return Transform(int_pow(m_, k)); }

std::string Transform::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < n(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < n(); ++j) {
      if (j) s += ",";
      s += m_(i, j).get_str();
    }
    s += "]";
  }
  return s + "]";
}

RationalPoint act_point(const Transform& t, const RationalPoint& alpha) {
  if (t.n() != alpha.size()) throw DimensionError("transform and point sizes differ");
  std::vector<BigRational> out(t.n(), BigRational(1));
  for (std::size_t i = 0; i < t.n(); ++i)
    for (std::size_t j = 0; j < t.n(); ++j)
      if (t(i, j) != 0) out[i] *= pow(alpha[j], t(i, j));
  return RationalPoint(std::move(out));
}

std::vector<RationalPoint> orbit(const Transform& t, const RationalPoint& alpha,
                                 std::size_t k_max) {
  std::vector<RationalPoint> pts{alpha};
  for (std::size_t k = 0; k < k_max; ++k) pts.push_back(act_point(t, pts.back()));
  return pts;
}

namespace {

// Tarjan's algorithm on the graph with an edge j -> i whenever t_ij > 0.
std::vector<std::size_t> strongly_connected_components(const IntMatrix& m,
                                                       std::size_t& count) {
  const std::size_t n = m.rows();
  const std::size_t unvisited = n;
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  count = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (m(w, v) == 0) continue;  // edge v -> w
      if (index[w] == unvisited) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] == unvisited) visit(v);
  return comp;
}

IntMatrix submatrix(const IntMatrix& m, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) {
  IntMatrix s(rows.size(), cols.size(), BigInt(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
  return s;
}

std::optional<BigInt> as_integer(RealRoot r) {
  if (!r.exact()) r.refine(BigRational(1, 4));
  BigInt c;
  mpz_fdiv_q(c.get_mpz_t(), r.hi().get_num_mpz_t(), r.hi().get_den_mpz_t());
  if (r.exact()) {
    if (r.lo() == BigRational(c)) return c;
    return std::nullopt;
  }
  if (BigRational(c) > r.lo() && r.polynomial()(BigRational(c)) == 0) return c;
  return std::nullopt;
}

RealRoot exact_root(const BigRational& v) {
  return *RealRoot::largest_of(UPoly({-v, 1}));
}

}  // namespace

NormalForm normal_form(const Transform& t) {
  const IntMatrix& m = t.matrix();
  const std::size_t n = t.n();
  std::size_t count = 0;
  std::vector<std::size_t> comp = strongly_connected_components(m, count);

  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);
  std::vector<std::set<std::size_t>> succ(count);
  std::vector<std::size_t> indegree(count, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m(i, j) != 0 && comp[i] != comp[j] && succ[comp[j]].insert(comp[i]).second)
        ++indegree[comp[i]];

  // Kahn's algorithm; all sources first, ties broken by smallest member index.
  auto key = [&](std::size_t c) { return members[c].front(); };
  auto by_key = [&](std::size_t a, std::size_t b) { return key(a) < key(b); };
  std::vector<std::size_t> order, sources;
  for (std::size_t c = 0; c < count; ++c)
    if (indegree[c] == 0) sources.push_back(c);
  std::sort(sources.begin(), sources.end(), by_key);
  std::set<std::size_t, decltype(by_key)> ready(by_key);
  std::vector<std::size_t> remaining = indegree;
  auto release = [&](std::size_t c) {
    for (std::size_t s : succ[c])
      if (--remaining[s] == 0) ready.insert(s);
  };
  for (std::size_t c : sources) order.push_back(c);
  for (std::size_t c : sources) release(c);
  while (!ready.empty()) {
    std::size_t c = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(c);
    release(c);
  }

  NormalForm nf;
  nf.kappa = sources.size();
  nf.nu = count - sources.size();
  for (std::size_t c : order) {
    nf.blocks.push_back(members[c]);
    nf.permutation.insert(nf.permutation.end(), members[c].begin(), members[c].end());
    nf.diagonal_blocks.emplace_back(submatrix(m, members[c], members[c]));
  }
  for (std::size_t b = nf.kappa; b < count; ++b) {
    bool nonzero = false;
    for (std::size_t a = 0; a < b && !nonzero; ++a) {
      IntMatrix s = submatrix(m, nf.blocks[b], nf.blocks[a]);
      nonzero = std::any_of(s.data().begin(), s.data().end(),
                            [](const BigInt& x) { return x != 0; });
    }
    nf.subdiagonal_nonzero.push_back(nonzero);
  }
  return nf;
}

IntMatrix permuted_matrix(const Transform& t, const std::vector<std::size_t>& permutation) {
  return submatrix(t.matrix(), permutation, permutation);
}

std::optional<unsigned long> root_of_unity_eigenvalue(const Transform& t) {
  const unsigned long n = t.n();
  UPoly cp = charpoly(t.matrix());
  // phi(k) >= sqrt(k / 2), so phi(k) <= n forces k <= 2 n^2.
  for (unsigned long k = 1; k <= 2 * n * n + 2; ++k) {
    if (euler_phi(k) > n) continue;
    if (gcd(cp, cyclotomic(k)).degree() >= 1) return k;
  }
  return std::nullopt;
}

RealRoot perron_root(const IntMatrix& m) {
  auto r = RealRoot::largest_of(charpoly(m));
  if (!r) throw DomainError("matrix without a real eigenvalue");
  return *r;
}

namespace {

std::vector<RealRoot> block_roots(const NormalForm& nf) {
  std::vector<RealRoot> roots;
  for (const auto& b : nf.diagonal_blocks) roots.push_back(perron_root(b.matrix()));
  return roots;
}

std::size_t argmax(const std::vector<RealRoot>& roots) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (compare(roots[i], roots[best]) > 0) best = i;
  return best;
}

}  // namespace

SpectralData spectral_radius(const Transform& t, const BigRational& width) {
  if (width <= 0) throw DomainError("enclosure width must be positive");
  NormalForm nf = normal_form(t);
  std::vector<RealRoot> roots = block_roots(nf);
  RealRoot rho = roots[argmax(roots)];
  rho.refine(width);
  SpectralData d;
  d.char_poly = charpoly(t.matrix());
  d.lo = rho.lo();
  d.hi = rho.hi();
  d.enclosure_width = rho.width();
  d.exact = rho.exact();
  return d;
}

ClassMReport class_m_check(const Transform& t) {
  ClassMReport r;
  UPoly cp = charpoly(t.matrix());
  r.nonsingular = cp.coeff(0) != 0;
  r.cyclotomic_index = root_of_unity_eigenvalue(t);
  r.root_of_unity_eigenvalue = r.cyclotomic_index.has_value();
  r.normal_form = normal_form(t);
  std::vector<RealRoot> roots = block_roots(r.normal_form);
  const RealRoot& rho = roots[argmax(roots)];
  r.perron_condition = true;
  for (std::size_t b = 0; b < roots.size(); ++b) {
    int c = compare(roots[b], rho);
    bool top = b < r.normal_form.kappa;
    if (top && c != 0) {
      r.perron_condition = false;
      r.perron_detail = "top block " + std::to_string(b + 1) +
                        " has spectral radius below rho(T)";
      break;
    }
    if (!top && c >= 0) {
      r.perron_condition = false;
      r.perron_detail = "lower block " + std::to_string(b + 1) +
                        " has spectral radius equal to rho(T)";
      break;
    }
  }
  r.verdict = r.nonsingular && !r.root_of_unity_eigenvalue && r.perron_condition;
  return r;
}

LogRatio spectral_log_ratio(const Transform& t1, const Transform& t2, long exp_bound) {
  if (exp_bound < 1) throw DomainError("exponent bound must be at least 1");
  RealRoot r1 = perron_root(t1.matrix());
  RealRoot r2 = perron_root(t2.matrix());
  RealRoot one = exact_root(1);
  if (compare(r1, one) <= 0 || compare(r2, one) <= 0)
    throw DomainError("spectral radius must exceed 1");

  LogRatio out;
  auto i1 = as_integer(r1);
  auto i2 = as_integer(r2);
  if (i1 && i2) {
    // a^q = b^p iff the exponent vectors over a coprime basis are proportional.
    auto basis = coprime_basis({*i1, *i2});
    IntVector e1 = factor_over(basis, *i1), e2 = factor_over(basis, *i2);
    // log a / log b = p / q with q e1 = p e2.
    std::size_t lead = 0;
    while (lead < basis.size() && e2[lead] == 0) ++lead;
    BigInt p = e1[lead], q = e2[lead];
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (e1[i] * q != e2[i] * p) {
        out.kind = LogRatio::Kind::irrational_certified;
        return out;
      }
    BigRational ratio = make_rational(p, q);
    out.kind = LogRatio::Kind::rational;
    out.p = ratio.get_num().get_si();
    out.q = ratio.get_den().get_si();
    return out;
  }

  r1.refine(BigRational(1, BigInt(1) << 80));
  r2.refine(BigRational(1, BigInt(1) << 80));
  for (long q = 1; q <= exp_bound; ++q)
    for (long p = 1; p <= exp_bound; ++p) {
      if (std::gcd(p, q) != 1) continue;
      // Interval prefilter: [lo1^q, hi1^q] must meet [lo2^p, hi2^p].
      if (pow(r1.hi(), q) < pow(r2.lo(), p) || pow(r2.hi(), p) < pow(r1.lo(), q)) continue;
      if (equal(perron_root(int_pow(t1.matrix(), static_cast<unsigned long>(q))),
                perron_root(int_pow(t2.matrix(), static_cast<unsigned long>(p))))) {
        out.kind = LogRatio::Kind::rational;
        out.p = p;
        out.q = q;
        return out;
      }
    }
  out.kind = LogRatio::Kind::unknown;
  return out;
}

}  // namespace mahler
