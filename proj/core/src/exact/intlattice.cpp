#include "mahler/exact/intlattice.hpp"

#include <algorithm>
#include <initializer_list>

#include "mahler/exact/errors.hpp"

namespace mahler {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void axpy(IntVector& row, const BigInt& q, const IntVector& pivot_row) {
  for (std::size_t j = 0; j < row.size(); ++j) row[j] -= q * pivot_row[j];
}

// Unimodular row reduction on the first `ncols` columns. Returns the rank;
// rows [0, rank) are in Hermite form on those columns, the rest are zero there.
std::size_t echelonize(std::vector<IntVector>& rows, std::size_t ncols) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < ncols && r < rows.size(); ++col) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        axpy(rows[i], floor_div(rows[i][col], rows[r][col]), rows[r]);
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i)
      if (rows[i][col] != 0) axpy(rows[i], floor_div(rows[i][col], rows[r][col]), rows[r]);
    ++r;
  }
  return r;
}

}  // namespace

std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != n) throw DimensionError("ragged lattice generators");
  std::size_t rank = echelonize(rows, n);
  rows.resize(rank);
  return rows;
}

std::vector<IntVector> integer_left_kernel(const std::vector<IntVector>& rows,
                                           std::size_t ncols) {
  const std::size_t r = rows.size();
  std::vector<IntVector> aug(r, IntVector(ncols + r, BigInt(0)));
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != ncols) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < ncols; ++j) aug[i][j] = rows[i][j];
    aug[i][ncols + i] = 1;
  }
  std::size_t rank = echelonize(aug, ncols);
  std::vector<IntVector> kernel;
  for (std::size_t i = rank; i < r; ++i)
    kernel.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(ncols), aug[i].end());
  return hermite_normal_form(std::move(kernel));
}

bool lattice_contains(const std::vector<IntVector>& hnf_basis, const IntVector& v) {
  IntVector rest = v;
  for (const auto& b : hnf_basis) {
    auto it = std::find_if(b.begin(), b.end(), [](const BigInt& x) { return x != 0; });
    std::size_t col = static_cast<std::size_t>(it - b.begin());
    // Entries left of this pivot must already be cleared.
    for (std::size_t j = 0; j < col; ++j)
      if (rest[j] != 0) return false;
    if (rest[col] % b[col] != 0) return false;
    axpy(rest, BigInt(rest[col] / b[col]), b);
  }
  return std::all_of(rest.begin(), rest.end(), [](const BigInt& x) { return x == 0; });
}

BigInt dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot product size mismatch");
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<BigInt> coprime_basis(const std::vector<BigInt>& values) {
  std::vector<BigInt> basis;
  for (const auto& v : values) {
    BigInt x = abs(v);
    if (x > 1) basis.push_back(x);
  }
  // Replace any non-coprime pair (a, b), g = gcd > 1, by a/g, b/g, g until
  // the set is pairwise coprime; the product of the set strictly decreases.
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(basis.begin(), basis.end());
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
    for (std::size_t i = 0; i < basis.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < basis.size() && !changed; ++j) {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), basis[i].get_mpz_t(), basis[j].get_mpz_t());
        if (g == 1) continue;
        BigInt a = basis[i] / g, b = basis[j] / g;
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(j));
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        for (const BigInt& y : {a, b, g})
          if (y > 1) basis.push_back(y);
        changed = true;
      }
  }
  return basis;
}

IntVector factor_over(const std::vector<BigInt>& basis, const BigInt& x) {
  if (x == 0) throw DomainError("cannot factor zero");
  BigInt rest = abs(x);
  IntVector e(basis.size(), BigInt(0));
  for (std::size_t i = 0; i < basis.size(); ++i)
    while (rest % basis[i] == 0) {
      rest /= basis[i];
      e[i] += 1;
    }
  if (rest != 1) throw DomainError("value does not factor over the coprime basis");
  return e;
}

}  // namespace mahler
