#include "mahler/exact/matrix.hpp"

namespace mahler {

IntMatrix int_identity(std::size_t n) {
  return IntMatrix::identity(n, BigInt(0), BigInt(1));
}

IntMatrix int_pow(const IntMatrix& a, unsigned long k) {
  if (!a.is_square()) throw DimensionError("power of a non-square matrix");
  IntMatrix result = int_identity(a.rows());
  IntMatrix base = a;
  while (k > 0) {
    if (k & 1UL) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

QMatrix to_rational(const IntMatrix& a) {
  return a.map([](const BigInt& x) { return BigRational(x); });
}

QMatrix rational_identity(std::size_t n) {
  return QMatrix::identity(n, BigRational(0), BigRational(1));
}

std::vector<std::size_t> rref(QMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    BigRational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      BigRational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(QMatrix a) { return rref(a).size(); }

std::optional<std::vector<BigRational>> solve_linear(
    const QMatrix& a, const std::vector<BigRational>& b) {
  if (b.size() != a.rows()) throw DimensionError("right-hand side size mismatch");
  QMatrix aug(a.rows(), a.cols() + 1, BigRational(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  std::vector<BigRational> x(a.cols(), BigRational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  return x;
}

std::vector<std::vector<BigRational>> null_space(const QMatrix& a) {
  QMatrix r = a;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<BigRational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<BigRational> v(a.cols(), BigRational(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace mahler
