#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mahler/exact/errors.hpp"
#include "mahler/exact/rational.hpp"

namespace mahler {

/// Dense row-major matrix over a ring-like value type.
///
/// The element type only needs copy semantics plus the arithmetic used by
/// the free functions below. Elements carry their own context (variable
/// names, truncation order), so every constructor takes an explicit fill
/// value instead of relying on T{}.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
      throw DimensionError("matrix data does not match its shape");
  }

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<T>& data() const noexcept { return data_; }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(data_.size());
    for (const auto& x : data_) out.push_back(f(x));
    return Matrix<U>(rows_, cols_, std::move(out));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<BigInt>;
using QMatrix = Matrix<BigRational>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0)
    throw DimensionError("empty matrix product");
  Matrix<T> c(a.rows(), b.cols(), a(0, 0) - a(0, 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T acc = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      c(i, j) = std::move(acc);
    }
  return c;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix sum shape mismatch");
  std::vector<T> out;
  out.reserve(a.data().size());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    out.push_back(a.data()[i] + b.data()[i]);
  return Matrix<T>(a.rows(), a.cols(), std::move(out));
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix difference shape mismatch");
  std::vector<T> out;
  out.reserve(a.data().size());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    out.push_back(a.data()[i] - b.data()[i]);
  return Matrix<T>(a.rows(), a.cols(), std::move(out));
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  std::vector<T> out;
  out.reserve(a.data().size());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(a(i, j));
  return Matrix<T>(a.cols(), a.rows(), std::move(out));
}

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() == 0 || b.rows() == 0) throw DimensionError("empty kronecker factor");
  Matrix<T> c(a.rows() * b.rows(), a.cols() * b.cols(), a(0, 0) * b(0, 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return c;
}

template <class T>
Matrix<T> block_diagonal(const std::vector<Matrix<T>>& blocks, const T& zero) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix<T> out(r, c, zero);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

/// Field operations needed by elimination, specialised per element type.
template <class T>
struct FieldTraits;

template <>
struct FieldTraits<BigRational> {
  static bool is_zero(const BigRational& x) { return x == 0; }
  static BigRational zero_like(const BigRational&) { return 0; }
  static BigRational one_like(const BigRational&) { return 1; }
};

/// Determinant by Gaussian elimination over a field.
template <class T>
T determinant(Matrix<T> a) {
  using F = FieldTraits<T>;
  if (!a.is_square() || a.rows() == 0)
    throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  T det = F::one_like(a(0, 0));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && F::is_zero(a(piv, col))) ++piv;
    if (piv == n) return F::zero_like(a(0, 0));
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = F::zero_like(det) - det;
    }
    det = det * a(col, col);
    T inv = F::one_like(det) / a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (F::is_zero(a(i, col))) continue;
      T factor = a(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) a(i, j) = a(i, j) - factor * a(col, j);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan elimination. Throws SingularError.
template <class T>
Matrix<T> inverse(Matrix<T> a) {
  using F = FieldTraits<T>;
  if (!a.is_square() || a.rows() == 0)
    throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  const T zero = F::zero_like(a(0, 0));
  const T one = F::one_like(a(0, 0));
  Matrix<T> inv = Matrix<T>::identity(n, zero, one);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && F::is_zero(a(piv, col))) ++piv;
    if (piv == n) throw SingularError("matrix is singular");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    T p = one / a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * p;
      inv(col, j) = inv(col, j) * p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || F::is_zero(a(i, col))) continue;
      T factor = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) = a(i, j) - factor * a(col, j);
        inv(i, j) = inv(i, j) - factor * inv(col, j);
      }
    }
  }
  return inv;
}

/// Integer-matrix product that skips the generic zero-fill requirement.
IntMatrix int_identity(std::size_t n);
IntMatrix int_pow(const IntMatrix& a, unsigned long k);
QMatrix to_rational(const IntMatrix& a);
QMatrix rational_identity(std::size_t n);

/// Reduced row echelon form over Q; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& a);

/// Rank over Q.
std::size_t rank(QMatrix a);

/// Some solution x of a x = b (free variables set to zero), if consistent.
std::optional<std::vector<BigRational>> solve_linear(
    const QMatrix& a, const std::vector<BigRational>& b);

/// Basis of the right null space {x : a x = 0} over Q.
std::vector<std::vector<BigRational>> null_space(const QMatrix& a);

}  // namespace mahler
