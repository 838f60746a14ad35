#include "mahler/relations/lll.hpp"

#include <utility>

#include "mahler/exact/errors.hpp"
#include "mahler/exact/matrix.hpp"

namespace mahler {

namespace {

// Nearest integer to a / b for b > 0, ties away from zero.
BigInt round_div(const BigInt& a, const BigInt& b) {
  BigInt twice = 2 * a + (a >= 0 ? b : BigInt(-b));
  BigInt q;
  mpz_tdiv_q(q.get_mpz_t(), twice.get_mpz_t(), BigInt(2 * b).get_mpz_t());
  return q;
}

BigInt exact_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Integral LLL after Cohen, "A Course in Computational Algebraic Number
// Theory", Algorithm 2.6.7. d[i + 1] is the Gram determinant of the first
// i + 1 rows, d[0] = 1; lambda[k][j] = d[j + 1] * mu_{k,j}.
class IntegralLll {
 public:
  IntegralLll(std::vector<IntVector> b, long dn, long dd)
      : b_(std::move(b)), n_(b_.size()), dn_(dn), dd_(dd), d_(n_ + 1), lambda_(n_) {
    for (auto& row : lambda_) row.assign(n_, BigInt(0));
  }

  std::vector<IntVector> run() {
    if (n_ == 0) return b_;
    d_[0] = 1;
    d_[1] = dot(b_[0], b_[0]);
    if (d_[1] == 0) throw DomainError("LLL input rows are linearly dependent");
    std::size_t k = 1, k_max = 0;
    while (k < n_) {
      if (k > k_max) {
        k_max = k;
        gram_schmidt_row(k);
      }
      while (true) {
        reduce(k, k - 1);
        // Lovasz: dd * d_{k+1} d_{k-1} >= dn * d_k^2 - dd * lambda^2, in d-scaled form.
        const BigInt& lam = lambda_[k][k - 1];
        if (dd_ * d_[k + 1] * d_[k - 1] < dn_ * d_[k] * d_[k] - dd_ * lam * lam) {
          swap_rows(k, k_max);
          if (k > 1) --k;
          continue;
        }
        for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
        ++k;
        break;
      }
    }
    return b_;
  }

 private:
  void gram_schmidt_row(std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      BigInt u = dot(b_[k], b_[j]);
      for (std::size_t i = 0; i < j; ++i)
        u = exact_div(d_[i + 1] * u - lambda_[k][i] * lambda_[j][i], d_[i]);
      if (j < k) {
        lambda_[k][j] = u;
      } else {
        if (u == 0) throw DomainError("LLL input rows are linearly dependent");
        d_[k + 1] = u;
      }
    }
  }

  void reduce(std::size_t k, std::size_t l) {
    if (2 * abs(lambda_[k][l]) <= d_[l + 1]) return;
    BigInt q = round_div(lambda_[k][l], d_[l + 1]);
    for (std::size_t c = 0; c < b_[k].size(); ++c) b_[k][c] -= q * b_[l][c];
    lambda_[k][l] -= q * d_[l + 1];
    for (std::size_t i = 0; i < l; ++i) lambda_[k][i] -= q * lambda_[l][i];
  }

  void swap_rows(std::size_t k, std::size_t k_max) {
    std::swap(b_[k], b_[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lambda_[k][j], lambda_[k - 1][j]);
    const BigInt lam = lambda_[k][k - 1];
    const BigInt bb = exact_div(d_[k - 1] * d_[k + 1] + lam * lam, d_[k]);
    for (std::size_t i = k + 1; i <= k_max; ++i) {
      BigInt t = lambda_[i][k];
      lambda_[i][k] = exact_div(d_[k + 1] * lambda_[i][k - 1] - lam * t, d_[k]);
      lambda_[i][k - 1] = exact_div(bb * t + lam * lambda_[i][k], d_[k + 1]);
    }
    d_[k] = bb;
  }

  std::vector<IntVector> b_;
  std::size_t n_;
  long dn_, dd_;
  std::vector<BigInt> d_;
  std::vector<std::vector<BigInt>> lambda_;
};

}  // namespace

std::vector<IntVector> lll_reduce(std::vector<IntVector> basis, long delta_num, long delta_den) {
  if (delta_den <= 0 || 4 * delta_num <= delta_den || delta_num > delta_den)
    throw DomainError("LLL parameter must lie in (1/4, 1]");
  for (const auto& r : basis)
    if (r.size() != basis.front().size()) throw DimensionError("ragged LLL basis");
  return IntegralLll(std::move(basis), delta_num, delta_den).run();
}

bool is_lll_reduced(const std::vector<IntVector>& basis, long delta_num, long delta_den) {
  const std::size_t n = basis.size();
  // Rational Gram-Schmidt, written independently of the reduction above.
  std::vector<std::vector<BigRational>> star(n);
  std::vector<BigRational> norm(n);
  std::vector<std::vector<BigRational>> mu(n, std::vector<BigRational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    star[i].assign(basis[i].begin(), basis[i].end());
    for (std::size_t j = 0; j < i; ++j) {
      BigRational num = 0;
      for (std::size_t c = 0; c < basis[i].size(); ++c) num += BigRational(basis[i][c]) * star[j][c];
      mu[i][j] = num / norm[j];
      for (std::size_t c = 0; c < star[i].size(); ++c) star[i][c] -= mu[i][j] * star[j][c];
    }
    norm[i] = 0;
    for (const auto& x : star[i]) norm[i] += x * x;
  }
  const BigRational delta = make_rational(delta_num, delta_den);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (abs(mu[i][j]) > BigRational(1, 2)) return false;
  for (std::size_t k = 1; k < n; ++k)
    if (norm[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1]) return false;
  return true;
}

}  // namespace mahler
