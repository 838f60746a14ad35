#include <gtest/gtest.h>

#include <cmath>

#include "mahler/eval/eval.hpp"
#include "mahler/exact/errors.hpp"
#include "mahler/exact/parse.hpp"

using namespace mahler;

namespace {

Transform mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<BigInt> data;
  std::size_t n = rows.size();
  for (auto r : rows)
    for (long x : r) data.emplace_back(x);
  return Transform(IntMatrix(n, n, std::move(data)));
}

RFMatrix rf(const std::vector<std::string>& vars,
            std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<RatFunc> data;
  std::size_t r = rows.size(), c = rows.begin()->size();
  for (auto row : rows)
    for (const char* s : row) data.push_back(parse_ratfunc(s, vars));
  return RFMatrix(r, c, std::move(data));
}

MahlerSystem fredholm() {
  return MahlerSystem(mat({{2}}), rf({"z"}, {{"1", "0"}, {"z", "1"}}), {"z"});
}

MahlerSystem thue_morse() { return MahlerSystem(mat({{2}}), rf({"z"}, {{"1 - z"}}), {"z"}); }

RationalPoint point(long p, long q) { return RationalPoint({make_rational(p, q)}); }

BigRational two_pow(long e) { return pow(BigRational(2), e); }

// |x - y| <= bound + slack, in exact arithmetic.
void expect_within(const BigFloat& x, const BigRational& y, const BigFloat& bound,
                   const BigRational& slack) {
  BigRational diff = abs(BigRational(x.to_rational() - y));
  EXPECT_LE(diff, bound.to_rational() + slack)
      << x.to_scientific(30) << " vs " << BigFloat(y, 256).to_scientific(30);
}

}  // namespace

TEST(TailBound, OneVariableIsGeometric) {
  for (long num : {1, 3, 9}) {
    BigRational r = make_rational(num, 10);
    for (unsigned order : {0u, 1u, 5u, 20u}) {
      BigRational exact = pow(r, static_cast<long>(order)) / (1 - r);
      BigFloat b = monomial_tail_bound(r, order, 1, 128);
      EXPECT_GE(b.to_rational(), exact);
      EXPECT_LE(b.to_rational(), exact * (1 + two_pow(-100)));
    }
  }
}

TEST(TailBound, SeveralVariablesDominatesBruteForce) {
  BigRational r = make_rational(2, 3);
  for (std::size_t n = 2; n <= 3; ++n)
    for (unsigned order : {3u, 10u}) {
      BigRational partial = 0;
      for (unsigned long d = order; d < order + 200; ++d) {
        BigInt c;
        mpz_bin_uiui(c.get_mpz_t(), d + n - 1, n - 1);
        partial += BigRational(c) * pow(r, static_cast<long>(d));
      }
      BigFloat b = monomial_tail_bound(r, order, n, 128);
      EXPECT_GE(b.to_rational(), partial);
      EXPECT_LE(b.to_rational(), partial * 3);
    }
  EXPECT_THROW(monomial_tail_bound(BigRational(1), 3, 1, 64), DomainError);
}

TEST(Eval, FredholmAgreesWithDirectSummation) {
  // sum_{j <= 8} 2^{-2^j}; the rest is below 2^{-511}.
  BigRational oracle = 0;
  for (int j = 0; j <= 8; ++j) oracle += two_pow(-(1L << j));
  for (mpfr_prec_t prec : {128, 256}) {
    EvalOptions o;
    o.k = 4;
    o.order = 16;
    o.prec = prec;
    EvalResult r = eval_function(fredholm(), {1, 0}, point(1, 2), o);
    EXPECT_EQ(r.values[1].to_scientific(11).substr(0, 12), "8.1642150902");
    EXPECT_LE(r.error_bound[1].to_double(), 1e-20);
    expect_within(r.values[1], oracle, r.error_bound[1], two_pow(-500));
    // The constant component is exact.
    EXPECT_EQ(r.values[0].to_rational(), 1);
    EXPECT_TRUE(r.error_bound[0].is_zero());
    ASSERT_TRUE(r.exact[0].has_value());
    EXPECT_FALSE(r.exact[1].has_value());
  }
}

TEST(Eval, ThueMorseAgreesWithPartialProducts) {
  BigRational oracle = 1;
  for (int j = 0; j <= 8; ++j) oracle *= 1 - two_pow(-(1L << j));
  for (mpfr_prec_t prec : {128, 256}) {
    EvalOptions o;
    o.k = 5;
    o.order = 12;
    o.prec = prec;
    EvalResult r = eval_function(thue_morse(), {1}, point(1, 2), o);
    EXPECT_EQ(r.values[0].to_scientific(10).substr(0, 11), "3.501838654");
    expect_within(r.values[0], oracle, r.error_bound[0], two_pow(-500));
    EXPECT_LT(r.error_bound[0].to_double(), 1e-30);
  }
}

TEST(Eval, PolynomialSolutionsAreExact) {
  // f(z) = 1 + z solves f(z) = (1 + z) / (1 + z^2) f(z^2).
  MahlerSystem s(mat({{2}}), rf({"z"}, {{"(1 + z)/(1 + z^2)"}}), {"z"});
  EvalOptions o;
  o.k = 2;
  o.order = 6;
  EvalResult r = eval_function(s, {1}, point(1, 2), o);
  EXPECT_EQ(r.values[0].to_rational(), make_rational(3, 2));
  EXPECT_TRUE(r.error_bound[0].is_zero());
  ASSERT_TRUE(r.exact[0].has_value());
  EXPECT_EQ(*r.exact[0], make_rational(3, 2));
  // 1 + 1/3 is not dyadic: only the rounding error remains.
  EvalResult t = eval_function(s, {1}, point(1, 3), o);
  EXPECT_GT(t.error_bound[0].to_double(), 0.0);
  EXPECT_LT(t.error_bound[0].to_double(), 1e-38);
}

TEST(Eval, BoundsDoNotGrowWithDepthOrOrder) {
  for (const auto& [sys, f0] : std::vector<std::pair<MahlerSystem, std::vector<BigRational>>>{
           {fredholm(), {1, 0}}, {thue_morse(), {1}}}) {
    for (unsigned k = 1; k <= 5; ++k) {
      BigFloat previous(0L, 128);
      for (unsigned order = 2; order <= 20; order += 3) {
        EvalOptions o;
        o.k = k;
        o.order = order;
        EvalResult r = eval_function(sys, f0, point(2, 3), o);
        BigFloat worst = r.error_bound[0];
        for (const auto& b : r.error_bound) worst = max(worst, b);
        if (order > 2) EXPECT_LE(worst, previous) << "k " << k << " order " << order;
        previous = worst;
        if (k > 1) {
          o.k = k - 1;
          EvalResult shallow = eval_function(sys, f0, point(2, 3), o);
          for (std::size_t i = 0; i < r.error_bound.size(); ++i)
            EXPECT_LE(r.error_bound[i], shallow.error_bound[i]);
        }
      }
    }
  }
}

TEST(Eval, FunctionalEquationResidual) {
  std::vector<std::string> v = {"z", "w"};
  MahlerSystem two(mat({{1, 1}, {1, 0}}), rf(v, {{"1", "z"}, {"0", "1 + w"}}), v);
  struct Case {
    MahlerSystem sys;
    std::vector<BigRational> f0;
    RationalPoint alpha;
  };
  std::vector<Case> cases = {
      {fredholm(), {1, 0}, point(1, 3)},
      {thue_morse(), {1}, point(2, 5)},
      {two, {1, 0}, RationalPoint({make_rational(1, 2), make_rational(1, 3)})}};
  for (const auto& c : cases) {
    EvalOptions o;
    o.k = 6;
    o.order = 14;
    EvalResult here = eval_function(c.sys, c.f0, c.alpha, o);
    o.k = 5;
    RationalPoint next = act_point(c.sys.transform(), c.alpha);
    EvalResult there = eval_function(c.sys, c.f0, next, o);
    QMatrix a = evaluate(c.sys.matrix(), c.alpha.span());
    for (std::size_t i = 0; i < c.sys.size(); ++i) {
      BigRational rhs = 0, spread = here.error_bound[i].to_rational();
      for (std::size_t j = 0; j < c.sys.size(); ++j) {
        rhs += a(i, j) * there.values[j].to_rational();
        spread += abs(a(i, j)) * there.error_bound[j].to_rational();
      }
      EXPECT_LE(abs(BigRational(here.values[i].to_rational() - rhs)), 2 * spread) << i;
    }
  }
}

TEST(Eval, Preconditions) {
  EvalOptions o;
  o.k = 0;
  EXPECT_THROW(eval_function(fredholm(), {1, 0}, point(3, 2), o), DomainError);
  MahlerSystem pole(mat({{2}}), rf({"z"}, {{"1/(1 - 4*z)"}}), {"z"});
  o.k = 3;
  EXPECT_THROW(eval_function(pole, {1}, point(1, 2), o), DomainError);
  o.tolerance = two_pow(-1000);
  o.k = 1;
  o.order = 4;
  EXPECT_THROW(eval_function(thue_morse(), {1}, point(1, 2), o), ToleranceError);
}

TEST(OrbitDecay, DoublingHasConstantRatio) {
  std::vector<std::vector<unsigned long>> ks;
  for (unsigned long k = 0; k <= 10; ++k) ks.push_back({k});
  auto rows = orbit_decay_report({mat({{2}})}, {point(1, 2)}, ks);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_NEAR(rows[0].log_norm.to_double(), -std::log(2.0), 1e-15);
  for (const auto& r : rows) EXPECT_NEAR(r.ratio.to_double(), std::log(2.0), 1e-12);
}

TEST(OrbitDecay, PairAlongTheta) {
  // Theta = (1/log 2, 1/log 3); floor(l Theta) stays at bounded distance.
  const double t1 = 1 / std::log(2.0), t2 = 1 / std::log(3.0);
  std::vector<std::vector<unsigned long>> ks;
  for (unsigned long l = 0; l <= 15; ++l)
    ks.push_back({static_cast<unsigned long>(std::floor(l * t1)),
                  static_cast<unsigned long>(std::floor(l * t2))});
  auto rows = orbit_decay_report({mat({{2}}), mat({{3}})}, {point(1, 2), point(1, 3)}, ks);
  double lo = 1e9, hi = 0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio.to_double());
    hi = std::max(hi, r.ratio.to_double());
  }
  // Regression band for this pair and range.
  EXPECT_GT(lo, 0.2);
  EXPECT_LT(hi, 1.2);
  EXPECT_THROW(orbit_decay_report({mat({{1, 1}, {0, 1}})}, {RationalPoint({1, 1})}, ks),
               DomainError);
}
