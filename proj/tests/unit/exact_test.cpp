#include <gtest/gtest.h>

#include <random>

#include "mahler/exact/errors.hpp"
#include "mahler/exact/intlattice.hpp"
#include "mahler/exact/matrix.hpp"
#include "mahler/exact/multipoly.hpp"
#include "mahler/exact/parse.hpp"
#include "mahler/exact/ratfunc.hpp"
#include "mahler/exact/series.hpp"
#include "mahler/exact/upoly.hpp"

using namespace mahler;

namespace {

const std::vector<std::string> kZ{"z"};
const std::vector<std::string> kZW{"z", "w"};

MultiPoly poly(const std::string& s, const std::vector<std::string>& vars = kZ) {
  return parse_polynomial(s, vars);
}

RatFunc rf(const std::string& s, const std::vector<std::string>& vars = kZ) {
  return parse_ratfunc(s, vars);
}

TruncSeries series(const std::string& s, unsigned order,
                   const std::vector<std::string>& vars = kZ) {
  return TruncSeries::from_polynomial(poly(s, vars), order);
}

MultiPoly random_poly(std::mt19937& rng, const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> coeff(-3, 3), deg(0, 2), count(1, 4);
  MultiPoly p(vars);
  int terms = count(rng);
  for (int t = 0; t < terms; ++t) {
    Exponent e(vars.size());
    for (auto& x : e) x = static_cast<unsigned>(deg(rng));
    p.add_term(e, coeff(rng));
  }
  return p;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("6/4"), BigRational(3, 2));
  EXPECT_EQ(parse_rational("-7"), BigRational(-7));
  EXPECT_EQ(to_string(make_rational(-3, 9)), "-1/3");
  EXPECT_THROW(parse_rational("1/0"), DomainError);
  EXPECT_THROW(parse_rational("x"), DomainError);
  EXPECT_EQ(pow(BigRational(2, 3), -2L), BigRational(9, 4));
}

TEST(MultiPoly, GrlexOrderAndPrinting) {
  MultiPoly p = poly("w + z^2 + z*w + 3", kZW);
  EXPECT_EQ(p.to_string(), "z^2 + z*w + w + 3");
  EXPECT_EQ(p.total_degree(), 2);
  EXPECT_EQ(poly("0").to_string(), "0");
  EXPECT_EQ(poly("-1/2*z").to_string(), "-1/2*z");
  // Printing is parseable.
  EXPECT_EQ(poly(p.to_string(), kZW), p);
}

TEST(MultiPoly, GcdAndExactDivision) {
  MultiPoly a = poly("(z+w)^2*(z-1)", kZW);
  MultiPoly b = poly("(z+w)*(z+2)", kZW);
  EXPECT_EQ(gcd(a, b), poly("z+w", kZW));
  EXPECT_EQ(*divide_exact(a, poly("z-1", kZW)), poly("(z+w)^2", kZW));
  EXPECT_FALSE(divide_exact(a, poly("z+3", kZW)).has_value());
  EXPECT_EQ(gcd(poly("6*z^2-6"), poly("4*z-4")), poly("z-1"));
}

TEST(RatFunc, NormalizeExamples) {
  RatFunc a = ratfunc_normalize(poly("z^2-1"), poly("z-1"));
  EXPECT_EQ(a.num(), poly("z+1"));
  EXPECT_EQ(a.den(), poly("1"));
  RatFunc b = ratfunc_normalize(poly("0"), poly("7"));
  EXPECT_EQ(b.num(), poly("0"));
  EXPECT_EQ(b.den(), poly("1"));
  RatFunc c = ratfunc_normalize(poly("2*z"), poly("4"));
  EXPECT_EQ(c.num(), poly("z"));
  EXPECT_EQ(c.den(), poly("2"));
  EXPECT_THROW(ratfunc_normalize(poly("z"), poly("0")), DomainError);
  RatFunc d = ratfunc_normalize(poly("1"), poly("-z+1/2"));
  EXPECT_EQ(d.num(), poly("-2"));
  EXPECT_EQ(d.den(), poly("2*z-1"));
}

TEST(RatFunc, NormalizeIsIdempotentAndMatchesCrossMultiplication) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    MultiPoly a = random_poly(rng, kZW), b = random_poly(rng, kZW);
    MultiPoly c = random_poly(rng, kZW), d = random_poly(rng, kZW);
    if (b.is_zero() || d.is_zero()) continue;
    RatFunc x = ratfunc_normalize(a, b);
    EXPECT_EQ(ratfunc_normalize(x.num(), x.den()), x);
    RatFunc y = ratfunc_normalize(c, d);
    EXPECT_EQ(x == y, a * d == c * b);
    // Same fraction written differently.
    MultiPoly k = random_poly(rng, kZW);
    if (!k.is_zero()) EXPECT_EQ(ratfunc_normalize(a * k, b * k), x);
  }
}

TEST(RatFunc, RingAxiomsOnRandomTriples) {
  std::mt19937 rng(11);
  auto random_rf = [&] {
    MultiPoly d = random_poly(rng, kZW);
    if (d.is_zero()) d = MultiPoly::constant(kZW, 1);
    return ratfunc_normalize(random_poly(rng, kZW), d);
  };
  for (int trial = 0; trial < 25; ++trial) {
    RatFunc a = random_rf(), b = random_rf(), c = random_rf();
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    MultiPoly p = random_poly(rng, kZW), q = random_poly(rng, kZW),
              r = random_poly(rng, kZW);
    EXPECT_EQ((p * q) * r, p * (q * r));
    EXPECT_EQ(p * (q + r), p * q + p * r);
  }
}

TEST(RatFunc, EvaluateAndPoles) {
  RatFunc f = rf("1/(1-2*z)");
  std::vector<BigRational> half{BigRational(1, 2)};
  EXPECT_THROW(f.evaluate(half), PoleError);
  std::vector<BigRational> quarter{BigRational(1, 4)};
  EXPECT_EQ(f.evaluate(quarter), BigRational(2));
  EXPECT_EQ(rf("z/(z+1)").substitute_monomials(IntMatrix(1, 1, {BigInt(2)})),
            rf("z^2/(z^2+1)"));
}

TEST(Parse, ReportsLocation) {
  try {
    parse_ratfunc("z + q", kZ, 3, 10);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 14u);
  }
  EXPECT_THROW(parse_ratfunc("z/0", kZ), ParseError);
  EXPECT_THROW(parse_ratfunc("(z", kZ), ParseError);
  EXPECT_EQ(rf("z^-1"), rf("1/z"));
  EXPECT_EQ(rf("-z^2"), rf("0 - z*z"));
}

TEST(RFMatrix, DeterminantInverseEvaluation) {
  RFMatrix a(2, 2, {rf("1"), rf("0"), rf("z"), rf("1")});
  EXPECT_EQ(determinant(a), rf("1"));
  RFMatrix inv = inverse(a);
  EXPECT_EQ(inv, RFMatrix(2, 2, {rf("1"), rf("0"), rf("-z"), rf("1")}));
  EXPECT_EQ(a * inv, rf_identity(kZ, 2));
  std::vector<BigRational> half{BigRational(1, 2)};
  QMatrix v = evaluate(a, half);
  EXPECT_EQ(v, QMatrix(2, 2, {BigRational(1), BigRational(0), BigRational(1, 2),
                              BigRational(1)}));
  RFMatrix sing(2, 2, {rf("z"), rf("z^2"), rf("1"), rf("z")});
  EXPECT_THROW(inverse(sing), SingularError);
}

TEST(Series, SubstituteTransform) {
  IntMatrix t2(1, 1, {BigInt(2)});
  EXPECT_EQ(series_substitute_transform(series("z", 5), t2), series("z^2", 5));
  IntMatrix t(2, 2, {BigInt(1), BigInt(1), BigInt(0), BigInt(1)});
  // (Tz) = (z*w, w), so z*w maps to z*w^2.
  EXPECT_EQ(series_substitute_transform(series("z*w", 6, kZW), t), series("z*w^2", 6, kZW));
  EXPECT_EQ(series_substitute_transform(series("1", 4, kZW), t), series("1", 4, kZW));
  // Terms pushed past the order vanish.
  EXPECT_TRUE(series_substitute_transform(series("z^3", 5), t2).is_zero());
  EXPECT_THROW(series_substitute_transform(series("z", 5), t), DimensionError);
}

TEST(Series, SubstitutionIsRingMorphism) {
  std::mt19937 rng(3);
  IntMatrix t(2, 2, {BigInt(2), BigInt(1), BigInt(1), BigInt(1)});
  for (int trial = 0; trial < 20; ++trial) {
    TruncSeries s = TruncSeries::from_polynomial(random_poly(rng, kZW), 7);
    TruncSeries u = TruncSeries::from_polynomial(random_poly(rng, kZW), 7);
    EXPECT_EQ(series_substitute_transform(s * u, t),
              series_substitute_transform(s, t) * series_substitute_transform(u, t));
  }
}

TEST(Series, Invert) {
  TruncSeries geo = series_invert(series("1-z", 6));
  EXPECT_EQ(geo, series("1+z+z^2+z^3+z^4+z^5", 6));
  EXPECT_EQ(series_invert(series("2", 3)), series("1/2", 3));
  TruncSeries s = series("1+z+w", 5, kZW);
  TruncSeries inv = series_invert(s);
  EXPECT_EQ(s * inv, series("1", 5, kZW));
  EXPECT_EQ(inv.coefficient({1, 1}), BigRational(2));
  EXPECT_THROW(series_invert(series("z", 4)), SingularError);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    MultiPoly p = random_poly(rng, kZW) + MultiPoly::constant(kZW, 5);
    TruncSeries x = TruncSeries::from_polynomial(p, 6);
    if (x.constant_term() == 0) continue;
    EXPECT_EQ(series_invert(x) * x, series("1", 6, kZW));
  }
}

TEST(Series, MatrixNewtonInverse) {
  SeriesMatrix a(2, 2, {series("1+z", 8), series("z^2", 8), series("z", 8), series("2-z", 8)});
  SeriesMatrix inv = series_matrix_inverse(a);
  EXPECT_EQ(a * inv, series_identity(kZ, 8, 2));
  EXPECT_EQ(TruncSeries::from_ratfunc(rf("1/(1-z)"), 4), series("1+z+z^2+z^3", 4));
  EXPECT_THROW(TruncSeries::from_ratfunc(rf("1/z"), 4), PoleError);
}

TEST(UPoly, CharpolyCyclotomicSturm) {
  IntMatrix fib(2, 2, {BigInt(1), BigInt(1), BigInt(1), BigInt(0)});
  UPoly cp = charpoly(fib);
  EXPECT_EQ(cp, UPoly({-1, -1, 1}));
  EXPECT_EQ(cyclotomic(1), UPoly({-1, 1}));
  EXPECT_EQ(cyclotomic(6), UPoly({1, -1, 1}));
  EXPECT_EQ(cyclotomic(12), UPoly({1, 0, -1, 0, 1}));
  EXPECT_EQ(euler_phi(12), 4u);
  auto chain = sturm_chain(UPoly({-2, 0, 1}));
  EXPECT_EQ(sturm_count(chain, -2, 2), 2);
  EXPECT_EQ(sturm_count(chain, 0, 2), 1);
}

TEST(UPoly, LargestRootAndExactEquality) {
  auto phi = RealRoot::largest_of(UPoly({-1, -1, 1}));
  ASSERT_TRUE(phi.has_value());
  phi->refine(BigRational(1, 100000));
  EXPECT_GE(phi->lo(), BigRational(16180, 10000));
  EXPECT_LE(phi->hi(), BigRational(16181, 10000));
  auto two = RealRoot::largest_of(UPoly({-2, 1}));
  EXPECT_TRUE(two->exact());
  EXPECT_EQ(two->lo(), 2);
  // (x-2)(x^2-2) and (x-2)^2 (x+5) share the Perron root 2.
  auto a = RealRoot::largest_of(UPoly({-2, 1}) * UPoly({-2, 0, 1}));
  auto b = RealRoot::largest_of(UPoly({-2, 1}) * UPoly({-2, 1}) * UPoly({5, 1}));
  EXPECT_TRUE(equal(*a, *b));
  // x^2 - 3 and x^2 - x - 1: distinct, sqrt3 > phi.
  auto s3 = RealRoot::largest_of(UPoly({-3, 0, 1}));
  EXPECT_FALSE(equal(*s3, *phi));
  EXPECT_EQ(compare(*s3, *phi), 1);
  // x^2-2 vs (x^2-2)(x+1): equal irrational roots.
  auto r1 = RealRoot::largest_of(UPoly({-2, 0, 1}));
  auto r2 = RealRoot::largest_of(UPoly({-2, 0, 1}) * UPoly({1, 1}));
  EXPECT_TRUE(equal(*r1, *r2));
  EXPECT_EQ(compare(*r1, *two), -1);
}

TEST(IntLattice, KernelAndHermiteForm) {
  // Exponent rows of (1/2, 1/4) over the prime 2: [-1], [-2].
  auto k = integer_left_kernel({{BigInt(-1)}, {BigInt(-2)}}, 1);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (IntVector{BigInt(2), BigInt(-1)}));
  auto h = hermite_normal_form({{BigInt(4), BigInt(6)}, {BigInt(2), BigInt(4)}});
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0], (IntVector{BigInt(2), BigInt(0)}));
  EXPECT_EQ(h[1], (IntVector{BigInt(0), BigInt(2)}));
  EXPECT_TRUE(lattice_contains(h, {BigInt(6), BigInt(-4)}));
  EXPECT_FALSE(lattice_contains(h, {BigInt(1), BigInt(0)}));
}
