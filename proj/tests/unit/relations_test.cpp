#include <gtest/gtest.h>

#include <random>

#include "mahler/eval/eval.hpp"
#include "mahler/exact/errors.hpp"
#include "mahler/exact/parse.hpp"
#include "mahler/relations/relations.hpp"

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

// (1, sum_j z^(b^j)).
MahlerSystem fredholm(long base) {
  return MahlerSystem(mat({{base}}), rf({"z"}, {{"1", "0"}, {"z", "1"}}), {"z"});
}

// Value of sum_j x^(b^j) with error far below 2^-prec.
BigFloat fredholm_value(long base, const BigRational& x, mpfr_prec_t prec) {
  EvalOptions opt;
  opt.k = base == 2 ? 7 : 5;
  opt.order = 24;
  opt.prec = prec + 64;
  opt.majorant = BigRational(1);
  EvalResult r = eval_function(fredholm(base), {1, 0}, RationalPoint({x}), opt);
  EXPECT_LT(r.error_bound[1].to_rational(), pow(BigRational(2), -static_cast<long>(prec) - 32));
  return r.values[1];
}

IntVector ints(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

MultiPoly poly(const char* s, const std::vector<std::string>& vars) {
  return parse_polynomial(s, vars);
}

const std::vector<std::string> kX3{"X0", "X1", "X2"};

}  // namespace

TEST(Lll, ReducesAndKeepsTheLattice) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<IntVector> b(4, IntVector(4));
    for (auto& row : b)
      for (auto& x : row) x = d(rng);
    if (hermite_normal_form(b).size() < 4) continue;
    auto r = lll_reduce(b);
    EXPECT_TRUE(is_lll_reduced(r));
    EXPECT_EQ(hermite_normal_form(r), hermite_normal_form(b));
  }
}

TEST(Lll, FindsShortVector) {
  // Lattice containing (1, 1, 1) hidden behind a skewed basis.
  std::vector<IntVector> b{ints({1, 1, 1}), ints({0, 1, 0}), ints({0, 0, 1})};
  b[1] = ints({37, 38, 37});
  b[2] = ints({-20, -20, -19});
  auto r = lll_reduce(b);
  EXPECT_TRUE(is_lll_reduced(r));
  for (const auto& row : r) EXPECT_LE(dot(row, row), 3);
  EXPECT_THROW(lll_reduce({ints({1, 2}), ints({2, 4})}), DomainError);
}

TEST(IntegerRelations, SmallIntegers) {
  std::vector<BigFloat> v{BigFloat(1, 128), BigFloat(2, 128), BigFloat(3, 128)};
  auto rel = find_integer_relations(v, BigInt(100), 64);
  ASSERT_FALSE(rel.empty());
  EXPECT_EQ(rel[0].coeffs, ints({1, 1, -1}));
  for (const auto& r : rel) {
    EXPECT_EQ(r.status, IntegerRelation::Status::verified_numeric);
    EXPECT_EQ(dot(r.coeffs, ints({1, 2, 3})), 0);
  }
}

TEST(IntegerRelations, FredholmFunctionalEquation) {
  const mpfr_prec_t prec = 160;
  std::vector<BigFloat> v{fredholm_value(2, BigRational(1, 2), 2 * prec),
                          fredholm_value(2, BigRational(1, 4), 2 * prec), BigFloat(1, 2 * prec)};
  auto rel = find_integer_relations(v, BigInt(1000), prec);
  ASSERT_EQ(rel.size(), 1u);
  EXPECT_EQ(rel[0].coeffs, ints({2, -2, -1}));
  EXPECT_EQ(relation_to_string(rel[0].coeffs, kX3), "2*X0 - 2*X1 - X2");
}

TEST(IntegerRelations, DifferentBasesGiveNothing) {
  // 200 decimal digits.
  const mpfr_prec_t prec = 665;
  std::vector<BigFloat> v{fredholm_value(2, BigRational(1, 2), 2 * prec),
                          fredholm_value(3, BigRational(1, 2), 2 * prec), BigFloat(1, 2 * prec)};
  EXPECT_TRUE(find_integer_relations(v, BigInt(1000000), prec).empty());
}

TEST(IntegerRelations, DoubledPrecisionRefutesNearRelations) {
  const mpfr_prec_t prec = 96;
  // Agrees with 1/3 to about prec + 40 bits only.
  BigRational x = BigRational(1, 3) + pow(BigRational(2), -static_cast<long>(prec) - 40);
  ValueSource src = [&](mpfr_prec_t p) {
    return std::vector<BigFloat>{BigFloat(1, p), BigFloat(x, p)};
  };
  auto cand = relation_candidates(src, BigInt(1000), prec);
  ASSERT_FALSE(cand.empty());
  EXPECT_EQ(cand[0].coeffs, ints({1, -3}));
  EXPECT_EQ(cand[0].status, IntegerRelation::Status::refuted);
  EXPECT_TRUE(find_integer_relations(src, BigInt(1000), prec).empty());
}

TEST(IntegerRelations, Preconditions) {
  std::vector<BigFloat> v{BigFloat(1, 64), BigFloat(2, 64)};
  EXPECT_THROW(find_integer_relations(v, BigInt(100), 64), DomainError);
  std::vector<BigFloat> w{BigFloat(1, 512), BigFloat(2, 512), BigFloat(3, 512)};
  EXPECT_THROW(find_integer_relations(w, BigInt("1000000000000000000000"), 64), DomainError);
  EXPECT_GT(required_precision(3, BigInt(1000000)), required_precision(2, BigInt(1000000)));
}

TEST(IntegerRelations, ResidualsStayBelowTolerance) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int trial = 0; trial < 10; ++trial) {
    BigRational a(d(rng), 7), b = fredholm_value(2, BigRational(1, 3), 256).to_rational();
    std::vector<BigFloat> v{BigFloat(a, 256), BigFloat(b, 256), BigFloat(a + 2 * b, 256)};
    for (const auto& r : find_integer_relations(v, BigInt(100), 128)) {
      BigRational tol = pow(BigRational(2), 16 - 128) * 100 * 50;
      EXPECT_LE(r.residual.to_rational(), tol);
    }
  }
}

TEST(PolynomialRelations, GeometricTriple) {
  const mpfr_prec_t prec = 200;
  BigFloat v = fredholm_value(2, BigRational(1, 3), 2 * prec);
  BigRational q = v.to_rational();
  std::vector<BigFloat> vals{BigFloat(1, 2 * prec), v, BigFloat(q * q, 2 * prec)};
  auto rel = find_polynomial_relations(vals, 2, BigInt(100), prec, MonomialMode::homogeneous);
  ASSERT_EQ(rel.size(), 1u);
  EXPECT_EQ(rel[0].p, poly("X0*X2 - X1^2", kX3));
  EXPECT_EQ(rel[0].degree_profile, (std::vector<unsigned>{1, 2, 1}));
}

TEST(PolynomialRelations, LinearFredholmRelation) {
  const mpfr_prec_t prec = 160;
  std::vector<BigFloat> v{fredholm_value(2, BigRational(1, 2), 2 * prec),
                          fredholm_value(2, BigRational(1, 4), 2 * prec), BigFloat(1, 2 * prec)};
  auto hom = find_polynomial_relations(v, 1, BigInt(1000), prec, MonomialMode::homogeneous);
  ASSERT_EQ(hom.size(), 1u);
  EXPECT_EQ(hom[0].p, poly("2*X0 - 2*X1 - X2", kX3));

  // With the constant monomial the relation space is two-dimensional
  // (X2 - 1 also holds); the Fredholm relation lies in the found lattice.
  auto all = find_polynomial_relations(v, 1, BigInt(1000), prec);
  ASSERT_EQ(all.size(), 2u);
  std::vector<Exponent> exps = monomials(3, 1, MonomialMode::up_to_degree);
  std::vector<IntVector> rows;
  for (const auto& r : all) {
    IntVector c;
    for (const auto& e : exps) c.push_back(BigInt(r.p.coefficient(e).get_num()));
    rows.push_back(c);
  }
  IntVector target;
  MultiPoly fp = poly("2*X0 - 2*X1 - X2", kX3);
  for (const auto& e : exps) target.push_back(BigInt(fp.coefficient(e).get_num()));
  EXPECT_TRUE(lattice_contains(hermite_normal_form(rows), target));
}

TEST(PolynomialRelations, TranscendentalCandidateHasNone) {
  const mpfr_prec_t prec = 200;
  std::vector<BigFloat> v{fredholm_value(2, BigRational(1, 2), 2 * prec)};
  EXPECT_TRUE(find_polynomial_relations(v, 3, BigInt(10000), prec).empty());
}

TEST(PolynomialRelations, ScalingInvariance) {
  const mpfr_prec_t prec = 200;
  BigRational v = fredholm_value(2, BigRational(2, 5), 2 * prec).to_rational();
  BigRational w = fredholm_value(3, BigRational(1, 3), 2 * prec).to_rational();
  // Values (1, v, v^2, w): homogeneous degree-2 relations are invariant
  // under a common rational scaling.
  auto run = [&](const BigRational& lambda) {
    std::vector<BigFloat> vals;
    for (const BigRational& x : {BigRational(1), v, BigRational(v * v), w})
      vals.emplace_back(BigRational(lambda * x), 2 * prec);
    return find_polynomial_relations(vals, 2, BigInt(100), prec, MonomialMode::homogeneous);
  };
  auto base = run(1);
  ASSERT_EQ(base.size(), 1u);
  for (const BigRational& lambda : {make_rational(3, 7), make_rational(-5, 2), BigRational(64)}) {
    auto scaled = run(lambda);
    ASSERT_EQ(scaled.size(), 1u);
    EXPECT_EQ(scaled[0].p, base[0].p);
  }
  // Scaling a single slot by 2 rescales the coefficients by powers of 2.
  std::vector<BigFloat> vals{BigFloat(2, 2 * prec), BigFloat(v, 2 * prec),
                             BigFloat(BigRational(v * v), 2 * prec), BigFloat(w, 2 * prec)};
  auto one = find_polynomial_relations(vals, 2, BigInt(100), prec, MonomialMode::homogeneous);
  ASSERT_EQ(one.size(), 1u);
  std::vector<std::string> v4{"X0", "X1", "X2", "X3"};
  EXPECT_EQ(one[0].p, poly("X0*X2 - 2*X1^2", v4));
}

TEST(Homogenize, Examples) {
  std::vector<std::string> v1{"X1"}, v12{"X1", "X2"};
  EXPECT_EQ(homogenize(poly("X1 - 1/2", v1)), poly("X1 - 1/2*X0", {"X0", "X1"}));
  EXPECT_EQ(homogenize(poly("X1^2 - X2", v12)), poly("X1^2 - X2*X0", {"X0", "X1", "X2"}));
  MultiPoly h = poly("X1*X2 - X2^2", v12);
  EXPECT_EQ(homogenize(h), h.embed({"X0", "X1", "X2"}));
  EXPECT_THROW(homogenize(poly("X1", v1), "X1"), DomainError);

  Homogenized ext = homogenize(poly("X1 - 1/2", v1), MahlerSystem(mat({{2}}), rf({"z"}, {{"1 - z"}}),
                                                                 {"z"}),
                               {1});
  EXPECT_EQ(ext.system.size(), 2u);
  EXPECT_EQ(ext.system.matrix()(0, 0).to_string(), "1");
  EXPECT_TRUE(ext.system.matrix()(0, 1).is_zero());
  EXPECT_EQ(ext.system.matrix()(1, 1).to_string(), "-z + 1");
  EXPECT_EQ(ext.f0, (std::vector<BigRational>{1, 1}));
  EXPECT_TRUE(is_homogeneous(ext.p));
}

TEST(Lift, SymmetricSquareIdentityLiftsItself) {
  MahlerSystem sq(mat({{2}}), rf({"z"}, {{"1", "0", "0"}, {"z", "1", "0"}, {"z^2", "2*z", "1"}}),
                  {"z"});
  MultiPoly p = poly("X0*X2 - X1^2", kX3);
  LiftOutcome out = lift_relation(sq, {1, 0, 0}, p, RationalPoint({BigRational(1, 2)}), 2, 12);
  ASSERT_TRUE(out.result.has_value()) << out.detail;
  EXPECT_EQ(out.result->z_degree, 0u);
  EXPECT_EQ(out.result->q, poly("X0*X2 - X1^2", {"z", "X0", "X1", "X2"}));
  EXPECT_TRUE(out.result->specialization_ok);
  EXPECT_TRUE(out.result->series_ok);
}

TEST(Lift, FredholmThroughOneStep) {
  // Components (1, f(z), f(z^2)) for f = sum z^(2^j).
  MahlerSystem pair(mat({{2}}), rf({"z"}, {{"1", "0", "0"}, {"z", "1", "0"}, {"z^2", "0", "1"}}),
                    {"z"});
  MultiPoly p = poly("-X0 + 2*X1 - 2*X2", kX3);
  RationalPoint half({BigRational(1, 2)});
  LiftOutcome none = lift_relation(pair, {1, 0, 0}, p, half, 0, 12);
  EXPECT_FALSE(none.result.has_value());
  EXPECT_FALSE(none.detail.empty());
  LiftOutcome out = lift_relation(pair, {1, 0, 0}, p, half, 3, 12);
  ASSERT_TRUE(out.result.has_value()) << out.detail;
  EXPECT_EQ(out.result->z_degree, 1u);
  std::vector<std::string> qv{"z", "X0", "X1", "X2"};
  EXPECT_EQ(out.result->q, poly("-2*z*X0 + 2*X1 - 2*X2", qv));

  // The independent verifier rejects tampered candidates.
  EXPECT_FALSE(verify_lift(pair, {1, 0, 0}, p, half, poly("-X0 + 2*X1 - 2*X2", qv), 12).series_ok);
  LiftCheck wrong = verify_lift(pair, {1, 0, 0}, p, half, poly("-4*z*X0 + 2*X1 - 2*X2", qv), 12);
  EXPECT_FALSE(wrong.specialization_ok);
  EXPECT_FALSE(wrong.series_ok);
}

TEST(Lift, SpecializationNeverDiffers) {
  MahlerSystem pair(mat({{2}}), rf({"z"}, {{"1", "0", "0"}, {"z", "1", "0"}, {"z^2", "0", "1"}}),
                    {"z"});
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 12; ++trial) {
    MultiPoly p(kX3);
    for (std::size_t i = 0; i < 3; ++i) {
      Exponent e(3, 0);
      e[i] = 1;
      p.add_term(e, d(rng));
    }
    if (p.is_zero()) continue;
    RationalPoint a({make_rational(1, 2 + trial % 3)});
    LiftOutcome out = lift_relation(pair, {1, 0, 0}, p, a, 2, 10);
    if (!out.result) continue;
    MultiPoly specialized(kX3);
    for (const auto& [e, c] : out.result->q.terms())
      specialized.add_term(Exponent(e.begin() + 1, e.end()), c * pow(a[0], static_cast<long>(e[0])));
    EXPECT_EQ(specialized, p);
  }
  EXPECT_THROW(lift_relation(pair, {1, 0, 0}, poly("X0 - X1^2", kX3), RationalPoint({BigRational(1, 2)}),
                             1, 8),
               DomainError);
}

TEST(Purity, BoundedDegreeExamples) {
  std::vector<std::string> v{"X1", "X2", "X3"};
  std::vector<std::vector<std::size_t>> groups{{0}, {1, 2}};
  MultiPoly l = poly("X2 - 2*X3", v);
  std::vector<std::vector<MultiPoly>> gens{{}, {l}};

  PurityResult r = purity_decompose(poly("X1*X2 - 2*X1*X3", v), groups, gens, 2);
  ASSERT_EQ(r.kind, PurityResult::Kind::decomposed);
  ASSERT_EQ(r.witness.size(), 1u);
  EXPECT_EQ(r.witness[0].group, 1u);
  EXPECT_EQ(r.witness[0].multiplier, poly("X1", v));

  std::vector<std::vector<MultiPoly>> both{{poly("3*X1 - 1", v)}, {l}};
  MultiPoly sum = poly("3*X1 - 1 + X2 - 2*X3", v);
  PurityResult s = purity_decompose(sum, groups, both, 1);
  ASSERT_EQ(s.kind, PurityResult::Kind::decomposed);
  EXPECT_TRUE(check_purity_witness(sum, both, s.witness));

  PurityResult n = purity_decompose(poly("X1*X2 - 2*X1*X3 + X1^2", v), groups, gens, 2);
  EXPECT_EQ(n.kind, PurityResult::Kind::not_decomposed_at_bound);
  // Below the degree of P nothing can match.
  EXPECT_EQ(purity_decompose(poly("X1*X2 - 2*X1*X3", v), groups, gens, 1).kind,
            PurityResult::Kind::not_decomposed_at_bound);
}

TEST(Purity, MultilinearMode) {
  std::vector<std::string> v{"X0", "X1", "X2", "X3"};
  std::vector<std::vector<std::size_t>> groups{{0, 1}, {2, 3}};
  std::vector<std::vector<MultiPoly>> gens{{poly("X0 - 2*X1", v)}, {poly("X2 + X3", v)}};
  MultiPoly p = poly("X2*(X0 - 2*X1) + X0*(X2 + X3)", v);
  PurityResult r = purity_decompose(p, groups, gens, 2, PurityMode::multilinear);
  ASSERT_EQ(r.kind, PurityResult::Kind::decomposed);
  EXPECT_TRUE(check_purity_witness(p, gens, r.witness));
  // L1 (X2 + X3) = L2 (X0 - 2 X1) makes the four products span only 3 dimensions.
  EXPECT_EQ(r.span_dimension, 3u);
  EXPECT_EQ(purity_decompose(p + poly("X1*X3", v), groups, gens, 2, PurityMode::multilinear).kind,
            PurityResult::Kind::not_decomposed_at_bound);
  EXPECT_THROW(purity_decompose(poly("X0^2*X2", v), groups, gens, 3, PurityMode::multilinear),
               DomainError);
}

TEST(Purity, GeneratorsMustBePureAndVanish) {
  std::vector<std::string> v{"X1", "X2", "X3"};
  std::vector<std::vector<std::size_t>> groups{{0}, {1, 2}};
  std::vector<std::vector<MultiPoly>> mixed{{}, {poly("X1 - X2", v)}};
  EXPECT_THROW(purity_decompose(poly("X1", v), groups, mixed, 1), DomainError);

  std::vector<std::vector<MultiPoly>> gens{{}, {poly("X2 - 2*X3", v)}};
  std::vector<BigFloat> good{BigFloat(5, 128), BigFloat(2, 128), BigFloat(1, 128)};
  std::vector<BigFloat> bad{BigFloat(5, 128), BigFloat(3, 128), BigFloat(1, 128)};
  MultiPoly p = poly("X1*X2 - 2*X1*X3", v);
  EXPECT_EQ(purity_decompose(p, groups, gens, 2, PurityMode::bounded_degree, &good).kind,
            PurityResult::Kind::decomposed);
  EXPECT_THROW(purity_decompose(p, groups, gens, 2, PurityMode::bounded_degree, &bad),
               DomainError);
}
