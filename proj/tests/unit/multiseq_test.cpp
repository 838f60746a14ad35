#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mahler/exact/errors.hpp"
#include "mahler/multiseq/multiseq.hpp"

using namespace mahler;

namespace {

Transform mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<BigInt> data;
  std::size_t n = rows.size();
  for (auto r : rows)
    for (long x : r) data.emplace_back(x);
  return Transform(IntMatrix(n, n, std::move(data)));
}

IntVector ints(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

FiniteWindow multiples(unsigned long step, unsigned long width) {
  std::vector<unsigned long> e;
  for (unsigned long x = 0; x < width; x += step) e.push_back(x);
  return FiniteWindow(width, e);
}

Gamma gamma_of(long v, const char* tag = "") { return {BigFloat(v, 128), tag}; }

TruncSeries series(std::initializer_list<std::pair<Exponent, long>> terms,
                   const std::vector<std::string>& vars, unsigned order = 8) {
  TruncSeries s(vars, order);
  for (const auto& [e, c] : terms) s.add_term(e, c);
  return s;
}

double as_double(const std::variant<BigFloat, NumericSeries>& v) {
  return std::get<BigFloat>(v).to_double();
}

}  // namespace

TEST(Theta, TwoAndThree) {
  ThetaVector th = theta({mat({{2}}), mat({{3}})}, 64);
  ASSERT_EQ(th.size(), 2u);
  EXPECT_NEAR(th.components[0].to_double(), 1.442695, 1e-6);
  EXPECT_NEAR(th.components[1].to_double(), 0.910239, 1e-6);
  EXPECT_TRUE(th.exact_flags[0]);
  EXPECT_EQ(th.integer_rho[1], BigInt(3));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LE(th.lo[i], th.components[i]);
    EXPECT_LE(th.components[i], th.hi[i]);
    // exp(1 / Theta_i) = rho_i within the enclosure width.
    BigFloat e_lo = exp(div(BigFloat(1, 200), th.hi[i], MPFR_RNDD), MPFR_RNDD);
    BigFloat e_hi = exp(div(BigFloat(1, 200), th.lo[i], MPFR_RNDU), MPFR_RNDU);
    EXPECT_LE(e_lo, BigFloat(BigInt(*th.integer_rho[i]), 200));
    EXPECT_GE(e_hi, BigFloat(BigInt(*th.integer_rho[i]), 200));
    EXPECT_LT((e_hi - e_lo).to_double(), 1e-15);
  }
}

TEST(Theta, SingleAndNonIntegerRadii) {
  ThetaVector two = theta({mat({{2}})});
  EXPECT_NEAR(two.components[0].to_double(), 1.0 / std::log(2.0), 1e-14);
  ThetaVector fib = theta({mat({{1, 1}, {1, 0}})});
  EXPECT_FALSE(fib.exact_flags[0]);
  EXPECT_NEAR(fib.components[0].to_double(), 1.0 / std::log((1 + std::sqrt(5.0)) / 2), 1e-12);
  EXPECT_THROW(theta({mat({{1}})}), DomainError);
  EXPECT_THROW(theta({Transform::diagonal({2, 3})}), DomainError);
  EXPECT_THROW(integer_theta_relations(fib), DomainError);
}

TEST(Theta, PowersOfTwoAreProportional) {
  ThetaVector th = theta({mat({{2}}), mat({{4}})}, 128);
  BigRational twice = 2 * th.components[1].to_rational();
  EXPECT_LE(abs(BigRational(twice - th.components[0].to_rational())), pow(BigRational(2), -120));
  // The exact enclosures of 2 Theta_2 and Theta_1 overlap.
  EXPECT_LE(th.lo[0].to_rational(), 2 * th.hi[1].to_rational());
  EXPECT_LE(2 * th.lo[1].to_rational(), th.hi[0].to_rational());
  ThetaRelations rel = integer_theta_relations(th);
  EXPECT_TRUE(rel.complete);
  ASSERT_EQ(rel.basis.size(), 1u);
  EXPECT_EQ(rel.basis[0][0] * -2, rel.basis[0][1]);
}

TEST(Theta, IntegerRelationClasses) {
  EXPECT_TRUE(integer_theta_relations(theta({mat({{2}}), mat({{3}})})).basis.empty());
  EXPECT_TRUE(integer_theta_relations(theta({mat({{2}}), mat({{3}})})).complete);
  ThetaRelations three = integer_theta_relations(theta({mat({{2}}), mat({{3}}), mat({{5}})}));
  EXPECT_TRUE(three.basis.empty());
  EXPECT_FALSE(three.complete);
  ThetaVector th = theta({mat({{4}}), mat({{8}}), mat({{3}}), mat({{2}})});
  ThetaRelations r = integer_theta_relations(th);
  EXPECT_TRUE(r.complete);
  ASSERT_EQ(r.basis.size(), 2u);
  // 1/log 4 = (1/2)/log 2, 1/log 8 = (1/3)/log 2: mu / (2, 3, -, 1) sums to 0.
  for (const auto& mu : r.basis) {
    EXPECT_EQ(mu[2], 0);
    EXPECT_EQ(3 * mu[0] + 2 * mu[1] + 6 * mu[3], 0);
  }
}

TEST(IterationVectors, FloorConstruction) {
  ThetaVector th = theta({mat({{2}}), mat({{3}})}, 64);
  IterationSequence seq = iteration_vectors(th, 0, 200);
  ASSERT_EQ(seq.entries.size(), 201u);
  EXPECT_EQ(seq.entries[0].second, ints({0, 0}));
  EXPECT_EQ(seq.entries[10].second, ints({14, 9}));
  EXPECT_LE(seq.distance_bound.to_double(), 1.0);
  EXPECT_TRUE(check_distance_bound(th, seq));
  for (const auto& [l, k] : seq.entries) {
    EXPECT_EQ(k[0], static_cast<long>(std::floor(l / std::log(2.0))));
    EXPECT_EQ(k[1], static_cast<long>(std::floor(l / std::log(3.0))));
  }
  IterationSequence tampered = seq;
  tampered.entries[5].second[0] += 2;
  EXPECT_FALSE(check_distance_bound(th, tampered));
}

TEST(IterationVectors, ShiftProcedure) {
  ThetaVector th = theta({mat({{2}}), mat({{4}}), mat({{3}})}, 128);
  ThetaRelations rel = integer_theta_relations(th);
  ASSERT_EQ(rel.basis.size(), 1u);
  IterationSequence seq = iteration_vectors(th, 0, 300, rel.basis);
  ASSERT_EQ(seq.stages.size(), 1u);
  EXPECT_GT(seq.entries.size(), 100u);
  for (const auto& [l, k] : seq.entries) EXPECT_EQ(dot(rel.basis[0], k), 0);
  EXPECT_TRUE(check_distance_bound(th, seq));
  // The bound stays O(1): it does not grow with the range.
  IterationSequence longer = iteration_vectors(th, 0, 3000, rel.basis);
  EXPECT_LT(longer.distance_bound.to_double(), 4.0);
  EXPECT_THROW(iteration_vectors(th, 0, 10, {ints({1, 1, 0})}), DomainError);
  EXPECT_THROW(iteration_vectors(th, 0, 10, {ints({1, 1})}), DimensionError);
}

TEST(IterationVectors, TwoRelations) {
  ThetaVector th = theta({mat({{2}}), mat({{4}}), mat({{8}})}, 128);
  ThetaRelations rel = integer_theta_relations(th);
  ASSERT_EQ(rel.basis.size(), 2u);
  IterationSequence seq = iteration_vectors(th, 0, 600, rel.basis);
  ASSERT_FALSE(seq.entries.empty());
  for (const auto& [l, k] : seq.entries)
    for (const auto& mu : rel.basis) EXPECT_EQ(dot(mu, k), 0);
  for (const auto& st : seq.stages) EXPECT_EQ(dot(st.mu, st.nu), st.c);
  EXPECT_TRUE(check_distance_bound(th, seq));
}

TEST(Windows, Examples) {
  EXPECT_TRUE(piecewise_syndetic_window(multiples(3, 100), 3, 20).has_value());
  FiniteWindow powers(100, {1, 2, 4, 8, 16, 32, 64});
  EXPECT_FALSE(piecewise_syndetic_window(powers, 3, 5).has_value());
  FiniteWindow full = FiniteWindow::interval(50);
  for (std::size_t m : {2u, 17u, 50u}) {
    auto found = piecewise_syndetic_window(full, 1, m);
    ASSERT_TRUE(found.has_value());
    EXPECT_EQ(found->size(), m);
  }
  EXPECT_FALSE(piecewise_syndetic_window(full, 1, 51).has_value());
  EXPECT_THROW(piecewise_syndetic_window(full, 0, 3), DomainError);
  EXPECT_THROW(FiniteWindow(10, {3, 10}), DomainError);
  EXPECT_EQ(FiniteWindow(10, {5, 3, 5}).elements(), (std::vector<unsigned long>{3, 5}));
}

TEST(Windows, MonotoneInBoundAndCount) {
  std::mt19937 rng(21);
  std::bernoulli_distribution keep(0.4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<unsigned long> e;
    for (unsigned long x = 0; x < 120; ++x)
      if (keep(rng)) e.push_back(x);
    FiniteWindow s(120, e);
    for (unsigned long b = 1; b <= 5; ++b)
      for (std::size_t m = 2; m <= 12; ++m) {
        if (!piecewise_syndetic_window(s, b, m)) continue;
        EXPECT_TRUE(piecewise_syndetic_window(s, b + 1, m).has_value());
        EXPECT_TRUE(piecewise_syndetic_window(s, b, m - 1 < 2 ? 2 : m - 1).has_value());
      }
  }
}

TEST(BrownSplit, Examples) {
  std::vector<unsigned long> evens, odds, threes, rest;
  for (unsigned long x = 0; x < 100; ++x) {
    (x % 2 == 0 ? evens : odds).push_back(x);
    (x % 3 == 0 ? threes : rest).push_back(x);
  }
  BrownSplit eo = brown_split({FiniteWindow(100, evens), FiniteWindow(100, odds)}, 2, 20);
  EXPECT_EQ(eo.part, 0u);
  EXPECT_TRUE(piecewise_syndetic_window(FiniteWindow(100, odds), 2, 20).has_value());
  BrownSplit tr = brown_split({FiniteWindow(100, threes), FiniteWindow(100, rest)}, 2, 20);
  EXPECT_EQ(tr.part, 1u);
  EXPECT_EQ(tr.union_count, 40u);
  BrownSplit single = brown_split({multiples(3, 100)}, 3, 10);
  EXPECT_EQ(single.part, 0u);
  // Parts that only pass together: alternating blocks of length 3.
  std::vector<unsigned long> a, b;
  for (unsigned long x = 0; x < 60; ++x) ((x / 3) % 2 == 0 ? a : b).push_back(x);
  BrownSplit none = brown_split({FiniteWindow(60, a), FiniteWindow(60, b)}, 1, 4);
  EXPECT_FALSE(none.part.has_value());
  EXPECT_FALSE(none.detail.empty());
  EXPECT_THROW(brown_split({FiniteWindow(100, {1, 50})}, 2, 2), DomainError);
}

TEST(Progressions, Examples) {
  auto five = progression_search(multiples(5, 100), 10);
  ASSERT_TRUE(five.has_value());
  EXPECT_EQ(five->a, 0u);
  EXPECT_EQ(five->b, 5u);
  FiniteWindow powers(100, {0, 1, 2, 4, 8, 16, 32, 64});
  EXPECT_FALSE(progression_search(powers, 4).has_value());
  auto three = progression_search(powers, 3);
  ASSERT_TRUE(three.has_value());
  EXPECT_EQ(three->a, 0u);
  EXPECT_EQ(three->b, 1u);
  auto full = progression_search(FiniteWindow::interval(30), 30);
  ASSERT_TRUE(full.has_value());
  EXPECT_EQ(full->a, 0u);
  EXPECT_EQ(full->b, 1u);
  EXPECT_THROW(progression_search(powers, 2), DomainError);
}

TEST(Progressions, FoundOnesAreGenuine) {
  std::mt19937 rng(8);
  std::bernoulli_distribution keep(0.5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<unsigned long> e;
    for (unsigned long x = 0; x < 80; ++x)
      if (keep(rng)) e.push_back(x);
    FiniteWindow s(80, e);
    for (std::size_t len = 3; len <= 6; ++len) {
      auto p = progression_search(s, len);
      if (!p) continue;
      for (std::size_t i = 0; i < len; ++i) EXPECT_TRUE(s.contains(p->a + i * p->b));
    }
  }
}

TEST(ExpPoly, Examples) {
  ExpPoly two(1, {{{gamma_of(2)}, {0}, BigRational(1)}});
  EXPECT_DOUBLE_EQ(as_double(exp_poly_eval(two, ints({5}))), 32.0);
  ExpPoly mixed(2, {{{gamma_of(1), gamma_of(3)}, {1, 0}, BigRational(1)}});
  EXPECT_DOUBLE_EQ(as_double(exp_poly_eval(mixed, ints({2, 3}))), 54.0);
  ExpPoly zero(2, {});
  EXPECT_TRUE(zero.is_zero());
  EXPECT_DOUBLE_EQ(as_double(exp_poly_eval(zero, ints({4, 1}))), 0.0);
  EXPECT_THROW(ExpPoly(1, {{{gamma_of(0)}, {0}, BigRational(1)}}), DomainError);
  EXPECT_THROW(exp_poly_eval(two, ints({1, 2})), DimensionError);
}

TEST(ExpPoly, NormalizationMergesAndDrops) {
  ExpPoly p(1, {{{gamma_of(2, "b1")}, {1}, BigRational(3)},
                {{gamma_of(2, "b1")}, {1}, BigRational(-3)},
                {{gamma_of(-5, "b2")}, {2}, BigRational(1)},
                {{gamma_of(-5, "b2")}, {0}, BigRational(4)}});
  ASSERT_EQ(p.terms().size(), 2u);
  auto prof = p.degree_profile();
  ASSERT_EQ(prof.size(), 1u);
  EXPECT_EQ(prof[0].second, 2u);
  EXPECT_EQ(prof[0].first[0].tag, "b2");
  // (-5)^3 (9 + 4) = -1625.
  EXPECT_DOUBLE_EQ(as_double(exp_poly_eval(p, ints({3}))), -1625.0);
}

TEST(ExpPoly, LinearAndMultiplicative) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> small(-4, 4), kd(0, 6);
  for (int trial = 0; trial < 20; ++trial) {
    long g1 = small(rng) == 0 ? 3 : small(rng) | 1, g2 = 2 + kd(rng);
    unsigned j1 = static_cast<unsigned>(kd(rng) % 3), j2 = static_cast<unsigned>(kd(rng) % 3);
    ExpPoly a(2, {{{gamma_of(g1), gamma_of(1)}, {j1, 0}, BigRational(small(rng))}});
    ExpPoly b(2, {{{gamma_of(1), gamma_of(g2)}, {0, j2}, BigRational(small(rng))}});
    ExpPoly prod(2, {{{gamma_of(g1), gamma_of(g2)}, {j1, j2}, BigRational(1)}});
    ExpPoly f1(2, {{{gamma_of(g1), gamma_of(1)}, {j1, 0}, BigRational(1)}});
    ExpPoly f2(2, {{{gamma_of(1), gamma_of(g2)}, {0, j2}, BigRational(1)}});
    IntVector k = ints({kd(rng), kd(rng)});
    BigRational sa = std::get<BigFloat>(exp_poly_eval(a, k)).to_rational();
    BigRational sb = std::get<BigFloat>(exp_poly_eval(b, k)).to_rational();
    EXPECT_EQ(std::get<BigFloat>(exp_poly_eval(a + b, k)).to_rational(), sa + sb);
    EXPECT_EQ(std::get<BigFloat>(exp_poly_eval(prod, k)).to_rational(),
              std::get<BigFloat>(exp_poly_eval(f1, k)).to_rational() *
                  std::get<BigFloat>(exp_poly_eval(f2, k)).to_rational());
  }
}

TEST(ExpPoly, SeriesCoefficients) {
  std::vector<std::string> v{"z"};
  ExpPoly p(1, {{{gamma_of(2)}, {0}, series({{{0}, 1}, {{1}, 3}}, v)},
                {{gamma_of(3)}, {1}, BigRational(2)}});
  auto out = std::get<NumericSeries>(exp_poly_eval(p, ints({2})));
  ASSERT_EQ(out.terms.size(), 2u);
  // Constant: 4 + 2 * 9 * 2; linear: 12.
  EXPECT_EQ(out.terms[0].first, (Exponent{0}));
  EXPECT_DOUBLE_EQ(out.terms[0].second.to_double(), 40.0);
  EXPECT_DOUBLE_EQ(out.terms[1].second.to_double(), 12.0);
}

TEST(VanishingProbe, Examples) {
  std::vector<Transform> ts{mat({{2}}), mat({{3}})};
  std::vector<RationalPoint> as{RationalPoint({BigRational(1, 2)}),
                                RationalPoint({BigRational(1, 3)})};
  ThetaVector th = theta(ts, 128);
  IterationSequence seq = iteration_vectors(th, 0, 40);
  std::vector<std::string> zv{"z1", "z2"};

  VanishingProbe diff = vanishing_probe(series({{{1, 0}, 1}, {{0, 1}, -1}}, zv), ts, as, seq);
  EXPECT_TRUE(diff.zero_set.empty());
  EXPECT_TRUE(diff.undecided.empty());
  EXPECT_EQ(diff.l_values.size(), 41u);
  EXPECT_FALSE(diff.window_test_passed);
  EXPECT_TRUE(diff.hypotheses_certified);

  // z1 - (1/2)^(2^k) with k = k_{3,1} = 4 vanishes only at l = 3.
  TruncSeries manufactured = series({{{1, 0}, 1}}, zv, 4);
  manufactured.add_term({0, 0}, -pow(BigRational(1, 2), 16));
  VanishingProbe one = vanishing_probe(manufactured, ts, as, seq);
  EXPECT_EQ(one.zero_set, (std::vector<unsigned long>{3}));
  EXPECT_FALSE(one.window_test_passed);

  VanishingProbe constant = vanishing_probe(series({{{0, 0}, 1}}, zv), ts, as, seq);
  EXPECT_TRUE(constant.zero_set.empty());

  EXPECT_THROW(vanishing_probe(TruncSeries(zv, 4), ts, as, seq), DomainError);
  std::vector<RationalPoint> bad{RationalPoint({BigRational(1, 2)}), RationalPoint({BigRational(3)})};
  EXPECT_THROW(vanishing_probe(series({{{1, 0}, 1}}, zv), ts, bad, seq), DomainError);
}

TEST(VanishingProbe, IdenticallyVanishingAlongOrbitPassesWindow) {
  // g = z1 - z2 with both blocks equal: every orbit point is a zero.
  std::vector<Transform> ts{mat({{2}}), mat({{2}})};
  std::vector<RationalPoint> as{RationalPoint({BigRational(1, 2)}),
                                RationalPoint({BigRational(1, 2)})};
  IterationSequence seq = iteration_vectors(theta(ts), 0, 30);
  VanishingProbe p =
      vanishing_probe(series({{{1, 0}, 1}, {{0, 1}, -1}}, {"z1", "z2"}), ts, as, seq, 128, 1, 10);
  // Small orbit points are decided exactly; past 2^16 bits a numeric zero
  // can only be reported as undecided.
  EXPECT_GE(p.zero_set.size(), 10u);
  EXPECT_EQ(p.zero_set.size() + p.undecided.size(), 31u);
  EXPECT_TRUE(p.window_test_passed);
}
