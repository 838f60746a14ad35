#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mahler/eval/bigfloat.hpp"
#include "mahler/exact/intlattice.hpp"
#include "mahler/exact/series.hpp"
#include "mahler/points/rational_point.hpp"
#include "mahler/transform/transform.hpp"

namespace mahler {

/// Theta = (1 / log rho(T_1), ..., 1 / log rho(T_r)) with certified
/// enclosures lo[i] <= Theta_i <= hi[i].
struct ThetaVector {
  std::vector<BigFloat> components;
  std::vector<BigFloat> lo;
  std::vector<BigFloat> hi;
  /// rho(T_i) is a rational integer.
  std::vector<bool> exact_flags;
  /// rho(T_i) when exact_flags[i].
  std::vector<std::optional<BigInt>> integer_rho;
  mpfr_prec_t precision = 0;

  std::size_t size() const noexcept { return components.size(); }
};

/// Throws DomainError unless every T_i is in class M (so rho > 1).
ThetaVector theta(const std::vector<Transform>& transforms, mpfr_prec_t prec = 128);

struct ThetaRelations {
  /// Integer vectors mu with <mu, Theta> = 0.
  std::vector<IntVector> basis;
  /// The basis spans the whole orthogonal complement in Z^r. False when the
  /// integer radii fall into three or more multiplicatively independent
  /// classes, where cross-class relations are not decided.
  bool complete = false;
};

/// Relations among the components when every rho is an integer, found
/// exactly from the exponents over a coprime basis. DomainError otherwise.
ThetaRelations integer_theta_relations(const ThetaVector& theta);

struct ShiftStage {
  IntVector mu;
  /// Most frequent value of <mu, k> on the previous selection.
  BigInt c;
  /// Shift subtracted at this stage, with <mu, nu> = c.
  IntVector nu;
  std::size_t kept = 0;
};

struct IterationSequence {
  /// (l, k_l), l increasing.
  std::vector<std::pair<unsigned long, IntVector>> entries;
  /// max_l ||k_l - l Theta||_inf over the stored entries, rounded upward
  /// using the enclosures.
  BigFloat distance_bound;
  std::vector<ShiftStage> stages;
  unsigned long l_min = 0;
  unsigned long l_max = 0;
};

/// k_l = (floor(l Theta_1), ...) for l in [l_min, l_max], then, for each
/// supplied relation mu_i in turn, restriction to the l where <mu_i, k_l>
/// takes its most frequent value c_i and subtraction of nu_i = k_{l0} for the
/// smallest such l0 (entries with l < l0 are dropped). Throws DomainError when
/// some mu_i is not orthogonal to Theta within the enclosures, or when an
/// enclosure is too wide to decide a floor.
IterationSequence iteration_vectors(const ThetaVector& theta, unsigned long l_min,
                                    unsigned long l_max,
                                    const std::vector<IntVector>& relations = {});

/// Recomputes ||k_l - l Theta||_inf <= bound for every entry.
bool check_distance_bound(const ThetaVector& theta, const IterationSequence& seq);

/// Sorted, deduplicated subset of [0, width).
class FiniteWindow {
 public:
  FiniteWindow() = default;
  /// Sorts and deduplicates. Throws DomainError on an element >= width.
  FiniteWindow(unsigned long width, std::vector<unsigned long> elements);

  static FiniteWindow interval(unsigned long width);

  unsigned long width() const noexcept { return width_; }
  const std::vector<unsigned long>& elements() const noexcept { return elements_; }
  bool contains(unsigned long x) const;
  std::size_t size() const noexcept { return elements_.size(); }

 private:
  unsigned long width_ = 0;
  std::vector<unsigned long> elements_;
};

/// First M elements with consecutive gaps <= B, if any. Requires M >= 2 and
/// B >= 1 (DomainError).
std::optional<std::vector<unsigned long>> piecewise_syndetic_window(const FiniteWindow& s,
                                                                    unsigned long bound,
                                                                    std::size_t count);

struct BrownSplit {
  /// Smallest index of a part passing the window test at (bound, count).
  std::optional<std::size_t> part;
  /// The union was tested at (bound, union_count = parts * count).
  unsigned long bound = 0;
  std::size_t count = 0;
  std::size_t union_count = 0;
  std::string detail;
};

/// Parts must lie in the same window and the union must pass the window test
/// at (bound, parts.size() * count); DomainError otherwise.
BrownSplit brown_split(const std::vector<FiniteWindow>& parts, unsigned long bound,
                       std::size_t count);

struct Progression {
  unsigned long a = 0;
  unsigned long b = 0;
};

/// Exhaustive search for a, a + b, ..., a + (length - 1) b in S with b >= 1,
/// smallest a first, then smallest b. Requires length >= 3.
std::optional<Progression> progression_search(const FiniteWindow& s, std::size_t length);

/// Numeric element of the group Gamma, tagged with where it came from.
struct Gamma {
  BigFloat value;
  std::string tag;
};

struct ExpPolyTerm {
  std::vector<Gamma> gamma;
  std::vector<unsigned> j;
  std::variant<BigRational, TruncSeries> c;
};

/// Values of an exponential polynomial with series coefficients: one
/// numeric coefficient per monomial.
struct NumericSeries {
  std::vector<std::string> variables;
  std::vector<std::pair<Exponent, BigFloat>> terms;
};

/// sum_terms c * prod_i gamma_i^k_i k_i^j_i over Z^r.
class ExpPoly {
 public:
  ExpPoly() = default;
  /// Throws DimensionError on ragged terms, DomainError on a zero gamma or
  /// on series coefficients over different variables. Normalizes: equal
  /// (gamma values, j) are merged and zero coefficients dropped.
  ExpPoly(std::size_t r, std::vector<ExpPolyTerm> terms);

  std::size_t r() const noexcept { return r_; }
  const std::vector<ExpPolyTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool has_series() const;

  /// Distinct gamma tuples and, for each, the largest |j| (the delta_i of the
  /// minimal decomposition).
  std::vector<std::pair<std::vector<Gamma>, unsigned>> degree_profile() const;

 private:
  std::size_t r_ = 0;
  std::vector<ExpPolyTerm> terms_;
};

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);

/// Scalar value when every coefficient is scalar, otherwise a series.
/// Requires k.size() == psi.r() and k >= 0.
std::variant<BigFloat, NumericSeries> exp_poly_eval(const ExpPoly& psi, const IntVector& k,
                                                    mpfr_prec_t prec = 128);

struct VanishingProbe {
  std::vector<unsigned long> zero_set;
  /// l where |g| could not be separated from its error bound.
  std::vector<unsigned long> undecided;
  std::vector<unsigned long> l_values;
  /// Window test on the zero set at (bound, count).
  bool window_test_passed = false;
  unsigned long bound = 1;
  std::size_t count = 2;
  /// Every pair was certified admissible (not merely "not refuted").
  bool hypotheses_certified = false;
  mpfr_prec_t precision = 0;
  std::string detail;
};

/// Evaluates the truncation of g at T_{k_l} alpha = (T_1^{k_l,1} alpha_1, ...)
/// along the sequence. Small orbit points are handled exactly, others with a
/// certified numeric bound. Throws DomainError when g = 0, a pair is not
/// admissible, a k_l has a negative entry or the variable counts disagree.
VanishingProbe vanishing_probe(const TruncSeries& g, const std::vector<Transform>& transforms,
                               const std::vector<RationalPoint>& alphas,
                               const IterationSequence& seq, mpfr_prec_t prec = 128,
                               unsigned long bound = 1, std::size_t count = 2);

}  // namespace mahler
