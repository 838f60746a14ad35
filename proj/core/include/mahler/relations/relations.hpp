#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mahler/eval/bigfloat.hpp"
#include "mahler/exact/intlattice.hpp"
#include "mahler/exact/multipoly.hpp"
#include "mahler/points/rational_point.hpp"
#include "mahler/relations/lll.hpp"
#include "mahler/systems/systems.hpp"

namespace mahler {

struct IntegerRelation {
  enum class Status { verified_numeric, refuted };
  IntVector coeffs;
  /// |sum c_i v_i| at `precision`.
  BigFloat residual;
  Status status = Status::verified_numeric;
  mpfr_prec_t precision = 0;
};

/// Values at a requested binary precision.
using ValueSource = std::function<std::vector<BigFloat>(mpfr_prec_t)>;

/// Candidates from lattice reduction of the scaled embedding rows
/// (e_i, round(2^s v_i)) at precision `prec`, each re-checked at 2 * prec.
/// Refuted candidates are included with Status::refuted.
std::vector<IntegerRelation> relation_candidates(const ValueSource& source,
                                                 const BigInt& coeff_bound, mpfr_prec_t prec);

/// Integer relations with |c_i| <= coeff_bound whose residual stays below
/// max|v| (1 + |c|_1) 2^(16 - p) at p = prec and p = 2 prec. Sorted by
/// squared norm, then lexicographically; leading nonzero entry positive.
/// Throws DomainError when prec is too small for the bound.
std::vector<IntegerRelation> find_integer_relations(const ValueSource& source,
                                                    const BigInt& coeff_bound,
                                                    mpfr_prec_t prec);

/// Same, with the values given once. Every value must carry at least
/// 2 * prec bits (DomainError otherwise).
std::vector<IntegerRelation> find_integer_relations(const std::vector<BigFloat>& values,
                                                    const BigInt& coeff_bound,
                                                    mpfr_prec_t prec);

/// Smallest precision accepted for m values and the given coefficient bound.
mpfr_prec_t required_precision(std::size_t m, const BigInt& coeff_bound);

struct PolyRelation {
  MultiPoly p;
  /// Degree of P in each value indeterminate.
  std::vector<unsigned> degree_profile;
  BigFloat residual;
  mpfr_prec_t precision = 0;
};

enum class MonomialMode { up_to_degree, homogeneous };

/// Relations among the monomials of total degree <= d (or exactly d) in the
/// values, as polynomials over `names` (default X0, X1, ...). The graded-lex
/// leading coefficient of each relation is positive.
std::vector<PolyRelation> find_polynomial_relations(const std::vector<BigFloat>& values,
                                                    unsigned degree,
                                                    const BigInt& coeff_bound, mpfr_prec_t prec,
                                                    MonomialMode mode = MonomialMode::up_to_degree,
                                                    std::vector<std::string> names = {});

/// Exponents of all monomials in m variables with total degree <= d (or
/// exactly d), in graded lexicographic order.
std::vector<Exponent> monomials(std::size_t m, unsigned degree, MonomialMode mode);

struct Homogenized {
  /// Homogeneous polynomial over (new_variable, old value variables...).
  MultiPoly p;
  /// [[1, 0], [0, A]] carrying the constant function first.
  MahlerSystem system;
  /// (1, f0...).
  std::vector<BigRational> f0;
};

/// Multiplies every term of p by new_variable^(deg p - deg term), with the
/// new variable placed first.
MultiPoly homogenize(const MultiPoly& p, const std::string& new_variable = "X0");

/// Prepends the constant-1 component to the system and homogenizes P with the
/// matching indeterminate. P's variables name the value slots of sys.
/// Throws DimensionError on a size mismatch, DomainError on a name clash.
Homogenized homogenize(const MultiPoly& p, const MahlerSystem& sys,
                       const std::vector<BigRational>& f0,
                       const std::string& new_variable = "X0");

bool is_homogeneous(const MultiPoly& p);

struct LiftResult {
  /// Polynomial over (z variables..., X variables...).
  MultiPoly q;
  unsigned z_degree = 0;
  unsigned verified_order = 0;
  bool specialization_ok = false;
  bool series_ok = false;
};

struct LiftOutcome {
  std::optional<LiftResult> result;
  unsigned d_max = 0;
  unsigned order = 0;
  /// Bound information when nothing was found.
  std::string detail;
};

/// Searches D = 0..d_max for Q(z, X), homogeneous in X of degree deg P with
/// z-degree <= D, such that Q(alpha, X) = P and Q(z, f(z)) = 0 mod total
/// degree `order`, where f is the series solution with f(0) = f0. Returned
/// results have passed verify_lift. Throws DomainError when P is zero or not
/// homogeneous, DimensionError on size mismatches.
LiftOutcome lift_relation(const MahlerSystem& sys, const std::vector<BigRational>& f0,
                          const MultiPoly& p, const RationalPoint& alpha, unsigned d_max,
                          unsigned order);

struct LiftCheck {
  bool specialization_ok = false;
  bool series_ok = false;
  std::string detail;
};

/// Independent re-check of both postconditions of a lift.
LiftCheck verify_lift(const MahlerSystem& sys, const std::vector<BigRational>& f0,
                      const MultiPoly& p, const RationalPoint& alpha, const MultiPoly& q,
                      unsigned order);

enum class PurityMode {
  /// Span of g * mu over all monomials mu with deg(g mu) <= d.
  bounded_degree,
  /// P and the span are multilinear in the groups: generators are linear
  /// forms of their group, multipliers are multilinear in the other groups.
  multilinear
};

struct PurityTerm {
  std::size_t group = 0;
  std::size_t generator = 0;
  MultiPoly multiplier;
};

struct PurityResult {
  enum class Kind { decomposed, not_decomposed_at_bound };
  Kind kind = Kind::not_decomposed_at_bound;
  /// P = sum multiplier * pure_gens[group][generator], when decomposed.
  std::vector<PurityTerm> witness;
  unsigned degree_bound = 0;
  std::size_t span_dimension = 0;
};

/// Bounded-degree membership of P in sum_i (ideal of pure_gens[i]) decided by
/// exact rank. groups[i] lists the variable indices of group i; pure_gens[i]
/// must only involve those variables (DomainError otherwise). When `values`
/// are given, every generator is first checked to vanish on them
/// numerically (DomainError otherwise).
PurityResult purity_decompose(const MultiPoly& p,
                              const std::vector<std::vector<std::size_t>>& groups,
                              const std::vector<std::vector<MultiPoly>>& pure_gens,
                              unsigned degree_bound,
                              PurityMode mode = PurityMode::bounded_degree,
                              const std::vector<BigFloat>* values = nullptr);

/// Re-expands a witness; true when it sums to P exactly.
bool check_purity_witness(const MultiPoly& p,
                          const std::vector<std::vector<MultiPoly>>& pure_gens,
                          const std::vector<PurityTerm>& witness);

std::string to_string(IntegerRelation::Status s);
std::string to_string(PurityResult::Kind k);
/// "2*X0 - 2*X1 - X2" over the given value names.
std::string relation_to_string(const IntVector& coeffs, const std::vector<std::string>& names);

}  // namespace mahler
