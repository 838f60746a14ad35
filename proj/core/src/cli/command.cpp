#include "mahler/cli/command.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mahler/eval/eval.hpp"
#include "mahler/exact/errors.hpp"
#include "mahler/exact/parse.hpp"
#include "mahler/multiseq/multiseq.hpp"
#include "mahler/points/points.hpp"
#include "mahler/relations/relations.hpp"
#include "mahler/systems/systems.hpp"
#include "mahler/transform/transform.hpp"

namespace mahler {

namespace {

using Json = nlohmann::ordered_json;

struct Effective {
  Settings s;
  long digits = 20;
  mpfr_prec_t prec = 128;
};

struct Outcome {
  int status = kAffirmative;
  std::string verdict;
  Json evidence = Json::object();
  std::vector<std::string> lines;
};

mpfr_prec_t bits_for_digits(long digits) {
  return static_cast<mpfr_prec_t>(std::ceil(static_cast<double>(digits) * 3.3219280948873623));
}

std::string q(const BigRational& x) { return to_string(x); }

Json int_vector(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

std::string int_vector_text(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

Json rational_vector(const std::vector<BigRational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(q(x));
  return a;
}

Json qmatrix(const QMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(q(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json numeric(const BigFloat& v, const BigFloat& err, int digits) {
  Json j;
  j["value"] = v.to_scientific(digits);
  j["error_bound"] = err.to_scientific(6);
  j["precision"] = static_cast<long>(v.precision());
  return j;
}

const SystemDef& one_system(const Command& cmd, const SystemFile& f) {
  if (cmd.systems.size() != 1) throw DomainError(cmd.name + " needs exactly one --system");
  return f.system(cmd.systems[0]);
}

const PointDef& one_point(const Command& cmd, const SystemFile& f) {
  if (cmd.points.size() != 1) throw DomainError(cmd.name + " needs exactly one --point");
  return f.point(cmd.points[0]);
}

const std::vector<BigRational>& initial_values(const SystemDef& s) {
  if (!s.f0) throw DomainError("system '" + s.name + "' has no f0");
  return *s.f0;
}

std::vector<Transform> transforms_of(const Command& cmd, const SystemFile& f) {
  if (cmd.systems.empty()) throw DomainError(cmd.name + " needs at least one --system");
  std::vector<Transform> out;
  for (const auto& name : cmd.systems) out.push_back(f.system(name).system.transform());
  return out;
}

BigInt parse_bound(const std::string& s) {
  BigInt b;
  if (b.set_str(s, 10) != 0 || b < 1) throw DomainError("bound must be a positive integer");
  return b;
}

// f(alpha) with every error bound at most 2^-target_bits, raising the
// iteration depth from the configured k up to k_max.
EvalResult eval_to_bits(const SystemDef& def, const RationalPoint& alpha, const Effective& e,
                        mpfr_prec_t prec, long target_bits, bool* reached) {
  const BigFloat target = power_of_two(-target_bits, 64);
  std::optional<EvalResult> last;
  std::string last_error;
  for (long k = e.s.k; k <= std::max(e.s.k, e.s.k_max); ++k) {
    EvalOptions opt;
    opt.k = static_cast<unsigned>(k);
    opt.order = static_cast<unsigned>(e.s.order);
    opt.prec = prec;
    try {
      EvalResult r = eval_function(def.system, initial_values(def), alpha, opt);
      bool ok = true;
      for (const auto& b : r.error_bound) ok = ok && b <= target;
      if (ok) {
        *reached = true;
        return r;
      }
      last = std::move(r);
    } catch (const DomainError& ex) {
      last_error = ex.what();
    }
  }
  *reached = false;
  if (!last) throw DomainError(last_error.empty() ? "evaluation failed" : last_error);
  return *last;
}

// ---------------------------------------------------------------- commands

Outcome cmd_class_m(const Command& cmd, const SystemFile& f) {
  Outcome o;
  std::vector<std::string> names = cmd.systems;
  if (names.empty())
    for (const auto& s : f.systems) names.push_back(s.name);
  bool all = true;
  Json list = Json::array();
  for (const auto& name : names) {
    const Transform& t = f.system(name).system.transform();
    ClassMReport r = class_m_check(t);
    Json j;
    j["system"] = name;
    j["T"] = t.to_string();
    j["in_class_m"] = r.verdict;
    j["nonsingular"] = r.nonsingular;
    j["root_of_unity_eigenvalue"] = r.root_of_unity_eigenvalue;
    if (r.cyclotomic_index) j["cyclotomic_index"] = *r.cyclotomic_index;
    j["perron_condition"] = r.perron_condition;
    if (!r.perron_detail.empty()) j["perron_detail"] = r.perron_detail;
    Json blocks = Json::array();
    for (const auto& b : r.normal_form.diagonal_blocks) blocks.push_back(b.to_string());
    j["normal_form_blocks"] = blocks;
    j["kappa"] = r.normal_form.kappa;
    if (r.nonsingular) {
      SpectralData sd = spectral_radius(t, make_rational(1, BigInt(1) << 32));
      j["spectral_radius"] = {{"lo", q(sd.lo)}, {"hi", q(sd.hi)}, {"exact", sd.exact}};
    }
    all = all && r.verdict;
    o.lines.push_back(name + ": T = " + t.to_string() + (r.verdict ? " is" : " is not") +
                      " in class M" +
                      (r.verdict ? "" : r.perron_detail.empty() ? "" : " (" + r.perron_detail + ")"));
    list.push_back(j);
  }
  o.evidence["systems"] = list;
  o.verdict = all ? "true" : "false";
  o.status = all ? kAffirmative : kNegative;
  return o;
}

Outcome cmd_admissible(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  const SystemDef& s = one_system(cmd, f);
  const PointDef& p = one_point(cmd, f);
  const Transform& t = s.system.transform();
  AdmissibilityBounds bounds;
  bounds.k_max = static_cast<std::size_t>(e.s.k_max);
  AdmissibilityReport r = admissible_pair(t, p.point, bounds);
  o.verdict = to_string(r.verdict);
  o.evidence["class_m"] = r.class_m.verdict;
  o.evidence["tends_to_zero"] = {{"kind", to_string(r.tends_to_zero.kind)},
                                 {"k0", r.tends_to_zero.k0},
                                 {"k_max", r.tends_to_zero.k_max},
                                 {"detail", r.tends_to_zero.detail}};
  Json ind;
  ind["kind"] = to_string(r.t_independent.kind);
  ind["detail"] = r.t_independent.detail;
  if (r.t_independent.kind == TIndependence::Kind::dependent) {
    const auto& w = r.t_independent;
    ind["mu"] = int_vector(w.mu);
    ind["a"] = w.a;
    ind["b"] = w.b;
    // Exact re-check of (T^{a+kb} alpha)^mu = 1 for the first iterates.
    const Transform step = t.pow(static_cast<unsigned long>(w.b));
    RationalPoint x = act_point(t.pow(static_cast<unsigned long>(w.a)), p.point);
    const std::size_t checks = std::min<std::size_t>(8, bounds.k_max);
    std::size_t passed = 0;
    for (std::size_t k = 0; k < checks; ++k) {
      if (power_product(x, w.mu) == 1) ++passed;
      x = act_point(step, x);
    }
    ind["orbit_checks"] = checks;
    ind["orbit_checks_passed"] = passed;
    o.lines.push_back("witness mu = " + int_vector_text(w.mu) + ", a = " + std::to_string(w.a) +
                      ", b = " + std::to_string(w.b) + ", exact orbit checks " +
                      std::to_string(passed) + "/" + std::to_string(checks));
  } else {
    ind["bound"] = r.t_independent.bound;
  }
  o.evidence["t_independent"] = ind;
  o.lines.insert(o.lines.begin(), "(" + s.name + ", " + p.name + " = " + p.point.to_string() +
                                      "): " + o.verdict);
  switch (r.verdict) {
    case AdmissibilityReport::Verdict::admissible: o.status = kAffirmative; break;
    case AdmissibilityReport::Verdict::not_admissible: o.status = kNegative; break;
    case AdmissibilityReport::Verdict::unknown: o.status = kUnknown; break;
  }
  return o;
}

Outcome cmd_gauge(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  const SystemDef& s = one_system(cmd, f);
  const auto order = static_cast<unsigned>(e.s.order);
  o.evidence["order"] = order;
  try {
    GaugeTransform g = gauge_construct(s.system, order);
    GaugeCheck c = gauge_verify(s.system, g, order);
    o.evidence["B"] = qmatrix(g.b);
    Json phi = Json::array();
    for (std::size_t i = 0; i < g.phi.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < g.phi.cols(); ++j) row.push_back(g.phi(i, j).to_string());
      phi.push_back(row);
    }
    o.evidence["phi"] = phi;
    o.evidence["identities_checked"] = {"Phi*Phi_inv = I", "Phi_inv(z) A(z) Phi(Tz) = B",
                                        "A_k(z) = Phi(z) B^k Phi_inv(T^k z), k <= 3"};
    o.evidence["verified"] = c.ok;
    if (!c.ok) o.evidence["witness"] = c.witness;
    o.verdict = c.ok ? "verified" : "failed";
    o.status = c.ok ? kAffirmative : kNegative;
    o.lines.push_back(s.name + ": gauge to order " + std::to_string(order) + " " + o.verdict +
                      (c.ok ? "" : " (" + c.witness + ")"));
  } catch (const ResonanceError& ex) {
    o.verdict = "resonance";
    o.evidence["resonance_degree"] = ex.degree();
    o.evidence["detail"] = ex.what();
    o.status = kUnknown;
    o.lines.push_back(s.name + ": resonance at degree " + std::to_string(ex.degree()));
  } catch (const PoleError& ex) {
    o.verdict = "not_applicable";
    o.evidence["detail"] = ex.what();
    o.status = kNegative;
    o.lines.push_back(s.name + ": " + ex.what());
  } catch (const SingularError& ex) {
    o.verdict = "not_applicable";
    o.evidence["detail"] = ex.what();
    o.status = kNegative;
    o.lines.push_back(s.name + ": " + ex.what());
  }
  return o;
}

Outcome cmd_regular_point(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  const SystemDef& s = one_system(cmd, f);
  const PointDef& p = one_point(cmd, f);
  RegularityReport r =
      regular_point_check(s.system, p.point, static_cast<std::size_t>(e.s.k_max));
  o.verdict = to_string(r.verdict);
  o.evidence["k_checked"] = r.k_checked;
  o.evidence["a0_invertible"] = r.a0_invertible;
  o.evidence["failures"] = r.failures;
  if (r.certified_from) o.evidence["certified_from"] = *r.certified_from;
  o.evidence["detail"] = r.detail;
  switch (r.verdict) {
    case RegularityReport::Verdict::regular_certified: o.status = kAffirmative; break;
    case RegularityReport::Verdict::not_regular: o.status = kNegative; break;
    case RegularityReport::Verdict::regular_up_to_k: o.status = kUnknown; break;
  }
  o.lines.push_back("(" + s.name + ", " + p.name + "): " + o.verdict + " " + r.detail);
  return o;
}

Outcome cmd_eval(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  const SystemDef& s = one_system(cmd, f);
  const PointDef& p = one_point(cmd, f);
  const long target = bits_for_digits(e.digits) + 4;
  const mpfr_prec_t prec = std::max<mpfr_prec_t>(e.prec, target + 32);
  bool reached = false;
  EvalResult r = eval_to_bits(s, p.point, e, prec, target, &reached);
  Json values = Json::array();
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    Json v = numeric(r.values[i], r.error_bound[i], static_cast<int>(e.digits));
    if (r.exact[i]) v["exact"] = q(*r.exact[i]);
    values.push_back(v);
    o.lines.push_back("f[" + std::to_string(i) + "](" + p.name + ") = " +
                      r.to_string(i, static_cast<int>(e.digits)));
  }
  o.evidence["values"] = values;
  o.evidence["k_used"] = r.k_used;
  o.evidence["order_used"] = r.order_used;
  o.evidence["majorant"] = q(r.majorant);
  o.evidence["majorant_assumed"] = r.majorant_assumed;
  o.evidence["orbit_radius"] = q(r.orbit_radius);
  o.evidence["target_bits"] = target;
  o.verdict = reached ? "within_tolerance" : "tolerance_not_reached";
  o.status = reached ? kAffirmative : kUnknown;
  return o;
}

struct ValueRef {
  const SystemDef* system;
  const PointDef* point;
  std::size_t component;
};

std::string value_label(const ValueRef& v) {
  return v.system->name + "[" + std::to_string(v.component) + "](" + v.point->name + ")";
}

Outcome cmd_relations(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  if (cmd.systems.empty() || cmd.points.empty())
    throw DomainError("relations needs --system and --point");
  const BigInt bound = parse_bound(e.s.bound);
  const long degree = e.s.degree;

  // Components with an exact rational value collapse into the constant 1.
  std::vector<ValueRef> refs;
  Effective probe = e;
  for (const auto& sname : cmd.systems) {
    const SystemDef& s = f.system(sname);
    for (const auto& pname : cmd.points) {
      const PointDef& p = f.point(pname);
      if (p.point.size() != s.system.nvars()) continue;
      bool reached = false;
      EvalResult r = eval_to_bits(s, p.point, probe, 64, 16, &reached);
      for (std::size_t i = 0; i < r.values.size(); ++i)
        if (!r.exact[i]) refs.push_back({&s, &p, i});
    }
  }
  if (refs.empty()) throw DomainError("no non-rational values to relate");

  const mpfr_prec_t digits_prec = bits_for_digits(e.digits);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < refs.size(); ++i) names.push_back("X" + std::to_string(i));

  std::map<mpfr_prec_t, std::vector<BigFloat>> cache;
  bool all_reached = true;
  auto values_at = [&](mpfr_prec_t bits) -> const std::vector<BigFloat>& {
    auto it = cache.find(bits);
    if (it != cache.end()) return it->second;
    std::vector<BigFloat> v;
    for (const auto& ref : refs) {
      bool reached = false;
      EvalResult r = eval_to_bits(*ref.system, ref.point->point, e, bits + 32, bits + 8, &reached);
      all_reached = all_reached && reached;
      v.push_back(r.values[ref.component]);
    }
    return cache.emplace(bits, std::move(v)).first->second;
  };

  Json legend = Json::array();
  Json found = Json::array();
  mpfr_prec_t prec = digits_prec;
  if (degree <= 1) {
    const std::size_t m = refs.size() + 1;
    prec = std::max(prec, required_precision(m, bound));
    ValueSource source = [&](mpfr_prec_t bits) {
      std::vector<BigFloat> v = values_at(bits);
      v.emplace_back(1L, bits);
      return v;
    };
    auto rels = find_integer_relations(source, bound, prec);
    for (const auto& rel : rels) {
      MultiPoly poly(names);
      for (std::size_t i = 0; i + 1 < m; ++i) {
        Exponent ex(names.size(), 0);
        ex[i] = 1;
        poly.add_term(ex, BigRational(rel.coeffs[i]));
      }
      poly.add_term(Exponent(names.size(), 0), BigRational(rel.coeffs.back()));
      Json j;
      j["relation"] = poly.to_string() + " = 0";
      j["coefficients"] = int_vector(rel.coeffs);
      j["residual"] = rel.residual.to_scientific(6);
      j["precision"] = static_cast<long>(rel.precision);
      j["status"] = to_string(rel.status);
      found.push_back(j);
      o.lines.push_back(poly.to_string() + " = 0   residual " + rel.residual.to_scientific(3));
    }
  } else {
    std::vector<BigFloat> v = values_at(2 * std::max<mpfr_prec_t>(prec, 64));
    prec = std::max<mpfr_prec_t>(prec, 64);
    auto rels = find_polynomial_relations(v, static_cast<unsigned>(degree), bound, prec,
                                          MonomialMode::up_to_degree, names);
    for (const auto& rel : rels) {
      Json j;
      j["relation"] = rel.p.to_string() + " = 0";
      j["degree_profile"] = rel.degree_profile;
      j["residual"] = rel.residual.to_scientific(6);
      j["precision"] = static_cast<long>(rel.precision);
      found.push_back(j);
      o.lines.push_back(rel.p.to_string() + " = 0   residual " + rel.residual.to_scientific(3));
    }
  }
  const std::vector<BigFloat>& shown = values_at(prec);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    legend.push_back({{"name", names[i]},
                      {"value_of", value_label(refs[i])},
                      {"value", shown[i].to_scientific(static_cast<int>(e.digits))}});
    o.lines.insert(o.lines.begin() + static_cast<long>(i),
                   names[i] + " = " + value_label(refs[i]) + " = " +
                       shown[i].to_scientific(static_cast<int>(std::min(e.digits, 30L))));
  }
  o.evidence["values"] = legend;
  o.evidence["degree"] = degree;
  o.evidence["coefficient_bound"] = bound.get_str();
  o.evidence["precision"] = static_cast<long>(prec);
  o.evidence["values_within_bound"] = all_reached;
  o.evidence["relations"] = found;
  o.verdict = found.empty() ? "none_within_bound" : "found";
  o.status = found.empty() ? kUnknown : kAffirmative;
  if (found.empty()) o.lines.push_back("no relation with coefficients up to " + bound.get_str());
  return o;
}

std::vector<std::string> x_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("X" + std::to_string(i));
  return names;
}

Outcome cmd_lift(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  const SystemDef& s = one_system(cmd, f);
  const PointDef& p = one_point(cmd, f);
  if (!cmd.relation) throw DomainError("lift needs --relation");
  MultiPoly rel = parse_polynomial(*cmd.relation, x_names(s.system.size()));
  const auto d_max = static_cast<unsigned>(e.s.d_max);
  const auto order = static_cast<unsigned>(e.s.order);
  LiftOutcome r = lift_relation(s.system, initial_values(s), rel, p.point, d_max, order);
  o.evidence["relation"] = rel.to_string();
  o.evidence["d_max"] = r.d_max;
  o.evidence["order"] = r.order;
  o.evidence["detail"] = r.detail;
  if (r.result) {
    o.evidence["Q"] = r.result->q.to_string();
    o.evidence["z_degree"] = r.result->z_degree;
    o.evidence["verified_order"] = r.result->verified_order;
    o.evidence["specialization_exact"] = r.result->specialization_ok;
    o.evidence["functional_vanishing_exact"] = r.result->series_ok;
    o.verdict = "lifted";
    o.status = kAffirmative;
    o.lines.push_back("Q = " + r.result->q.to_string());
    o.lines.push_back("Q(alpha, X) proportional to P: " +
                      std::string(r.result->specialization_ok ? "yes" : "no") +
                      ", Q(z, f(z)) = 0 mod degree " + std::to_string(r.result->verified_order) +
                      ": " + (r.result->series_ok ? "yes" : "no"));
  } else {
    o.verdict = "not_found";
    o.status = kUnknown;
    o.lines.push_back("no lift with z-degree <= " + std::to_string(d_max) + ": " + r.detail);
  }
  return o;
}

Outcome cmd_purity(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  if (cmd.systems.empty()) throw DomainError("purity needs at least one --system");
  if (!cmd.relation) throw DomainError("purity needs --relation");
  std::vector<std::vector<std::size_t>> groups;
  std::size_t m = 0;
  for (const auto& name : cmd.systems) {
    const std::size_t size = f.system(name).system.size();
    groups.emplace_back();
    for (std::size_t i = 0; i < size; ++i) groups.back().push_back(m + i);
    m += size;
  }
  const auto names = x_names(m);
  MultiPoly rel = parse_polynomial(*cmd.relation, names);
  std::vector<std::vector<MultiPoly>> gens(groups.size());
  for (const auto& g : cmd.generators) {
    const auto colon = g.find(':');
    if (colon == std::string::npos) throw DomainError("generator must be GROUP:poly");
    std::size_t idx = 0;
    try {
      idx = std::stoul(g.substr(0, colon));
    } catch (const std::exception&) {
      throw DomainError("generator group must be an integer");
    }
    if (idx >= groups.size()) throw DomainError("generator group out of range");
    gens[idx].push_back(parse_polynomial(g.substr(colon + 1), names));
  }
  const auto degree = static_cast<unsigned>(std::max(e.s.degree, 1L));
  PurityResult r = purity_decompose(rel, groups, gens, degree);
  o.evidence["relation"] = rel.to_string();
  o.evidence["groups"] = groups;
  o.evidence["degree_bound"] = r.degree_bound;
  o.evidence["span_dimension"] = r.span_dimension;
  if (r.kind == PurityResult::Kind::decomposed) {
    Json w = Json::array();
    for (const auto& t : r.witness)
      w.push_back({{"group", t.group}, {"generator", t.generator},
                   {"multiplier", t.multiplier.to_string()}});
    o.evidence["witness"] = w;
    const bool ok = check_purity_witness(rel, gens, r.witness);
    o.evidence["witness_verified"] = ok;
    o.verdict = "decomposed";
    o.status = ok ? kAffirmative : kNegative;
    o.lines.push_back("decomposed with " + std::to_string(r.witness.size()) +
                      " terms, exact check " + (ok ? "passed" : "FAILED"));
  } else {
    o.verdict = to_string(r.kind);
    o.status = kUnknown;
    o.lines.push_back("not in the span of the pure relations at degree " +
                      std::to_string(r.degree_bound) + " (span dimension " +
                      std::to_string(r.span_dimension) + ")");
  }
  return o;
}

Outcome cmd_kron_power(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  const SystemDef& s = one_system(cmd, f);
  const long d = cmd.power.value_or(2);
  if (d < 1 || d > 4) throw DomainError("power must be between 1 and 4");
  MahlerSystem k = kronecker_power(s.system, static_cast<unsigned>(d));
  std::optional<std::vector<BigRational>> f0;
  if (s.f0) {
    std::vector<BigRational> acc{1};
    for (long r = 0; r < d; ++r) {
      std::vector<BigRational> next;
      for (const auto& a : acc)
        for (const auto& b : *s.f0) next.push_back(a * b);
      acc = std::move(next);
    }
    f0 = acc;
  }
  const std::string name = s.name + "-kron" + std::to_string(d);
  const std::string section = print_system_section(name, k, f0);
  o.evidence["power"] = d;
  o.evidence["size"] = k.size();
  o.evidence["system"] = section;
  if (f0) o.evidence["f0"] = rational_vector(*f0);
  const std::size_t m = s.system.size();
  if (k.size() <= 16) {
    const RatFunc det_a = determinant(s.system.matrix());
    const RatFunc det_k = determinant(k.matrix());
    unsigned long e_law = static_cast<unsigned long>(d);
    for (long r = 1; r < d; ++r) e_law *= m;
    const bool law = det_k == det_a.pow(static_cast<long>(e_law));
    o.evidence["det"] = det_k.to_string();
    o.evidence["det_exponent"] = e_law;
    o.evidence["det_identity_exact"] = law;
    o.status = law ? kAffirmative : kNegative;
    o.verdict = law ? "built" : "det_identity_failed";
    o.lines.push_back("det(A^(x)" + std::to_string(d) + ") = det(A)^" + std::to_string(e_law) +
                      ": " + (law ? "verified" : "FAILED"));
  } else {
    o.evidence["det_identity_exact"] = "skipped";
    o.verdict = "built";
  }
  (void)e;
  o.lines.insert(o.lines.begin(), section);
  return o;
}

// Relations of Theta when they can be decided; nullopt otherwise.
std::optional<ThetaRelations> try_theta_relations(const ThetaVector& t, std::string* why) {
  try {
    return integer_theta_relations(t);
  } catch (const DomainError& ex) {
    *why = ex.what();
    return std::nullopt;
  }
}

std::vector<IntVector> usable_relations(const std::optional<ThetaRelations>& rel) {
  return rel && rel->complete ? rel->basis : std::vector<IntVector>{};
}

Json theta_json(const ThetaVector& t, int digits) {
  Json comps = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    Json c;
    c["value"] = t.components[i].to_scientific(digits);
    c["lo"] = t.lo[i].to_scientific(digits);
    c["hi"] = t.hi[i].to_scientific(digits);
    c["exact"] = static_cast<bool>(t.exact_flags[i]);
    if (t.integer_rho[i]) c["integer_rho"] = t.integer_rho[i]->get_str();
    comps.push_back(c);
  }
  return comps;
}

Outcome cmd_theta(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  ThetaVector t = theta(transforms_of(cmd, f), e.prec);
  std::string why;
  auto rel = try_theta_relations(t, &why);
  const int digits = static_cast<int>(std::min<long>(e.digits, 30));
  o.evidence["precision"] = static_cast<long>(t.precision);
  o.evidence["theta"] = theta_json(t, digits);
  Json basis = Json::array();
  if (rel)
    for (const auto& b : rel->basis) basis.push_back(int_vector(b));
  o.evidence["integer_relations"] = basis;
  o.evidence["relations_complete"] = rel && rel->complete;
  if (!rel) o.evidence["relations_detail"] = why;
  for (std::size_t i = 0; i < t.size(); ++i)
    o.lines.push_back("theta_" + std::to_string(i) + " = " + t.components[i].to_scientific(digits) +
                      " in [" + t.lo[i].to_scientific(digits) + ", " +
                      t.hi[i].to_scientific(digits) + "]");
  if (rel)
    for (const auto& b : rel->basis) o.lines.push_back("relation " + int_vector_text(b));
  else
    o.lines.push_back("integer relations not decided: " + why);
  o.verdict = "computed";
  return o;
}

Outcome cmd_iterate_vectors(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  ThetaVector t = theta(transforms_of(cmd, f), e.prec);
  std::string why;
  auto rel = try_theta_relations(t, &why);
  const auto l_max = static_cast<unsigned long>(cmd.l_max.value_or(20));
  if (l_max < 1) throw DomainError("l-max must be positive");
  IterationSequence seq = iteration_vectors(t, 1, l_max, usable_relations(rel));
  const bool ok = check_distance_bound(t, seq);
  Json entries = Json::array();
  for (const auto& [l, k] : seq.entries) {
    entries.push_back({{"l", l}, {"k", int_vector(k)}});
    o.lines.push_back("l = " + std::to_string(l) + ": k = " + int_vector_text(k));
  }
  Json stages = Json::array();
  for (const auto& st : seq.stages)
    stages.push_back({{"mu", int_vector(st.mu)}, {"c", st.c.get_str()},
                      {"nu", int_vector(st.nu)}, {"kept", st.kept}});
  o.evidence["theta"] = theta_json(t, 20);
  o.evidence["entries"] = entries;
  o.evidence["stages"] = stages;
  o.evidence["distance_bound"] = seq.distance_bound.to_scientific(6);
  o.evidence["distance_bound_verified"] = ok;
  o.verdict = ok ? "distance_bound_holds" : "distance_bound_violated";
  o.status = ok ? kAffirmative : kNegative;
  o.lines.push_back("|k_l - l*theta| <= " + seq.distance_bound.to_scientific(3) + ": " +
                    (ok ? "verified" : "VIOLATED"));
  return o;
}

Outcome cmd_probe(const Command& cmd, const SystemFile& f, const Effective& e) {
  Outcome o;
  if (cmd.systems.empty() || cmd.points.size() != cmd.systems.size())
    throw DomainError("probe needs one --point per --system");
  if (!cmd.series) throw DomainError("probe needs --g");
  std::vector<Transform> ts;
  std::vector<RationalPoint> alphas;
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < cmd.systems.size(); ++i) {
    const SystemDef& s = f.system(cmd.systems[i]);
    ts.push_back(s.system.transform());
    alphas.push_back(f.point(cmd.points[i]).point);
    vars.insert(vars.end(), s.system.variables().begin(), s.system.variables().end());
  }
  MultiPoly g = parse_polynomial(*cmd.series, vars);
  TruncSeries gs = TruncSeries::from_polynomial(g, static_cast<unsigned>(e.s.order));
  ThetaVector t = theta(ts, e.prec);
  std::string why;
  auto rel = try_theta_relations(t, &why);
  const auto l_max = static_cast<unsigned long>(cmd.l_max.value_or(20));
  if (l_max < 1) throw DomainError("l-max must be positive");
  IterationSequence seq = iteration_vectors(t, 1, l_max, usable_relations(rel));
  const unsigned long window = cmd.bound ? parse_bound(*cmd.bound).get_ui() : 1;
  VanishingProbe r = vanishing_probe(gs, ts, alphas, seq, e.prec, window, 2);
  o.evidence["g"] = g.to_string();
  o.evidence["l_values"] = r.l_values;
  o.evidence["zero_set"] = r.zero_set;
  o.evidence["undecided"] = r.undecided;
  o.evidence["window_bound"] = r.bound;
  o.evidence["window_count"] = r.count;
  o.evidence["window_test_passed"] = r.window_test_passed;
  o.evidence["hypotheses_certified"] = r.hypotheses_certified;
  o.evidence["precision"] = static_cast<long>(r.precision);
  o.evidence["detail"] = r.detail;
  if (!r.undecided.empty()) {
    o.verdict = "undecided";
    o.status = kUnknown;
  } else if (r.window_test_passed) {
    o.verdict = "piecewise_syndetic_window";
    o.status = kNegative;
  } else {
    o.verdict = "no_window";
    o.status = kAffirmative;
  }
  o.lines.push_back(r.detail);
  return o;
}

Outcome cmd_print(const SystemFile& f) {
  Outcome o;
  const std::string text = print_system_file(f);
  o.evidence["normalized"] = text;
  o.verdict = "normalized";
  o.lines.push_back(text);
  return o;
}

Outcome dispatch(const Command& cmd, const SystemFile& f, const Effective& e) {
  if (cmd.name == "check class-m") return cmd_class_m(cmd, f);
  if (cmd.name == "check admissible") return cmd_admissible(cmd, f, e);
  if (cmd.name == "check gauge") return cmd_gauge(cmd, f, e);
  if (cmd.name == "check regular-point") return cmd_regular_point(cmd, f, e);
  if (cmd.name == "eval") return cmd_eval(cmd, f, e);
  if (cmd.name == "relations") return cmd_relations(cmd, f, e);
  if (cmd.name == "lift") return cmd_lift(cmd, f, e);
  if (cmd.name == "purity") return cmd_purity(cmd, f, e);
  if (cmd.name == "kron-power") return cmd_kron_power(cmd, f, e);
  if (cmd.name == "theta") return cmd_theta(cmd, f, e);
  if (cmd.name == "iterate-vectors") return cmd_iterate_vectors(cmd, f, e);
  if (cmd.name == "probe") return cmd_probe(cmd, f, e);
  if (cmd.name == "print") return cmd_print(f);
  throw DomainError("unknown command '" + cmd.name + "'");
}

std::string error_type(const Error& ex) {
  if (dynamic_cast<const ParseError*>(&ex)) return "parse";
  if (dynamic_cast<const DimensionError*>(&ex)) return "dimension";
  if (dynamic_cast<const SingularError*>(&ex)) return "singular";
  if (dynamic_cast<const PoleError*>(&ex)) return "pole";
  if (dynamic_cast<const ResonanceError*>(&ex)) return "resonance";
  if (dynamic_cast<const ToleranceError*>(&ex)) return "tolerance";
  return "domain";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "check class-m", "check admissible", "check gauge", "check regular-point",
      "eval",          "relations",        "lift",        "purity",
      "kron-power",    "theta",            "iterate-vectors", "probe",
      "print"};
  return names;
}

Report run_command(const Command& cmd, const SystemFile& file) {
  const auto start = std::chrono::steady_clock::now();
  Effective e;
  e.s = file.settings;
  if (cmd.order) e.s.order = *cmd.order;
  if (cmd.k_max) e.s.k_max = *cmd.k_max;
  if (cmd.bound) e.s.bound = *cmd.bound;
  if (cmd.degree) e.s.degree = *cmd.degree;
  if (cmd.d_max) e.s.d_max = *cmd.d_max;
  e.digits = cmd.digits.value_or(e.s.digits);
  e.prec = std::max<mpfr_prec_t>(e.s.prec, bits_for_digits(e.digits) + 32);

  Json j;
  j["format"] = kReportFormat;
  j["command"] = cmd.name;
  Json in;
  in["file"] = cmd.file_label;
  in["systems"] = cmd.systems;
  in["points"] = cmd.points;
  if (cmd.relation) in["relation"] = *cmd.relation;
  if (!cmd.generators.empty()) in["generators"] = cmd.generators;
  if (cmd.series) in["g"] = *cmd.series;
  if (cmd.power) in["power"] = *cmd.power;
  if (cmd.l_max) in["l_max"] = *cmd.l_max;
  in["settings"] = {{"prec", static_cast<long>(e.prec)}, {"digits", e.digits},
                    {"order", e.s.order},  {"k", e.s.k},
                    {"k_max", e.s.k_max},  {"degree", e.s.degree},
                    {"d_max", e.s.d_max},  {"bound", e.s.bound}};
  j["inputs"] = in;

  Report rep;
  std::ostringstream text;
  text << cmd.name << (cmd.file_label.empty() ? "" : " " + cmd.file_label) << "\n";
  try {
    if (cmd.order && *cmd.order < 1) throw DomainError("order must be positive");
    if (e.digits < 1) throw DomainError("digits must be positive");
    if (e.s.k_max < 0) throw DomainError("k-max must be non-negative");
    Outcome o = dispatch(cmd, file, e);
    rep.status = o.status;
    j["status"] = o.status;
    j["verdict"] = o.verdict;
    j["evidence"] = o.evidence;
    text << "verdict: " << o.verdict << " (status " << o.status << ")\n";
    for (const auto& l : o.lines) {
      std::istringstream ls(l);
      for (std::string row; std::getline(ls, row);) text << "  " << row << "\n";
    }
  } catch (const Error& ex) {
    rep.status = kInputError;
    j["status"] = kInputError;
    j["verdict"] = "input_error";
    j["error"] = {{"type", error_type(ex)}, {"message", ex.what()}};
    text << "error: " << ex.what() << " (status 3)\n";
  }
  rep.json = j.dump(2) + "\n";
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (cmd.name == "print" && rep.status == kAffirmative) {
    rep.text = print_system_file(file);
    return rep;
  }
  text << "time: " << std::fixed;
  text.precision(3);
  text << rep.seconds << " s\n";
  rep.text = text.str();
  return rep;
}

}  // namespace mahler
