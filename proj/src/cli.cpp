#include "srvol/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "srvol/builtin.hpp"
#include "srvol/errors.hpp"
#include "srvol/flags.hpp"
#include "srvol/measure.hpp"
#include "srvol/numerics.hpp"
#include "srvol/strata.hpp"
#include "srvol/verdict.hpp"

namespace srvol::cli {

using nlohmann::ordered_json;

namespace {

std::string bare(const Error& e) {
  std::string w = e.what();
  return w.substr(std::min(w.size(), e.kind().size() + 2));
}

// Re-raises a parse error with the JSON field that produced it.
[[noreturn]] void rethrow_in(const std::string& where) {
  try {
    throw;
  } catch (const UnknownVariable& e) {
    throw UnknownVariable(where + ": " + bare(e));
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(where + ": " + bare(e));
  } catch (const SyntaxError& e) {
    throw SyntaxError(where + ": " + bare(e));
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(where + ": " + e.what());
  }
}

const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw SyntaxError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SyntaxError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string as_string(const nlohmann::json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw SyntaxError(where + ": expected a string");
}

Polynomial poly_at(const nlohmann::json& v, const std::vector<std::string>& names, const std::string& where) {
  try {
    return Polynomial::parse(as_string(v, where), names);
  } catch (...) {
    rethrow_in(where);
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

StructureModel model_from_json(const nlohmann::json& doc) {
  const std::string root = "model";
  if (!doc.is_object()) throw SyntaxError("model: expected a JSON object");
  const auto& dim = require(doc, "dim", root);
  if (!dim.is_number_integer() || dim.get<long long>() < 1) throw SyntaxError("dim: expected a positive integer");
  const auto n = static_cast<std::size_t>(dim.get<long long>());

  std::vector<std::string> names = default_names(n);
  if (doc.contains("vars")) {
    const auto& vars = doc["vars"];
    if (!vars.is_array() || vars.size() != n) throw DimensionMismatch("vars: expected " + std::to_string(n) + " names");
    names.clear();
    for (std::size_t i = 0; i < n; ++i) names.push_back(as_string(vars[i], "vars[" + std::to_string(i) + "]"));
  }

  const auto& fields = require(doc, "fields", root);
  if (!fields.is_array() || fields.empty()) throw SyntaxError("fields: expected a nonempty array of fields");
  std::vector<VectorField> family;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string where = "fields[" + std::to_string(i) + "]";
    const auto& f = fields[i];
    if (!f.is_array()) throw SyntaxError(where + ": expected an array of component strings");
    if (f.size() != n) throw DimensionMismatch(where + ": expected " + std::to_string(n) + " components");
    std::vector<Polynomial> comps;
    for (std::size_t j = 0; j < n; ++j) comps.push_back(poly_at(f[j], names, where + "[" + std::to_string(j) + "]"));
    family.emplace_back(std::move(comps));
  }
  Polynomial density = doc.contains("volume_density") ? poly_at(doc["volume_density"], names, "volume_density")
                                                      : Polynomial::constant(n, 1);
  std::string name = doc.contains("name") ? as_string(doc["name"], "name") : "model";
  StructureModel model(name, std::move(family), std::move(density));
  model.var_names = names;

  if (doc.contains("strata")) {
    const auto& strata = doc["strata"];
    if (!strata.is_array()) throw SyntaxError("strata: expected an array");
    for (std::size_t s = 0; s < strata.size(); ++s) {
      const std::string where = "strata[" + std::to_string(s) + "]";
      const auto& st = strata[s];
      SubmanifoldChart N;
      N.label = as_string(require(st, "label", where), where + ".label");
      const auto& kk = require(st, "k", where);
      if (!kk.is_number_integer()) throw SyntaxError(where + ".k: expected an integer");
      N.k = kk.get<int>();
      if (N.k < 0 || N.k > static_cast<int>(n)) throw DimensionMismatch(where + ".k: out of range");
      auto pnames = default_names(static_cast<std::size_t>(N.k), "u");
      const auto& map = require(st, "map", where);
      if (!map.is_array() || map.size() != n)
        throw DimensionMismatch(where + ".map: expected " + std::to_string(n) + " polynomials in u1..uk");
      for (std::size_t j = 0; j < n; ++j)
        N.map.push_back(poly_at(map[j], pnames, where + ".map[" + std::to_string(j) + "]"));
      const auto& dom = require(st, "domain", where);
      if (!dom.is_array() || dom.size() != static_cast<std::size_t>(N.k))
        throw DimensionMismatch(where + ".domain: expected " + std::to_string(N.k) + " intervals");
      for (std::size_t l = 0; l < dom.size(); ++l) {
        const std::string dw = where + ".domain[" + std::to_string(l) + "]";
        if (!dom[l].is_array() || dom[l].size() != 2) throw SyntaxError(dw + ": expected [lo, hi]");
        try {
          N.domain.emplace_back(parse_number(as_string(dom[l][0], dw)), parse_number(as_string(dom[l][1], dw)));
        } catch (...) {
          rethrow_in(dw);
        }
      }
      if (st.contains("tangent_fields")) {
        const auto& tf = st["tangent_fields"];
        if (!tf.is_array()) throw SyntaxError(where + ".tangent_fields: expected an array");
        for (std::size_t t = 0; t < tf.size(); ++t) {
          const std::string tw = where + ".tangent_fields[" + std::to_string(t) + "]";
          const auto& comps = require(tf[t], "field", tw);
          if (!comps.is_array() || comps.size() != n) throw DimensionMismatch(tw + ".field: expected n components");
          std::vector<Polynomial> c;
          for (std::size_t j = 0; j < n; ++j) c.push_back(poly_at(comps[j], names, tw + ".field[" + std::to_string(j) + "]"));
          N.tangent_fields.emplace_back(std::move(c));
          const auto& len = require(tf[t], "length", tw);
          if (!len.is_number_integer() || len.get<int>() < 1) throw SyntaxError(tw + ".length: expected a positive integer");
          N.tangent_lengths.push_back(len.get<int>());
        }
      }
      model.strata.push_back(std::move(N));
    }
  }

  if (doc.contains("points")) {
    const auto& pts = doc["points"];
    if (!pts.is_object()) throw SyntaxError("points: expected an object of name: [coordinates]");
    for (const auto& [nm, coords] : pts.items()) {
      const std::string where = "points." + nm;
      if (!coords.is_array() || coords.size() != n) throw DimensionMismatch(where + ": expected " + std::to_string(n) + " coordinates");
      RationalPoint p;
      try {
        for (const auto& c : coords) p.push_back(parse_number(as_string(c, where)));
      } catch (...) {
        rethrow_in(where);
      }
      model.points.emplace_back(nm, std::move(p));
    }
  }
  bool has_origin = false;
  for (const auto& [nm, p] : model.points) has_origin = has_origin || nm == "origin";
  if (!has_origin) model.points.emplace_back("origin", RationalPoint(n, 0));

  if (doc.contains("caps")) {
    const auto& caps = doc["caps"];
    if (caps.contains("bracket_depth")) {
      if (!caps["bracket_depth"].is_number_integer() || caps["bracket_depth"].get<int>() < 1)
        throw InputError("InvalidCap", "caps.bracket_depth: expected a positive integer");
      model.bracket_depth_cap = caps["bracket_depth"].get<int>();
    }
    if (caps.contains("tuple_budget")) {
      if (!caps["tuple_budget"].is_number_integer() || caps["tuple_budget"].get<long long>() < 1)
        throw InputError("InvalidCap", "caps.tuple_budget: expected a positive integer");
      model.tuple_budget = caps["tuple_budget"].get<std::size_t>();
    }
  }
  model.validate();
  return model;
}

// ---- serialization

ordered_json j_point(const RationalPoint& p) {
  ordered_json a = ordered_json::array();
  for (const auto& x : p) a.push_back(srvol::to_string(x));
  return a;
}

ordered_json j_order(const Order& o) { return {{"value", o.value}, {"at_least", o.at_least}}; }

ordered_json j_flag(const FlagReport& f) {
  return {{"point", j_point(f.point)},      {"growth", f.growth}, {"r", f.r}, {"weights", f.weights},
          {"Q", f.Q}, {"classification", to_string(f.classification)}};
}

ordered_json j_stratum(const StratumReport& s) {
  return {{"label", s.label},
          {"k", s.k},
          {"restricted_growth", s.restricted_growth},
          {"ambient_growth", s.ambient_growth},
          {"Q_N", s.Q_N},
          {"Q_ambient", s.Q_ambient},
          {"equisingular", s.equisingular},
          {"hausdorff_dim", s.hausdorff_dim}};
}

ordered_json j_family(const TupleFamily& F, const std::vector<std::string>& names) {
  ordered_json dets = ordered_json::array();
  for (const auto& d : F.dets) {
    ordered_json tuple = ordered_json::array();
    for (const auto& I : d.tuple) tuple.push_back(to_string(I));
    dets.push_back({{"tuple", tuple}, {"det", d.poly.to_string(names)}});
  }
  return {{"Q_R", F.Q_R},
          {"size", F.size()},
          {"determinants", dets},
          {"pruning", {{"brackets_enumerated", F.log.brackets_enumerated},
                       {"zero_brackets", F.log.zero_brackets},
                       {"duplicate_brackets", F.log.duplicate_brackets},
                       {"tuples_enumerated", F.log.tuples_enumerated},
                       {"zero_determinants", F.log.zero_determinants},
                       {"duplicate_determinants", F.log.duplicate_determinants}}}};
}

ordered_json j_rho(const RhoReport& r) {
  ordered_json boxes = ordered_json::array();
  for (const auto& o : r.rho_min.per_box) boxes.push_back(j_order(o));
  ordered_json out = {{"stratum", r.stratum},
                      {"point", j_point(r.p)},
                      {"Q_p", r.Q_p},
                      {"Q_N", r.Q_N},
                      {"Q_R", r.Q_R},
                      {"threshold", r.threshold()},
                      {"codim", r.codim()},
                      {"rho_min", j_order(r.rho_min.value)},
                      {"rho_min_per_box", boxes},
                      {"rho_min_stabilized", r.rho_min.stabilized},
                      {"e_min", j_order(r.e_min.value)},
                      {"homogeneous", r.homogeneity.homogeneous}};
  if (r.homogeneity.homogeneous) out["homogeneous_degree"] = r.homogeneity.rho;
  if (!r.homogeneity.note.empty()) out["homogeneity_note"] = r.homogeneity.note;
  out["rho_max"] = {{"exact", r.rho_max_exact ? ordered_json(*r.rho_max_exact) : ordered_json(nullptr)},
                    {"estimate", r.rho_max.value},
                    {"sigma", r.rho_max.sigma},
                    {"min_r2", r.rho_max.min_r2},
                    {"low_r2_fits", r.rho_max.low_r2},
                    {"rays", r.rho_max.rays.size()},
                    {"excluded_rays", r.rho_max.excluded}};
  return out;
}

ordered_json j_verdict(const Verdict& v) {
  const auto& in = v.inputs;
  return {{"stratum", v.stratum},
          {"point", j_point(v.p)},
          {"conclusion", to_string(v.conclusion)},
          {"criterion", v.criterion},
          {"exact", v.exact},
          {"inputs", {{"Q_p", in.Q_p},
                      {"Q_N", in.Q_N},
                      {"Q_R", in.Q_R},
                      {"rho_min", j_order(in.rho_min)},
                      {"rho_max", in.rho_exact ? ordered_json(*in.rho_exact) : ordered_json(in.rho_max)},
                      {"rho_max_sigma", in.rho_max_sigma},
                      {"e_min", j_order(in.e_min)},
                      {"codim", in.codim}}},
          {"notes", v.notes}};
}

ordered_json j_quad(const QuadDiagnosis& q) {
  ordered_json shells = ordered_json::array();
  for (std::size_t j = 0; j < q.lambda.size(); ++j) shells.push_back({{"lambda", q.lambda[j]}, {"I", q.shell[j]}});
  ordered_json out = {{"Q_p", q.Q_p},
                      {"Q_N", q.Q_N},
                      {"shells", shells},
                      {"exponent", q.exponent},
                      {"exponent_sigma", q.exponent_sigma},
                      {"r2", q.r2},
                      {"shell_sum", q.shell_sum},
                      {"verdict", to_string(q.verdict)}};
  out["predicted_exponent"] = q.predicted ? ordered_json(*q.predicted) : ordered_json(nullptr);
  if (q.predicted_upper) out["predicted_upper"] = *q.predicted_upper;
  if (q.predicted_lower) out["predicted_lower"] = *q.predicted_lower;
  return out;
}

ordered_json j_decomposition(const DecompositionReport& d) {
  ordered_json strata = ordered_json::array();
  for (const auto& s : d.dims.strata) strata.push_back(j_stratum(s));
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : d.stratum_verdicts) verdicts.push_back(j_verdict(v));
  return {{"Q_R", d.dims.Q_R},
          {"max_Q_N", d.dims.max_Q_N},
          {"dim_H", d.dims.dim_H},
          {"lebesgue_case", d.dims.lebesgue_case},
          {"lebesgue", to_string(d.lebesgue)},
          {"not_radon", d.not_radon},
          {"not_radon_criteria", d.not_radon_criteria},
          {"conclusion", to_string(d.conclusion)},
          {"notes", d.notes},
          {"strata", strata},
          {"stratum_verdicts", verdicts}};
}

// ---- command helpers

const SubmanifoldChart& stratum_of(const StructureModel& model, const RunOptions& o) {
  if (!o.stratum) {
    if (model.strata.size() == 1) return model.strata.front();
    throw InputError("InvalidArgument", "--stratum is required");
  }
  return model.stratum(*o.stratum);
}

RationalPoint point_on(const StructureModel& model, const SubmanifoldChart& N, const RunOptions& o) {
  if (o.point) return parse_point(model, *o.point);
  return N.point(N.domain_center());
}

RationalPoint point_or_origin(const StructureModel& model, const RunOptions& o) {
  return parse_point(model, o.point.value_or("origin"));
}

int q_reg_of(const StructureModel& model, std::uint64_t seed) {
  SampleSpec spec;
  spec.seed = seed;
  return q_reg(model, spec).Q_R;
}

RhoOptions rho_options(const RunOptions& o) {
  RhoOptions r;
  r.seed = o.seed;
  return r;
}

int equisingular_Q_N(const StructureModel& model, const SubmanifoldChart& N, std::uint64_t seed) {
  auto rep = equisingular_check(model, N, 6, seed);
  if (!rep.equisingular) throw CertificationError("NotEquisingular", N.label + " is not equisingular");
  return rep.Q_N;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// ---- examples suite

class Checker {
 public:
  void check(const std::string& model, const std::string& quantity, const ordered_json& expected,
             const ordered_json& actual, const std::string& note = "") {
    bool ok = expected == actual;
    add(model, quantity, expected, actual, ok, note);
  }
  void check_near(const std::string& model, const std::string& quantity, double expected, double tol, double actual) {
    add(model, quantity, {{"value", expected}, {"tolerance", tol}}, actual, std::abs(actual - expected) <= tol, "");
  }
  bool ok() const { return ok_; }
  const ordered_json& rows() const { return rows_; }

 private:
  void add(const std::string& model, const std::string& quantity, const ordered_json& expected,
           const ordered_json& actual, bool ok, const std::string& note) {
    ordered_json row = {{"model", model}, {"quantity", quantity}, {"expected", expected}, {"actual", actual}, {"ok", ok}};
    if (!note.empty()) row["note"] = note;
    rows_.push_back(std::move(row));
    ok_ = ok_ && ok;
  }
  ordered_json rows_ = ordered_json::array();
  bool ok_ = true;
};

bool has_det(const TupleFamily& F, const Polynomial& p) {
  for (const auto& d : F.dets)
    if (d.poly == p || d.poly == -p) return true;
  return false;
}

Report run_examples(const RunOptions& o) {
  const std::uint64_t seed = o.seed;
  Checker c;
  RhoOptions ro;
  ro.seed = seed;
  auto P = [](std::size_t n, const char* s) { return Polynomial::parse(s, default_names(n)); };

  {
    auto m = builtin::grushin();
    c.check("grushin", "Q_R", 2, q_reg_of(m, seed));
    auto d = decomposition_report(m, ro);
    c.check("grushin", "Q_S", 2, d.dims.strata.at(0).Q_N);
    c.check("grushin", "decomposition", "NotRadon", to_string(d.conclusion));
    c.check("grushin", "th:s>r fired", true,
            std::find(d.not_radon_criteria.begin(), d.not_radon_criteria.end(), "Cor. th:s>r") != d.not_radon_criteria.end());
  }
  {
    auto m = builtin::heisenberg();
    auto f = flag_at(m, {0, 0, 0});
    c.check("heisenberg", "growth at origin", ordered_json({2, 3}), f.growth);
    c.check("heisenberg", "Q at origin", 4, f.Q);
    auto F = enumerate_family(m, 4);
    c.check("heisenberg", "determinants", ordered_json({"1"}), ordered_json({F.dets.at(0).poly.to_string()}));
  }
  {
    auto m = builtin::martinet();
    c.check("martinet", "growth at (1,0,0)", ordered_json({2, 3}), flag_at(m, {1, 0, 0}).growth);
    auto f0 = flag_at(m, {0, 0, 0});
    c.check("martinet", "growth at origin", ordered_json({2, 2, 3}), f0.growth);
    c.check("martinet", "Q at origin", 5, f0.Q);
    auto d = stratum_dimension_summary(m, SampleSpec{}, 6, seed);
    c.check("martinet", "Q_R", 4, d.Q_R);
    c.check("martinet", "Q_S", 4, d.strata.at(0).Q_N);
    c.check("martinet", "dim_H", 4, d.dim_H);
    auto F = enumerate_family(m, 4);
    auto r = rho_report(m, F, {0, 0, 0}, m.stratum("S"), 4, ro);
    c.check("martinet", "rho_min", 1, r.rho_min.value.value);
    c.check("martinet", "rho exact", 1, r.rho_max_exact.value_or(-1));
    auto v = point_verdict(r);
    c.check("martinet", "verdict", "NotIntegrable", to_string(v.conclusion));
    c.check("martinet", "criterion", "Prop. fin / Cor. tre", v.criterion);
  }
  {
    auto m = builtin::almost_riemannian3();
    int Q_R = q_reg_of(m, seed);
    c.check("ar3", "Q_R", 3, Q_R);
    c.check("ar3", "Q at origin", 5, flag_at(m, {0, 0, 0}).Q);
    int Q_S = equisingular_Q_N(m, m.stratum("S"), seed);
    c.check("ar3", "Q_S", 3, Q_S);
    auto F = enumerate_family(m, Q_R);
    auto r = rho_report(m, F, {0, 0, 0}, m.stratum("S"), Q_S, ro);
    c.check("ar3", "rho exact", 2, r.rho_max_exact.value_or(-1));
    c.check("ar3", "verdict", "NotIntegrable", to_string(point_verdict(r).conclusion));
  }
  {
    auto m = builtin::almost_riemannian4();
    c.check("ar4", "Q at origin", 6, flag_at(m, {0, 0, 0, 0}).Q);
    int Q_S = equisingular_Q_N(m, m.stratum("S"), seed);
    c.check("ar4", "Q_S", 3, Q_S);
    auto F = enumerate_family(m, q_reg_of(m, seed));
    auto r = rho_report(m, F, {0, 0, 0, 0}, m.stratum("S"), Q_S, ro);
    c.check("ar4", "rho exact", 2, r.rho_max_exact.value_or(-1));
    c.check("ar4", "verdict", "Integrable", to_string(point_verdict(r).conclusion));
    QuadOptions qo;
    qo.seed = seed;
    qo.shells = o.shells;
    auto q = quad_diagnose(m, F, Chart::make(m, {0, 0, 0, 0}, &m.stratum("S")), m.stratum("S"), qo, &r);
    c.check("ar4", "quadrature", "Converges", to_string(q.verdict));
  }
  {
    const int k = o.k.value_or(3);
    auto m = builtin::r5_family(k);
    const std::string name = "r5 k=" + std::to_string(k);
    RationalPoint p(5, 0);
    auto F = enumerate_family(m, q_reg_of(m, seed));
    // with k = 1 both determinants are the same constant and collapse under the sign dedupe
    c.check(name, "surviving determinants", k == 1 ? 1 : 2, F.size(),
            k == 1 ? "the two bases give equal constant determinants" : "");
    auto r = rho_report(m, F, p, m.stratum("S"), equisingular_Q_N(m, m.stratum("S"), seed), ro);
    c.check(name, "rho_min", k - 1, r.rho_min.value.value);
    c.check(name, "verdict", k <= 2 ? "Integrable" : "NotIntegrable", to_string(point_verdict(r).conclusion));
  }
  {
    auto m = builtin::ex_last();
    auto F = enumerate_family(m, q_reg_of(m, seed));
    c.check("exlast", "omega_1 = 2 x3^2", true, has_det(F, P(4, "2 x3^2")));
    c.check("exlast", "omega_2 = 2 x1^2 x3 - 2 x2", true, has_det(F, P(4, "2 x1^2 x3 - 2 x2")),
            "recomputed from the declared fields");
    const auto& S = m.stratum("S");
    int Q_S = equisingular_Q_N(m, S, seed);
    auto r = rho_report(m, F, {0, 0, 0, 0}, S, Q_S, ro);
    c.check("exlast", "rho_min", 1, r.rho_min.value.value);
    c.check_near("exlast", "rho_max", 4.0, 0.3, r.rho_max.value);
    c.check("exlast", "verdict", "Inconclusive", to_string(point_verdict(r).conclusion));
    QuadOptions qo;
    qo.seed = seed;
    qo.shells = o.shells;
    auto q = quad_diagnose(m, F, Chart::make(m, {0, 0, 0, 0}, &S), S, qo, &r);
    c.check("exlast", "quadrature", "Converges", to_string(q.verdict));
  }
  {
    auto g3 = generic_verdict(3, 2);
    c.check("generic", "n=3 m=2", "NotIntegrable", to_string(g3.conclusion));
    auto g4 = generic_verdict(4, 2);
    c.check("generic", "n=4 m=2", ordered_json({"Integrable", 2}), ordered_json({to_string(g4.conclusion), g4.min_codim}));
  }

  Report rep;
  rep.json["results"] = {{"all_ok", c.ok()}, {"checks", c.rows()}};
  rep.exit_code = c.ok() ? 0 : 1;
  return rep;
}

}  // namespace

Rational parse_number(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.find_first_of(".eE") == std::string::npos) return parse_rational(s);
  // decimal literal, converted exactly
  std::size_t epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos) {
    std::string e = s.substr(epos + 1);
    if (e.empty() || e.find_first_not_of("+-0123456789") != std::string::npos || e.find_first_of("+-", 1) != std::string::npos)
      throw SyntaxError("malformed number '" + text + "'");
    exp10 = std::stol(e);
  }
  std::size_t dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  Rational r = parse_rational(digits == "-" || digits == "+" || digits.empty() ? "x" : digits);
  mpz_class ten = 10, pw;
  mpz_pow_ui(pw.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(exp10)));
  if (exp10 >= 0) r *= Rational(pw);
  else r /= Rational(pw);
  r.canonicalize();
  return r;
}

RationalPoint parse_point(const StructureModel& model, const std::string& arg) {
  for (const auto& [nm, p] : model.points)
    if (nm == arg) return p;
  if (arg.find(',') == std::string::npos && arg.find_first_of("0123456789") == std::string::npos)
    throw InputError("UnknownPoint", "no point named '" + arg + "' in model " + model.name);
  RationalPoint p;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) p.push_back(parse_number(item));
  if (p.size() != model.n)
    throw DimensionMismatch("point '" + arg + "' has " + std::to_string(p.size()) + " coordinates, expected " +
                            std::to_string(model.n));
  return p;
}

StructureModel parse_model(const std::string& path_or_text) {
  std::string text = path_or_text;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(path_or_text);
    if (!in) throw InputError("UnknownModel", "cannot open model file '" + path_or_text + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  return model_from_json(doc);
}

StructureModel resolve_model(const std::string& arg, int k) {
  for (const auto& nm : builtin::names())
    if (nm == arg) return builtin::by_name(arg, k);
  return parse_model(arg);
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"flags", "strata", "nu", "rho", "verdict", "quad", "ballbox", "examples"};
  return c;
}

Report run(const std::string& command, StructureModel model, const RunOptions& o) {
  if (std::find(commands().begin(), commands().end(), command) == commands().end())
    throw InputError("InvalidArgument", "unknown command '" + command + "'");
  if (o.format != "json" && o.format != "csv") throw InputError("InvalidArgument", "--format must be json or csv");
  if (o.depth) {
    if (*o.depth < 1) throw InputError("InvalidCap", "--depth must be positive");
    model.bracket_depth_cap = *o.depth;
  }
  if (o.budget) {
    if (*o.budget < 1) throw InputError("InvalidCap", "--budget must be positive");
    model.tuple_budget = *o.budget;
  }
  const auto t0 = std::chrono::steady_clock::now();

  Report rep;
  ordered_json inputs = {{"model", command == "examples" ? "builtin suite" : model.name}};
  if (o.point) inputs["point"] = *o.point;
  if (o.stratum) inputs["stratum"] = *o.stratum;
  if (o.depth) inputs["depth"] = *o.depth;
  if (o.budget) inputs["budget"] = *o.budget;
  inputs["shells"] = o.shells;
  if (o.samples) inputs["samples"] = *o.samples;
  if (o.k) inputs["k"] = *o.k;
  inputs["format"] = o.format;

  ordered_json results;
  if (command == "flags") {
    ordered_json pts = ordered_json::array();
    auto one = [&](const RationalPoint& q) {
      return j_flag(classify_point(model, q, model.depth_cap(), Rational(1, 16), 4, o.seed));
    };
    if (o.point) {
      pts.push_back(one(parse_point(model, *o.point)));
    } else {
      for (const auto& [nm, q] : model.points) {
        auto f = one(q);
        f["name"] = nm;
        pts.push_back(std::move(f));
      }
    }
    results["flags"] = pts;
  } else if (command == "strata") {
    SampleSpec spec;
    spec.seed = o.seed;
    auto d = stratum_dimension_summary(model, spec, 6, o.seed);
    ordered_json strata = ordered_json::array();
    for (const auto& s : d.strata) strata.push_back(j_stratum(s));
    results = {{"Q_R", d.Q_R}, {"strata", strata}, {"max_Q_N", d.max_Q_N}, {"dim_H", d.dim_H},
               {"lebesgue_case", d.lebesgue_case}};
  } else if (command == "nu") {
    auto F = enumerate_family(model, q_reg_of(model, o.seed));
    results["family"] = j_family(F, model.var_names);
    RationalPoint base(model.n, 0);
    if (o.point) {
      base = parse_point(model, *o.point);
      std::vector<double> x;
      for (const auto& v : base) x.push_back(v.get_d());
      results["at"] = {{"point", j_point(base)}, {"nu", nu(F, x)}, {"nu_bar", nu_bar(F, x)}};
      if (o.stratum) {
        const auto& N = model.stratum(*o.stratum);
        results["at"]["nu_bar_submanifold"] = {{"stratum", N.label}, {"varpi_density", "1"},
                                               {"value", nu_bar_submanifold(model, N, Polynomial::constant(model.n, 1), base)}};
      }
    }
    if (o.format == "csv") {
      // nu on a grid over the first two coordinates, the others fixed at the point
      const int res = std::max(2, o.samples.value_or(21));
      std::ostringstream csv;
      for (std::size_t i = 0; i < model.n; ++i) csv << model.var_names[i] << ",";
      csv << "nu,nu_bar\n";
      std::vector<double> x;
      for (const auto& v : base) x.push_back(v.get_d());
      for (int a = 0; a < res; ++a) {
        for (int b = 0; b < (model.n > 1 ? res : 1); ++b) {
          x[0] = -1 + 2.0 * a / (res - 1);
          if (model.n > 1) x[1] = -1 + 2.0 * b / (res - 1);
          for (double v : x) csv << csv_number(v) << ",";
          csv << csv_number(nu(F, x)) << "," << csv_number(nu_bar(F, x)) << "\n";
        }
      }
      rep.csv = csv.str();
    }
  } else if (command == "rho") {
    const auto& N = stratum_of(model, o);
    auto p = point_on(model, N, o);
    auto F = enumerate_family(model, q_reg_of(model, o.seed));
    results["rho"] = j_rho(rho_report(model, F, p, N, equisingular_Q_N(model, N, o.seed), rho_options(o)));
  } else if (command == "verdict") {
    if (o.stratum) {
      const auto& N = model.stratum(*o.stratum);
      auto p = point_on(model, N, o);
      auto F = enumerate_family(model, q_reg_of(model, o.seed));
      auto r = rho_report(model, F, p, N, equisingular_Q_N(model, N, o.seed), rho_options(o));
      auto v = point_verdict(r);
      results["verdict"] = j_verdict(v);
      if (v.wants_quadrature) {
        QuadOptions qo;
        qo.seed = o.seed;
        qo.shells = o.shells;
        if (o.samples) qo.samples = *o.samples;
        auto q = quad_diagnose(model, F, Chart::make(model, p, &N), N, qo, &r);
        results["advisory_quadrature"] = j_quad(q);
      }
    } else {
      results["decomposition"] = j_decomposition(decomposition_report(model, rho_options(o)));
    }
  } else if (command == "quad") {
    const auto& N = stratum_of(model, o);
    auto p = point_on(model, N, o);
    auto F = enumerate_family(model, q_reg_of(model, o.seed));
    auto r = rho_report(model, F, p, N, equisingular_Q_N(model, N, o.seed), rho_options(o));
    QuadOptions qo;
    qo.seed = o.seed;
    qo.shells = o.shells;
    if (o.samples) qo.samples = *o.samples;
    auto q = quad_diagnose(model, F, Chart::make(model, p, &N), N, qo, &r);
    results["quadrature"] = j_quad(q);
    if (o.format == "csv") {
      std::ostringstream csv;
      csv << "lambda,I\n";
      for (std::size_t j = 0; j < q.lambda.size(); ++j) csv << csv_number(q.lambda[j]) << "," << csv_number(q.shell[j]) << "\n";
      rep.csv = csv.str();
    }
  } else if (command == "ballbox") {
    auto p = point_or_origin(model, o);
    auto chart = Chart::make(model, p);
    auto b = ballbox_check(model, chart, {0.5, 0.25, 0.125}, o.samples.value_or(2000), o.seed);
    results["ballbox"] = {{"point", j_point(p)},  {"chart", chart.kind_name()}, {"weights", chart.weights()},
                          {"eps", b.eps},         {"C_upper", b.C_upper},       {"C_lower", b.C_lower},
                          {"unreached", b.unreached}, {"pass", b.pass}};
  } else if (command == "examples") {
    auto ex = run_examples(o);
    results = ex.json["results"];
    rep.exit_code = ex.exit_code;
  }
  if (o.format == "csv" && rep.csv.empty())
    throw InputError("InvalidArgument", "csv output is available for `nu` and `quad` only");

  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rep.json = ordered_json::object();
  rep.json["schema_version"] = kSchemaVersion;
  rep.json["command"] = command;
  rep.json["inputs"] = inputs;
  rep.json["seed"] = o.seed;
  rep.json["results"] = results;
  rep.json["timings"] = {{"total_ms", ms}};
  return rep;
}

}  // namespace srvol::cli
