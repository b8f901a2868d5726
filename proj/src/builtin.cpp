#include "srvol/builtin.hpp"

#include "srvol/errors.hpp"

namespace srvol::builtin {

StructureModel make_model(const std::string& name, std::size_t n, const std::vector<std::vector<std::string>>& fields,
                          const std::string& density) {
  auto names = default_names(n);
  std::vector<VectorField> fam;
  for (const auto& f : fields) {
    if (f.size() != n) throw DimensionMismatch("field of " + name + " has wrong length");
    std::vector<Polynomial> c;
    for (const auto& s : f) c.push_back(Polynomial::parse(s, names));
    fam.emplace_back(std::move(c));
  }
  StructureModel m(name, std::move(fam), Polynomial::parse(density, names));
  m.points.emplace_back("origin", RationalPoint(n, 0));
  return m;
}

SubmanifoldChart make_stratum(const std::string& label, std::size_t n, int k, const std::vector<std::string>& map,
                              const std::vector<std::pair<std::string, std::string>>& domain) {
  if (map.size() != n) throw DimensionMismatch("stratum " + label + " map length");
  SubmanifoldChart s;
  s.label = label;
  s.k = k;
  auto names = default_names(static_cast<std::size_t>(k), "u");
  for (const auto& f : map) s.map.push_back(Polynomial::parse(f, names));
  for (const auto& [lo, hi] : domain) s.domain.emplace_back(parse_rational(lo), parse_rational(hi));
  return s;
}

StructureModel grushin() {
  auto m = make_model("grushin", 2, {{"1", "0"}, {"0", "x1"}});
  m.strata.push_back(make_stratum("S", 2, 1, {"0", "u1"}, {{"-1", "1"}}));
  m.points.emplace_back("regular", RationalPoint{1, 0});
  return m;
}

StructureModel heisenberg() {
  auto m = make_model("heisenberg", 3, {{"1", "0", "0"}, {"0", "1", "x1"}});
  m.points.emplace_back("p1", RationalPoint{1, Rational(1, 2), -1});
  return m;
}

StructureModel martinet() {
  auto m = make_model("martinet", 3, {{"1", "0", "0"}, {"0", "1", "1/2 x1^2"}});
  m.strata.push_back(make_stratum("S", 3, 2, {"0", "u1", "u2"}, {{"-1", "1"}, {"-1", "1"}}));
  m.points.emplace_back("regular", RationalPoint{1, 0, 0});
  m.points.emplace_back("regular2", RationalPoint{2, 0, 0});
  return m;
}

StructureModel almost_riemannian3() {
  auto m = make_model("ar3", 3, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "x1^2 + x2^2"}});
  m.strata.push_back(make_stratum("S", 3, 1, {"0", "0", "u1"}, {{"-1", "1"}}));
  return m;
}

StructureModel almost_riemannian4() {
  auto m = make_model("ar4", 4,
                      {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "x1^2 + x2^2 + x3^2"}});
  m.strata.push_back(make_stratum("S", 4, 1, {"0", "0", "0", "u1"}, {{"-1", "1"}}));
  return m;
}

StructureModel r5_family(int k) {
  if (k < 1) throw InputError("InvalidArgument", "the R^5 family needs k >= 1");
  std::string ks = std::to_string(k);
  auto m = make_model("r5_k" + ks, 5,
                      {{"1", "0", "0", "0", "0"},
                       {"0", "1", "x1", "0", "x1^2"},
                       {"0", "0", "0", "1", "x1^" + ks + " + x2^" + ks}});
  m.strata.push_back(make_stratum("S", 5, 3, {"0", "0", "u1", "u2", "u3"}, {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}}));
  return m;
}

StructureModel ex_last() {
  auto m = make_model("exlast", 4, {{"1", "0", "0", "0"}, {"0", "1", "x1", "x1^2 x3^2 - x1 x2^2"}});
  // equisingular only for |x1| < 1
  m.strata.push_back(make_stratum("S", 4, 2, {"u1", "0", "0", "u2"}, {{"-1/2", "1/2"}, {"-1", "1"}}));
  return m;
}

std::vector<std::string> names() { return {"grushin", "heisenberg", "martinet", "ar3", "ar4", "r5", "exlast"}; }

StructureModel by_name(const std::string& name, int k) {
  if (name == "grushin") return grushin();
  if (name == "heisenberg") return heisenberg();
  if (name == "martinet") return martinet();
  if (name == "ar3") return almost_riemannian3();
  if (name == "ar4") return almost_riemannian4();
  if (name == "r5") return r5_family(k);
  if (name == "exlast") return ex_last();
  throw InputError("UnknownModel", "no built-in model named '" + name + "'");
}

}  // namespace srvol::builtin
