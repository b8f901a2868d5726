#include "srvol/model.hpp"

#include "srvol/errors.hpp"
#include "srvol/linalg.hpp"

namespace srvol {

RationalPoint SubmanifoldChart::point(std::span<const Rational> u) const {
  if (u.size() != static_cast<std::size_t>(k)) throw DimensionMismatch("stratum " + label + " parameter arity");
  RationalPoint q;
  q.reserve(map.size());
  for (const auto& f : map) q.push_back(f.eval(u));
  return q;
}

std::vector<RationalPoint> SubmanifoldChart::tangent_vectors(std::span<const Rational> u) const {
  std::vector<RationalPoint> cols(static_cast<std::size_t>(k), RationalPoint(map.size()));
  for (std::size_t l = 0; l < static_cast<std::size_t>(k); ++l)
    for (std::size_t j = 0; j < map.size(); ++j) cols[l][j] = map[j].partial(l).eval(u);
  return cols;
}

RationalPoint SubmanifoldChart::domain_center() const {
  RationalPoint c;
  for (const auto& [lo, hi] : domain) c.push_back((lo + hi) / 2);
  return c;
}

std::optional<std::vector<std::size_t>> SubmanifoldChart::aligned_coordinates() const {
  std::vector<std::size_t> coord(static_cast<std::size_t>(k), map.size());
  for (std::size_t j = 0; j < map.size(); ++j) {
    const auto& f = map[j];
    if (f.total_degree() > 1) return std::nullopt;
    if (f.total_degree() <= 0) continue;
    std::size_t used = static_cast<std::size_t>(k);
    for (std::size_t l = 0; l < static_cast<std::size_t>(k); ++l) {
      Rational c = f.partial(l).is_zero() ? Rational(0) : f.partial(l).terms().begin()->second;
      if (c == 0) continue;
      if (c != 1 || used != static_cast<std::size_t>(k)) return std::nullopt;
      used = l;
    }
    if (coord[used] != map.size()) return std::nullopt;
    coord[used] = j;
  }
  for (auto c : coord)
    if (c == map.size()) return std::nullopt;
  return coord;
}

std::optional<RationalPoint> SubmanifoldChart::parameter_of(std::span<const Rational> q) const {
  if (q.size() != map.size()) throw DimensionMismatch("point arity for stratum " + label);
  for (const auto& f : map)
    if (f.total_degree() > 1) throw UnsupportedStratumShape("stratum " + label + " is not affine");
  // affine: psi(u) = psi(0) + J u; solve the normal equations exactly and verify
  RationalPoint zero(static_cast<std::size_t>(k), 0);
  RationalPoint base = point(zero);
  auto cols = tangent_vectors(zero);
  const std::size_t kk = static_cast<std::size_t>(k);
  RationalMatrix g(kk, RationalPoint(kk));
  RationalPoint rhs(kk);
  for (std::size_t a = 0; a < kk; ++a) {
    for (std::size_t b = 0; b < kk; ++b) {
      Rational s = 0;
      for (std::size_t j = 0; j < map.size(); ++j) s += cols[a][j] * cols[b][j];
      g[a][b] = s;
    }
    Rational s = 0;
    for (std::size_t j = 0; j < map.size(); ++j) s += cols[a][j] * (q[j] - base[j]);
    rhs[a] = s;
  }
  auto u = solve(g, rhs);
  if (!u) throw ImmersionFailure("stratum " + label + " map is not an immersion");
  if (point(*u) != RationalPoint(q.begin(), q.end())) return std::nullopt;
  return u;
}

StructureModel::StructureModel(std::string nm, std::vector<VectorField> fam, Polynomial density)
    : name(std::move(nm)), family(std::move(fam)), volume_density(std::move(density)) {
  n = family.empty() ? 0 : family[0].dim();
  var_names = default_names(n);
}

const BracketTable& StructureModel::brackets() const {
  if (!table_) table_ = std::make_shared<BracketTable>(family);
  return *table_;
}

const SubmanifoldChart& StructureModel::stratum(const std::string& label) const {
  for (const auto& s : strata)
    if (s.label == label) return s;
  throw InputError("UnknownStratum", "no stratum labelled '" + label + "'");
}

const RationalPoint& StructureModel::point(const std::string& nm) const {
  for (const auto& [k, p] : points)
    if (k == nm) return p;
  throw InputError("UnknownPoint", "no point named '" + nm + "'");
}

void StructureModel::validate() const {
  if (n < 1) throw DimensionMismatch("dimension must be at least 1");
  if (family.empty()) throw InputError("EmptyFamily", "generating family is empty");
  for (const auto& X : family)
    if (X.dim() != n) throw DimensionMismatch("field dimension differs from dim");
  if (volume_density.nvars() != n) throw DimensionMismatch("volume density arity");
  if (volume_density.is_zero()) throw IdenticallyZero("volume density is identically zero");
  if (bracket_depth_cap < 0) throw InputError("InvalidCap", "bracket depth cap must be positive");
  for (const auto& s : strata) {
    if (s.map.size() != n) throw DimensionMismatch("stratum " + s.label + " map has wrong length");
    if (s.k < 0 || s.k > static_cast<int>(n)) throw DimensionMismatch("stratum " + s.label + " dimension");
    for (const auto& f : s.map)
      if (f.nvars() != static_cast<std::size_t>(s.k)) throw DimensionMismatch("stratum " + s.label + " map arity");
    if (s.domain.size() != static_cast<std::size_t>(s.k)) throw DimensionMismatch("stratum " + s.label + " domain");
    for (const auto& [lo, hi] : s.domain)
      if (!(lo <= hi)) throw InputError("InvalidDomain", "stratum " + s.label + " has an empty domain interval");
    if (s.tangent_fields.size() != s.tangent_lengths.size())
      throw DimensionMismatch("stratum " + s.label + " tangent fields and lengths differ in count");
  }
  for (const auto& [nm, p] : points)
    if (p.size() != n) throw DimensionMismatch("point " + nm + " has wrong arity");
}

std::string point_to_string(std::span<const Rational> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += p[i].get_str();
  }
  return s + ")";
}

}  // namespace srvol
