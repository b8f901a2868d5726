#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srvol/bracket.hpp"
#include "srvol/polynomial.hpp"
#include "srvol/vector_field.hpp"

namespace srvol {

// Candidate equisingular submanifold, given as the image of a polynomial map psi: R^k -> R^n.
// The parameters of the map are named u1..uk.
struct SubmanifoldChart {
  std::string label;
  int k = 0;
  std::vector<Polynomial> map;                          // n polynomials in k variables
  std::vector<std::pair<Rational, Rational>> domain;    // box in parameter space
  // Optional tangent combinations offered to the adapted-basis search, with their lengths.
  std::vector<VectorField> tangent_fields;
  std::vector<int> tangent_lengths;

  std::size_t ambient_dim() const { return map.size(); }
  RationalPoint point(std::span<const Rational> u) const;
  // Columns of d psi(u), each of length n.
  std::vector<RationalPoint> tangent_vectors(std::span<const Rational> u) const;
  RationalPoint domain_center() const;

  // For coordinate-aligned strata (psi_j either constant or u_l + const, each u_l used once):
  // the ambient coordinates that vary along N, ordered by parameter.
  std::optional<std::vector<std::size_t>> aligned_coordinates() const;
  // Parameter u with psi(u) = q, when q lies on N; exact for affine maps.
  std::optional<RationalPoint> parameter_of(std::span<const Rational> q) const;
};

struct StructureModel {
  std::string name;
  std::size_t n = 0;
  std::vector<std::string> var_names;
  std::vector<VectorField> family;
  Polynomial volume_density;
  std::vector<SubmanifoldChart> strata;
  std::vector<std::pair<std::string, RationalPoint>> points;
  int bracket_depth_cap = 0;  // 0 means the default 2n
  std::size_t tuple_budget = 20000;

  StructureModel() = default;
  StructureModel(std::string name, std::vector<VectorField> family, Polynomial density);

  std::size_t m() const { return family.size(); }
  int depth_cap() const { return bracket_depth_cap > 0 ? bracket_depth_cap : static_cast<int>(2 * n); }
  const BracketTable& brackets() const;

  const SubmanifoldChart& stratum(const std::string& label) const;
  const RationalPoint& point(const std::string& name) const;
  void validate() const;

 private:
  mutable std::shared_ptr<BracketTable> table_;
};

std::string point_to_string(std::span<const Rational> p);

}  // namespace srvol
