#pragma once

#include <string>
#include <vector>

#include "srvol/model.hpp"

namespace srvol {

// Nonholonomic order; at_least marks a search that stopped at s_max without a nonzero hit.
struct Order {
  int value = 0;
  bool at_least = false;
  std::string to_string() const { return at_least ? ">=" + std::to_string(value) : std::to_string(value); }
};

// Smallest s with (X_i1 ... X_is h)(p) != 0, by breadth-first expansion with exact evaluation.
Order nonholonomic_order(const std::vector<VectorField>& fields, const Polynomial& h, const RationalPoint& p, int s_max);
Order nonholonomic_order(const StructureModel& model, const Polynomial& h, const RationalPoint& p, int s_max);

// Minimal total degree of the Taylor expansion of h at p.
int ord_diff(const Polynomial& h, const RationalPoint& p);

}  // namespace srvol
