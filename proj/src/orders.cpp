#include "srvol/orders.hpp"

#include <set>

#include "srvol/errors.hpp"

namespace srvol {

namespace {
struct TermsLess {
  bool operator()(const Polynomial& a, const Polynomial& b) const { return a.terms() < b.terms(); }
};
}  // namespace

Order nonholonomic_order(const std::vector<VectorField>& fields, const Polynomial& h, const RationalPoint& p, int s_max) {
  if (s_max < 0) throw InputError("InvalidArgument", "s_max must be non-negative");
  if (h.nvars() != p.size()) throw DimensionMismatch("order: point arity");
  if (h.eval(p) != 0) return {0, false};
  std::set<Polynomial, TermsLess> frontier{h.normalized()};
  for (int s = 1; s <= s_max; ++s) {
    std::set<Polynomial, TermsLess> next;
    for (const auto& g : frontier) {
      for (const auto& X : fields) {
        Polynomial d = X.apply(g);
        if (d.is_zero()) continue;
        if (d.eval(p) != 0) return {s, false};
        next.insert(d.normalized());
      }
    }
    if (next.empty()) return {s_max + 1, true};
    frontier = std::move(next);
  }
  return {s_max + 1, true};
}

Order nonholonomic_order(const StructureModel& model, const Polynomial& h, const RationalPoint& p, int s_max) {
  return nonholonomic_order(model.family, h, p, s_max);
}

int ord_diff(const Polynomial& h, const RationalPoint& p) {
  if (h.is_zero()) throw IdenticallyZero("ord_diff of the zero polynomial");
  return h.shift(p).min_degree();
}

}  // namespace srvol
