#pragma once

#include <optional>
#include <vector>

#include "srvol/polynomial.hpp"

namespace srvol {

using RationalMatrix = std::vector<std::vector<Rational>>;  // row-major
using PolyMatrix = std::vector<std::vector<Polynomial>>;

// Rank of a set of rational vectors by fraction-free (Bareiss) elimination over the integers.
std::size_t rank(const std::vector<RationalPoint>& vectors);

// Incremental row echelon form; add() reports whether the vector enlarged the span.
class Echelon {
 public:
  explicit Echelon(std::size_t dim) : dim_(dim) {}
  bool add(RationalPoint v);
  bool in_span(RationalPoint v) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  void reduce(RationalPoint& v) const;

  std::size_t dim_;
  std::vector<RationalPoint> rows_;
  std::vector<std::size_t> pivots_;
};

Rational determinant(RationalMatrix a);

// Determinant by expansion over column subsets (memoized minors); exact.
Polynomial determinant(const PolyMatrix& a);

// Solves a x = b for square nonsingular a; nullopt when singular.
std::optional<RationalPoint> solve(RationalMatrix a, RationalPoint b);
std::optional<RationalMatrix> inverse(const RationalMatrix& a);

}  // namespace srvol
