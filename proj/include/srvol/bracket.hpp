#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "srvol/vector_field.hpp"

namespace srvol {

// Entries are 1-based generator indices; (i1, i2, ..., ij) denotes [X_i1, [X_i2, ..., X_ij]].
using MultiIndex = std::vector<int>;

std::string to_string(const MultiIndex& I);  // "X112" style label

class BracketTable {
 public:
  explicit BracketTable(std::vector<VectorField> family, bool cache_enabled = true);

  std::size_t size() const { return family_.size(); }
  std::size_t dim() const { return family_.empty() ? 0 : family_[0].dim(); }
  const std::vector<VectorField>& family() const { return family_; }

  VectorField bracket_of(const MultiIndex& I) const;

  // Every multi-index of length `len` in lexicographic order.
  std::vector<MultiIndex> indices_of_length(int len) const;
  // Multi-indices of length `len` whose bracket is not identically zero, in lexicographic order.
  // Computed from the nonzero ones of length len-1, since [X_i, 0] = 0.
  std::vector<MultiIndex> nonzero_of_length(int len) const;

 private:
  void check(const MultiIndex& I) const;

  std::vector<VectorField> family_;
  bool cache_enabled_;
  mutable std::mutex mutex_;
  mutable std::map<MultiIndex, VectorField> cache_;
  mutable std::map<int, std::vector<MultiIndex>> nonzero_;
};

}  // namespace srvol
