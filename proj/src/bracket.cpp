#include "srvol/bracket.hpp"

#include "srvol/errors.hpp"

namespace srvol {

std::string to_string(const MultiIndex& I) {
  std::string s = "X";
  for (std::size_t k = 0; k < I.size(); ++k) {
    if (k > 0 && (I[k] >= 10 || I[k - 1] >= 10)) s += ",";
    s += std::to_string(I[k]);
  }
  return s;
}

BracketTable::BracketTable(std::vector<VectorField> family, bool cache_enabled)
    : family_(std::move(family)), cache_enabled_(cache_enabled) {
  if (family_.empty()) throw InputError("EmptyFamily", "generating family is empty");
  for (const auto& X : family_)
    if (X.dim() != family_[0].dim()) throw DimensionMismatch("generating fields of different dimension");
}

void BracketTable::check(const MultiIndex& I) const {
  if (I.empty()) throw IndexOutOfRange("empty multi-index");
  for (int i : I)
    if (i < 1 || i > static_cast<int>(family_.size()))
      throw IndexOutOfRange("multi-index entry " + std::to_string(i) + " outside 1.." + std::to_string(family_.size()));
}

VectorField BracketTable::bracket_of(const MultiIndex& I) const {
  check(I);
  if (I.size() == 1) return family_[static_cast<std::size_t>(I[0] - 1)];
  if (cache_enabled_) {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(I); it != cache_.end()) return it->second;
  }
  MultiIndex tail(I.begin() + 1, I.end());
  VectorField inner = bracket_of(tail);
  VectorField result = inner.is_zero() ? VectorField::zero(dim())
                                       : lie_bracket(family_[static_cast<std::size_t>(I[0] - 1)], inner);
  if (cache_enabled_) {
    std::lock_guard lock(mutex_);
    cache_.emplace(I, result);
  }
  return result;
}

std::vector<MultiIndex> BracketTable::indices_of_length(int len) const {
  std::vector<MultiIndex> out;
  if (len < 1) return out;
  const int m = static_cast<int>(family_.size());
  MultiIndex I(static_cast<std::size_t>(len), 1);
  while (true) {
    out.push_back(I);
    int k = len - 1;
    while (k >= 0 && I[static_cast<std::size_t>(k)] == m) I[static_cast<std::size_t>(k--)] = 1;
    if (k < 0) break;
    ++I[static_cast<std::size_t>(k)];
  }
  return out;
}

std::vector<MultiIndex> BracketTable::nonzero_of_length(int len) const {
  if (len < 1) return {};
  {
    std::lock_guard lock(mutex_);
    if (auto it = nonzero_.find(len); it != nonzero_.end()) return it->second;
  }
  std::vector<MultiIndex> out;
  if (len == 1) {
    for (int i = 1; i <= static_cast<int>(family_.size()); ++i)
      if (!family_[static_cast<std::size_t>(i - 1)].is_zero()) out.push_back({i});
  } else {
    auto shorter = nonzero_of_length(len - 1);
    for (int i = 1; i <= static_cast<int>(family_.size()); ++i) {
      for (const auto& J : shorter) {
        MultiIndex I{i};
        I.insert(I.end(), J.begin(), J.end());
        if (!bracket_of(I).is_zero()) out.push_back(std::move(I));
      }
    }
  }
  std::lock_guard lock(mutex_);
  nonzero_.emplace(len, out);
  return out;
}

}  // namespace srvol
