#include "srvol/linalg.hpp"

#include <unordered_map>

#include "srvol/errors.hpp"

namespace srvol {

std::size_t rank(const std::vector<RationalPoint>& vectors) {
  if (vectors.empty()) return 0;
  const std::size_t cols = vectors[0].size();
  std::vector<std::vector<mpz_class>> m;
  m.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != cols) throw DimensionMismatch("rank of vectors of different length");
    mpz_class l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpz_class> row;
    row.reserve(cols);
    for (const auto& x : v) row.push_back(x.get_num() * (l / x.get_den()));
    m.push_back(std::move(row));
  }
  const std::size_t rows = m.size();
  std::size_t r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

void Echelon::reduce(RationalPoint& v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Rational& f = v[pivots_[k]];
    if (f == 0) continue;
    Rational factor = f;  // rows are normalized so the pivot is 1
    for (std::size_t j = 0; j < dim_; ++j)
      if (rows_[k][j] != 0) v[j] -= factor * rows_[k][j];
  }
}

bool Echelon::add(RationalPoint v) {
  if (v.size() != dim_) throw DimensionMismatch("echelon vector length");
  reduce(v);
  std::size_t piv = 0;
  while (piv < dim_ && v[piv] == 0) ++piv;
  if (piv == dim_) return false;
  Rational inv = 1 / v[piv];
  for (auto& x : v) x *= inv;
  // keep earlier rows reduced against the new pivot
  for (auto& row : rows_) {
    Rational f = row[piv];
    if (f == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) row[j] -= f * v[j];
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(piv);
  return true;
}

bool Echelon::in_span(RationalPoint v) const {
  if (v.size() != dim_) throw DimensionMismatch("echelon vector length");
  reduce(v);
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

Polynomial determinant(const PolyMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return Polynomial::constant(0, 1);
  const std::size_t nv = a[0][0].nvars();
  for (const auto& row : a)
    if (row.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
  // minor[mask] = determinant of rows n-popcount(mask).. n-1 restricted to columns in mask
  std::unordered_map<unsigned, Polynomial> minor;
  minor.emplace(0u, Polynomial::constant(nv, 1));
  for (std::size_t size = 1; size <= n; ++size) {
    const std::size_t row = n - size;
    std::unordered_map<unsigned, Polynomial> next;
    for (const auto& [mask, sub] : minor) {
      if (sub.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if ((mask & (1u << c)) || a[row][c].is_zero()) continue;
        unsigned nm = mask | (1u << c);
        Polynomial term = a[row][c] * sub;
        // cofactor sign: position of c among the columns of nm
        int pos = __builtin_popcount(nm & ((1u << c) - 1u));
        if (pos % 2) term = -term;
        auto [it, inserted] = next.try_emplace(nm, std::move(term));
        if (!inserted) it->second += term;
      }
    }
    minor = std::move(next);
  }
  auto it = minor.find((1u << n) - 1u);
  return it == minor.end() ? Polynomial(nv) : it->second;
}

std::optional<RationalPoint> solve(RationalMatrix a, RationalPoint b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DimensionMismatch("solve: right-hand side length");
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix inv(n, RationalPoint(n));
  for (std::size_t j = 0; j < n; ++j) {
    RationalPoint e(n, 0);
    e[j] = 1;
    auto col = solve(a, e);
    if (!col) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = (*col)[i];
  }
  return inv;
}

}  // namespace srvol
