#pragma once

#include <random>

#include "srvol/vector_field.hpp"

namespace srvol::testing {

inline Polynomial random_polynomial(std::size_t n, int max_degree, std::mt19937_64& rng, int max_terms = 4) {
  Polynomial p(n);
  int terms = static_cast<int>(rng() % static_cast<unsigned>(max_terms + 1));
  for (int t = 0; t < terms; ++t) {
    Exponent e(n, 0);
    int budget = static_cast<int>(rng() % static_cast<unsigned>(max_degree + 1));
    for (int k = 0; k < budget; ++k) ++e[rng() % n];
    long num = static_cast<long>(rng() % 11) - 5;
    long den = static_cast<long>(rng() % 4) + 1;
    p.add_term(e, Rational(num, den));
  }
  return p;
}

inline VectorField random_field(std::size_t n, int max_degree, std::mt19937_64& rng) {
  std::vector<Polynomial> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(random_polynomial(n, max_degree, rng));
  return VectorField(std::move(c));
}

}  // namespace srvol::testing
