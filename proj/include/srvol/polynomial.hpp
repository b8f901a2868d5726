#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srvol {

using Rational = mpq_class;
using RationalPoint = std::vector<Rational>;

// Parses "a" or "a/b" (optional sign) into a canonical rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

// Dense exponent vector; lexicographic order on these keys fixes iteration order.
using Exponent = std::vector<std::uint16_t>;

// Default variable names x1..xn.
std::vector<std::string> default_names(std::size_t n, std::string_view prefix = "x");

// Exact multivariate polynomial with rational coefficients.
// Invariant: no stored zero coefficient; every key has length nvars().
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  // Coordinate function x_i, i is 0-based.
  static Polynomial variable(std::size_t nvars, std::size_t i);
  static Polynomial monomial(Exponent e, const Rational& c);

  // Grammar: signed sums of terms `c x<i>^<k> ...`; `c` is `a` or `a/b`; `^1` and `*` optional.
  static Polynomial parse(std::string_view text, const std::vector<std::string>& names);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponent& e, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Rational eval(std::span<const Rational> x) const;
  double eval(std::span<const double> x) const;

  // d/dx_i, i is 0-based.
  Polynomial partial(std::size_t i) const;

  // h(p + x): Taylor shift to p.
  Polynomial shift(std::span<const Rational> p) const;

  // h(values_1(u), ..., values_n(u)); every value shares the same nvars.
  Polynomial compose(std::span<const Polynomial> values) const;

  // Drops every monomial of total degree > max_degree.
  Polynomial truncate(int max_degree) const;

  int total_degree() const;  // -1 for the zero polynomial
  int min_degree() const;    // -1 for the zero polynomial

  // Weighted degree of every monomial when weights are attached to variables.
  int min_weighted_degree(std::span<const int> weights) const;
  int max_weighted_degree(std::span<const int> weights) const;
  Polynomial weighted_part(std::span<const int> weights, int degree) const;

  // Equal up to a nonzero rational factor (used for deduplication).
  Rational leading_coefficient() const;
  Polynomial normalized() const;

  std::string to_string(const std::vector<std::string>& names) const;
  std::string to_string() const { return to_string(default_names(nvars_)); }

 private:
  std::size_t nvars_;
  TermMap terms_;
};

// Collects the variables of several polynomials into a common evaluation buffer of doubles.
// Faster than Polynomial::eval for repeated evaluation inside integrators.
class FloatPolynomial {
 public:
  FloatPolynomial() = default;
  explicit FloatPolynomial(const Polynomial& p);

  double operator()(std::span<const double> x) const;
  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return coeffs_.empty(); }

 private:
  std::size_t nvars_ = 0;
  std::vector<double> coeffs_;
  std::vector<std::uint16_t> exps_;  // row-major, nvars_ per term
};

}  // namespace srvol
