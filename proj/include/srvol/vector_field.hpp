#pragma once

#include <span>
#include <string>
#include <vector>

#include "srvol/polynomial.hpp"

namespace srvol {

// Polynomial vector field on R^n; component i is the coefficient of d/dx_i.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<Polynomial> components);
  static VectorField zero(std::size_t n);
  // Constant field d/dx_i (0-based).
  static VectorField coordinate(std::size_t n, std::size_t i);

  std::size_t dim() const { return comps_.size(); }
  const Polynomial& operator[](std::size_t i) const { return comps_[i]; }
  const std::vector<Polynomial>& components() const { return comps_; }
  bool is_zero() const;

  // Xh = sum_i X^i dh/dx_i
  Polynomial apply(const Polynomial& h) const;

  RationalPoint eval(std::span<const Rational> x) const;
  std::vector<double> eval(std::span<const double> x) const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const Polynomial& f, const VectorField& X);
  friend VectorField operator*(const Rational& c, const VectorField& X);
  VectorField operator-() const;
  friend bool operator==(const VectorField& a, const VectorField& b) { return a.comps_ == b.comps_; }

  std::string to_string(const std::vector<std::string>& names) const;
  std::string to_string() const { return to_string(default_names(dim())); }

 private:
  std::vector<Polynomial> comps_;
};

// [X, Y]^j = X(Y^j) - Y(X^j)
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// Compiled float evaluation of a family of fields, used by the integrators.
class FloatField {
 public:
  FloatField() = default;
  explicit FloatField(const VectorField& X);
  void eval(std::span<const double> x, std::span<double> out) const;
  std::size_t dim() const { return comps_.size(); }

 private:
  std::vector<FloatPolynomial> comps_;
};

}  // namespace srvol
