#include "srvol/vector_field.hpp"

#include <algorithm>

#include "srvol/errors.hpp"

namespace srvol {

VectorField::VectorField(std::vector<Polynomial> components) : comps_(std::move(components)) {
  for (const auto& c : comps_)
    if (c.nvars() != comps_.size())
      throw DimensionMismatch("vector field component has " + std::to_string(c.nvars()) + " variables, expected " +
                              std::to_string(comps_.size()));
}

VectorField VectorField::zero(std::size_t n) { return VectorField(std::vector<Polynomial>(n, Polynomial(n))); }

VectorField VectorField::coordinate(std::size_t n, std::size_t i) {
  if (i >= n) throw IndexOutOfRange("coordinate field " + std::to_string(i + 1));
  std::vector<Polynomial> c(n, Polynomial(n));
  c[i] = Polynomial::constant(n, 1);
  return VectorField(std::move(c));
}

bool VectorField::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

Polynomial VectorField::apply(const Polynomial& h) const {
  if (h.nvars() != dim()) throw DimensionMismatch("applying a field on R^" + std::to_string(dim()) +
                                                  " to a function of " + std::to_string(h.nvars()) + " variables");
  Polynomial r(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (comps_[i].is_zero()) continue;
    Polynomial d = h.partial(i);
    if (!d.is_zero()) r += comps_[i] * d;
  }
  return r;
}

RationalPoint VectorField::eval(std::span<const Rational> x) const {
  RationalPoint v;
  v.reserve(dim());
  for (const auto& c : comps_) v.push_back(c.eval(x));
  return v;
}

std::vector<double> VectorField::eval(std::span<const double> x) const {
  std::vector<double> v;
  v.reserve(dim());
  for (const auto& c : comps_) v.push_back(c.eval(x));
  return v;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (o.dim() != dim()) throw DimensionMismatch("field sum dimension");
  for (std::size_t i = 0; i < dim(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (o.dim() != dim()) throw DimensionMismatch("field difference dimension");
  for (std::size_t i = 0; i < dim(); ++i) comps_[i] -= o.comps_[i];
  return *this;
}

VectorField operator*(const Polynomial& f, const VectorField& X) {
  std::vector<Polynomial> c;
  c.reserve(X.dim());
  for (const auto& p : X.comps_) c.push_back(f * p);
  return VectorField(std::move(c));
}

VectorField operator*(const Rational& k, const VectorField& X) {
  std::vector<Polynomial> c;
  c.reserve(X.dim());
  for (const auto& p : X.comps_) c.push_back(k * p);
  return VectorField(std::move(c));
}

VectorField VectorField::operator-() const {
  std::vector<Polynomial> c;
  c.reserve(dim());
  for (const auto& p : comps_) c.push_back(-p);
  return VectorField(std::move(c));
}

std::string VectorField::to_string(const std::vector<std::string>& names) const {
  std::string out;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (comps_[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + comps_[i].to_string(names) + ") d" + names[i];
  }
  return out.empty() ? "0" : out;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  if (X.dim() != Y.dim()) throw DimensionMismatch("bracket of fields of different dimension");
  std::vector<Polynomial> c;
  c.reserve(X.dim());
  for (std::size_t j = 0; j < X.dim(); ++j) c.push_back(X.apply(Y[j]) - Y.apply(X[j]));
  return VectorField(std::move(c));
}

FloatField::FloatField(const VectorField& X) {
  comps_.reserve(X.dim());
  for (const auto& c : X.components()) comps_.emplace_back(c);
}

void FloatField::eval(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i](x);
}

}  // namespace srvol
