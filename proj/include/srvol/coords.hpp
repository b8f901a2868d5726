#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srvol/linalg.hpp"
#include "srvol/model.hpp"

namespace srvol {

struct AdaptedBasis {
  RationalPoint base;
  std::vector<VectorField> fields;
  std::vector<int> lengths;
  std::vector<std::string> labels;  // "X12", or "T1" for a user tangent combination
  int tangent_count = 0;            // leading fields tangent to the preferred stratum
};

// Greedy selection over brackets by increasing length; with a stratum, the first k fields are tangent
// to it and realize the restricted flag at p.
AdaptedBasis adapted_basis(const StructureModel& model, const RationalPoint& p,
                           const SubmanifoldChart* prefer_tangent_to = nullptr);

struct Dilation {
  std::vector<int> weights;
};

std::vector<double> dilate(const Dilation& d, double lambda, std::span<const double> x);
RationalPoint dilate(const Dilation& d, const Rational& lambda, std::span<const Rational> x);
// max_i |x_i|^(1/w_i)
double pseudo_norm(const Dilation& d, std::span<const double> x);

struct IntegratorSettings {
  double radius = 1.0;  // chart validity radius
  int steps_per_radius = 256;
};

class Chart {
 public:
  enum class Kind { Identity, Exponential };

  // x -> p + x; throws PrivilegedCertificationFailed unless the coordinate orders match the flag weights.
  static Chart identity(const StructureModel& model, const RationalPoint& p, const SubmanifoldChart* N = nullptr);
  // x -> exp(x_n Z_n) o ... o exp(x_1 Z_1)(p)
  static Chart exponential(const StructureModel& model, AdaptedBasis basis, IntegratorSettings settings = {});
  // Identity chart when the input coordinates are privileged at p and N is coordinate-aligned,
  // exponential chart otherwise.
  static Chart make(const StructureModel& model, const RationalPoint& p, const SubmanifoldChart* N = nullptr,
                    IntegratorSettings settings = {});

  Kind kind() const { return kind_; }
  std::string kind_name() const { return kind_ == Kind::Identity ? "identity" : "exponential"; }
  std::size_t dim() const { return base_.size(); }
  const RationalPoint& base() const { return base_; }
  const std::vector<int>& weights() const { return weights_; }
  Dilation dilation() const { return {weights_}; }
  const std::vector<std::size_t>& tangent_coords() const { return tangent_; }
  const std::vector<std::size_t>& transverse_coords() const { return transverse_; }
  const std::optional<AdaptedBasis>& basis() const { return basis_; }
  const IntegratorSettings& settings() const { return settings_; }

  // Chart point with the given tangent (y) and transverse (z) coordinates.
  std::vector<double> assemble(std::span<const double> y, std::span<const double> z) const;
  // Differential of the chart map at 0 (columns are the images of the coordinate vectors).
  RationalMatrix jacobian_at_origin() const;

  std::vector<double> map(std::span<const double> x) const;
  std::vector<double> inverse(std::span<const double> q) const;

 private:
  Kind kind_ = Kind::Identity;
  RationalPoint base_;
  std::vector<double> base_d_;
  std::vector<int> weights_;
  std::vector<std::size_t> tangent_, transverse_;
  std::optional<AdaptedBasis> basis_;
  std::vector<FloatField> flows_;
  IntegratorSettings settings_;
  std::vector<double> lin_inverse_;  // row-major inverse of jacobian_at_origin, used as Newton start
};

std::vector<double> chart_map(const Chart& chart, std::span<const double> x);
std::vector<double> chart_inverse(const Chart& chart, std::span<const double> q);

// Nonholonomic orders of the coordinate functions x_j - p_j at p.
std::vector<int> coordinate_orders(const StructureModel& model, const RationalPoint& p);

// Weighted-degree truncation: drops monomials of weighted degree > max_degree.
Polynomial truncate_weighted(const Polynomial& f, std::span<const int> weights, int max_degree);

// Exact Taylor jets (in chart coordinates, up to weighted degree max_degree) of the family pushed
// forward by the chart map.
std::vector<VectorField> pushforward_jets(const StructureModel& model, const Chart& chart, int max_degree);

// Weighted-homogeneous degree -1 part of the pushed-forward family.
std::vector<VectorField> nilpotent_approx(const StructureModel& model, const Chart& chart);

// Component j of every field has weighted order >= w_j - 1 (true in privileged coordinates).
bool has_weighted_order_at_least_minus_one(const std::vector<VectorField>& fields, std::span<const int> weights);
// Component j of every field is weighted homogeneous of degree w_j - 1.
bool is_homogeneous_minus_one(const std::vector<VectorField>& fields, std::span<const int> weights);

}  // namespace srvol
