#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srvol/coords.hpp"
#include "srvol/model.hpp"
#include "srvol/orders.hpp"

namespace srvol {

struct DetPolynomial {
  std::vector<MultiIndex> tuple;
  Polynomial poly;  // volume_density * det[X_I1 ... X_In]
};

struct PruningLog {
  std::size_t brackets_enumerated = 0;
  std::size_t zero_brackets = 0;
  std::size_t duplicate_brackets = 0;  // equal up to sign to an earlier bracket
  std::size_t tuples_enumerated = 0;
  std::size_t zero_determinants = 0;
  std::size_t duplicate_determinants = 0;  // equal up to sign to an earlier determinant
};

struct TupleFamily {
  int Q_R = 0;
  std::vector<DetPolynomial> dets;
  PruningLog log;
  std::vector<FloatPolynomial> compiled;
  std::size_t size() const { return dets.size(); }
};

TupleFamily enumerate_family(const StructureModel& model, int Q_R);

double nu(const TupleFamily& F, std::span<const double> q);
double nu_bar(const TupleFamily& F, std::span<const double> q);
// Exact sum of squared determinants.
Polynomial nu_squared(const TupleFamily& F);

// max over the argmax tuples of |omega(X_I'(q))| with sum |I'| = Q(q), and over splittings of each tuple into
// k tangent and n-k transverse fields, of |varpi(q) det(tangent block) det(transverse block)|.
// N must be coordinate-aligned; q must lie on N.
double nu_bar_submanifold(const StructureModel& model, const SubmanifoldChart& N, const Polynomial& varpi_density,
                          const RationalPoint& q);

struct OrderSearch {
  Order value;                       // value on the smallest box
  std::vector<Order> per_box;        // nested boxes, largest first
  bool stabilized = true;            // the two smallest boxes agree
  std::vector<RationalPoint> points; // sampled points on N
};

// Minimum over sampled q on N near p and over determinants of the nonholonomic order (rho_min)
// or of the differential order (e_min). s_max defaults to Q(p).
OrderSearch rho_min(const StructureModel& model, const TupleFamily& F, const RationalPoint& p,
                    const SubmanifoldChart& N, int sample_count, std::uint64_t seed, int s_max = 0);
OrderSearch e_min(const StructureModel& model, const TupleFamily& F, const RationalPoint& p, const SubmanifoldChart& N,
                  int sample_count, std::uint64_t seed);

struct Homogeneity {
  bool homogeneous = false;
  int rho = 0;
  std::string note;
};

Homogeneity homogeneity_check(const StructureModel& model, const TupleFamily& F, const RationalPoint& p,
                              const SubmanifoldChart& N);

struct RaySpec {
  int random_rays = 24;
  double y_radius = 0.25;
};

struct RayFit {
  std::vector<double> y, z;
  double slope = 0;
  double sigma = 0;
  double r2 = 1;
  bool degenerate = false;
};

struct RhoMaxEstimate {
  double value = 0;
  double sigma = 0;
  double min_r2 = 1;
  int low_r2 = 0;  // fits with R^2 < 0.9
  int excluded = 0;
  std::vector<RayFit> rays;
};

std::vector<double> default_lambda_grid();

RhoMaxEstimate rho_max_estimate(const StructureModel& model, const TupleFamily& F, const Chart& chart,
                                const std::vector<double>& lambda_grid, const RaySpec& spec, std::uint64_t seed);

struct RhoReport {
  std::string stratum;
  RationalPoint p;
  int Q_p = 0;
  int Q_N = 0;
  int Q_R = 0;
  int n = 0;
  int k = 0;
  OrderSearch rho_min;
  OrderSearch e_min;
  Homogeneity homogeneity;
  RhoMaxEstimate rho_max;
  std::optional<int> rho_max_exact;  // set when nu is homogeneous
  int threshold() const { return Q_p - Q_N; }
  int codim() const { return n - k; }
};

struct RhoOptions {
  int sample_count = 6;
  std::uint64_t seed = 1;
  RaySpec rays;
  std::vector<double> lambda_grid = default_lambda_grid();
};

RhoReport rho_report(const StructureModel& model, const TupleFamily& F, const RationalPoint& p,
                     const SubmanifoldChart& N, int Q_N, const RhoOptions& options);

}  // namespace srvol
