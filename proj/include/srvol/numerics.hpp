#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srvol/coords.hpp"
#include "srvol/measure.hpp"

namespace srvol {

// Piecewise-constant control: segment s applies u[s] (length m, Euclidean norm <= 1) for time eps / seg.
struct Control {
  std::vector<std::vector<double>> u;
};

struct ReachSample {
  RationalPoint p;
  double eps = 0;
  std::vector<std::vector<double>> cloud;
  std::vector<Control> controls;
  std::uint64_t seed = 0;
};

// Endpoint of the controlled trajectory of duration `duration` from x0 (fixed-step RK4).
std::vector<double> integrate_control(const std::vector<FloatField>& fields, std::span<const double> x0,
                                      const Control& c, double duration, int substeps = 4);

// Half the trajectories use independent random unit directions per segment, half rotate at a random
// constant angular speed in a random plane of the control space.
ReachSample reach_ball(const StructureModel& model, const RationalPoint& p, double eps, int count, int seg,
                       std::uint64_t seed);

struct BallBoxResult {
  std::vector<double> eps;
  std::vector<double> C_upper;  // per eps: max pseudo_norm(chart^-1(endpoint)) / eps
  std::vector<double> C_lower;  // per eps: max over box targets of the shooting length / eps
  int unreached = 0;            // box targets the control search failed to hit
  double C_upper_max = 0;
  double C_lower_max = 0;
  bool pass = false;
};

BallBoxResult ballbox_check(const StructureModel& model, const Chart& chart, const std::vector<double>& eps_list,
                            int count, std::uint64_t seed);

enum class QuadVerdict { Converges, Diverges, Unclear };
std::string to_string(QuadVerdict v);

struct QuadOptions {
  int shells = 8;
  int samples = 4096;  // per shell
  std::uint64_t seed = 1;
  double y_radius = 0.25;
};

struct QuadDiagnosis {
  std::vector<double> lambda;
  std::vector<double> shell;  // I(lambda)
  double exponent = 0;        // fitted alpha in I ~ lambda^alpha
  double exponent_sigma = 0;
  double r2 = 1;
  double shell_sum = 0;       // trapezoid rule over the lambda grid
  QuadVerdict verdict = QuadVerdict::Unclear;
  int Q_p = 0;
  int Q_N = 0;
  std::optional<double> predicted;  // Q(p) - Q_N - 1 - rho when rho is exact
  std::optional<double> predicted_upper;  // with rho_min
  std::optional<double> predicted_lower;  // with the fitted rho_max
};

// I(lambda) = lambda^(Q(p) - Q_N - 1) * mean of 1/nu(Phi(y, delta_lambda z)) over |y_i| <= R^(w_i) and z on
// the unit pseudo-sphere, with lambda_j = 2^(-1 - j/2). Quasi-Monte Carlo points are shared by all shells.
QuadDiagnosis quad_diagnose(const StructureModel& model, const TupleFamily& F, const Chart& chart,
                            const SubmanifoldChart& N, const QuadOptions& options, const RhoReport* rho = nullptr);

struct DensityEstimate {
  double estimate = 0;  // 2^Q / muhat(Bhat)
  double ci_low = 0, ci_high = 0;
  double ball_volume = 0;  // Lebesgue volume of the nilpotent unit ball in chart coordinates
  int Q = 0;
};

// Lebesgue volume in chart coordinates of the reach set at time eps of the nilpotent approximation.
// A uniform sample of the bounding box is inside when one of its nearest cloud directions reaches further.
double nilpotent_ball_volume(const StructureModel& model, const Chart& chart, double eps, int mc_count,
                             std::uint64_t seed, std::vector<char>* inside = nullptr);

DensityEstimate density_estimate(const StructureModel& model, const Chart& chart, int mc_count, std::uint64_t seed);

}  // namespace srvol
