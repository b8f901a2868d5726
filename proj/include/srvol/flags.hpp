#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srvol/model.hpp"

namespace srvol {

enum class PointClass { Regular, Singular, Undetermined };
std::string to_string(PointClass c);

struct FlagReport {
  RationalPoint point;
  std::vector<int> growth;   // n_1(q), ..., n_r(q)
  int r = 0;
  std::vector<int> weights;  // w_1 <= ... <= w_n
  int Q = 0;
  PointClass classification = PointClass::Undetermined;
  std::vector<RationalPoint> probes;  // filled by classify_point
};

// Growth vector helpers shared with the strata module.
std::vector<int> weights_from_growth(const std::vector<int>& growth);
int homogeneous_dimension(const std::vector<int>& growth);

FlagReport flag_at(const StructureModel& model, const RationalPoint& q, int Lmax);
FlagReport flag_at(const StructureModel& model, const RationalPoint& q);  // Lmax = model.depth_cap()

// Seeded rational point uniformly drawn from the box of half-width `radius` around `center`,
// on a grid of step radius/1024.
RationalPoint random_rational_point(const RationalPoint& center, const Rational& radius, std::uint64_t& state);

FlagReport classify_point(const StructureModel& model, const RationalPoint& q, int Lmax, const Rational& probe_radius,
                          int probe_count, std::uint64_t seed);

struct SampleSpec {
  RationalPoint center;  // empty means the origin
  Rational radius = 1;
  int count = 12;
  int probe_count = 4;
  Rational probe_radius = Rational(1, 16);
  std::uint64_t seed = 1;
};

struct QRegResult {
  int Q_R = 0;
  int regular_samples = 0;
  bool constant = true;  // every sampled regular point had the same Q
  std::vector<std::string> warnings;
};

QRegResult q_reg(const StructureModel& model, const SampleSpec& spec);

// Dimension of the free nilpotent Lie algebra of step s on m generators.
std::int64_t free_lie_dims(int m, int s);

}  // namespace srvol
