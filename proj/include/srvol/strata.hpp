#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srvol/flags.hpp"
#include "srvol/model.hpp"

namespace srvol {

// Cumulative restricted growth (n_1^N, ..., n_r^N) together with the ambient flag at psi(u).
struct RestrictedFlag {
  std::vector<int> restricted;
  FlagReport ambient;
};

RestrictedFlag restricted_flag(const StructureModel& model, const SubmanifoldChart& N, const RationalPoint& u);
std::vector<int> restricted_flag_at(const StructureModel& model, const SubmanifoldChart& N, const RationalPoint& u);

struct StratumReport {
  std::string label;
  int k = 0;
  std::vector<int> restricted_growth;
  std::vector<int> ambient_growth;
  int Q_N = 0;
  int Q_ambient = 0;
  bool equisingular = false;
  int hausdorff_dim = 0;
  std::vector<RationalPoint> samples;  // parameter points used
};

// Samples the domain center and sample_count - 1 seeded parameter points.
StratumReport equisingular_check(const StructureModel& model, const SubmanifoldChart& N, int sample_count,
                                 std::uint64_t seed);

struct StratumDimensions {
  int Q_R = 0;
  std::vector<StratumReport> strata;
  int max_Q_N = 0;  // 0 when no strata are declared
  int dim_H = 0;
  // "i" when Q_R < max Q_N, "ii" when Q_R > max Q_N, "equal" otherwise
  std::string lebesgue_case;
};

StratumDimensions stratum_dimension_summary(const StructureModel& model, const SampleSpec& regular_samples,
                                            int stratum_samples = 6, std::uint64_t seed = 1);

}  // namespace srvol
