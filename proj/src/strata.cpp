#include "srvol/strata.hpp"

#include <algorithm>

#include "srvol/errors.hpp"
#include "srvol/linalg.hpp"

namespace srvol {

RestrictedFlag restricted_flag(const StructureModel& model, const SubmanifoldChart& N, const RationalPoint& u) {
  if (N.ambient_dim() != model.n) throw DimensionMismatch("stratum " + N.label + " lives in another dimension");
  RationalPoint q = N.point(u);
  auto cols = N.tangent_vectors(u);
  if (rank(cols) != static_cast<std::size_t>(N.k))
    throw ImmersionFailure("stratum " + N.label + " is not immersed at u = " + point_to_string(u));
  RestrictedFlag out;
  out.ambient = flag_at(model, q);
  const auto& table = model.brackets();
  Echelon joint(model.n);
  for (const auto& c : cols) joint.add(c);
  for (int len = 1; len <= out.ambient.r; ++len) {
    for (const auto& I : table.nonzero_of_length(len)) {
      if (joint.rank() == model.n) break;
      joint.add(table.bracket_of(I).eval(q));
    }
    const int n_i = out.ambient.growth[static_cast<std::size_t>(len - 1)];
    // dim(D^i cap T) = dim D^i + dim T - dim(D^i + T)
    out.restricted.push_back(n_i + N.k - static_cast<int>(joint.rank()));
  }
  return out;
}

std::vector<int> restricted_flag_at(const StructureModel& model, const SubmanifoldChart& N, const RationalPoint& u) {
  return restricted_flag(model, N, u).restricted;
}

StratumReport equisingular_check(const StructureModel& model, const SubmanifoldChart& N, int sample_count,
                                 std::uint64_t seed) {
  if (sample_count < 2) throw InputError("InvalidSampleCount", "equisingular_check needs at least 2 samples");
  StratumReport rep;
  rep.label = N.label;
  rep.k = N.k;
  rep.equisingular = true;
  std::uint64_t state = seed;
  for (int s = 0; s < sample_count; ++s) {
    RationalPoint u = N.domain_center();
    if (s > 0) {
      // uniform grid point inside the domain box
      RationalPoint unit = random_rational_point(RationalPoint(u.size(), 0), 1, state);
      for (std::size_t l = 0; l < u.size(); ++l) {
        const auto& [lo, hi] = N.domain[l];
        u[l] = (lo + hi) / 2 + unit[l] * (hi - lo) / 2;
        u[l].canonicalize();
      }
    }
    auto rf = restricted_flag(model, N, u);
    if (s == 0) {
      rep.restricted_growth = rf.restricted;
      rep.ambient_growth = rf.ambient.growth;
    } else if (rf.restricted != rep.restricted_growth || rf.ambient.growth != rep.ambient_growth) {
      rep.equisingular = false;
    }
    rep.samples.push_back(u);
  }
  rep.Q_N = homogeneous_dimension(rep.restricted_growth);
  rep.Q_ambient = homogeneous_dimension(rep.ambient_growth);
  rep.hausdorff_dim = rep.equisingular ? rep.Q_N : 0;
  return rep;
}

StratumDimensions stratum_dimension_summary(const StructureModel& model, const SampleSpec& regular_samples,
                                            int stratum_samples, std::uint64_t seed) {
  StratumDimensions out;
  out.Q_R = q_reg(model, regular_samples).Q_R;
  for (const auto& N : model.strata) {
    auto rep = equisingular_check(model, N, stratum_samples, seed);
    if (!rep.equisingular)
      throw CertificationError("NotEquisingular", "stratum " + N.label + " is not equisingular on its sampled domain");
    out.max_Q_N = std::max(out.max_Q_N, rep.Q_N);
    out.strata.push_back(std::move(rep));
  }
  out.dim_H = std::max(out.Q_R, out.max_Q_N);
  if (out.strata.empty() || out.Q_R > out.max_Q_N)
    out.lebesgue_case = "ii";
  else if (out.Q_R < out.max_Q_N)
    out.lebesgue_case = "i";
  else
    out.lebesgue_case = "equal";
  return out;
}

}  // namespace srvol
