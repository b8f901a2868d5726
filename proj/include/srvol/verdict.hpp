#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srvol/measure.hpp"
#include "srvol/strata.hpp"

namespace srvol {

enum class Conclusion { Integrable, NotIntegrable, NotRadon, MutuallySingular, AbsolutelyContinuous, Inconclusive };
std::string to_string(Conclusion c);

struct VerdictInputs {
  int Q_p = 0;
  int Q_N = 0;
  int Q_R = 0;
  Order rho_min;
  Order e_min;
  double rho_max = 0;
  double rho_max_sigma = 0;
  std::optional<int> rho_exact;
  int codim = 0;
};

struct Verdict {
  std::string stratum;
  RationalPoint p;
  Conclusion conclusion = Conclusion::Inconclusive;
  std::string criterion;  // citation keys of every criterion that fired, joined by " / "
  bool exact = false;     // false when the conclusion rests on the fitted rho_max
  bool wants_quadrature = false;
  VerdictInputs inputs;
  std::vector<std::string> notes;
};

Verdict point_verdict(const RhoReport& report);
// Computes the stratum and rho reports first.
Verdict point_verdict(const StructureModel& model, const RationalPoint& p, const SubmanifoldChart& N,
                      const RhoOptions& options = {}, const SampleSpec& regular = {});

struct DecompositionReport {
  StratumDimensions dims;
  Conclusion lebesgue = Conclusion::AbsolutelyContinuous;  // relation between vol_H and the smooth volume
  bool not_radon = false;
  std::vector<std::string> not_radon_criteria;
  Conclusion conclusion = Conclusion::Inconclusive;
  std::vector<std::string> notes;
  std::vector<Verdict> stratum_verdicts;  // at the domain center of each stratum
};

DecompositionReport decomposition_report(const StructureModel& model, const RhoOptions& options = {},
                                         const SampleSpec& regular = {});

struct GenericVerdict {
  int n = 0;
  int m = 0;
  bool equality = false;  // n equals the free dimension at step r
  int r = 0;
  std::int64_t n_tilde_r = 0;
  std::int64_t min_codim = 0;
  Conclusion conclusion = Conclusion::Inconclusive;
  std::string criterion = "Prop. gensmo";
  std::string note;
  std::string case_name() const { return equality ? "Equality" : "Strict"; }
};

GenericVerdict generic_verdict(int n, int m);

}  // namespace srvol
