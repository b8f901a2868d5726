#include "srvol/verdict.hpp"

#include <algorithm>
#include <sstream>

#include "srvol/errors.hpp"
#include "srvol/flags.hpp"

namespace srvol {

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::Integrable: return "Integrable";
    case Conclusion::NotIntegrable: return "NotIntegrable";
    case Conclusion::NotRadon: return "NotRadon";
    case Conclusion::MutuallySingular: return "MutuallySingular";
    case Conclusion::AbsolutelyContinuous: return "AbsolutelyContinuous";
    case Conclusion::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {
std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : " / ") + p;
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << v;
  return os.str();
}
}  // namespace

Verdict point_verdict(const RhoReport& r) {
  Verdict v;
  v.stratum = r.stratum;
  v.p = r.p;
  auto& in = v.inputs;
  in.Q_p = r.Q_p;
  in.Q_N = r.Q_N;
  in.Q_R = r.Q_R;
  in.rho_min = r.rho_min.value;
  in.e_min = r.e_min.value;
  in.rho_max = r.rho_max.value;
  in.rho_max_sigma = r.rho_max.sigma;
  in.rho_exact = r.rho_max_exact;
  in.codim = r.codim();
  const int thr = r.threshold();

  std::vector<std::string> fired;
  bool integrable = false, not_integrable = false, exact_integrable = false;

  std::optional<Conclusion> homogeneous;
  if (r.rho_max_exact) {
    homogeneous = *r.rho_max_exact < thr ? Conclusion::Integrable : Conclusion::NotIntegrable;
    v.notes.push_back("nu is homogeneous of transverse degree " + std::to_string(*r.rho_max_exact));
  }
  // an at-least order still bounds the true order from below
  if (in.rho_min.value >= thr) {
    fired.push_back("Prop. fin");
    not_integrable = true;
  }
  if (!in.e_min.at_least && in.e_min.value >= in.codim) {
    fired.push_back(in.codim == 1 ? "Cor. tre" : "Prop. le:domega=0");
    not_integrable = true;
  }
  if (r.rho_max_exact) {
    if (*r.rho_max_exact < thr) {
      fired.push_back("Prop. finito");
      integrable = exact_integrable = true;
    }
  } else if (in.rho_max + 3 * in.rho_max_sigma < thr) {
    fired.push_back("Prop. finito");
    integrable = true;
    v.notes.push_back("rho_max " + fmt(in.rho_max) + " +- " + fmt(in.rho_max_sigma) + " is a fitted estimate");
  }
  if (homogeneous == Conclusion::NotIntegrable) not_integrable = true;

  if (integrable && not_integrable) {
    v.conclusion = Conclusion::Inconclusive;
    v.notes.push_back("criteria disagree: " + join(fired));
    v.wants_quadrature = true;
  } else if (not_integrable) {
    v.conclusion = Conclusion::NotIntegrable;
    v.exact = true;
  } else if (integrable) {
    v.conclusion = Conclusion::Integrable;
    v.exact = exact_integrable;
  } else {
    v.conclusion = Conclusion::Inconclusive;
    v.wants_quadrature = true;
    v.notes.push_back("rho_min = " + in.rho_min.to_string() + " < " + std::to_string(thr) + " <= rho_max ~ " +
                      fmt(in.rho_max));
  }
  v.criterion = fired.empty() ? (homogeneous ? "homogeneous nu" : "") : join(fired);
  if (!r.rho_min.stabilized) v.notes.push_back("rho_min changed between the two smallest sample boxes");
  return v;
}

Verdict point_verdict(const StructureModel& model, const RationalPoint& p, const SubmanifoldChart& N,
                      const RhoOptions& options, const SampleSpec& regular) {
  auto rep = equisingular_check(model, N, options.sample_count, options.seed);
  if (!rep.equisingular) throw CertificationError("NotEquisingular", N.label + " is not equisingular");
  int Q_R = q_reg(model, regular).Q_R;
  auto F = enumerate_family(model, Q_R);
  return point_verdict(rho_report(model, F, p, N, rep.Q_N, options));
}

DecompositionReport decomposition_report(const StructureModel& model, const RhoOptions& options,
                                         const SampleSpec& regular) {
  DecompositionReport d;
  d.dims = stratum_dimension_summary(model, regular, options.sample_count, options.seed);
  const int Q_R = d.dims.Q_R;
  if (d.dims.lebesgue_case == "i") {
    d.lebesgue = Conclusion::MutuallySingular;
    d.notes.push_back("dim_H R < dim_H S: vol_H is carried by the singular set");
  } else if (d.dims.lebesgue_case == "ii") {
    d.lebesgue = Conclusion::AbsolutelyContinuous;
    d.notes.push_back("dim_H R > dim_H S: vol_H equals its regular part");
  } else {
    d.lebesgue = Conclusion::AbsolutelyContinuous;
    d.notes.push_back("dim_H R = dim_H S: the regular part is absolutely continuous, the singular part is not");
  }

  if (!d.dims.strata.empty() && d.dims.max_Q_N >= Q_R) {
    d.not_radon_criteria.push_back("Cor. th:s>r");
    for (const auto& s : d.dims.strata)
      if (s.Q_N >= Q_R)
        d.notes.push_back("stratum " + s.label + " has Q_N = " + std::to_string(s.Q_N) + " >= Q_R = " +
                          std::to_string(Q_R));
  }
  bool codim1 = false;
  for (const auto& s : d.dims.strata) {
    if (static_cast<int>(model.n) - s.k == 1) {
      codim1 = true;
      d.notes.push_back("stratum " + s.label + " has codimension 1");
    }
  }
  if (codim1) d.not_radon_criteria.push_back("Cor. tre");
  d.not_radon = !d.not_radon_criteria.empty();

  auto F = enumerate_family(model, Q_R);
  for (std::size_t i = 0; i < model.strata.size(); ++i) {
    const auto& N = model.strata[i];
    RationalPoint p = N.point(N.domain_center());
    d.stratum_verdicts.push_back(point_verdict(rho_report(model, F, p, N, d.dims.strata[i].Q_N, options)));
  }

  if (d.not_radon) {
    d.conclusion = Conclusion::NotRadon;
  } else if (!d.stratum_verdicts.empty() &&
             std::any_of(d.stratum_verdicts.begin(), d.stratum_verdicts.end(),
                         [](const Verdict& v) { return v.conclusion == Conclusion::NotIntegrable; })) {
    d.conclusion = Conclusion::NotIntegrable;
  } else if (std::all_of(d.stratum_verdicts.begin(), d.stratum_verdicts.end(),
                         [](const Verdict& v) { return v.conclusion == Conclusion::Integrable; })) {
    d.conclusion = Conclusion::Integrable;
  } else {
    d.conclusion = Conclusion::Inconclusive;
  }
  return d;
}

GenericVerdict generic_verdict(int n, int m) {
  if (m < 1 || n < m) throw InputError("InvalidArgument", "generic_verdict needs 1 <= m <= n");
  GenericVerdict g;
  g.n = n;
  g.m = m;
  int r = 1;
  while (free_lie_dims(m, r) < n) ++r;
  g.r = r;
  g.n_tilde_r = free_lie_dims(m, r);
  g.equality = g.n_tilde_r == n;
  g.min_codim = g.n_tilde_r - n + 1;
  if (g.equality) {
    g.conclusion = Conclusion::NotIntegrable;
    g.note = "the regular-part volume is not locally integrable near the generic singular set";
  } else {
    g.conclusion = Conclusion::Integrable;
    g.note = "integrable near strata of minimal codimension " + std::to_string(g.min_codim);
  }
  return g;
}

}  // namespace srvol
