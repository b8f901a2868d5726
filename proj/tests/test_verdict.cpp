#include "doctest.h"
#include "srvol/builtin.hpp"
#include "srvol/errors.hpp"
#include "srvol/verdict.hpp"

using namespace srvol;

TEST_CASE("point verdicts on the worked examples") {
  auto mart = builtin::martinet();
  auto v = point_verdict(mart, {0, 0, 0}, mart.stratum("S"));
  CHECK(v.conclusion == Conclusion::NotIntegrable);
  CHECK(v.criterion == "Prop. fin / Cor. tre");
  CHECK(v.exact);

  auto ar3 = builtin::almost_riemannian3();
  auto v3 = point_verdict(ar3, {0, 0, 0}, ar3.stratum("S"));
  CHECK(v3.conclusion == Conclusion::NotIntegrable);
  CHECK(v3.inputs.Q_p - v3.inputs.Q_N == 2);

  auto ar4 = builtin::almost_riemannian4();
  auto v4 = point_verdict(ar4, {0, 0, 0, 0}, ar4.stratum("S"));
  CHECK(v4.conclusion == Conclusion::Integrable);
  CHECK(v4.criterion == "Prop. finito");
  CHECK(v4.exact);

  auto ex = builtin::ex_last();
  auto ve = point_verdict(ex, {0, 0, 0, 0}, ex.stratum("S"));
  CHECK(ve.conclusion == Conclusion::Inconclusive);
  CHECK(ve.wants_quadrature);
  CHECK(ve.inputs.rho_min.value == 1);

  for (int k = 1; k <= 4; ++k) {
    auto r5 = builtin::r5_family(k);
    auto vr = point_verdict(r5, {0, 0, 0, 0, 0}, r5.stratum("S"));
    CHECK(vr.inputs.rho_min.value == k - 1);
    CHECK((vr.conclusion == Conclusion::Integrable) == (k <= 2));
  }
}

TEST_CASE("ladder on synthetic reports") {
  RhoReport r;
  r.stratum = "S";
  r.n = 3;
  r.k = 1;
  r.Q_p = 7;
  r.Q_N = 3;
  r.Q_R = 5;
  r.rho_min.value = {1, false};
  r.e_min.value = {1, false};
  r.rho_max.value = 2.5;
  r.rho_max.sigma = 0.1;
  auto v = point_verdict(r);
  CHECK(v.conclusion == Conclusion::Integrable);
  CHECK_FALSE(v.exact);
  r.rho_max.sigma = 0.6;
  CHECK(point_verdict(r).conclusion == Conclusion::Inconclusive);
  r.rho_min.value = {4, true};
  auto w = point_verdict(r);
  CHECK(w.conclusion == Conclusion::NotIntegrable);
  CHECK(w.criterion == "Prop. fin");
}

TEST_CASE("decomposition_report") {
  auto g = decomposition_report(builtin::grushin());
  CHECK(g.dims.Q_R == 2);
  CHECK(g.not_radon);
  CHECK(g.conclusion == Conclusion::NotRadon);
  CHECK(std::find(g.not_radon_criteria.begin(), g.not_radon_criteria.end(), "Cor. th:s>r") != g.not_radon_criteria.end());

  auto m = decomposition_report(builtin::martinet());
  CHECK(m.not_radon_criteria == std::vector<std::string>{"Cor. th:s>r", "Cor. tre"});
  CHECK(m.dims.dim_H == 4);

  auto a4 = decomposition_report(builtin::almost_riemannian4());
  CHECK_FALSE(a4.not_radon);
  CHECK(a4.lebesgue == Conclusion::AbsolutelyContinuous);
  CHECK(a4.conclusion == Conclusion::Integrable);
  CHECK(a4.dims.dim_H == 4);
}

TEST_CASE("generic_verdict") {
  auto a = generic_verdict(3, 2);
  CHECK(a.equality);
  CHECK(a.r == 2);
  CHECK(a.conclusion == Conclusion::NotIntegrable);
  auto b = generic_verdict(4, 2);
  CHECK_FALSE(b.equality);
  CHECK(b.r == 3);
  CHECK(b.min_codim == 2);
  CHECK(b.conclusion == Conclusion::Integrable);
  auto c = generic_verdict(3, 3);
  CHECK(c.equality);
  CHECK(c.r == 1);
  CHECK(c.conclusion == Conclusion::NotIntegrable);
  for (int n = 2; n <= 12; ++n)
    for (int m = 2; m <= n; ++m) CHECK(generic_verdict(n, m).equality == (free_lie_dims(m, generic_verdict(n, m).r) == n));
  CHECK_THROWS_AS(generic_verdict(2, 3), InputError);
}
