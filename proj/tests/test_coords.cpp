#include <cmath>
#include <random>

#include "doctest.h"
#include "srvol/builtin.hpp"
#include "srvol/coords.hpp"
#include "srvol/errors.hpp"
#include "srvol/flags.hpp"

using namespace srvol;

namespace {
VectorField field(std::size_t n, std::initializer_list<const char*> comps) {
  std::vector<Polynomial> c;
  for (auto s : comps) c.push_back(Polynomial::parse(s, default_names(n)));
  return VectorField(std::move(c));
}
}  // namespace

TEST_CASE("adapted_basis") {
  auto h = builtin::heisenberg();
  auto b = adapted_basis(h, {0, 0, 0});
  CHECK(b.labels == std::vector<std::string>{"X1", "X2", "X12"});
  CHECK(b.lengths == std::vector<int>{1, 1, 2});

  auto mart = builtin::martinet();
  auto r = adapted_basis(mart, {1, 0, 0});
  CHECK(r.labels == std::vector<std::string>{"X1", "X2", "X12"});

  auto s = adapted_basis(mart, {0, 0, 0}, &mart.stratum("S"));
  CHECK(s.tangent_count == 2);
  CHECK(s.labels == std::vector<std::string>{"X2", "X112", "X1"});
  CHECK(s.lengths == std::vector<int>{1, 3, 1});
}

TEST_CASE("adapted_basis needs tangent combinations when brackets are not tangent") {
  // the diagonal is tangent to neither generator
  auto m = builtin::make_model("tilted", 2, {{"1", "0"}, {"0", "1"}});
  auto N = builtin::make_stratum("D", 2, 1, {"u1", "u1"}, {{"-1", "1"}});
  CHECK_THROWS_AS(adapted_basis(m, {0, 0}, &N), CannotRealizeRestrictedFlag);
  N.tangent_fields.push_back(field(2, {"1", "1"}));
  N.tangent_lengths.push_back(1);
  auto b = adapted_basis(m, {0, 0}, &N);
  CHECK(b.tangent_count == 1);
  CHECK(b.labels.front() == "T1");
}

TEST_CASE("dilation and pseudo-norm") {
  Dilation d{{1, 1, 2}};
  std::vector<double> x{1, 1, 1};
  auto y = dilate(d, 2.0, x);
  CHECK(y == std::vector<double>{2, 2, 4});
  std::vector<double> z{0, 0, 4};
  CHECK(pseudo_norm(d, z) == doctest::Approx(2.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v{U(rng), U(rng), U(rng)};
    CHECK(std::abs(pseudo_norm(d, dilate(d, 3.0, v)) - 3.0 * pseudo_norm(d, v)) < 1e-12);
  }
  RationalPoint rp{1, 2, 3};
  CHECK(dilate(d, Rational(1, 2), rp) == RationalPoint{Rational(1, 2), 1, Rational(3, 4)});
}

TEST_CASE("identity charts where input coordinates are privileged") {
  auto mart = builtin::martinet();
  auto c = Chart::make(mart, {0, 0, 0}, &mart.stratum("S"));
  CHECK(c.kind() == Chart::Kind::Identity);
  CHECK(c.weights() == std::vector<int>{1, 1, 3});
  CHECK(c.tangent_coords() == std::vector<std::size_t>{1, 2});
  CHECK(c.transverse_coords() == std::vector<std::size_t>{0});
  CHECK(coordinate_orders(builtin::heisenberg(), {0, 0, 0}) == std::vector<int>{1, 1, 2});
  CHECK_THROWS_AS(Chart::identity(mart, {1, 0, 0}), PrivilegedCertificationFailed);
  auto ex = builtin::ex_last();
  auto ce = Chart::make(ex, {0, 0, 0, 0}, &ex.stratum("S"));
  CHECK(ce.kind() == Chart::Kind::Identity);
  CHECK(ce.weights() == std::vector<int>{1, 1, 2, 4});
}

TEST_CASE("exponential chart") {
  auto h = builtin::heisenberg();
  auto chart = Chart::exponential(h, adapted_basis(h, {0, 0, 0}));
  std::vector<double> zero{0, 0, 0};
  CHECK(chart_map(chart, zero) == std::vector<double>{0, 0, 0});
  std::vector<double> x{0.3, -0.7, 0};
  auto q = chart_map(chart, x);
  CHECK(q[0] == doctest::Approx(0.3));
  CHECK(q[1] == doctest::Approx(-0.7));
  CHECK(q[2] == doctest::Approx(0.3 * -0.7).epsilon(1e-12));

  auto mart = builtin::martinet();
  auto cm = Chart::make(mart, {1, 0, 0});
  CHECK(cm.kind() == Chart::Kind::Exponential);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v{U(rng), U(rng), U(rng)};
    auto back = chart_inverse(cm, chart_map(cm, v));
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(back[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(j)]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("exact jets agree with the integrated chart") {
  auto mart = builtin::martinet();
  auto cm = Chart::make(mart, {1, 0, 0});
  // the degree-D jet of each coordinate of Phi approximates the flow to O(|x|^(D+1))
  auto jets = pushforward_jets(mart, cm, 3);
  // pushforward of X1 at the origin is the first coordinate vector (Z1 = X1)
  CHECK(jets[0][0].eval(RationalPoint{0, 0, 0}) == 1);
  CHECK(jets[0][1].eval(RationalPoint{0, 0, 0}) == 0);
  CHECK(jets[1][1].eval(RationalPoint{0, 0, 0}) == 1);
  CHECK(has_weighted_order_at_least_minus_one(jets, cm.weights()));
}

TEST_CASE("nilpotent_approx") {
  auto h = builtin::heisenberg();
  auto hc = Chart::make(h, {0, 0, 0});
  CHECK(nilpotent_approx(h, hc) == h.family);

  auto mart = builtin::martinet();
  auto mc = Chart::make(mart, {0, 0, 0});
  auto nm = nilpotent_approx(mart, mc);
  CHECK(nm == mart.family);
  CHECK(is_homogeneous_minus_one(nm, mc.weights()));

  auto g = builtin::grushin();
  auto gc = Chart::make(g, {0, 0});
  CHECK(gc.weights() == std::vector<int>{1, 2});
  CHECK(nilpotent_approx(g, gc) == g.family);

  // at a regular Martinet point the tangent cone is a Heisenberg group
  auto rc = Chart::make(mart, {1, 0, 0});
  auto nr = nilpotent_approx(mart, rc);
  CHECK(is_homogeneous_minus_one(nr, rc.weights()));
  StructureModel nil("nil", nr, Polynomial::constant(3, 1));
  CHECK(flag_at(nil, {0, 0, 0}).growth == std::vector<int>{2, 3});
  CHECK(flag_at(nil, {Rational(1, 3), 2, -1}).growth == std::vector<int>{2, 3});

  // jet truncation consistency: X - Xhat has weighted order >= w_j in every component
  for (const auto& [model, p] : std::vector<std::pair<StructureModel, RationalPoint>>{
           {mart, {1, 0, 0}}, {mart, {0, 0, 0}}, {builtin::ex_last(), {0, 0, 0, 0}}, {g, {0, 0}}}) {
    auto chart = Chart::make(model, p);
    auto w = chart.weights();
    int wmax = *std::max_element(w.begin(), w.end());
    auto jets = pushforward_jets(model, chart, wmax + 1);
    auto nil_fields = nilpotent_approx(model, chart);
    for (std::size_t i = 0; i < jets.size(); ++i) {
      auto diff = jets[i] - nil_fields[i];
      for (std::size_t j = 0; j < diff.dim(); ++j)
        if (!diff[j].is_zero()) CHECK(diff[j].min_weighted_degree(w) >= w[j]);
    }
  }
}
