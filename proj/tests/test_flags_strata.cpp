#include <random>

#include "doctest.h"
#include "srvol/builtin.hpp"
#include "srvol/errors.hpp"
#include "srvol/strata.hpp"

using namespace srvol;

namespace {
// Brute-force count of Lyndon words of length j over m letters (a Hall basis of the free Lie algebra).
long lyndon_count(int m, int j) {
  long count = 0;
  std::vector<int> w(static_cast<std::size_t>(j), 0);
  while (true) {
    bool lyndon = true;
    for (int s = 1; s < j && lyndon; ++s) {
      // w must be strictly smaller than its rotation by s
      std::vector<int> rot(w.begin() + s, w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + s);
      if (!(w < rot)) lyndon = false;
    }
    if (lyndon) ++count;
    int k = j - 1;
    while (k >= 0 && w[static_cast<std::size_t>(k)] == m - 1) w[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
    ++w[static_cast<std::size_t>(k)];
  }
  return count;
}
}  // namespace

TEST_CASE("flag_at on paper examples") {
  auto mart = builtin::martinet();
  auto reg = flag_at(mart, {1, 0, 0});
  CHECK(reg.growth == std::vector<int>{2, 3});
  CHECK(reg.weights == std::vector<int>{1, 1, 2});
  CHECK(reg.Q == 4);
  auto sing = flag_at(mart, {0, 0, 0});
  CHECK(sing.growth == std::vector<int>{2, 2, 3});
  CHECK(sing.Q == 5);
  auto ar4 = flag_at(builtin::almost_riemannian4(), {0, 0, 0, 0});
  CHECK(ar4.growth == std::vector<int>{3, 3, 4});
  CHECK(ar4.Q == 6);
  CHECK_THROWS_AS(flag_at(mart, {0, 0, 0}, 2), NotBracketGeneratingAtDepth);
  CHECK_THROWS_AS(flag_at(mart, {0, 0}, 3), DimensionMismatch);

  auto ex = flag_at(builtin::ex_last(), {0, 0, 0, 0});
  CHECK(ex.growth == std::vector<int>{2, 3, 3, 4});
  CHECK(ex.Q == 8);
  for (int k = 2; k <= 4; ++k) {
    auto f = flag_at(builtin::r5_family(k), RationalPoint(5, 0));
    CHECK(f.growth == std::vector<int>{3, 4, 5});
    CHECK(f.Q == 8);
  }
}

TEST_CASE("classify_point") {
  auto g = builtin::grushin();
  auto r = classify_point(g, {1, 0}, 4, Rational(1, 4), 6, 11);
  CHECK(r.classification == PointClass::Regular);
  CHECK(r.growth == std::vector<int>{2});
  auto s = classify_point(g, {0, 0}, 4, Rational(1, 4), 6, 11);
  CHECK(s.classification == PointClass::Singular);
  // lower semicontinuity witness
  for (const auto& p : s.probes) {
    auto f = flag_at(g, p);
    for (std::size_t i = 0; i < std::min(f.growth.size(), s.growth.size()); ++i) CHECK(f.growth[i] >= s.growth[i]);
  }
  auto h = builtin::heisenberg();
  std::uint64_t state = 3;
  for (int i = 0; i < 10; ++i) {
    auto q = random_rational_point({0, 0, 0}, 4, state);
    auto c = classify_point(h, q, 6, Rational(1, 2), 3, i);
    CHECK(c.classification == PointClass::Regular);
    CHECK(c.growth == std::vector<int>{2, 3});
  }
}

TEST_CASE("q_reg") {
  SampleSpec spec;
  CHECK(q_reg(builtin::martinet(), spec).Q_R == 4);
  CHECK(q_reg(builtin::almost_riemannian3(), spec).Q_R == 3);
  for (int k = 1; k <= 4; ++k) CHECK(q_reg(builtin::r5_family(k), spec).Q_R == 7);
  CHECK(q_reg(builtin::ex_last(), spec).Q_R == 7);
  CHECK(q_reg(builtin::grushin(), spec).Q_R == 2);
}

TEST_CASE("free_lie_dims") {
  CHECK(free_lie_dims(2, 1) == 2);
  CHECK(free_lie_dims(2, 2) == 3);
  CHECK(free_lie_dims(2, 3) == 5);
  CHECK(free_lie_dims(2, 4) == 8);
  for (int s = 1; s <= 6; ++s) CHECK(free_lie_dims(1, s) == 1);
  CHECK(free_lie_dims(3, 2) == 6);
  for (int m = 1; m <= 3; ++m) {
    long total = 0;
    for (int s = 1; s <= 5; ++s) {
      total += lyndon_count(m, s);
      CHECK(free_lie_dims(m, s) == total);
    }
  }
}

TEST_CASE("flag invariants") {
  std::uint64_t state = 17;
  for (const auto& name : builtin::names()) {
    auto m = builtin::by_name(name, 3);
    for (int i = 0; i < 5; ++i) {
      auto q = random_rational_point(RationalPoint(m.n, 0), 1, state);
      auto f = flag_at(m, q);
      int sum = 0;
      for (int w : f.weights) sum += w;
      CHECK(sum == f.Q);
      CHECK(f.growth.back() == static_cast<int>(m.n));
      for (std::size_t j = 1; j < f.growth.size(); ++j) CHECK(f.growth[j] >= f.growth[j - 1]);
    }
  }
}

TEST_CASE("restricted flag") {
  auto mart = builtin::martinet();
  for (auto u : {RationalPoint{0, 0}, RationalPoint{Rational(1, 3), -2}})
    CHECK(restricted_flag_at(mart, mart.stratum("S"), u) == std::vector<int>{1, 1, 2});
  auto g = builtin::grushin();
  CHECK(restricted_flag_at(g, g.stratum("S"), {Rational(1, 2)}) == std::vector<int>{0, 1});
  auto ar4 = builtin::almost_riemannian4();
  CHECK(restricted_flag_at(ar4, ar4.stratum("S"), {0}) == std::vector<int>{0, 0, 1});

  // full-dimensional identity chart reproduces the ambient growth
  auto full = builtin::make_stratum("M", 3, 3, {"u1", "u2", "u3"}, {{"-1", "1"}, {"-1", "1"}, {"-1", "1"}});
  for (auto u : {RationalPoint{0, 0, 0}, RationalPoint{1, 2, 3}})
    CHECK(restricted_flag_at(mart, full, u) == flag_at(mart, u).growth);

  auto bad = builtin::make_stratum("B", 3, 1, {"u1^2", "0", "0"}, {{"-1", "1"}});
  CHECK_THROWS_AS(restricted_flag_at(mart, bad, {0}), ImmersionFailure);
}

TEST_CASE("equisingular_check") {
  auto mart = builtin::martinet();
  auto r = equisingular_check(mart, mart.stratum("S"), 6, 3);
  CHECK(r.equisingular);
  CHECK(r.Q_N == 4);
  CHECK(r.Q_ambient == 5);
  auto r5 = builtin::r5_family(3);
  auto s5 = equisingular_check(r5, r5.stratum("S"), 6, 3);
  CHECK(s5.equisingular);
  CHECK(s5.Q_N == 6);
  CHECK(s5.restricted_growth == std::vector<int>{1, 2, 3});
  auto ar3 = builtin::almost_riemannian3();
  CHECK(equisingular_check(ar3, ar3.stratum("S"), 6, 3).Q_N == 3);
  auto ex = builtin::ex_last();
  auto se = equisingular_check(ex, ex.stratum("S"), 8, 3);
  CHECK(se.equisingular);
  CHECK(se.Q_N == 5);
  CHECK(se.restricted_growth == std::vector<int>{1, 1, 1, 2});

  // the growth changes at x1 = 1 on the singular plane
  auto wide = builtin::make_stratum("W", 4, 2, {"u1", "0", "0", "u2"}, {{"-2", "2"}, {"-1", "1"}});
  CHECK(flag_at(ex, {1, 0, 0, 0}).growth != flag_at(ex, {0, 0, 0, 0}).growth);
  CHECK(restricted_flag(ex, wide, {1, 0}).ambient.growth != restricted_flag(ex, wide, {0, 0}).ambient.growth);
}

TEST_CASE("stratum_dimension_summary") {
  SampleSpec spec;
  auto m = stratum_dimension_summary(builtin::martinet(), spec);
  CHECK(m.dim_H == 4);
  CHECK(m.Q_R == 4);
  CHECK(m.max_Q_N == 4);
  auto a4 = stratum_dimension_summary(builtin::almost_riemannian4(), spec);
  CHECK(a4.dim_H == 4);
  CHECK(a4.max_Q_N == 3);
  CHECK(a4.lebesgue_case == "ii");
  auto a3 = stratum_dimension_summary(builtin::almost_riemannian3(), spec);
  CHECK(a3.dim_H == 3);
  CHECK(a3.lebesgue_case == "equal");
}
