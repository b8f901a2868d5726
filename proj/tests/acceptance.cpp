// One PASS/FAIL line per acceptance criterion; exits nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "random_fields.hpp"
#include "srvol/builtin.hpp"
#include "srvol/cli.hpp"
#include "srvol/errors.hpp"
#include "srvol/flags.hpp"
#include "srvol/measure.hpp"
#include "srvol/numerics.hpp"
#include "srvol/random.hpp"
#include "srvol/strata.hpp"
#include "srvol/verdict.hpp"

using namespace srvol;

namespace {

struct Ctx {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <class A, class B>
  void equal(const A& actual, const B& expected, const std::string& what) {
    if (!(actual == expected)) {
      std::ostringstream os;
      os << what << " (got " << show(actual) << ", want " << show(expected) << ")";
      failures.push_back(os.str());
    }
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    if (!(std::abs(actual - expected) <= tol)) {
      std::ostringstream os;
      os << what << " (got " << actual << ", want " << expected << " +- " << tol << ")";
      failures.push_back(os.str());
    }
  }

 private:
  template <class T>
  static std::string show(const T& v) {
    std::ostringstream os;
    if constexpr (requires { v.begin(); } && !std::is_convertible_v<T, std::string>) {
      os << "(";
      bool first = true;
      for (const auto& x : v) {
        os << (first ? "" : ",") << x;
        first = false;
      }
      os << ")";
    } else {
      os << v;
    }
    return os.str();
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<void(Ctx&)> body;
};

Polynomial P(std::size_t n, const char* s) { return Polynomial::parse(s, default_names(n)); }

int Q_R_of(const StructureModel& m) { return q_reg(m, SampleSpec{}).Q_R; }

int Q_N_of(const StructureModel& m, const SubmanifoldChart& N) { return equisingular_check(m, N, 6, 1).Q_N; }

bool has_det(const TupleFamily& F, const Polynomial& p) {
  for (const auto& d : F.dets)
    if (d.poly == p || d.poly == -p) return true;
  return false;
}

std::string dets_of(const TupleFamily& F) {
  std::string s;
  for (const auto& d : F.dets) s += (s.empty() ? "" : "; ") + d.poly.to_string();
  return s;
}

RhoOptions opts() { return RhoOptions{}; }

// Lyndon words of length j over m letters, counted by brute force.
long lyndon_count(int m, int j) {
  long count = 0;
  std::vector<int> w(static_cast<std::size_t>(j), 0);
  while (true) {
    bool lyndon = true;
    for (int s = 1; s < j && lyndon; ++s) {
      std::vector<int> rot(w.begin() + s, w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + s);
      if (!(w < rot)) lyndon = false;
    }
    count += lyndon;
    int k = j - 1;
    while (k >= 0 && w[static_cast<std::size_t>(k)] == m - 1) w[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
    ++w[static_cast<std::size_t>(k)];
  }
  return count;
}

std::vector<StructureModel> example_models() {
  std::vector<StructureModel> out;
  for (const auto& name : builtin::names()) {
    if (name == "r5") {
      for (int k = 1; k <= 4; ++k) out.push_back(builtin::r5_family(k));
    } else {
      out.push_back(builtin::by_name(name));
    }
  }
  return out;
}

void martinet_regression(Ctx& c) {
  auto m = builtin::martinet();
  auto reg = flag_at(m, {1, 0, 0});
  c.equal(reg.growth, std::vector<int>{2, 3}, "regular growth");
  c.equal(reg.Q, 4, "regular Q");
  auto sing = flag_at(m, {0, 0, 0});
  c.equal(sing.growth, std::vector<int>{2, 2, 3}, "singular growth");
  c.equal(sing.Q, 5, "Q(0)");
  auto dims = stratum_dimension_summary(m, SampleSpec{});
  c.equal(dims.strata.at(0).Q_N, 4, "Q_S");
  c.equal(dims.dim_H, 4, "dim_H");

  auto F = enumerate_family(m, 4);
  std::uint64_t state = 11;
  for (int i = 0; i < 50; ++i) {
    auto q = random_rational_point({0, 0, 0}, 2, state);
    Rational best = 0;
    for (const auto& d : F.dets) best = std::max(best, Rational(abs(d.poly.eval(q))));
    c.expect(best == abs(q[0]), "nu_bar != |x1| at " + point_to_string(q));
  }
  auto r = rho_report(m, F, {0, 0, 0}, m.stratum("S"), 4, opts());
  c.equal(r.rho_min.value.value, 1, "rho_min");
  c.expect(!r.rho_min.value.at_least, "rho_min exact");
  c.equal(r.rho_max_exact.value_or(-1), 1, "rho_max exact");
  auto v = point_verdict(r);
  c.equal(to_string(v.conclusion), std::string("NotIntegrable"), "verdict");
  c.equal(v.criterion, std::string("Prop. fin / Cor. tre"), "criterion");
}

void ar3_regression(Ctx& c) {
  auto m = builtin::almost_riemannian3();
  int Q_R = Q_R_of(m);
  c.equal(Q_R, 3, "Q_R");
  c.equal(flag_at(m, {0, 0, 0}).Q, 5, "Q(0)");
  int Q_S = Q_N_of(m, m.stratum("S"));
  c.equal(Q_S, 3, "Q_S");
  auto F = enumerate_family(m, Q_R);
  auto nu2 = nu_squared(F);
  auto base = P(3, "x1^2 + x2^2");
  Rational c2 = nu2.eval(RationalPoint{1, 0, 0});
  c.expect(c2 > 0, "c > 0");
  c.expect(nu2 == Polynomial::constant(3, c2) * base * base, "nu^2 = c^2 (x1^2 + x2^2)^2, got " + nu2.to_string());
  auto r = rho_report(m, F, {0, 0, 0}, m.stratum("S"), Q_S, opts());
  c.equal(r.rho_max_exact.value_or(-1), 2, "homogeneous rho");
  c.equal(r.threshold(), 2, "Q(p) - Q_S");
  c.equal(to_string(point_verdict(r).conclusion), std::string("NotIntegrable"), "verdict");
}

void ar4_regression(Ctx& c) {
  auto m = builtin::almost_riemannian4();
  c.equal(flag_at(m, {0, 0, 0, 0}).Q, 6, "Q(0)");
  const auto& S = m.stratum("S");
  int Q_S = Q_N_of(m, S);
  c.equal(Q_S, 3, "Q_S");
  auto F = enumerate_family(m, Q_R_of(m));
  auto r = rho_report(m, F, {0, 0, 0, 0}, S, Q_S, opts());
  c.equal(r.rho_max_exact.value_or(-1), 2, "homogeneous rho");
  c.equal(to_string(point_verdict(r).conclusion), std::string("Integrable"), "verdict");
  auto chart = Chart::make(m, {0, 0, 0, 0}, &S);
  QuadOptions o;
  auto q1 = quad_diagnose(m, F, chart, S, o, &r);
  o.samples *= 2;
  auto q2 = quad_diagnose(m, F, chart, S, o, &r);
  c.equal(to_string(q1.verdict), std::string("Converges"), "quad verdict");
  c.near(q1.exponent, 0.0, 0.15, "fitted exponent");
  c.near(q2.shell_sum / q1.shell_sum, 1.0, 0.05, "shell sum under sample doubling");
}

void r5_family(Ctx& c) {
  for (int k = 1; k <= 4; ++k) {
    auto m = builtin::r5_family(k);
    const std::string tag = "k=" + std::to_string(k) + ": ";
    auto F = enumerate_family(m, Q_R_of(m));
    c.equal(F.size(), std::size_t{2}, tag + "surviving determinants [" + dets_of(F) + "]");
    const auto& S = m.stratum("S");
    auto r = rho_report(m, F, RationalPoint(5, 0), S, Q_N_of(m, S), opts());
    c.equal(r.rho_min.value.value, k - 1, tag + "rho_min");
    c.expect(!r.rho_min.value.at_least, tag + "rho_min exact");
    c.equal(to_string(point_verdict(r).conclusion), std::string(k <= 2 ? "Integrable" : "NotIntegrable"), tag + "verdict");
  }
}

void ex_last(Ctx& c) {
  auto m = builtin::ex_last();
  auto F = enumerate_family(m, Q_R_of(m));
  c.expect(has_det(F, P(4, "2 x3^2")), "omega_1 = 2 x3^2 not among [" + dets_of(F) + "]");
  c.expect(has_det(F, P(4, "3 x1^2 x3^2 - 2 x2")), "omega_2 = 3 x1^2 x3^2 - 2 x2 not among [" + dets_of(F) + "]");
  const auto& S = m.stratum("S");
  auto r = rho_report(m, F, {0, 0, 0, 0}, S, Q_N_of(m, S), opts());
  c.equal(r.rho_min.value.value, 1, "rho_min");
  c.expect(!r.rho_min.value.at_least, "rho_min exact");
  c.near(r.rho_max.value, 4.0, 0.3, "rho_max estimate");
  c.equal(to_string(point_verdict(r).conclusion), std::string("Inconclusive"), "verdict");
  auto q = quad_diagnose(m, F, Chart::make(m, {0, 0, 0, 0}, &S), S, QuadOptions{}, &r);
  c.equal(to_string(q.verdict), std::string("Converges"), "quad verdict");
}

void grushin(Ctx& c) {
  auto m = builtin::grushin();
  c.equal(to_string(classify_point(m, {0, 0}, m.depth_cap(), Rational(1, 16), 4, 1).classification),
          std::string("Singular"), "(0,0) singular");
  std::uint64_t state = 5;
  for (int i = 0; i < 10; ++i) {
    auto q = random_rational_point({0, 0}, 1, state);
    q[0] = 0;
    c.equal(to_string(classify_point(m, q, m.depth_cap(), Rational(1, 16), 4, 1).classification),
            std::string("Singular"), "singular on x = 0");
  }
  c.equal(to_string(classify_point(m, {1, 0}, m.depth_cap(), Rational(1, 16), 4, 1).classification),
          std::string("Regular"), "(1,0) regular");
  auto d = decomposition_report(m, opts());
  c.equal(d.dims.Q_R, 2, "Q_R");
  c.equal(d.dims.strata.at(0).Q_N, 2, "Q_S");
  c.equal(to_string(d.conclusion), std::string("NotRadon"), "decomposition");
  c.expect(std::find(d.not_radon_criteria.begin(), d.not_radon_criteria.end(), "Cor. th:s>r") != d.not_radon_criteria.end(),
           "th:s>r fired");
}

void generic(Ctx& c) {
  const std::vector<long> want{2, 3, 5, 8};
  long total = 0;
  for (int s = 1; s <= 4; ++s) {
    total += lyndon_count(2, s);
    c.equal(total, want[static_cast<std::size_t>(s - 1)], "Hall count s=" + std::to_string(s));
    c.equal(static_cast<long>(free_lie_dims(2, s)), total, "free_lie_dims(2," + std::to_string(s) + ")");
  }
  auto g3 = generic_verdict(3, 2);
  c.equal(to_string(g3.conclusion), std::string("NotIntegrable"), "generic (3,2)");
  auto g4 = generic_verdict(4, 2);
  c.equal(to_string(g4.conclusion), std::string("Integrable"), "generic (4,2)");
  c.equal(g4.min_codim, 2, "min_codim");
}

void properties(Ctx& c) {
  std::mt19937_64 rng(2024);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 4;
    auto X = testing::random_field(n, 3, rng);
    auto Y = testing::random_field(n, 3, rng);
    auto Z = testing::random_field(n, 3, rng);
    auto p = testing::random_polynomial(n, 3, rng);
    auto q = testing::random_polynomial(n, 3, rng);
    bool ok = lie_bracket(X, Y) == -lie_bracket(Y, X);
    ok = ok && (lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))).is_zero();
    ok = ok && X.apply(p * q) == p * X.apply(q) + q * X.apply(p);
    bad += !ok;
  }
  c.equal(bad, 0, "random fields violating Jacobi, antisymmetry or Leibniz");

  for (const auto& m : example_models()) {
    auto F = enumerate_family(m, Q_R_of(m));
    Rng g(mix_seed(3, m.n));
    const double root = std::sqrt(static_cast<double>(F.size()));
    int violations = 0;
    for (int i = 0; i < 500; ++i) {
      std::vector<double> x(m.n);
      for (auto& v : x) v = g.uniform(-1, 1);
      double a = nu_bar(F, x), b = nu(F, x);
      violations += !(a <= b * (1 + 1e-12) && b <= root * a * (1 + 1e-12));
    }
    c.equal(violations, 0, m.name + ": nu_bar <= nu <= sqrt|F| nu_bar");

    for (const auto& N : m.strata) {
      int Q_N = Q_N_of(m, N);
      for (const auto& p : {N.point(N.domain_center()), RationalPoint(m.n, 0)}) {
        if (!N.parameter_of(p)) continue;
        auto r = rho_min(m, F, p, N, 6, 1);
        auto e = e_min(m, F, p, N, 6, 1);
        const std::string tag = m.name + " " + N.label + " at " + point_to_string(p) + ": ";
        c.expect(e.value.value <= r.value.value, tag + "e_min <= rho_min");
        c.expect(r.value.value >= flag_at(m, p).Q - Q_R_of(m), tag + "rho_min >= Q(p) - Q_R");
        (void)Q_N;
      }
    }

    for (const auto& [name, p] : m.points) {
      auto chart = Chart::make(m, p);
      Rng h(mix_seed(4, m.n));
      double worst = 0;
      for (int i = 0; i < 50; ++i) {
        std::vector<double> x(m.n);
        for (auto& v : x) v = h.uniform(-0.25, 0.25);
        auto back = chart.inverse(chart.map(x));
        for (std::size_t j = 0; j < m.n; ++j) worst = std::max(worst, std::abs(back[j] - x[j]));
      }
      c.expect(worst <= 1e-9, m.name + " chart round trip at " + name + ": " + std::to_string(worst));
      c.expect(is_homogeneous_minus_one(nilpotent_approx(m, chart), chart.weights()),
               m.name + " nilpotent approximation homogeneous at " + name);
    }
  }
}

void ballbox(Ctx& c) {
  auto h = builtin::heisenberg();
  auto m = builtin::martinet();
  struct Case {
    const StructureModel* model;
    RationalPoint p;
    std::string tag;
  };
  for (const auto& k : {Case{&h, {0, 0, 0}, "heisenberg origin"}, Case{&m, {1, 0, 0}, "martinet regular"},
                        Case{&m, {0, 0, 0}, "martinet singular"}}) {
    auto res = ballbox_check(*k.model, Chart::make(*k.model, k.p), {0.5, 0.25, 0.125}, 2000, 1);
    c.expect(res.pass, k.tag + " ball-box");
    c.equal(res.unreached, 0, k.tag + " unreached targets");
  }
}

void martinet_divergence(Ctx& c) {
  auto m = builtin::martinet();
  const auto& S = m.stratum("S");
  auto F = enumerate_family(m, 4);
  auto r = rho_report(m, F, {0, 0, 0}, S, 4, opts());
  auto q = quad_diagnose(m, F, Chart::make(m, {0, 0, 0}, &S), S, QuadOptions{}, &r);
  c.near(q.exponent, -1.0, 0.15, "fitted exponent");
  c.equal(to_string(q.verdict), std::string("Diverges"), "quad verdict");
  c.expect(q.predicted_upper && *q.predicted_upper == -1.0, "predicted Q(p) - Q_N - 1 - rho_min = -1");
}

void determinism(Ctx& c) {
  struct Run {
    std::string command, model;
    cli::RunOptions o;
  };
  auto opt = [](std::optional<std::string> point, std::optional<std::string> stratum, std::optional<int> samples = {}) {
    cli::RunOptions o;
    o.point = std::move(point);
    o.stratum = std::move(stratum);
    o.samples = samples;
    o.seed = 42;
    return o;
  };
  std::vector<Run> runs{{"flags", "martinet", opt({}, {})},
                        {"strata", "exlast", opt({}, {})},
                        {"nu", "exlast", opt("origin", {})},
                        {"rho", "exlast", opt({}, "S")},
                        {"verdict", "exlast", opt({}, "S")},
                        {"verdict", "martinet", opt({}, {})},
                        {"quad", "martinet", opt({}, "S")},
                        {"ballbox", "martinet", opt("origin", {}, 300)},
                        {"examples", "martinet", opt({}, {})}};
  for (auto& r : runs) {
    auto a = cli::run(r.command, builtin::by_name(r.model), r.o).json["results"].dump();
    auto b = cli::run(r.command, builtin::by_name(r.model), r.o).json["results"].dump();
    c.expect(a == b, r.command + " on " + r.model + " is not reproducible");
  }
  auto o = opt({}, "S");
  o.format = "csv";
  c.expect(cli::run("quad", builtin::martinet(), o).csv == cli::run("quad", builtin::martinet(), o).csv,
           "quad csv is not reproducible");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Martinet regression", 5, martinet_regression},
      {2, "R^3 almost-Riemannian", 10, ar3_regression},
      {3, "R^4 almost-Riemannian", 60, ar4_regression},
      {4, "R^5 family k=1..4", 30, r5_family},
      {5, "ex_last", 120, ex_last},
      {6, "Grushin", 5, grushin},
      {7, "generic criterion", 1, generic},
      {8, "property suites", 60, properties},
      {9, "Ball-Box empirical", 120, ballbox},
      {10, "Martinet divergence", 60, martinet_divergence},
      {11, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Ctx c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > cr.limit_s) c.failures.push_back("took " + std::to_string(s) + " s, limit " + std::to_string(cr.limit_s) + " s");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s %2d %-24s %7.2f s", ok ? "PASS" : "FAIL", cr.id, cr.name.c_str(), s);
    for (std::size_t i = 0; i < c.failures.size(); ++i) std::printf("%s%s", i ? "; " : "  ", c.failures[i].c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
