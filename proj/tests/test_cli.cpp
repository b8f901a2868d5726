#include "doctest.h"
#include "srvol/builtin.hpp"
#include "srvol/cli.hpp"
#include "srvol/errors.hpp"

using namespace srvol;

namespace {
const char* kMartinetJson = R"({
  "dim": 3,
  "vars": ["x", "y", "z"],
  "fields": [["1", "0", "0"], ["0", "1", "1/2 x^2"]],
  "strata": [{"label": "S", "k": 2, "map": ["0", "u1", "u2"], "domain": [["-1", "1"], ["-1", "1"]]}],
  "points": {"p": ["0.5", "1/3", "-2"]}
})";
}

TEST_CASE("model files") {
  auto m = cli::parse_model(kMartinetJson);
  CHECK(m.n == 3);
  CHECK(m.m() == 2);
  CHECK(m.family[1] == builtin::martinet().family[1]);
  CHECK(m.point("p") == RationalPoint{Rational(1, 2), Rational(1, 3), Rational(-2)});
  CHECK(m.point("origin") == RationalPoint(3, 0));
  CHECK(m.stratum("S").k == 2);

  CHECK_THROWS_AS(cli::parse_model(R"({"dim": 2})"), SyntaxError);
  CHECK_THROWS_WITH_AS(cli::parse_model(R"({"dim": 2})"), doctest::Contains("fields"), SyntaxError);
  CHECK_THROWS_AS(cli::parse_model(R"({"dim": 2, "fields": [["1", "0"]], "volume_density": "x0"})"), UnknownVariable);
  CHECK_THROWS_AS(cli::parse_model(R"({"dim": 2, "fields": [["1"]]})"), DimensionMismatch);
  CHECK_THROWS_WITH_AS(cli::parse_model("{\"dim\": 2,\n \"fields\": [[1,]]}"), doctest::Contains("line 2"), SyntaxError);
  CHECK_THROWS_AS(cli::parse_model("/nonexistent/model.json"), InputError);
}

TEST_CASE("numbers and points") {
  CHECK(cli::parse_number("3") == 3);
  CHECK(cli::parse_number("-3/6") == Rational(-1, 2));
  CHECK(cli::parse_number("0.125") == Rational(1, 8));
  CHECK(cli::parse_number("-1.5e-2") == Rational(-3, 200));
  CHECK_THROWS_AS(cli::parse_number("1.2.3"), SyntaxError);
  auto m = builtin::martinet();
  CHECK(cli::parse_point(m, "regular") == RationalPoint{1, 0, 0});
  CHECK(cli::parse_point(m, "1, 1/2, 0.5") == RationalPoint{1, Rational(1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(cli::parse_point(m, "1,2"), DimensionMismatch);
  CHECK_THROWS_AS(cli::parse_point(m, "nowhere"), InputError);
}

TEST_CASE("commands") {
  cli::RunOptions o;
  o.point = "origin";
  auto f = cli::run("flags", builtin::heisenberg(), o);
  const auto& r = f.json["results"]["flags"][0];
  CHECK(r["growth"] == nlohmann::ordered_json({2, 3}));
  CHECK(r["Q"] == 4);
  CHECK(f.json["schema_version"] == cli::kSchemaVersion);

  o.stratum = "S";
  auto v = cli::run("verdict", builtin::martinet(), o);
  CHECK(v.json["results"]["verdict"]["conclusion"] == "NotIntegrable");
  CHECK(v.json["results"]["verdict"]["criterion"] == "Prop. fin / Cor. tre");

  auto fromfile = cli::run("verdict", cli::parse_model(kMartinetJson), o);
  CHECK(fromfile.json["results"] == v.json["results"]);

  o.format = "csv";
  o.samples = 256;
  auto q = cli::run("quad", builtin::almost_riemannian4(), o);
  CHECK(q.csv.rfind("lambda,I\n", 0) == 0);
  CHECK(std::count(q.csv.begin(), q.csv.end(), '\n') == 9);

  CHECK_THROWS_AS(cli::run("nosuch", builtin::martinet(), {}), InputError);
  cli::RunOptions tight;
  tight.budget = 1;
  CHECK_THROWS_AS(cli::run("nu", builtin::ex_last(), tight), CombinatorialBudgetExceeded);
}

TEST_CASE("results are reproducible for a fixed seed") {
  cli::RunOptions o;
  o.stratum = "S";
  o.seed = 7;
  auto a = cli::run("rho", builtin::ex_last(), o);
  auto b = cli::run("rho", builtin::ex_last(), o);
  CHECK(a.json["results"].dump() == b.json["results"].dump());
  CHECK(a.json["seed"] == 7);

  auto e = cli::run("examples", {}, {});
  CHECK(e.exit_code == 0);
  CHECK(e.json["results"]["all_ok"] == true);
}
