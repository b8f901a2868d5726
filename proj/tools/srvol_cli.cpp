#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "srvol/cli.hpp"
#include "srvol/errors.hpp"

namespace {

int exit_code_for(const srvol::Error& e) {
  switch (e.category()) {
    case srvol::Error::Category::Input: return 2;
    case srvol::Error::Category::Certification:
    case srvol::Error::Category::Budget:
    case srvol::Error::Category::Numerical: return 3;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srvol: volumes of singular sub-Riemannian structures"};
  app.require_subcommand(0, 1);

  srvol::cli::RunOptions o;
  std::string command;
  std::string out_path;
  int k = 3;
  bool k_given = false;

  app.add_option("command", command, "flags | strata | nu | rho | verdict | quad | ballbox | examples");
  auto add_common = [&](CLI::App* a) {
    a->add_option("--model,-m", o.model_arg, "built-in name, JSON file or JSON text");
    a->add_option("--point,-p", o.point, "named point or comma-separated coordinates");
    a->add_option("--stratum,-s", o.stratum, "stratum label");
    a->add_option("--seed", o.seed, "random seed")->capture_default_str();
    a->add_option("--depth", o.depth, "bracket depth cap");
    a->add_option("--budget", o.budget, "tuple budget");
    a->add_option("--shells", o.shells, "quadrature shells")->capture_default_str();
    a->add_option("--samples", o.samples, "samples per shell, trajectories, or grid resolution");
    a->add_option("--k", k, "parameter of the r5 family")->each([&](const std::string&) { k_given = true; });
    a->add_option("--out,-o", out_path, "write output to this file");
    a->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  };
  add_common(&app);
  for (const auto& c : srvol::cli::commands()) {
    auto* sub = app.add_subcommand(c);
    sub->callback([&command, c] { command = c; });
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (command.empty()) {
    std::cerr << "error: no command given\n" << app.help();
    return 2;
  }
  if (k_given) o.k = k;

  try {
    srvol::StructureModel model;
    if (command != "examples") {
      if (o.model_arg.empty()) throw srvol::InputError("InvalidArgument", "--model is required");
      model = srvol::cli::resolve_model(o.model_arg, k);
    }
    auto rep = srvol::cli::run(command, std::move(model), o);
    std::string text = o.format == "csv" ? rep.csv : rep.json.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw srvol::InputError("InvalidArgument", "cannot write '" + out_path + "'");
      out << text;
    }
    return rep.exit_code;
  } catch (const srvol::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
