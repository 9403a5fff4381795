// cuspweyl: command-line driver.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cuspweyl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue counting on manifolds with cusps"};
  app.require_subcommand(1, 1);

  cuspweyl::cli::Command cmd;
  std::string model_path;
  double lambda = 0, lambda_min = 0, lambda_max = 0;

  const char* verbs[][2] = {
      {"validate", "check a model file"},
      {"count", "Dirichlet-Neumann bracket of N(lambda)"},
      {"sweep", "bracket over a lambda grid, with remainder fit"},
      {"fiber", "eigenvalues of one fiber operator"},
      {"phase", "phase integral against the fiber count"},
      {"perturb", "ground state of the cross-section under a weakened field"},
      {"embedded", "upper bound on embedded eigenvalues"},
      {"rj-identity", "sum of square roots against its integral form"},
  };
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v[0], v[1]);
    sub->add_option("model", model_path, "model file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--lambda", lambda);
    sub->add_option("--lambda-min", lambda_min);
    sub->add_option("--lambda-max", lambda_max);
    sub->add_option("--points", cmd.points)->check(CLI::PositiveNumber);
    sub->add_option("--cusp", cmd.cusp);
    sub->add_option("--ell", cmd.ell);
    sub->add_option("--tau-max", cmd.tau_max);
    sub->add_option("--format", cmd.format)->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cmd.out);
    sub->add_option("--boundary", cmd.boundary)->check(CLI::IsMember({"dirichlet", "robin"}));
    sub->add_flag("--linear", cmd.linear, "linear lambda grid instead of geometric");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  cmd.verb = sub->get_name();
  if (sub->count("--lambda")) cmd.lambda = lambda;
  if (sub->count("--lambda-min")) cmd.lambda_min = lambda_min;
  if (sub->count("--lambda-max")) cmd.lambda_max = lambda_max;
  return cuspweyl::cli::run(cmd, model_path, std::cout, std::cerr);
}
