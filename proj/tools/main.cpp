#include <iostream>

#include <CLI11.hpp>

#include "facons/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic sets, facons and star stratifications of polynomial maps"};
  app.require_subcommand(1);
  facons::RunConfig cfg;

  auto* analyze = app.add_subcommand("analyze", "full pipeline: asymptotic set, facons, stratification, frontier check");
  analyze->add_option("file", cfg.input, "map file")->required();
  analyze->add_option("--weight-box", cfg.weight_box, "bound W on weight entries")->check(CLI::PositiveNumber);
  analyze->add_option("--order", cfg.order, "order for printed equations")->check(CLI::IsMember({"lex", "grevlex"}));
  analyze->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "dot", "text"}));
  analyze->add_option("--seed", cfg.seed, "seed for coverage sampling");

  auto* asym = app.add_subcommand("asymptotic-set", "eliminants and components of the asymptotic set");
  asym->add_option("file", cfg.input, "map file")->required();

  auto* facons = app.add_subcommand("facons", "facons of every cell of the component arrangement");
  facons->add_option("file", cfg.input, "map file")->required();
  facons->add_option("--weight-box", cfg.weight_box, "bound W on weight entries")->check(CLI::PositiveNumber);

  auto* tube = app.add_subcommand("tube-verify", "sample the Thom-Mather conditions along frontier pairs");
  tube->add_option("file", cfg.input, "map file")->required();
  tube->add_option("--tol", cfg.tol, "absolute tolerance on commutation residuals")->check(CLI::PositiveNumber);
  tube->add_option("--seed", cfg.seed, "seed for coverage sampling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  facons::RunResult res = facons::run_command(cfg);
  std::cout << res.output;
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  if (!res.error.empty()) std::cerr << "error: " << res.error << "\n";
  return res.exit_code;
}
