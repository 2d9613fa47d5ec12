// reftaylor: expansion, interpolation and FEM studies written as CSV tables.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include <reftaylor/errors.hpp>
#include <reftaylor/field_registry.hpp>

#include "study.hpp"

namespace {

using reftaylor::cli::Command;
using reftaylor::cli::StudyConfig;

std::string registry_listing() {
  std::string out;
  for (const auto& n : reftaylor::registry_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = reftaylor::cli;
  CLI::App app{"Refined first-order expansion, interpolation and FEM error studies"};
  app.footer(
      "Commands: expand, interp1d, simplex, fem, savings, registry, selftest.\n"
      "Options may also come from a key = value file given with --config;\n"
      "flags on the command line win. REFTAYLOR_THREADS caps parallelism.\n"
      "Exit codes: 0 ok, 1 usage, 2 numeric failure or bound violation, 3 I/O.\n"
      "Functions: " +
      registry_listing());

  StudyConfig cfg;
  std::string command;
  std::string space = "P1";
  std::string kind = "closed";
  double C = 0.0;
  double alpha = 0.0;
  double d2 = 0.0;

  const std::map<std::string, reftaylor::FemSpace> spaces{{"P1", reftaylor::FemSpace::P1},
                                                          {"P2", reftaylor::FemSpace::P2}};
  const std::map<std::string, reftaylor::WeightKind> kinds{
      {"closed", reftaylor::WeightKind::Closed}, {"open", reftaylor::WeightKind::Open}};

  app.add_option("command", command, "Study to run")
      ->required()
      ->check(CLI::IsMember({"expand", "interp1d", "simplex", "fem", "savings", "registry",
                             "selftest"}));
  app.add_option("--function", cfg.function, "Registry function (exp, exp2d, classP(beta=0.75), ...)");
  app.add_option("--m", cfg.m_values, "Point counts for expand")->delimiter(',');
  app.add_option("--subdivisions", cfg.subdivisions, "Mesh subdivisions per axis")->delimiter(',');
  app.add_option("--beta", cfg.beta_values, "Beta values for the class (P) sweep")->delimiter(',');
  app.add_option("--dim", cfg.dim, "Spatial dimension")->check(CLI::Range(1, 3));
  app.add_option("--space", space, "FEM space")->check(CLI::IsMember({"P1", "P2"}));
  app.add_option("--kind", kind, "Expansion weights")->check(CLI::IsMember({"closed", "open"}));
  app.add_option("--eps", cfg.eps, "Target error for savings");
  app.add_option("--diffusion", cfg.diffusion, "Diffusion coefficient");
  app.add_option("--reaction", cfg.reaction, "Reaction coefficient");
  auto* c_opt = app.add_option("--C", C, "Continuity constant (default documented in README)");
  auto* alpha_opt = app.add_option("--alpha", alpha, "Ellipticity constant");
  auto* d2_opt = app.add_option("--d2", d2, "Sup of the second derivative for savings (default pi^2)");
  app.add_option("--draws", cfg.draws, "Random segments for expand");
  app.add_option("--samples", cfg.samples, "Random points per element for simplex");
  app.add_option("--seed", cfg.seed, "Seed for randomized studies");
  app.add_option("--output,-o", cfg.output, "CSV path; a .manifest.json is written next to it");
  app.set_config("--config", "", "Flat key = value configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  cfg.command = cli::parse_command(command);
  cfg.space = spaces.at(space);
  cfg.kind = kinds.at(kind);
  if (c_opt->count()) cfg.C = C;
  if (alpha_opt->count()) cfg.alpha = alpha;
  if (d2_opt->count()) cfg.d2 = d2;
  cfg.threads = cli::default_threads();

  try {
    if (!cfg.function.empty() && cfg.function.rfind("classP", 0) != 0) {
      // Fail early with the registry listing on an unknown name.
      bool known = false;
      for (const auto& n : reftaylor::registry_names())
        if (n == cfg.function || n == cfg.function + std::to_string(cfg.dim) + "d") known = true;
      if (!known)
        throw reftaylor::InvalidArgument("unknown function '" + cfg.function +
                                         "'; registry: " + registry_listing());
    }
  } catch (const reftaylor::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }
  return cli::run(cfg, std::cout, std::cerr);
}
