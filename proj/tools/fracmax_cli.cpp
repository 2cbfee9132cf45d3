#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracmax/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fracmax: time-space fractional diffusion solver and maximum-principle checks"};
  app.require_subcommand(1, 1);

  std::string config, suite = "all", out;
  for (const char* name : {"solve", "verify", "convergence", "kernel-table"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "path to the JSON run config")->required();
    sub->add_option("--out", out, "output directory (overrides the config's output key)");
    if (std::string(name) == "verify") {
      sub->add_option("--suite", suite, "nonneg|boundary|weak|identities|all")
          ->check(CLI::IsMember({"nonneg", "boundary", "weak", "identities", "all"}));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fracmax::cli::exit_usage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return fracmax::cli::run(command, config, suite, out, std::cerr);
}
