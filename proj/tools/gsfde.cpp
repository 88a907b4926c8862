#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gsfde/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulate and audit stochastic functional differential equations driven by G-Levy processes"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;

  for (const char* name : {"simulate", "picard", "verify", "bdg", "exp-estimate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment JSON config")->required();
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "base seed (overrides the config seed)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gsfde::kExitConfig;
  }

  gsfde::RunOptions options;
  options.subcommand = app.get_subcommands().front()->get_name();
  options.config_path = config;
  if (!out.empty()) options.out_dir = out;
  if (app.get_subcommands().front()->count("--seed") > 0) options.seed = seed;
  return gsfde::run(options, std::cerr);
}
