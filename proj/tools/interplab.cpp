// command-line front end: interplab <subcommand> --config <path> [--seed N] [--out-dir D]
#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "interplab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"interpolation-space experiment runner"};
  app.require_subcommand(0, 0);

  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  app.add_option("command", command,
                 "subcommand: kfunc | interp-norm | mean-min | complex-check | stein-check | "
                 "weighted-demo | sector-scan | semigroup-scan | rademacher")
      ->required();
  app.add_option("--config", config_path, "path to a JSON experiment config")->required();
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "override the RNG seed declared in the config");
  app.add_option("--out-dir", out_dir, "directory for the report and CSV artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help exits 0; bad usage is a schema-level failure
  }

  std::optional<std::uint64_t> seed_override;
  if (seed_opt->count() > 0) seed_override = seed;
  return interplab::run_cli(command, config_path, seed_override, out_dir);
}
