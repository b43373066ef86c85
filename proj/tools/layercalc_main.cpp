#include <CLI11.hpp>

#include "layercalc/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Variational layer potentials on finite-dimensional Hilbert "
               "spaces: build instances, verify identities, solve boundary "
               "value problems."};
  app.require_subcommand(1);

  layercalc::CliOptions options;
  std::string config;
  std::string out_dir;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config, "run configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory for reports");
    cmd->add_flag("--no-timestamp", options.no_timestamp,
                  "omit the timestamp field from reports");
    cmd->add_option("--tol", options.tolerance_overrides,
                    "tolerance override as name=value (repeatable)");
  };

  add_common(app.add_subcommand("verify", "run the requested verification suites"),
             true);
  add_common(app.add_subcommand("solve", "run the requested solves"), true);
  add_common(app.add_subcommand("spectrum",
                                "dump boundary-operator singular values"),
             true);
  app.add_subcommand("presets", "list builtin instances");

  CLI11_PARSE(app, argc, argv);

  options.command = app.get_subcommands().front()->get_name();
  options.config_path = config;
  options.out_dir = out_dir;
  return layercalc::run_cli(options);
}
