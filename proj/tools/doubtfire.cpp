#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "doubtfire/cli/commands.hpp"
#include "doubtfire/cli/config_file.hpp"
#include "doubtfire/errors.hpp"

namespace cli = doubtfire::cli;

int main(int argc, char** argv) {
  CLI::App app{"Two-team soft error resilience simulator for a DG Euler solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const cli::Config&, const cli::Output&);
  };
  const Command commands[] = {
      {"run", "Run one two-team simulation", cli::cmd_run},
      {"sensitivity", "Sensitivity campaign over criterion profiles and error sizes", cli::cmd_sensitivity},
      {"tradeoff", "Sensitivity/cost sweep over the tolerance grid", cli::cmd_tradeoff},
      {"baseline", "Fault-free single-team reference run", cli::cmd_baseline},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "INI configuration file");
    sub->add_option("--set", overrides, "Override a setting, section.key=value (repeatable)");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  cli::Config config;
  try {
    config = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
    if (const char* seed = std::getenv("DOUBTFIRE_SEED")) cli::apply_setting(config, "run", "seed", seed);
    for (const auto& o : overrides) cli::apply_override(config, o);
  } catch (const doubtfire::ConfigError& e) {
    std::cerr << "doubtfire: config error: " << e.what() << '\n';
    return cli::kUsage;
  }

  cli::Output out;
  out.dir = out_dir;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) return commands[i].fn(config, out);
  }
  return cli::kUsage;
}
