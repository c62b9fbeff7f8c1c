#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "novikov/commands.hpp"

namespace {

struct Invocation {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "key = value configuration file")->required();
  sub->add_option("--out", inv.out_dir, "output directory")->required();
  sub->add_option("--override", inv.overrides, "KEY=VALUE, applied after the config file")->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace novikov;
  CLI::App app{"Numerical lab for the two-component Novikov system"};
  app.require_subcommand(1);

  Invocation inv;
  using Command = int (*)(const RunConfig&, const std::filesystem::path&, std::ostream&);
  const std::vector<std::pair<std::string, Command>> commands{
      {"simulate", cli::cmd_simulate},
      {"peakon-validate", cli::cmd_peakon_validate},
      {"weak-check", cli::cmd_weak_check},
      {"mollify-study", cli::cmd_mollify_study},
      {"depend", cli::cmd_depend},
  };
  for (const auto& [name, fn] : commands) add_common(app.add_subcommand(name), inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    cli::emit(std::cerr, "error", "usage", e.what());
    return cli::kConfigError;
  }

  RunConfig cfg;
  try {
    std::ifstream is(inv.config_path);
    if (!is) throw ConfigError("cannot read config file '" + inv.config_path + "'");
    std::stringstream text;
    text << is.rdbuf();
    cfg = parse_config(text.str(), inv.overrides);
  } catch (const ConfigError& e) {
    cli::emit(std::cerr, "error", "config", e.what());
    return cli::kConfigError;
  }

  for (const auto& [name, fn] : commands) {
    if (app.got_subcommand(name)) return fn(cfg, inv.out_dir, std::cerr);
  }
  return cli::kConfigError;
}
