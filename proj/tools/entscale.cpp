#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entscale/experiments.hpp"
#include "entscale/version.hpp"

namespace ex = entscale::experiments;

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-scaling experiments: spin-chain quenches and quasi-free fermion blocks"};
  app.set_version_flag("--version", entscale::kVersion);
  app.require_subcommand(1);

  // Flag name -> config key. Every flag overrides the config file entry of the same key.
  const std::vector<std::pair<std::string, std::string>> flags{
      {"--out", "out"},       {"--seed", "seed"},       {"--n", "n"},           {"--t-grid", "t_grid"},
      {"--m-list", "m_list"}, {"--k-list", "k_list"},   {"--n-list", "n_list"}, {"--preset", "preset"},
      {"--model", "model"},   {"--symbol", "symbol"},   {"--site", "site"},     {"--l-max", "l_max"},
      {"--trials", "trials"}};

  std::string config_path;
  std::map<std::string, std::string> values;
  for (const auto& name : ex::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "key = value configuration file");
    for (const auto& [flag, key] : flags) sub->add_option(flag, values[key], "overrides '" + key + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ex::kConfigFailure;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  std::vector<ex::Setting> settings;
  try {
    if (!config_path.empty()) settings = ex::parse_config_text(ex::read_file(config_path), config_path);
  } catch (const entscale::ConfigError& e) {
    std::cerr << "entscale: config error: " << config_path << ": " << e.what() << "\n";
    return ex::kConfigFailure;
  }
  for (const auto& [flag, key] : flags)
    if (!values[key].empty()) settings.push_back({key, values[key], 0, 0, "command line"});
  return ex::run(experiment, settings);
}
