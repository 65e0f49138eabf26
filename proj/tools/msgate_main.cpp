// Command-line front end: runs configured experiments, presets, and config
// validation. Exit codes: 0 success, 2 configuration error, 3 physics guard
// tripped, 4 --check comparison failed, 1 unexpected failure.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "msgate/experiments.hpp"

namespace {

int run_and_report(msgate::ExperimentConfig& config, bool check_flag) {
  if (check_flag) config.run.check = true;
  const msgate::ExperimentOutputs outputs = msgate::run_experiment(config);
  std::cout << outputs.summary_text;
  for (const auto& f : outputs.files) std::cout << "wrote " << f << "\n";
  if (config.run.check && !outputs.checks_passed) {
    std::cerr << "one or more --check comparisons failed (see summary above)\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-ion entangling-gate simulator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  std::string run_config;
  bool run_check = false;
  run_cmd->add_option("config", run_config, "path to the config file")->required();
  run_cmd->add_flag("--check", run_check, "fail (exit 4) when result checks do not pass");

  auto* preset_cmd = app.add_subcommand("preset", "run a built-in experiment preset");
  std::string preset_name, preset_out;
  std::uint64_t preset_seed = 0;
  int preset_traj = 0;
  bool preset_check = false, preset_dump = false;
  std::string preset_help = "one of:";
  for (const auto& n : msgate::preset_names()) preset_help += " " + n;
  preset_cmd->add_option("name", preset_name, preset_help)->required();
  preset_cmd->add_option("--out", preset_out, "output directory (default out-<name>)");
  preset_cmd->add_option("--seed", preset_seed, "master seed override");
  preset_cmd->add_option("--trajectories", preset_traj, "trajectory count override");
  preset_cmd->add_flag("--check", preset_check, "fail (exit 4) when result checks do not pass");
  preset_cmd->add_flag("--dump-config", preset_dump, "print the resolved config and exit");

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config file");
  std::string validate_config;
  validate_cmd->add_option("config", validate_config, "path to the config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      msgate::ExperimentConfig config =
          msgate::config_from_map(msgate::parse_config_file(run_config));
      return run_and_report(config, run_check);
    }
    if (preset_cmd->parsed()) {
      msgate::ExperimentConfig config = msgate::preset_config(preset_name);
      config.run.out_dir = preset_out.empty() ? "out-" + preset_name : preset_out;
      if (preset_cmd->count("--seed")) config.run.seed = preset_seed;
      if (preset_cmd->count("--trajectories")) config.run.n_trajectories = preset_traj;
      if (preset_dump) {
        config.validate();
        std::cout << msgate::resolve_config_text(config);
        return 0;
      }
      return run_and_report(config, preset_check);
    }
    msgate::ExperimentConfig config =
        msgate::config_from_map(msgate::parse_config_file(validate_config));
    std::cout << "ok: " << msgate::to_string(config.experiment) << " experiment, "
              << config.fields.size() << " drive tone(s)\n";
    return 0;
  } catch (const msgate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const msgate::InvalidParams& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const msgate::Error& e) {
    std::cerr << "physics guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
