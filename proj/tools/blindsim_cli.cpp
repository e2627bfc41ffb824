// blindsim: command-line front end for the detector-blinding simulator.
//
//   blindsim run <config.json> [--seed N] [--gates N] [--format text|csv|jsonl]
//                              [--out path] [--log-events path]
//   blindsim sweep <config.json> --var trigger_energy_fj --from F --to T --steps N
//   blindsim curve [config.json]
//   blindsim budget [config.json] [--format text|csv|jsonl]
//
// Exit status: 0 on success, 2 on a configuration or usage error, 1 otherwise.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "blindsim/report.hpp"
#include "blindsim/scenario.hpp"
#include "blindsim/simulation.hpp"

namespace {

constexpr int kConfigError = 2;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> gates;
  std::string format = "text";
  std::string out_path;
};

void add_common(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--seed", flags.seed, "Master seed (overrides the config)");
  cmd.add_option("--gates", flags.gates, "Gate count (per point for sweeps)");
  cmd.add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "jsonl"}));
  cmd.add_option("--out", flags.out_path, "Write output to this file instead of stdout");
}

blindsim::ScenarioConfig load_or_default(const std::string& path) {
  if (path.empty()) {
    blindsim::ScenarioConfig config;
    config.attack = blindsim::AttackParams{};
    return config;
  }
  return blindsim::load_scenario(path);
}

void apply_overrides(blindsim::ScenarioConfig& config, const CommonFlags& flags) {
  if (flags.seed) config.seed = *flags.seed;
  if (flags.gates) config.gates = *flags.gates;
}

void emit(const CommonFlags& flags, const std::string& text) {
  if (flags.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + flags.out_path);
  out << text;
}

std::string run_sweep(const blindsim::ScenarioConfig& base, blindsim::SweepSpec spec,
                      const CommonFlags& flags) {
  if (flags.gates) spec.gates_per_point = *flags.gates;
  const auto points = blindsim::sweep(spec, base);
  return blindsim::format_sweep(points, spec.variable,
                                blindsim::parse_output_format(flags.format));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detector-blinding faked-state attack simulator for BB84 and SCW QKD"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_config;
  std::string event_log_path;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and print its statistics");
  run_cmd->add_option("config", run_config, "Scenario JSON file")->required();
  run_cmd->add_option("--log-events", event_log_path, "Write the per-gate event log (CSV)");
  add_common(*run_cmd, run_flags);

  CommonFlags sweep_flags;
  std::string sweep_config;
  blindsim::SweepSpec sweep_spec;
  std::string sweep_var = "trigger_energy_fj";
  auto* sweep_cmd = app.add_subcommand("sweep", "Detector response over a parameter range");
  sweep_cmd->add_option("config", sweep_config, "Scenario JSON file")->required();
  sweep_cmd->add_option("--var", sweep_var, "Swept variable")
      ->check(CLI::IsMember({"trigger_energy_fj", "cw_power_nw"}));
  sweep_cmd->add_option("--from", sweep_spec.from, "First value")->required();
  sweep_cmd->add_option("--to", sweep_spec.to, "Last value")->required();
  sweep_cmd->add_option("--steps", sweep_spec.steps, "Number of points")->required();
  add_common(*sweep_cmd, sweep_flags);

  CommonFlags curve_flags;
  std::string curve_config;
  auto* curve_cmd =
      app.add_subcommand("curve", "Click probability vs trigger energy, 10-35 fJ at 35 nW");
  curve_cmd->add_option("config", curve_config, "Optional scenario JSON file");
  add_common(*curve_cmd, curve_flags);

  CommonFlags budget_flags;
  std::string budget_config;
  auto* budget_cmd =
      app.add_subcommand("budget", "Power budget for controlling the detector through SCW");
  budget_cmd->add_option("config", budget_config, "Optional scenario JSON file");
  budget_cmd->add_option("--format", budget_flags.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "jsonl"}));
  budget_cmd->add_option("--out", budget_flags.out_path, "Write output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run_cmd) {
      auto config = blindsim::load_scenario(run_config);
      apply_overrides(config, run_flags);
      const auto format = blindsim::parse_output_format(run_flags.format);
      blindsim::RunOptions options;
      std::ofstream log;
      if (!event_log_path.empty()) {
        log.open(event_log_path, std::ios::binary);
        if (!log) throw std::runtime_error("cannot write " + event_log_path);
        log << blindsim::event_log_header() << '\n';
        options.event_sink = [&log](const blindsim::GateRecord& r) {
          log << blindsim::format_event(r) << '\n';
        };
      }
      const auto result = blindsim::run(config, options);
      emit(run_flags, blindsim::format_stats(result.stats, format));
    } else if (*sweep_cmd) {
      auto config = blindsim::load_scenario(sweep_config);
      apply_overrides(config, sweep_flags);
      sweep_spec.variable = sweep_var == "cw_power_nw" ? blindsim::SweepVariable::cw_power_nw
                                                       : blindsim::SweepVariable::trigger_energy_fj;
      sweep_spec.gates_per_point = config.gates;
      emit(sweep_flags, run_sweep(config, sweep_spec, sweep_flags));
    } else if (*curve_cmd) {
      auto config = load_or_default(curve_config);
      apply_overrides(config, curve_flags);
      if (!config.attack) config.attack = blindsim::AttackParams{};
      config.attack->cw_power = blindsim::Power::nanowatts(35.0);
      emit(curve_flags, run_sweep(config, blindsim::curve_defaults(), curve_flags));
    } else if (*budget_cmd) {
      const auto config = load_or_default(budget_config);
      blindsim::ScwChain chain;
      if (config.scw) {
        chain.modulation_index = config.scw->modulation_index;
        chain.bob_insertion_loss = config.scw->bob_insertion_loss;
        chain.filter_extinction = config.scw->filter_extinction;
      }
      const auto thresholds =
          blindsim::thresholds_at(blindsim::Power::nanowatts(35.0), config.detector);
      emit(budget_flags, blindsim::format_budget(blindsim::table1(thresholds, chain),
                                                 blindsim::parse_output_format(budget_flags.format)));
    }
  } catch (const blindsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
