#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blindsim/bb84.hpp"
#include "blindsim/detector.hpp"
#include "blindsim/scw.hpp"

namespace blindsim {

enum class Protocol { bb84, scw };

/// SCW receiver plus the watchdog setup of one scenario. Unset attenuation and
/// alarm threshold are resolved at run time (see resolve_scw_chain).
struct ScwScenario {
  double modulation_index = 20.0;
  Decibel filter_extinction{30.0};
  Decibel bob_insertion_loss{6.4};
  bool include_carrier_leakage = false;
  Power alice_carrier = Power::nanowatts(1000.0);
  std::optional<Decibel> watchdog_attenuation;  // nullopt: middle of the feasible window
  std::optional<Power> watchdog_alarm_threshold;  // nullopt: alarm_factor x Alice's reading
  double alarm_factor = 3.0;
  Power watchdog_sensitivity_floor = Power::nanowatts(1.0);
  std::optional<Power> watchdog_blinding_threshold = Power::nanowatts(1000.0);  // nullopt: never blinds

  friend bool operator==(const ScwScenario&, const ScwScenario&) = default;
};

struct ScenarioConfig {
  Protocol protocol = Protocol::bb84;
  std::uint64_t gates = 1'000'000;
  std::uint64_t seed = 1;
  DetectorConfig detector;
  std::optional<AttackParams> attack;
  std::optional<ScwScenario> scw;
  double source_mean_photons = 0.1;
  double channel_transmission = 1.0;

  /// Field-level diagnostics ("attack.forge_rate_hz: must be > 0"), empty when valid.
  std::vector<std::string> problems() const;
  /// Throws ConfigError carrying problems().
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Parses and validates a JSON scenario. Keys carry their unit (cw_power_nw,
/// trigger_energy_fj, dead_time_ns, ...); unknown keys are rejected.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const ScenarioConfig& config);

/// Forge slots are every `stride` gates so the forge rate never exceeds the
/// configured one.
std::uint64_t forge_stride(double gate_frequency_hz, double forge_rate_hz);

/// The effective chain of an SCW scenario: explicit attenuation/threshold, or
/// the midpoint of find_attenuation_window and alarm_factor x Alice's reading.
/// Throws ConfigError when an automatic value cannot be resolved.
ScwChain resolve_scw_chain(const ScenarioConfig& config);

std::string_view to_string(Protocol p);
std::string_view to_string(AttackMode m);
std::string_view to_string(TransitionShape s);

}  // namespace blindsim
