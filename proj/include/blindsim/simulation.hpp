#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blindsim/bb84.hpp"
#include "blindsim/scenario.hpp"

namespace blindsim {

struct RunOptions {
  bool keep_events = false;
  std::function<void(const GateRecord&)> event_sink;
  /// Mixed into every derived RNG stream; distinct values give independent runs.
  std::uint64_t run_index = 0;
};

struct RunResult {
  RunStats stats;
  std::vector<GateRecord> events;  // filled only with keep_events
};

/// Validates `config` (ConfigError before any simulation work) and runs all
/// gates in order. Per-party streams are derived from (seed, role, run_index).
/// Every click is audited against the dead time; a violation throws
/// std::logic_error.
RunResult run(const ScenarioConfig& config, const RunOptions& options = {});

/// First pair of clicks of one detector closer than the dead time, described
/// as text; nullopt when the log is clean.
std::optional<std::string> find_dead_time_violation(std::span<const GateRecord> events,
                                                    SimTime gate_period, SimTime dead_time);

enum class SweepVariable { trigger_energy_fj, cw_power_nw };

std::string_view to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::trigger_energy_fj;
  double from = 10.0;
  double to = 35.0;
  int steps = 26;
  std::uint64_t gates_per_point = 1'000'000;

  std::vector<std::string> problems() const;
  std::vector<double> values() const;
};

/// Click-probability-vs-control-pulse-energy defaults at 35 nW.
SweepSpec curve_defaults();

struct SweepPoint {
  double value = 0.0;  // in the unit named by the sweep variable
  std::uint64_t gates = 0;
  std::uint64_t trigger_slots = 0;
  std::uint64_t slot_clicks = 0;
  std::uint64_t total_clicks = 0;
  double click_probability = 0.0;  // slot_clicks / trigger_slots
  double standard_error = 0.0;     // binomial
  double click_rate_hz = 0.0;      // total_clicks over the simulated duration
};

/// One detector under c.w. light with trigger pulses on every forge slot
/// (attack settings from `base`, defaults if it has none). Points run
/// concurrently, each on its own stream; results come back in point order.
std::vector<SweepPoint> sweep(const SweepSpec& spec, const ScenarioConfig& base);

/// Single-detector measurement backing each sweep point.
SweepPoint measure_detector_response(const DetectorConfig& detector, Power cw_power,
                                     Energy trigger_energy, std::uint64_t stride,
                                     std::uint64_t gates, RandomStream& rng);

}  // namespace blindsim
