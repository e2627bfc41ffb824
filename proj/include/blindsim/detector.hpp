#pragma once

// Phenomenological model of a gated InGaAs APD in Geiger mode that can be
// blinded by c.w. light into linear mode. In the blinded mode a click happens
// only when a bright trigger pulse exceeds an energy threshold; dark counts
// vanish.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blindsim/optics.hpp"
#include "blindsim/random.hpp"

namespace blindsim {

/// Simulation clock. Integer picoseconds keep dead-time comparisons exact.
using SimTime = std::chrono::duration<std::int64_t, std::pico>;

SimTime seconds_to_sim_time(double seconds);

/// Click thresholds of the blinded detector at one c.w. blinding power.
struct ResponsePoint {
  Power blinding_power;
  Energy e_never;   // largest trigger energy that never clicks
  Energy e_always;  // smallest trigger energy that always clicks

  friend bool operator==(const ResponsePoint&, const ResponsePoint&) = default;
};

enum class TransitionShape { linear, logistic };

struct DetectorConfig {
  double efficiency = 0.10;
  double gate_frequency_hz = 100e6;
  double gate_width_s = 3e-9;
  double dead_time_s = 100e-9;
  double dark_count_rate_hz = 200.0;
  Power blinding_threshold = Power::nanowatts(24.0);
  std::vector<ResponsePoint> response_points{
      {Power::nanowatts(35.0), Energy::femtojoules(15.4), Energy::femtojoules(25.8)}};
  TransitionShape transition_shape = TransitionShape::linear;

  /// Human-readable invariant violations, empty when the config is valid.
  std::vector<std::string> problems() const;
  /// Throws std::invalid_argument listing every problem.
  void validate() const;

  SimTime gate_period() const;
  SimTime dead_time() const { return seconds_to_sim_time(dead_time_s); }
  double dark_probability_per_gate() const { return dark_count_rate_hz / gate_frequency_hz; }

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

enum class DetectorMode { geiger, blinded };

struct DetectorState {
  DetectorMode mode = DetectorMode::geiger;
  SimTime dead_until{0};
  std::optional<SimTime> last_gate;

  friend bool operator==(const DetectorState&, const DetectorState&) = default;
};

struct GateInput {
  Power cw_power;
  Energy trigger_energy;
  double mean_photons = 0.0;
  SimTime gate_time{0};
};

struct GateOutcome {
  bool click = false;
  DetectorState state;
};

bool is_blinded(Power cw_power, const DetectorConfig& config);

/// E_never / E_always at a blinding power, linearly interpolated between the
/// two bracketing response points and clamped at the table ends.
ResponsePoint thresholds_at(Power cw_power, const DetectorConfig& config);

/// Click probability of the blinded detector for one trigger pulse. Exactly 0
/// at or below E_never and exactly 1 at or above E_always. Throws
/// std::domain_error when cw_power does not blind the detector.
double blinded_click_probability(Energy trigger_energy, Power cw_power,
                                 const DetectorConfig& config);

/// 1 - (1 - p_photon)(1 - p_dark) for an unblinded gate.
double geiger_click_probability(const GateInput& input, const DetectorConfig& config);

/// Advances one detector through one gate. Gates must arrive in nondecreasing
/// time order (std::invalid_argument otherwise). A gate inside the dead time
/// never clicks and consumes no randomness; any other gate consumes exactly
/// one uniform draw.
GateOutcome process_gate(const DetectorState& state, const GateInput& input,
                         const DetectorConfig& config, RandomStream& rng);

}  // namespace blindsim
