#pragma once

// Subcarrier-wave receiver: the carrier is phase-modulated, a fraction
// 1/modulation_index lands in the sidebands, and the spectral filter passes
// only the sidebands to the APD. The filtered-out carrier can be routed
// through an attenuator to a classical watchdog photodiode.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blindsim/detector.hpp"
#include "blindsim/optics.hpp"

namespace blindsim {

struct ScwChain {
  double modulation_index = 20.0;  // carrier-to-sidebands power ratio
  Decibel filter_extinction{30.0};
  Decibel bob_insertion_loss{6.4};
  Decibel watchdog_attenuation{0.0};
  Power watchdog_alarm_threshold = Power::nanowatts(1.0);
  bool include_carrier_leakage = false;

  std::vector<std::string> problems() const;
  void validate() const;

  /// Factor between a quantity entering Bob and the sideband share at the APD.
  double input_to_apd_factor() const;

  friend bool operator==(const ScwChain&, const ScwChain&) = default;
};

struct ScwSpectrum {
  Power carrier;
  Power sidebands;  // total in both sidebands
};

/// Quantity Eve must send into Bob so that `target_at_apd` reaches the APD in
/// the sidebands: target * modulation_index * insertion loss. Works for powers
/// and pulse energies alike.
double required_input_for_subcarrier(double target_at_apd, const ScwChain& chain);
Power required_input_for_subcarrier(Power target_at_apd, const ScwChain& chain);
Energy required_input_for_subcarrier(Energy target_at_apd, const ScwChain& chain);

/// Sideband-path energy reaching the APD for a pulse of `at_input` entering Bob.
Energy energy_at_apd(Energy at_input, const ScwChain& chain);

enum class BudgetStage { at_subcarriers_after_filtering, before_modulation, entering_bob };

std::string_view to_string(BudgetStage stage);

struct BudgetRow {
  BudgetStage stage;
  Power blinding_power;
  Energy e_always;
  Energy e_never;
};

/// Three-stage power budget for controlling the detector through the chain,
/// from the thresholds measured at the APD.
std::array<BudgetRow, 3> table1(const ResponsePoint& thresholds, const ScwChain& chain);

struct ScwReadings {
  Power at_apd;
  Power at_watchdog;
};

ScwReadings propagate_eve_spectrum(const ScwSpectrum& input, const ScwChain& chain);

/// Carrier reading at the watchdog for a carrier power entering Bob.
Power watchdog_reading(Power carrier_at_input, const ScwChain& chain);

enum class WatchdogVerdict { ok, alarm, watchdog_blinded };

std::string_view to_string(WatchdogVerdict verdict);

/// watchdog_blinded takes precedence over alarm.
WatchdogVerdict watchdog_check(Power at_watchdog, const ScwChain& chain,
                               Power watchdog_blinding_threshold);

/// Admissible watchdog attenuation in dB: Alice's reading stays at or above the
/// sensitivity floor and Eve's reading stays strictly below the watchdog's own
/// blinding threshold. The lower end is open whenever it comes from the
/// blinding constraint.
struct AttenuationWindow {
  Decibel min;
  Decibel max;
  bool min_exclusive = false;

  bool empty() const;
  bool contains(Decibel a) const;
  Decibel midpoint() const { return Decibel{(min.value + max.value) / 2.0}; }
};

inline constexpr Decibel kDefaultAttenuationSearchMax{60.0};

/// A missing blinding threshold (a watchdog that never blinds) or a floor of 0
/// leaves that side unconstrained; the result is clipped to [0, search_max].
AttenuationWindow find_attenuation_window(Power alice_carrier, Power eve_carrier,
                                          Power watchdog_sensitivity_floor,
                                          std::optional<Power> watchdog_blinding_threshold,
                                          Decibel loss,
                                          Decibel search_max = kDefaultAttenuationSearchMax);

}  // namespace blindsim
