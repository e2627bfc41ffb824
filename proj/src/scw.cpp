#include "blindsim/scw.hpp"

#include <cmath>
#include <stdexcept>

namespace blindsim {

std::vector<std::string> ScwChain::problems() const {
  std::vector<std::string> out;
  if (!(modulation_index > 1.0) || !std::isfinite(modulation_index)) {
    out.emplace_back("modulation_index: must be finite and > 1");
  }
  auto check_db = [&out](Decibel d, const char* key) {
    if (!std::isfinite(d.value) || d.value < 0.0) {
      out.push_back(std::string(key) + ": must be finite and >= 0 dB");
    }
  };
  check_db(filter_extinction, "filter_extinction_db");
  check_db(bob_insertion_loss, "bob_insertion_loss_db");
  check_db(watchdog_attenuation, "watchdog_attenuation_db");
  if (!(watchdog_alarm_threshold > Power{})) {
    out.emplace_back("watchdog_alarm_threshold_nw: must be > 0");
  }
  return out;
}

void ScwChain::validate() const {
  const auto issues = problems();
  if (issues.empty()) return;
  std::string msg = "invalid scw chain:";
  for (const auto& issue : issues) msg += "\n  " + issue;
  throw std::invalid_argument(msg);
}

double ScwChain::input_to_apd_factor() const {
  return modulation_index * db_to_linear(bob_insertion_loss);
}

double required_input_for_subcarrier(double target_at_apd, const ScwChain& chain) {
  if (!(target_at_apd >= 0.0)) {
    throw std::invalid_argument("target at APD must be >= 0");
  }
  return target_at_apd * chain.input_to_apd_factor();
}

Power required_input_for_subcarrier(Power target_at_apd, const ScwChain& chain) {
  return Power::watts(required_input_for_subcarrier(target_at_apd.in_watts(), chain));
}

Energy required_input_for_subcarrier(Energy target_at_apd, const ScwChain& chain) {
  return Energy::joules(required_input_for_subcarrier(target_at_apd.in_joules(), chain));
}

Energy energy_at_apd(Energy at_input, const ScwChain& chain) {
  return Energy::joules(at_input.in_joules() / chain.input_to_apd_factor());
}

std::string_view to_string(BudgetStage stage) {
  switch (stage) {
    case BudgetStage::at_subcarriers_after_filtering:
      return "subcarriers_after_filtering";
    case BudgetStage::before_modulation:
      return "spectrum_before_modulation";
    case BudgetStage::entering_bob:
      return "spectrum_entering_bob";
  }
  return "unknown";
}

std::array<BudgetRow, 3> table1(const ResponsePoint& thresholds, const ScwChain& chain) {
  const double m = chain.modulation_index;
  const double loss = db_to_linear(chain.bob_insertion_loss);
  return {
      BudgetRow{BudgetStage::at_subcarriers_after_filtering, thresholds.blinding_power,
                thresholds.e_always, thresholds.e_never},
      BudgetRow{BudgetStage::before_modulation, thresholds.blinding_power.scaled(m),
                thresholds.e_always.scaled(m), thresholds.e_never.scaled(m)},
      BudgetRow{BudgetStage::entering_bob, thresholds.blinding_power.scaled(m * loss),
                thresholds.e_always.scaled(m * loss), thresholds.e_never.scaled(m * loss)},
  };
}

Power watchdog_reading(Power carrier_at_input, const ScwChain& chain) {
  const double factor =
      db_to_linear(chain.bob_insertion_loss) * db_to_linear(chain.watchdog_attenuation);
  return Power::watts(carrier_at_input.in_watts() / factor);
}

ScwReadings propagate_eve_spectrum(const ScwSpectrum& input, const ScwChain& chain) {
  const double loss = db_to_linear(chain.bob_insertion_loss);
  const double extinction = db_to_linear(chain.filter_extinction);
  double at_apd = input.carrier.in_watts() / (chain.modulation_index * loss);
  at_apd += input.sidebands.in_watts() / (loss * extinction);
  if (chain.include_carrier_leakage) {
    at_apd += input.carrier.in_watts() * (1.0 - 1.0 / chain.modulation_index) /
              (loss * extinction);
  }
  return ScwReadings{Power::watts(at_apd), watchdog_reading(input.carrier, chain)};
}

std::string_view to_string(WatchdogVerdict verdict) {
  switch (verdict) {
    case WatchdogVerdict::ok:
      return "ok";
    case WatchdogVerdict::alarm:
      return "alarm";
    case WatchdogVerdict::watchdog_blinded:
      return "watchdog_blinded";
  }
  return "unknown";
}

WatchdogVerdict watchdog_check(Power at_watchdog, const ScwChain& chain,
                               Power watchdog_blinding_threshold) {
  if (at_watchdog >= watchdog_blinding_threshold) return WatchdogVerdict::watchdog_blinded;
  if (at_watchdog > chain.watchdog_alarm_threshold) return WatchdogVerdict::alarm;
  return WatchdogVerdict::ok;
}

bool AttenuationWindow::empty() const {
  return min.value > max.value || (min.value == max.value && min_exclusive);
}

bool AttenuationWindow::contains(Decibel a) const {
  if (empty()) return false;
  const bool above = min_exclusive ? a.value > min.value : a.value >= min.value;
  return above && a.value <= max.value;
}

AttenuationWindow find_attenuation_window(Power alice_carrier, Power eve_carrier,
                                          Power watchdog_sensitivity_floor,
                                          std::optional<Power> watchdog_blinding_threshold,
                                          Decibel loss, Decibel search_max) {
  if (!(Power{} < alice_carrier && alice_carrier < eve_carrier)) {
    throw std::invalid_argument("find_attenuation_window requires eve_carrier > alice_carrier > 0");
  }
  AttenuationWindow window{Decibel{0.0}, search_max, false};

  // Alice / (loss * A) >= floor  <=>  A_dB <= 10 log10(Alice / floor) - loss_dB
  if (watchdog_sensitivity_floor > Power{}) {
    const double upper = linear_to_db(alice_carrier.in_watts() /
                                      watchdog_sensitivity_floor.in_watts()).value -
                         loss.value;
    if (upper < window.max.value) window.max = Decibel{upper};
  }
  // Eve / (loss * A) < blinding  <=>  A_dB > 10 log10(Eve / blinding) - loss_dB
  if (watchdog_blinding_threshold) {
    if (!(*watchdog_blinding_threshold > Power{})) {
      window.min_exclusive = true;
      window.max = Decibel{-1.0};  // every reading blinds the watchdog
      return window;
    }
    const double lower = linear_to_db(eve_carrier.in_watts() /
                                      watchdog_blinding_threshold->in_watts()).value -
                         loss.value;
    if (lower >= window.min.value) {
      window.min = Decibel{lower};
      window.min_exclusive = true;
    }
  }
  return window;
}

}  // namespace blindsim
