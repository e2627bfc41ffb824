#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace blindsim {

/// Optical power. Stored in watts; nanowatt accessors for the presentation layer.
class Power {
 public:
  constexpr Power() = default;

  static Power watts(double w);
  static Power nanowatts(double nw) { return watts(nw / 1e9); }

  constexpr double in_watts() const { return watts_; }
  double in_nanowatts() const { return watts_ * 1e9; }

  Power scaled(double factor) const { return watts(watts_ * factor); }

  friend constexpr auto operator<=>(Power, Power) = default;

 private:
  constexpr explicit Power(double w) : watts_(w) {}
  double watts_ = 0.0;
};

/// Optical pulse energy. Stored in joules; femtojoule accessors for display.
class Energy {
 public:
  constexpr Energy() = default;

  static Energy joules(double j);
  static Energy femtojoules(double fj) { return joules(fj / 1e15); }

  constexpr double in_joules() const { return joules_; }
  double in_femtojoules() const { return joules_ * 1e15; }

  Energy scaled(double factor) const { return joules(joules_ * factor); }

  friend constexpr auto operator<=>(Energy, Energy) = default;

 private:
  constexpr explicit Energy(double j) : joules_(j) {}
  double joules_ = 0.0;
};

struct Decibel {
  double value = 0.0;
  friend constexpr auto operator<=>(Decibel, Decibel) = default;
};

/// 10^(dB/10). Throws std::invalid_argument on a non-finite input.
double db_to_linear(Decibel loss);
Decibel linear_to_db(double ratio);

/// Probability that at least one of a Poisson(mu) number of photons is
/// registered by a detector of efficiency eta: 1 - exp(-eta * mu).
double mean_photons_to_click_prob(double mu, double eta);

/// Average power divided by pulse repetition rate.
Energy pulse_energy_from_avg_power(Power avg_power, double rep_rate_hz);

/// Converts an SI value to a presentation unit (si = value / scale) such that
/// converting back reproduces `si` bit for bit whenever such a value exists
/// within a few ulps of si * scale.
double to_presentation_unit(double si, double scale);

}  // namespace blindsim
