#include "blindsim/optics.hpp"

#include <cmath>
#include <limits>

namespace blindsim {

namespace {

void require_nonnegative_finite(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0, got " +
                                std::to_string(v));
  }
}

}  // namespace

Power Power::watts(double w) {
  require_nonnegative_finite(w, "power");
  return Power(w);
}

Energy Energy::joules(double j) {
  require_nonnegative_finite(j, "energy");
  return Energy(j);
}

double db_to_linear(Decibel loss) {
  if (!std::isfinite(loss.value)) {
    throw std::invalid_argument("decibel value must be finite");
  }
  return std::pow(10.0, loss.value / 10.0);
}

Decibel linear_to_db(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("linear ratio must be finite and > 0");
  }
  return Decibel{10.0 * std::log10(ratio)};
}

double mean_photons_to_click_prob(double mu, double eta) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("mean photon number must be finite and >= 0");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("efficiency must lie in [0, 1]");
  }
  return -std::expm1(-eta * mu);
}

Energy pulse_energy_from_avg_power(Power avg_power, double rep_rate_hz) {
  if (!(rep_rate_hz > 0.0) || !std::isfinite(rep_rate_hz)) {
    throw std::invalid_argument("repetition rate must be finite and > 0");
  }
  return Energy::joules(avg_power.in_watts() / rep_rate_hz);
}

double to_presentation_unit(double si, double scale) {
  const double guess = si * scale;
  if (guess / scale == si) {
    return guess;
  }
  double up = guess;
  double down = guess;
  for (int i = 0; i < 8; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (up / scale == si) return up;
    if (down / scale == si) return down;
  }
  return guess;
}

}  // namespace blindsim
