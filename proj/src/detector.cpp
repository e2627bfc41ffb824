#include "blindsim/detector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blindsim {

namespace {

constexpr double kLogisticSteepness = 10.0;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Logistic on [0, 1] rescaled to hit 0 and 1 exactly at the ends.
double logistic_ramp(double x) {
  const double lo = logistic(-kLogisticSteepness / 2.0);
  const double hi = logistic(kLogisticSteepness / 2.0);
  return (logistic(kLogisticSteepness * (x - 0.5)) - lo) / (hi - lo);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

SimTime seconds_to_sim_time(double seconds) {
  if (!std::isfinite(seconds) || seconds < 0.0) {
    throw std::invalid_argument("time must be finite and >= 0");
  }
  return SimTime(std::llround(seconds * 1e12));
}

std::vector<std::string> DetectorConfig::problems() const {
  std::vector<std::string> out;
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    out.emplace_back("efficiency: must lie in [0, 1]");
  }
  if (!positive_finite(gate_frequency_hz)) out.emplace_back("gate_frequency_hz: must be > 0");
  if (!positive_finite(gate_width_s)) out.emplace_back("gate_width_ns: must be > 0");
  if (!positive_finite(dead_time_s)) out.emplace_back("dead_time_ns: must be > 0");
  if (!positive_finite(dark_count_rate_hz) && dark_count_rate_hz != 0.0) {
    out.emplace_back("dark_count_rate_hz: must be >= 0");
  }
  if (positive_finite(gate_frequency_hz) && dark_count_rate_hz > gate_frequency_hz) {
    out.emplace_back("dark_count_rate_hz: exceeds gate_frequency_hz");
  }
  if (positive_finite(gate_frequency_hz) && positive_finite(gate_width_s) &&
      gate_width_s * gate_frequency_hz > 1.0) {
    out.emplace_back("gate_width_ns: gates overlap at this gate_frequency_hz");
  }
  if (positive_finite(gate_frequency_hz) && std::llround(1e12 / gate_frequency_hz) < 1) {
    out.emplace_back("gate_frequency_hz: gate period below 1 ps clock resolution");
  }
  if (!(blinding_threshold > Power{})) out.emplace_back("blinding_threshold_nw: must be > 0");
  if (response_points.empty()) out.emplace_back("response_points: at least one row required");
  for (std::size_t i = 0; i < response_points.size(); ++i) {
    const auto& p = response_points[i];
    std::ostringstream where;
    where << "response_points[" << i << "]";
    if (!(Energy{} < p.e_never && p.e_never < p.e_always)) {
      out.push_back(where.str() + ": requires 0 < e_never_fj < e_always_fj");
    }
    if (i > 0) {
      const auto& prev = response_points[i - 1];
      if (!(prev.blinding_power < p.blinding_power)) {
        out.push_back(where.str() + ": blinding_power_nw must be strictly increasing");
      }
      const double prev_width = prev.e_always.in_joules() - prev.e_never.in_joules();
      const double width = p.e_always.in_joules() - p.e_never.in_joules();
      if (width > prev_width) {
        out.push_back(where.str() +
                      ": ramp width (e_always - e_never) must not grow with blinding power");
      }
    }
  }
  return out;
}

void DetectorConfig::validate() const {
  const auto issues = problems();
  if (issues.empty()) return;
  std::string msg = "invalid detector config:";
  for (const auto& issue : issues) msg += "\n  " + issue;
  throw std::invalid_argument(msg);
}

SimTime DetectorConfig::gate_period() const {
  return SimTime(std::llround(1e12 / gate_frequency_hz));
}

bool is_blinded(Power cw_power, const DetectorConfig& config) {
  return cw_power >= config.blinding_threshold;
}

ResponsePoint thresholds_at(Power cw_power, const DetectorConfig& config) {
  const auto& rows = config.response_points;
  if (rows.empty()) throw std::invalid_argument("detector has no response points");
  if (cw_power <= rows.front().blinding_power) return rows.front();
  if (cw_power >= rows.back().blinding_power) return rows.back();
  const auto upper = std::upper_bound(
      rows.begin(), rows.end(), cw_power,
      [](Power p, const ResponsePoint& row) { return p < row.blinding_power; });
  const auto& hi = *upper;
  const auto& lo = *(upper - 1);
  const double t = (cw_power.in_watts() - lo.blinding_power.in_watts()) /
                   (hi.blinding_power.in_watts() - lo.blinding_power.in_watts());
  auto lerp = [t](Energy a, Energy b) {
    return Energy::joules(a.in_joules() + t * (b.in_joules() - a.in_joules()));
  };
  return ResponsePoint{cw_power, lerp(lo.e_never, hi.e_never), lerp(lo.e_always, hi.e_always)};
}

double blinded_click_probability(Energy trigger_energy, Power cw_power,
                                 const DetectorConfig& config) {
  if (!is_blinded(cw_power, config)) {
    throw std::domain_error("blinded_click_probability called on an unblinded detector");
  }
  const ResponsePoint th = thresholds_at(cw_power, config);
  if (trigger_energy <= th.e_never) return 0.0;
  if (trigger_energy >= th.e_always) return 1.0;
  const double x = (trigger_energy.in_joules() - th.e_never.in_joules()) /
                   (th.e_always.in_joules() - th.e_never.in_joules());
  switch (config.transition_shape) {
    case TransitionShape::linear:
      return x;
    case TransitionShape::logistic:
      return std::clamp(logistic_ramp(x), 0.0, 1.0);
  }
  return x;
}

double geiger_click_probability(const GateInput& input, const DetectorConfig& config) {
  const double p_photon = mean_photons_to_click_prob(input.mean_photons, config.efficiency);
  const double p_dark = config.dark_probability_per_gate();
  return 1.0 - (1.0 - p_photon) * (1.0 - p_dark);
}

GateOutcome process_gate(const DetectorState& state, const GateInput& input,
                         const DetectorConfig& config, RandomStream& rng) {
  if (state.last_gate && input.gate_time < *state.last_gate) {
    throw std::invalid_argument("gate times must be nondecreasing for one detector");
  }
  GateOutcome out{false, state};
  out.state.last_gate = input.gate_time;
  const bool blinded = is_blinded(input.cw_power, config);
  out.state.mode = blinded ? DetectorMode::blinded : DetectorMode::geiger;
  if (input.gate_time < state.dead_until) {
    return out;
  }
  const double p = blinded ? blinded_click_probability(input.trigger_energy, input.cw_power, config)
                           : geiger_click_probability(input, config);
  if (rng.bernoulli(p)) {
    out.click = true;
    out.state.dead_until = input.gate_time + config.dead_time();
  }
  return out;
}

}  // namespace blindsim
