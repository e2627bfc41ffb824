#include "blindsim/simulation.hpp"

#include <cmath>
#include <algorithm>
#include <atomic>
#include <future>
#include <limits>
#include <thread>
#include <sstream>
#include <stdexcept>

namespace blindsim {

namespace {

// Tracks the last click per detector and rejects any pair inside the dead time.
class DeadTimeAudit {
 public:
  explicit DeadTimeAudit(SimTime dead_time) : dead_time_(dead_time) {}

  void observe(int detector, SimTime t, std::uint64_t gate) {
    auto& last = last_click_[detector];
    if (last && t - *last < dead_time_) {
      std::ostringstream msg;
      msg << "dead-time violation on detector " << detector << " at gate " << gate;
      throw std::logic_error(msg.str());
    }
    last = t;
  }

 private:
  SimTime dead_time_;
  std::array<std::optional<SimTime>, 2> last_click_{};
};

}  // namespace

RunResult run(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  const DetectorConfig& det = config.detector;
  const bool scw = config.protocol == Protocol::scw;
  const std::optional<ScwChain> chain =
      scw ? std::optional<ScwChain>(resolve_scw_chain(config)) : std::nullopt;

  const bool attacking = config.attack && config.attack->enabled;
  const bool blinding = attacking && config.attack->mode == AttackMode::blinding_faked_state;
  const bool intercept_resend =
      attacking && config.attack->mode == AttackMode::plain_intercept_resend;

  // Eve's powers are set at Bob's entrance; in SCW only the sideband share
  // reaches the APD.
  AttackParams at_apd = config.attack.value_or(AttackParams{});
  if (chain) {
    at_apd.cw_power = propagate_eve_spectrum({at_apd.cw_power, Power{}}, *chain).at_apd;
    at_apd.trigger_energy = energy_at_apd(at_apd.trigger_energy, *chain);
  }
  const std::uint64_t stride = blinding ? forge_stride(det.gate_frequency_hz, at_apd.forge_rate_hz) : 1;

  bool alarm = false;
  bool watchdog_blinded = false;
  if (chain) {
    const Power carrier = blinding ? config.attack->cw_power : config.scw->alice_carrier;
    const auto verdict =
        watchdog_check(watchdog_reading(carrier, *chain), *chain,
                       config.scw->watchdog_blinding_threshold.value_or(
                           Power::watts(std::numeric_limits<double>::max())));
    alarm = verdict == WatchdogVerdict::alarm;
    watchdog_blinded = verdict == WatchdogVerdict::watchdog_blinded;
  }

  RandomStream alice_rng = make_stream(config.seed, "alice", options.run_index);
  RandomStream eve_rng = make_stream(config.seed, "eve", options.run_index);
  RandomStream bob_rng = make_stream(config.seed, "bob_basis", options.run_index);
  std::array<RandomStream, 2> detector_rngs{make_stream(config.seed, "detector0", options.run_index),
                                            make_stream(config.seed, "detector1", options.run_index)};

  const SimTime period = det.gate_period();
  const double alice_at_bob = config.source_mean_photons * config.channel_transmission;
  std::array<DetectorState, 2> detectors{};
  DeadTimeAudit audit(det.dead_time());
  StatsAccumulator acc(det.gate_frequency_hz);
  RunResult result;
  if (options.keep_events) result.events.reserve(static_cast<std::size_t>(config.gates));

  for (std::uint64_t g = 0; g < config.gates; ++g) {
    const SimTime t = period * static_cast<std::int64_t>(g);
    GateRecord rec;
    rec.gate_index = g;
    rec.alarm = alarm;
    rec.watchdog_blinded = watchdog_blinded;
    rec.alice = alice_emit(config.source_mean_photons, alice_rng);
    rec.bob_basis = bob_rng.coin() ? Basis::X : Basis::Z;

    BobOutcome bob;
    if (blinding) {
      FakedState pulse{Basis::Z, Bit::zero, Energy{}, at_apd.cw_power};
      if (g % stride == 0) {
        const EveMeasurement m = eve_measure(rec.alice, eve_rng);
        rec.eve_basis = m.basis;
        rec.eve_bit = m.bit;
        pulse = eve_forge(m, at_apd);
      }
      bob = bob_receive_faked(pulse, rec.bob_basis, detectors, det, t, detector_rngs);
    } else if (intercept_resend) {
      const EveMeasurement m = eve_measure(rec.alice, eve_rng);
      rec.eve_basis = m.basis;
      rec.eve_bit = m.bit;
      const BB84Symbol resent{m.basis, m.bit, config.source_mean_photons};
      bob = bob_receive_quantum(resent, rec.bob_basis, detectors, det, t, detector_rngs);
    } else {
      BB84Symbol arriving = rec.alice;
      arriving.mean_photons = alice_at_bob;
      bob = bob_receive_quantum(arriving, rec.bob_basis, detectors, det, t, detector_rngs);
    }
    detectors = bob.detectors;
    rec.click0 = bob.click0;
    rec.click1 = bob.click1;
    if (rec.click0) audit.observe(0, t, g);
    if (rec.click1) audit.observe(1, t, g);
    classify(rec);

    acc.add(rec);
    if (options.event_sink) options.event_sink(rec);
    if (options.keep_events) result.events.push_back(rec);
  }
  result.stats = acc.finish();
  return result;
}

std::optional<std::string> find_dead_time_violation(std::span<const GateRecord> events,
                                                    SimTime gate_period, SimTime dead_time) {
  std::array<std::optional<std::uint64_t>, 2> last{};
  for (const auto& e : events) {
    const std::array<bool, 2> clicks{e.click0, e.click1};
    for (int d = 0; d < 2; ++d) {
      if (!clicks[d]) continue;
      if (last[d]) {
        const auto gap = gate_period * static_cast<std::int64_t>(e.gate_index - *last[d]);
        if (gap < dead_time) {
          std::ostringstream msg;
          msg << "detector " << d << " clicked at gates " << *last[d] << " and " << e.gate_index
              << " (" << gap.count() << " ps apart, dead time " << dead_time.count() << " ps)";
          return msg.str();
        }
      }
      last[d] = e.gate_index;
    }
  }
  return std::nullopt;
}

std::string_view to_string(SweepVariable v) {
  return v == SweepVariable::trigger_energy_fj ? "trigger_energy_fj" : "cw_power_nw";
}

std::vector<std::string> SweepSpec::problems() const {
  std::vector<std::string> out;
  if (!std::isfinite(from) || !std::isfinite(to) || from < 0.0) {
    out.emplace_back("sweep: from/to must be finite and from >= 0");
  }
  if (from > to) out.emplace_back("sweep: from must be <= to");
  if (from < to && steps < 2) out.emplace_back("sweep: steps must be >= 2");
  if (gates_per_point == 0) out.emplace_back("sweep: gates per point must be > 0");
  return out;
}

std::vector<double> SweepSpec::values() const {
  if (from == to) return {from};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out.push_back(i + 1 == steps ? to : from + (to - from) * i / (steps - 1));
  }
  return out;
}

SweepSpec curve_defaults() { return SweepSpec{}; }

SweepPoint measure_detector_response(const DetectorConfig& detector, Power cw_power,
                                     Energy trigger_energy, std::uint64_t stride,
                                     std::uint64_t gates, RandomStream& rng) {
  SweepPoint point;
  point.gates = gates;
  const SimTime period = detector.gate_period();
  DetectorState state;
  std::optional<SimTime> last_click;
  const SimTime dead_time = detector.dead_time();
  for (std::uint64_t g = 0; g < gates; ++g) {
    const bool slot = g % stride == 0;
    const SimTime t = period * static_cast<std::int64_t>(g);
    const GateInput input{cw_power, slot ? trigger_energy : Energy{}, 0.0, t};
    const GateOutcome out = process_gate(state, input, detector, rng);
    state = out.state;
    if (slot) ++point.trigger_slots;
    if (!out.click) continue;
    if (last_click && t - *last_click < dead_time) {
      throw std::logic_error("dead-time violation in detector response measurement");
    }
    last_click = t;
    ++point.total_clicks;
    if (slot) ++point.slot_clicks;
  }
  const auto slots = static_cast<double>(point.trigger_slots);
  point.click_probability = static_cast<double>(point.slot_clicks) / slots;
  point.standard_error =
      std::sqrt(point.click_probability * (1.0 - point.click_probability) / slots);
  point.click_rate_hz =
      static_cast<double>(point.total_clicks) / (static_cast<double>(gates) / detector.gate_frequency_hz);
  return point;
}

std::vector<SweepPoint> sweep(const SweepSpec& spec, const ScenarioConfig& base) {
  auto issues = base.problems();
  for (auto& issue : spec.problems()) issues.push_back(std::move(issue));
  if (!issues.empty()) throw ConfigError(std::move(issues));

  const AttackParams attack = base.attack.value_or(AttackParams{});
  const std::uint64_t stride = forge_stride(base.detector.gate_frequency_hz, attack.forge_rate_hz);
  const std::vector<double> values = spec.values();

  std::vector<SweepPoint> out(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      Power cw = attack.cw_power;
      Energy trigger = attack.trigger_energy;
      if (spec.variable == SweepVariable::trigger_energy_fj) {
        trigger = Energy::femtojoules(values[i]);
      } else {
        cw = Power::nanowatts(values[i]);
      }
      RandomStream rng = make_stream(base.seed, "sweep", i);
      out[i] = measure_detector_response(base.detector, cw, trigger, stride,
                                         spec.gates_per_point, rng);
      out[i].value = values[i];
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(values.size(), std::max(1U, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> pending;
  for (std::size_t w = 0; w < workers; ++w) {
    pending.push_back(std::async(std::launch::async, worker));
  }
  for (auto& f : pending) f.get();
  return out;
}

}  // namespace blindsim
