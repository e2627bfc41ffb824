#include "blindsim/bb84.hpp"

namespace blindsim {

namespace {

Basis random_basis(RandomStream& rng) { return rng.coin() ? Basis::X : Basis::Z; }
Bit random_bit(RandomStream& rng) { return rng.coin() ? Bit::one : Bit::zero; }

BobOutcome resolve(const std::array<GateInput, 2>& inputs,
                   const std::array<DetectorState, 2>& detectors,
                   const DetectorConfig& config, std::array<RandomStream, 2>& rngs) {
  const GateOutcome d0 = process_gate(detectors[0], inputs[0], config, rngs[0]);
  const GateOutcome d1 = process_gate(detectors[1], inputs[1], config, rngs[1]);
  return BobOutcome{d0.click, d1.click, {d0.state, d1.state}};
}

}  // namespace

AttackWindow attack_window(Power cw_power, const DetectorConfig& config) {
  const ResponsePoint th = thresholds_at(cw_power, config);
  return AttackWindow{th.e_always, th.e_never.scaled(2.0)};
}

BB84Symbol alice_emit(double mean_photons, RandomStream& rng) {
  const Basis basis = random_basis(rng);
  const Bit bit = random_bit(rng);
  return BB84Symbol{basis, bit, mean_photons};
}

EveMeasurement eve_measure(const BB84Symbol& symbol, RandomStream& rng) {
  const Basis basis = random_basis(rng);
  if (basis == symbol.basis) return EveMeasurement{basis, symbol.bit};
  return EveMeasurement{basis, random_bit(rng)};
}

FakedState eve_forge(const EveMeasurement& measurement, const AttackParams& attack) {
  return FakedState{measurement.basis, measurement.bit, attack.trigger_energy, attack.cw_power};
}

BobOutcome bob_receive_faked(const FakedState& state, Basis bob_basis,
                             const std::array<DetectorState, 2>& detectors,
                             const DetectorConfig& config, SimTime gate_time,
                             std::array<RandomStream, 2>& rngs) {
  std::array<GateInput, 2> inputs{GateInput{state.cw_power, Energy{}, 0.0, gate_time},
                                  GateInput{state.cw_power, Energy{}, 0.0, gate_time}};
  if (bob_basis == state.basis) {
    inputs[to_int(state.bit)].trigger_energy = state.trigger_energy;
  } else {
    const Energy half = state.trigger_energy.scaled(0.5);
    inputs[0].trigger_energy = half;
    inputs[1].trigger_energy = half;
  }
  return resolve(inputs, detectors, config, rngs);
}

BobOutcome bob_receive_quantum(const BB84Symbol& symbol, Basis bob_basis,
                               const std::array<DetectorState, 2>& detectors,
                               const DetectorConfig& config, SimTime gate_time,
                               std::array<RandomStream, 2>& rngs) {
  std::array<GateInput, 2> inputs{GateInput{Power{}, Energy{}, 0.0, gate_time},
                                  GateInput{Power{}, Energy{}, 0.0, gate_time}};
  if (bob_basis == symbol.basis) {
    inputs[to_int(symbol.bit)].mean_photons = symbol.mean_photons;
  } else {
    inputs[0].mean_photons = symbol.mean_photons / 2.0;
    inputs[1].mean_photons = symbol.mean_photons / 2.0;
  }
  return resolve(inputs, detectors, config, rngs);
}

void classify(GateRecord& record) {
  record.sifted = (record.click0 != record.click1) && record.alice.basis == record.bob_basis;
  const Bit registered = record.click1 ? Bit::one : Bit::zero;
  record.error = record.sifted && registered != record.alice.bit;
}

void StatsAccumulator::add(const GateRecord& record) {
  ++stats_.gates_total;
  const int clicks = static_cast<int>(record.click0) + static_cast<int>(record.click1);
  stats_.clicks += static_cast<std::uint64_t>(clicks);
  if (clicks == 2) ++stats_.double_clicks;
  if (record.eve_basis) {
    ++stats_.forged_pulses;
    if (clicks > 0 && *record.eve_basis != record.bob_basis) ++stats_.wrong_basis_clicks;
  }
  if (record.alarm) {
    ++stats_.alarms;
    if (!stats_.first_alarm_gate) stats_.first_alarm_gate = record.gate_index;
  }
  if (record.watchdog_blinded) ++stats_.watchdog_blinded_gates;

  GateRecord scored = record;
  classify(scored);
  if (!scored.sifted) return;
  ++stats_.sifted_bits;
  if (scored.error) ++stats_.errors;
  const Bit registered = record.click1 ? Bit::one : Bit::zero;
  if (record.eve_bit && *record.eve_bit == registered) ++eve_known_;
}

RunStats StatsAccumulator::finish() const {
  RunStats out = stats_;
  if (out.sifted_bits > 0) {
    const auto sifted = static_cast<double>(out.sifted_bits);
    out.qber = static_cast<double>(out.errors) / sifted;
    out.eve_known_fraction = static_cast<double>(eve_known_) / sifted;
  }
  if (out.gates_total > 0) {
    const double duration_s = static_cast<double>(out.gates_total) / gate_frequency_hz_;
    out.raw_click_rate_hz = static_cast<double>(out.clicks) / duration_s;
  }
  return out;
}

RunStats sift_and_score(std::span<const GateRecord> records, double gate_frequency_hz) {
  StatsAccumulator acc(gate_frequency_hz);
  for (const auto& r : records) acc.add(r);
  return acc.finish();
}

}  // namespace blindsim
