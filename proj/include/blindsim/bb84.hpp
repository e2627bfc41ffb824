#pragma once

// Three-party BB84: Alice's attenuated-laser source, Eve's intercept-resend
// with bright faked states, Bob's passive basis choice with two detectors.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "blindsim/detector.hpp"
#include "blindsim/optics.hpp"
#include "blindsim/random.hpp"

namespace blindsim {

enum class Basis : std::uint8_t { Z = 0, X = 1 };
enum class Bit : std::uint8_t { zero = 0, one = 1 };

constexpr int to_int(Bit b) { return static_cast<int>(b); }
constexpr Bit flip(Bit b) { return b == Bit::zero ? Bit::one : Bit::zero; }

struct BB84Symbol {
  Basis basis = Basis::Z;
  Bit bit = Bit::zero;
  double mean_photons = 0.0;

  friend bool operator==(const BB84Symbol&, const BB84Symbol&) = default;
};

struct EveMeasurement {
  Basis basis = Basis::Z;
  Bit bit = Bit::zero;
};

/// Bright forged state: the trigger pulse encodes Eve's measured basis/bit and
/// rides on c.w. blinding light.
struct FakedState {
  Basis basis = Basis::Z;
  Bit bit = Bit::zero;
  Energy trigger_energy;
  Power cw_power;
};

enum class AttackMode { blinding_faked_state, plain_intercept_resend };

struct AttackParams {
  bool enabled = true;
  Power cw_power = Power::nanowatts(35.0);
  Energy trigger_energy = Energy::femtojoules(27.0);
  double forge_rate_hz = 10e6;
  AttackMode mode = AttackMode::blinding_faked_state;

  friend bool operator==(const AttackParams&, const AttackParams&) = default;
};

/// Perfect-attack window [E_always, 2 E_never] at a blinding power.
struct AttackWindow {
  Energy lower;
  Energy upper;
  bool empty() const { return upper < lower; }
  bool contains(Energy e) const { return lower <= e && e <= upper; }
};

AttackWindow attack_window(Power cw_power, const DetectorConfig& config);

struct GateRecord {
  std::uint64_t gate_index = 0;
  BB84Symbol alice;
  std::optional<Basis> eve_basis;  // present only on gates where Eve resent a state
  std::optional<Bit> eve_bit;
  Basis bob_basis = Basis::Z;
  bool click0 = false;
  bool click1 = false;
  bool sifted = false;
  bool error = false;
  bool alarm = false;
  bool watchdog_blinded = false;

  friend bool operator==(const GateRecord&, const GateRecord&) = default;
};

struct RunStats {
  std::uint64_t gates_total = 0;
  std::uint64_t clicks = 0;  // detector click events, both detectors
  std::uint64_t double_clicks = 0;
  std::uint64_t sifted_bits = 0;
  std::uint64_t errors = 0;
  std::optional<double> qber;                // undefined when nothing is sifted
  std::optional<double> eve_known_fraction;  // undefined when nothing is sifted
  double raw_click_rate_hz = 0.0;
  std::uint64_t alarms = 0;
  std::uint64_t forged_pulses = 0;
  std::uint64_t wrong_basis_clicks = 0;  // clicks on gates where Eve's and Bob's bases differ
  std::uint64_t watchdog_blinded_gates = 0;
  std::optional<std::uint64_t> first_alarm_gate;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

BB84Symbol alice_emit(double mean_photons, RandomStream& rng);

/// Standard intercept-resend measurement: uniform basis; Alice's bit when the
/// bases agree, a fair coin otherwise.
EveMeasurement eve_measure(const BB84Symbol& symbol, RandomStream& rng);

/// Carries the configured energies unchanged; out-of-window energies are
/// allowed so failed attacks can be simulated.
FakedState eve_forge(const EveMeasurement& measurement, const AttackParams& attack);

struct BobOutcome {
  bool click0 = false;
  bool click1 = false;
  std::array<DetectorState, 2> detectors;
};

/// Matched basis: detector[bit] gets the full trigger energy, the other none.
/// Mismatched basis: each detector gets half. Both see the full c.w. power.
BobOutcome bob_receive_faked(const FakedState& state, Basis bob_basis,
                             const std::array<DetectorState, 2>& detectors,
                             const DetectorConfig& config, SimTime gate_time,
                             std::array<RandomStream, 2>& rngs);

/// Unattacked path: matched basis routes mean_photons to detector[bit],
/// mismatched basis routes half to each.
BobOutcome bob_receive_quantum(const BB84Symbol& symbol, Basis bob_basis,
                               const std::array<DetectorState, 2>& detectors,
                               const DetectorConfig& config, SimTime gate_time,
                               std::array<RandomStream, 2>& rngs);

/// Fills record.sifted and record.error from the clicks and bases.
void classify(GateRecord& record);

/// Streaming form of sift_and_score.
class StatsAccumulator {
 public:
  explicit StatsAccumulator(double gate_frequency_hz) : gate_frequency_hz_(gate_frequency_hz) {}

  void add(const GateRecord& record);
  RunStats finish() const;

 private:
  double gate_frequency_hz_;
  RunStats stats_;
  std::uint64_t eve_known_ = 0;
};

RunStats sift_and_score(std::span<const GateRecord> records, double gate_frequency_hz);

}  // namespace blindsim
