#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "blindsim/bb84.hpp"
#include "doctest.h"

using namespace blindsim;

namespace {

Energy fj(double v) { return Energy::femtojoules(v); }
Power nw(double v) { return Power::nanowatts(v); }

std::array<RandomStream, 2> detector_streams(std::uint64_t seed) {
  return {RandomStream(seed), RandomStream(seed + 1)};
}

}  // namespace

TEST_CASE("alice_emit is uniform over the four states") {
  RandomStream rng(1);
  std::map<std::pair<Basis, Bit>, int> counts;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const auto s = alice_emit(0.1, rng);
    REQUIRE(s.mean_photons == 0.1);
    ++counts[{s.basis, s.bit}];
  }
  CHECK(counts.size() == 4);
  for (const auto& [key, c] : counts) {
    CHECK(std::abs(c / double(n) - 0.25) <= 0.005);
  }
}

TEST_CASE("alice_emit replays under a fixed seed") {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(alice_emit(0.2, a) == alice_emit(0.2, b));
}

TEST_CASE("eve_measure") {
  RandomStream rng(3);
  int matched_agree = 0, matched = 0, mismatched = 0, mismatched_agree = 0, z_basis = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const BB84Symbol s{i % 2 ? Basis::X : Basis::Z, (i / 2) % 2 ? Bit::one : Bit::zero, 0.1};
    const auto m = eve_measure(s, rng);
    z_basis += m.basis == Basis::Z;
    if (m.basis == s.basis) {
      ++matched;
      matched_agree += m.bit == s.bit;
    } else {
      ++mismatched;
      mismatched_agree += m.bit == s.bit;
    }
  }
  CHECK(matched_agree == matched);
  CHECK(std::abs(mismatched_agree / double(mismatched) - 0.5) <= 0.01);
  CHECK(std::abs(z_basis / double(n) - 0.5) <= 0.005);
}

TEST_CASE("eve_forge passes energies through without clamping") {
  AttackParams attack;
  attack.trigger_energy = fj(31);
  attack.cw_power = nw(35);
  const auto f = eve_forge({Basis::X, Bit::one}, attack);
  CHECK(f.basis == Basis::X);
  CHECK(f.bit == Bit::one);
  CHECK(f.trigger_energy == fj(31));
  CHECK(f.cw_power == nw(35));
}

TEST_CASE("attack window at 35 nW is [25.8, 30.8] fJ") {
  const DetectorConfig c;
  const auto w = attack_window(nw(35), c);
  CHECK(w.lower == fj(25.8));
  CHECK(w.upper.in_femtojoules() == doctest::Approx(30.8).epsilon(1e-12));
  CHECK(w.contains(fj(25.8)));
  CHECK(w.contains(fj(30.8)));
  CHECK_FALSE(w.contains(fj(31)));
  CHECK_FALSE(w.empty());
}

TEST_CASE("bob_receive_faked routes the trigger by basis") {
  const DetectorConfig c;
  std::array<DetectorState, 2> dets{};
  auto rngs = detector_streams(10);

  SUBCASE("matched basis at E_always clicks only detector[bit]") {
    for (Bit bit : {Bit::zero, Bit::one}) {
      const FakedState f{Basis::Z, bit, fj(25.8), nw(35)};
      const auto out = bob_receive_faked(f, Basis::Z, dets, c, SimTime(0), rngs);
      CHECK(out.click0 == (bit == Bit::zero));
      CHECK(out.click1 == (bit == Bit::one));
    }
  }
  SUBCASE("mismatched basis at E_always never clicks") {
    for (int g = 0; g < 10000; ++g) {
      const FakedState f{Basis::X, Bit::one, fj(25.8), nw(35)};
      const auto out = bob_receive_faked(f, Basis::Z, dets, c, c.gate_period() * (10 * g), rngs);
      REQUIRE_FALSE(out.click0);
      REQUIRE_FALSE(out.click1);
      dets = out.detectors;
    }
  }
  SUBCASE("mismatched basis at 32 fJ lands in the ramp") {
    // Linear ramp oracle: (32/2 - 15.4) / (25.8 - 15.4).
    const double p_expected = (16.0 - 15.4) / (25.8 - 15.4);
    const int n = 200'000;
    int clicks0 = 0;
    for (int g = 0; g < n; ++g) {
      const FakedState f{Basis::X, Bit::zero, fj(32), nw(35)};
      const auto out =
          bob_receive_faked(f, Basis::Z, {}, c, SimTime(0), rngs);
      clicks0 += out.click0;
    }
    const double sigma = std::sqrt(p_expected * (1 - p_expected) / n);
    CHECK(std::abs(clicks0 / double(n) - p_expected) <= 5 * sigma);
    CHECK(p_expected == doctest::Approx(0.0577).epsilon(1e-3));
  }
}

TEST_CASE("bob_receive_quantum") {
  const DetectorConfig c;
  auto rngs = detector_streams(20);
  const int n = 400'000;

  SUBCASE("matched basis") {
    int right = 0, wrong = 0;
    for (int g = 0; g < n; ++g) {
      const auto out = bob_receive_quantum({Basis::Z, Bit::one, 0.1}, Basis::Z, {}, c,
                                           SimTime(0), rngs);
      right += out.click1;
      wrong += out.click0;
    }
    const double p = 1.0 - (1.0 - (1.0 - std::exp(-0.01))) * (1.0 - 2e-6);
    CHECK(std::abs(right / double(n) - p) <= 5 * std::sqrt(p * (1 - p) / n));
    CHECK(wrong <= 10);  // dark counts only: expectation 0.8
  }
  SUBCASE("mismatched basis splits the intensity") {
    int c0 = 0, c1 = 0;
    for (int g = 0; g < n; ++g) {
      const auto out = bob_receive_quantum({Basis::X, Bit::one, 0.1}, Basis::Z, {}, c,
                                           SimTime(0), rngs);
      c0 += out.click0;
      c1 += out.click1;
    }
    const double p = 1.0 - std::exp(-0.005);
    const double tol = 5 * std::sqrt(p * (1 - p) / n) + 2e-6;
    CHECK(std::abs(c0 / double(n) - p) <= tol);
    CHECK(std::abs(c1 / double(n) - p) <= tol);
  }
  SUBCASE("no photons leaves dark counts") {
    const int gates = 2'000'000;
    int clicks = 0;
    for (int g = 0; g < gates; ++g) {
      const auto out =
          bob_receive_quantum({Basis::Z, Bit::zero, 0.0}, Basis::Z, {}, c, SimTime(0), rngs);
      clicks += out.click0 + out.click1;
    }
    const double expected = 2 * gates * 2e-6;  // 8 clicks
    CHECK(std::abs(clicks - expected) <= 5 * std::sqrt(expected));
  }
}

TEST_CASE("sift_and_score") {
  auto record = [](std::uint64_t i, Basis a, Bit bit, Basis b, bool c0, bool c1) {
    GateRecord r;
    r.gate_index = i;
    r.alice = {a, bit, 0.1};
    r.bob_basis = b;
    r.click0 = c0;
    r.click1 = c1;
    return r;
  };

  SUBCASE("no clicks leaves qber undefined") {
    std::vector<GateRecord> recs{record(0, Basis::Z, Bit::zero, Basis::Z, false, false)};
    const auto s = sift_and_score(recs, 1e8);
    CHECK(s.sifted_bits == 0);
    CHECK_FALSE(s.qber.has_value());
    CHECK_FALSE(s.eve_known_fraction.has_value());
  }
  SUBCASE("counts") {
    std::vector<GateRecord> recs{
        record(0, Basis::Z, Bit::zero, Basis::Z, true, false),  // sifted, correct
        record(1, Basis::Z, Bit::zero, Basis::Z, false, true),  // sifted, error
        record(2, Basis::X, Bit::one, Basis::Z, false, true),   // basis mismatch
        record(3, Basis::X, Bit::one, Basis::X, true, true),    // double click
        record(4, Basis::X, Bit::one, Basis::X, false, true),   // sifted, correct
    };
    recs[0].eve_basis = Basis::Z;
    recs[0].eve_bit = Bit::zero;
    recs[4].eve_basis = Basis::Z;
    recs[4].eve_bit = Bit::zero;
    const auto s = sift_and_score(recs, 1e8);
    CHECK(s.gates_total == 5);
    CHECK(s.clicks == 6);
    CHECK(s.double_clicks == 1);
    CHECK(s.sifted_bits == 3);
    CHECK(s.errors == 1);
    CHECK(*s.qber == doctest::Approx(1.0 / 3.0));
    CHECK(*s.eve_known_fraction == doctest::Approx(1.0 / 3.0));
    CHECK(s.forged_pulses == 2);
    CHECK(s.wrong_basis_clicks == 1);
    CHECK(s.raw_click_rate_hz == doctest::Approx(6.0 / (5.0 / 1e8)));
  }
  SUBCASE("classify never sifts double clicks and errors imply sifted") {
    for (int mask = 0; mask < 64; ++mask) {
      GateRecord r = record(0, mask & 1 ? Basis::X : Basis::Z, mask & 2 ? Bit::one : Bit::zero,
                            mask & 4 ? Basis::X : Basis::Z, mask & 8, mask & 16);
      classify(r);
      if (r.sifted) REQUIRE(r.click0 != r.click1);
      if (r.error) REQUIRE(r.sifted);
    }
  }
}
