#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace blindsim {

/// Seeded random stream. mt19937_64 is bit-exact across standard libraries;
/// the double conversion is done by hand for the same reason.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p. Exact at the ends: p <= 0 never, p >= 1 always.
  bool bernoulli(double p) { return uniform() < p; }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Stream seed = splitmix64 mix of (master seed, FNV-1a hash of role, run index).
std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view role,
                                 std::uint64_t run_index);

inline RandomStream make_stream(std::uint64_t master, std::string_view role,
                                std::uint64_t run_index) {
  return RandomStream(derive_stream_seed(master, role, run_index));
}

}  // namespace blindsim
