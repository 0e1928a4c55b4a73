#pragma once

#include <cstdint>
#include <limits>

namespace bncsim {

/// SplitMix64 bit generator. Satisfies UniformRandomBitGenerator so it plugs
/// into the <random> distributions.
///
/// Simulations never share one generator across gates: each gate gets its own
/// generator derived from (seed, stream, gate). That makes a run reproducible
/// regardless of how gates are sharded across workers, and lets the
/// self-differencing detector recompute the previous gate's signal without
/// replaying a whole stream.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Generator owned by one gate of one stream.
  static Rng for_gate(std::uint64_t seed, std::uint64_t stream, std::uint64_t gate) {
    std::uint64_t s = mix(seed ^ 0x6a09e667f3bcc909ULL);
    s = mix(s ^ (stream + 0xbb67ae8584caa73bULL));
    s = mix(s ^ (gate + 0x3c6ef372fe94f82bULL));
    return Rng(s);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace bncsim
