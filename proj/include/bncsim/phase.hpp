#pragma once

#include <cstdint>
#include <numbers>
#include <string_view>

namespace bncsim {

/// BB84 phase, stored as a count of quarter turns so that phase arithmetic
/// is exact modular integer arithmetic.
enum class Phase : std::uint8_t { Zero = 0, HalfPi = 1, Pi = 2, ThreeHalfPi = 3 };

enum class Basis : std::uint8_t { Zero = 0, One = 1 };

inline constexpr Phase kAllPhases[] = {Phase::Zero, Phase::HalfPi, Phase::Pi,
                                       Phase::ThreeHalfPi};

constexpr int quarter_turns(Phase p) { return static_cast<int>(p); }

constexpr Phase phase_from_quarter_turns(int q) {
  return static_cast<Phase>(((q % 4) + 4) % 4);
}

// (0, pi) -> basis 0, (pi/2, 3pi/2) -> basis 1.
constexpr Basis basis_of(Phase p) {
  return static_cast<Basis>(quarter_turns(p) & 1);
}

// Bit value carried by a phase within its basis: 0 for {0, pi/2}, 1 for {pi, 3pi/2}.
constexpr int bit_of(Phase p) { return quarter_turns(p) >> 1; }

// Phase in `basis` that encodes `bit`.
constexpr Phase encode(Basis basis, int bit) {
  return static_cast<Phase>(static_cast<int>(basis) | ((bit & 1) << 1));
}

// (a - b) mod 2pi.
constexpr Phase phase_difference(Phase a, Phase b) {
  return phase_from_quarter_turns(quarter_turns(a) - quarter_turns(b));
}

// True when the interferometer output is deterministic (delta in {0, pi}).
constexpr bool is_deterministic(Phase delta) { return basis_of(delta) == Basis::Zero; }

constexpr double radians(Phase p) { return quarter_turns(p) * std::numbers::pi / 2.0; }

constexpr std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Zero: return "0";
    case Phase::HalfPi: return "pi/2";
    case Phase::Pi: return "pi";
    case Phase::ThreeHalfPi: return "3pi/2";
  }
  return "?";
}

}  // namespace bncsim
