#pragma once

#include <cstdint>
#include <string_view>

#include "bncsim/signal_model.hpp"

namespace bncsim {

/// Outputs of the four comparators of the balanced countermeasure.
///   a: raw APD1 >= t_strong      b: raw APD2 >= t_strong
///   c: diff amp, APD1 dominant   d: diff amp, APD2 dominant
struct ComparatorWord4 {
  bool a = false;
  bool b = false;
  bool c = false;
  bool d = false;

  // Packed as ABCD, A in the most significant bit.
  std::uint8_t bits() const {
    return static_cast<std::uint8_t>((a << 3) | (b << 2) | (c << 1) | d);
  }
  friend bool operator==(const ComparatorWord4&, const ComparatorWord4&) = default;
};

enum class GateEvent : std::uint8_t { NoEvent, Strong1, Strong2, Weak1, Weak2, BlindingDetected };

enum class BaselineClick : std::uint8_t { NoClick, Click1, Click2 };

std::string_view to_string(GateEvent e);
std::string_view to_string(BaselineClick c);

// Differential amplifier: positive input minus negative input.
inline double diff_amp(double positive, double negative) { return positive - negative; }

// Amplitudes are avalanche-only; the common background is added to both
// diff inputs internally and cancels there.
ComparatorWord4 comparator_bank(double amp1, double amp2, const DetectorParams& params);

// FPGA truth table. Throws InconsistentWord for words the signal model
// cannot produce.
GateEvent classify(ComparatorWord4 word);

// Read-out of the plain balanced detector: two comparators on the diff amp.
BaselineClick baseline_click(double amp1, double amp2, const DetectorParams& params);

/// Conventional two-APD read-out without background cancellation. Each APD
/// clicks on any avalanche; coincident clicks are discarded.
struct ConventionalReadout {
  bool click1 = false;
  bool click2 = false;
  BaselineClick resolved = BaselineClick::NoClick;
};

ConventionalReadout conventional_readout(double amp1, double amp2);

struct BalancedGate {
  GateEvent event = GateEvent::NoEvent;
  BaselineClick click = BaselineClick::NoClick;
  ComparatorWord4 word;
  ArmSignals signals;
};

BalancedGate simulate_gate_balanced(const OpticalPulse& pulse_at_bob, Phase bob_phase,
                                    const DetectorParams& params, Rng& rng);

// Classification of an already simulated gate.
BalancedGate read_out_balanced(const ArmSignals& signals, const DetectorParams& params);

}  // namespace bncsim
