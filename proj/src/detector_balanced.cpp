#include "bncsim/detector_balanced.hpp"

#include <string>

#include "bncsim/errors.hpp"

namespace bncsim {

std::string_view to_string(GateEvent e) {
  switch (e) {
    case GateEvent::NoEvent: return "NoEvent";
    case GateEvent::Strong1: return "Strong1";
    case GateEvent::Strong2: return "Strong2";
    case GateEvent::Weak1: return "Weak1";
    case GateEvent::Weak2: return "Weak2";
    case GateEvent::BlindingDetected: return "BlindingDetected";
  }
  return "?";
}

std::string_view to_string(BaselineClick c) {
  switch (c) {
    case BaselineClick::NoClick: return "NoClick";
    case BaselineClick::Click1: return "Click1";
    case BaselineClick::Click2: return "Click2";
  }
  return "?";
}

ComparatorWord4 comparator_bank(double amp1, double amp2, const DetectorParams& params) {
  const double v1 = limited_amplitude(amp1, params) + params.background_amplitude;
  const double v2 = limited_amplitude(amp2, params) + params.background_amplitude;
  ComparatorWord4 w;
  w.a = is_strong(amp1, params);
  w.b = is_strong(amp2, params);
  w.c = diff_amp(v1, v2) >= params.t_diff;
  w.d = diff_amp(v2, v1) >= params.t_diff;
  return w;
}

GateEvent classify(ComparatorWord4 word) {
  // ABCD
  switch (word.bits()) {
    case 0b0000: return GateEvent::NoEvent;
    case 0b1010: return GateEvent::Strong1;
    case 0b0101: return GateEvent::Strong2;
    case 0b0010: return GateEvent::Weak1;
    case 0b0001: return GateEvent::Weak2;
    case 0b1100: return GateEvent::BlindingDetected;
    default: break;
  }
  std::string bits = "ABCD=";
  for (bool bit : {word.a, word.b, word.c, word.d}) bits += bit ? '1' : '0';
  throw InconsistentWord("comparator word " + bits + " is unreachable");
}

BaselineClick baseline_click(double amp1, double amp2, const DetectorParams& params) {
  const ComparatorWord4 w = comparator_bank(amp1, amp2, params);
  if (w.c) return BaselineClick::Click1;
  if (w.d) return BaselineClick::Click2;
  return BaselineClick::NoClick;
}

ConventionalReadout conventional_readout(double amp1, double amp2) {
  ConventionalReadout r;
  r.click1 = amp1 > 0.0;
  r.click2 = amp2 > 0.0;
  if (r.click1 != r.click2) r.resolved = r.click1 ? BaselineClick::Click1 : BaselineClick::Click2;
  return r;
}

BalancedGate read_out_balanced(const ArmSignals& signals, const DetectorParams& params) {
  BalancedGate g;
  g.signals = signals;
  g.word = comparator_bank(signals.amp1, signals.amp2, params);
  g.event = classify(g.word);
  g.click = g.word.c ? BaselineClick::Click1
                     : (g.word.d ? BaselineClick::Click2 : BaselineClick::NoClick);
  return g;
}

BalancedGate simulate_gate_balanced(const OpticalPulse& pulse_at_bob, Phase bob_phase,
                                    const DetectorParams& params, Rng& rng) {
  return read_out_balanced(illuminate(pulse_at_bob, bob_phase, params, rng), params);
}

}  // namespace bncsim
