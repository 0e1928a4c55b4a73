#include "bncsim/detector_selfdiff.hpp"

#include <stdexcept>
#include <string>

#include "bncsim/detector_balanced.hpp"
#include "bncsim/errors.hpp"

namespace bncsim {

std::string_view to_string(SdGateEvent e) {
  switch (e) {
    case SdGateEvent::NoEvent: return "NoEvent";
    case SdGateEvent::StrongRise: return "StrongRise";
    case SdGateEvent::DelayedFall: return "DelayedFall";
    case SdGateEvent::WeakRise: return "WeakRise";
    case SdGateEvent::BlindingDetected: return "BlindingDetected";
  }
  return "?";
}

ComparatorWord3 sd_comparators(double current_amp, double delayed_amp,
                               const DetectorParams& params) {
  // The gate response repeats every period, so it is identical on both inputs.
  const double now = limited_amplitude(current_amp, params) + params.background_amplitude;
  const double before = limited_amplitude(delayed_amp, params) + params.background_amplitude;
  ComparatorWord3 w;
  w.a = is_strong(current_amp, params);
  w.c = diff_amp(now, before) >= params.t_diff;
  w.b = diff_amp(before, now) >= params.t_diff;
  return w;
}

SdGateEvent sd_classify(ComparatorWord3 word) {
  switch (word.bits()) {
    case 0b000: return SdGateEvent::NoEvent;
    case 0b101: return SdGateEvent::StrongRise;
    case 0b010: return SdGateEvent::DelayedFall;
    case 0b001: return SdGateEvent::WeakRise;
    case 0b100: return SdGateEvent::BlindingDetected;
    default: break;
  }
  std::string bits = "ABC=";
  for (bool bit : {word.a, word.b, word.c}) bits += bit ? '1' : '0';
  throw InconsistentWord("self-differencing word " + bits + " is unreachable");
}

SdGateEvent SelfDifferencingDetector::step(double amplitude) {
  const SdGateEvent e = sd_classify(sd_comparators(amplitude, delayed_, params_));
  delayed_ = amplitude;
  return e;
}

std::vector<SdGateEvent> process_amplitudes(std::span<const double> amplitudes,
                                            const DetectorParams& params) {
  SelfDifferencingDetector detector(params);
  std::vector<SdGateEvent> events;
  events.reserve(amplitudes.size());
  for (double amp : amplitudes) events.push_back(detector.step(amp));
  return events;
}

std::vector<SdGateEvent> simulate_stream_sd(std::span<const OpticalPulse> pulses,
                                            const DetectorParams& params, Rng& rng) {
  std::vector<double> amplitudes;
  amplitudes.reserve(pulses.size());
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    if (i > 0 && pulses[i].gate_index != pulses[i - 1].gate_index + 1) {
      throw std::invalid_argument("gate indices must increase by one");
    }
    const std::uint64_t detected = detect(pulses[i].sampled_photons, params, rng);
    const bool dark = dark_fire(params, Apd::One, rng);
    amplitudes.push_back(avalanche_amplitude(detected, dark, params, rng));
  }
  return process_amplitudes(amplitudes, params);
}

}  // namespace bncsim
