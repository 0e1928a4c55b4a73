#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bncsim/signal_model.hpp"

namespace bncsim {

/// Comparators of the self-differencing countermeasure.
///   a: raw signal >= t_strong
///   b: negative diff output (delayed copy dominates)
///   c: positive diff output (current gate dominates)
struct ComparatorWord3 {
  bool a = false;
  bool b = false;
  bool c = false;

  std::uint8_t bits() const { return static_cast<std::uint8_t>((a << 2) | (b << 1) | c); }
  friend bool operator==(const ComparatorWord3&, const ComparatorWord3&) = default;
};

enum class SdGateEvent : std::uint8_t {
  NoEvent,
  StrongRise,
  DelayedFall,
  WeakRise,
  BlindingDetected
};

std::string_view to_string(SdGateEvent e);

ComparatorWord3 sd_comparators(double current_amp, double delayed_amp,
                               const DetectorParams& params);

SdGateEvent sd_classify(ComparatorWord3 word);

/// One APD followed by a one-gate delay line and a differential amplifier.
/// The delay register starts empty.
class SelfDifferencingDetector {
 public:
  explicit SelfDifferencingDetector(const DetectorParams& params) : params_(params) {}

  SdGateEvent step(double amplitude);

  // Pre-loads the delay register, e.g. with the previous gate's amplitude
  // when a stream is processed in shards.
  void prime(double previous_amplitude) { delayed_ = previous_amplitude; }
  double delayed() const { return delayed_; }

 private:
  DetectorParams params_;
  double delayed_ = 0.0;
};

std::vector<SdGateEvent> process_amplitudes(std::span<const double> amplitudes,
                                            const DetectorParams& params);

// Every photon of a pulse lands on the single APD (dark rate dcp_apd1).
// Gate indices must increase by exactly one.
std::vector<SdGateEvent> simulate_stream_sd(std::span<const OpticalPulse> pulses,
                                            const DetectorParams& params, Rng& rng);

}  // namespace bncsim
