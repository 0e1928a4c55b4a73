#pragma once

#include <cstdint>

#include "bncsim/phase.hpp"
#include "bncsim/rng.hpp"

namespace bncsim {

enum class Apd : std::uint8_t { One = 1, Two = 2 };

/// Operating point of one APD pair plus the comparator thresholds of its
/// read-out. Amplitudes are in units of the mean single-photon gain unless
/// gain_mean is changed.
struct DetectorParams {
  double qe = 0.10;          // detection probability per photon
  double dcp_apd1 = 4e-5;    // dark count probability per gate
  double dcp_apd2 = 2e-5;
  double f_gate = 2e6;       // Hz
  double gain_mean = 1.0;    // mean amplitude per detected photon
  double t_strong;           // raw comparators (Comp A/B)
  double t_diff;             // differential comparators (Comp C/D)
  double background_amplitude;  // common-mode gate response per gate
  // Pulse height of a fully developed (strong) avalanche as seen by the
  // differential path. Strong avalanches on both inputs therefore cancel.
  double saturation_amplitude;

  DetectorParams();

  // t_strong = g0 ln(10/9): one detected photon gives a weak avalanche with
  // probability 0.1.
  static double calibrated_t_strong(double gain_mean);

  // Throws ConfigError when an invariant does not hold.
  void validate() const;

  double dcp(Apd apd) const { return apd == Apd::One ? dcp_apd1 : dcp_apd2; }
};

struct OpticalPulse {
  std::uint64_t gate_index = 0;
  double mean_photons = 0.0;
  Phase phase = Phase::Zero;
  std::uint64_t sampled_photons = 0;
};

struct ArmCounts {
  std::uint64_t apd1 = 0;
  std::uint64_t apd2 = 0;

  std::uint64_t total() const { return apd1 + apd2; }
  friend bool operator==(const ArmCounts&, const ArmCounts&) = default;
};

// Pulse with a Poisson(mean_photons) photon number drawn once.
OpticalPulse make_pulse(std::uint64_t gate_index, double mean_photons, Phase phase, Rng& rng);

// Interference at Bob: delta 0 sends everything to APD1, pi to APD2, and
// pi/2 or 3pi/2 splits photon by photon with probability 1/2.
ArmCounts route_photons(std::uint64_t n, Phase delta, Rng& rng);

std::uint64_t detect(std::uint64_t arm_count, const DetectorParams& params, Rng& rng);

bool dark_fire(const DetectorParams& params, Apd apd, Rng& rng);

// Sum of one exponential gain draw per detected photon, plus one for a dark
// fire. Zero when nothing fired.
double avalanche_amplitude(std::uint64_t detected, bool dark_fired, const DetectorParams& params,
                           Rng& rng);

// Signal entering a differential amplifier: strong avalanches are clipped to
// the saturated pulse height, weak ones pass unchanged.
double limited_amplitude(double amplitude, const DetectorParams& params);

inline bool is_strong(double amplitude, const DetectorParams& params) {
  return amplitude >= params.t_strong;
}

/// Everything that happened at Bob's two APDs in one gate.
struct ArmSignals {
  ArmCounts arrived;
  ArmCounts detected;
  bool dark1 = false;
  bool dark2 = false;
  double amp1 = 0.0;
  double amp2 = 0.0;
};

// Routes a pulse through Bob's interferometer set to bob_phase and produces
// avalanche amplitudes in both arms.
ArmSignals illuminate(const OpticalPulse& pulse, Phase bob_phase, const DetectorParams& params,
                      Rng& rng);

}  // namespace bncsim
