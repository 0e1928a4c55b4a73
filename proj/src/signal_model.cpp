#include "bncsim/signal_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bncsim/errors.hpp"

namespace bncsim {

DetectorParams::DetectorParams()
    : t_strong(calibrated_t_strong(1.0)),
      t_diff(0.01),
      background_amplitude(0.05),
      saturation_amplitude(2.0 * calibrated_t_strong(1.0)) {}

double DetectorParams::calibrated_t_strong(double gain_mean) {
  return gain_mean * std::log(10.0 / 9.0);
}

void DetectorParams::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(qe)) throw ConfigError("qe must lie in [0, 1]");
  if (!unit(dcp_apd1) || !unit(dcp_apd2)) throw ConfigError("dcp must lie in [0, 1]");
  if (!(f_gate > 0.0)) throw ConfigError("f_gate must be positive");
  if (!(gain_mean > 0.0)) throw ConfigError("gain_mean must be positive");
  if (!(t_diff > 0.0)) throw ConfigError("t_diff must be positive");
  if (!(t_diff < t_strong)) throw ConfigError("t_diff must be below t_strong");
  if (!(background_amplitude >= 0.0 && background_amplitude < t_strong))
    throw ConfigError("background_amplitude must lie in [0, t_strong)");
  if (!(saturation_amplitude >= t_strong + t_diff))
    throw ConfigError("saturation_amplitude must be at least t_strong + t_diff");
}

OpticalPulse make_pulse(std::uint64_t gate_index, double mean_photons, Phase phase, Rng& rng) {
  if (!(mean_photons >= 0.0)) throw std::invalid_argument("mean_photons must be non-negative");
  OpticalPulse pulse{gate_index, mean_photons, phase, 0};
  if (mean_photons > 0.0) {
    pulse.sampled_photons = std::poisson_distribution<std::uint64_t>(mean_photons)(rng);
  }
  return pulse;
}

ArmCounts route_photons(std::uint64_t n, Phase delta, Rng& rng) {
  switch (delta) {
    case Phase::Zero: return {n, 0};
    case Phase::Pi: return {0, n};
    case Phase::HalfPi:
    case Phase::ThreeHalfPi: break;
  }
  if (n == 0) return {};
  const std::uint64_t to_apd1 = std::binomial_distribution<std::uint64_t>(n, 0.5)(rng);
  return {to_apd1, n - to_apd1};
}

std::uint64_t detect(std::uint64_t arm_count, const DetectorParams& params, Rng& rng) {
  if (arm_count == 0 || params.qe <= 0.0) return 0;
  if (params.qe >= 1.0) return arm_count;
  return std::binomial_distribution<std::uint64_t>(arm_count, params.qe)(rng);
}

bool dark_fire(const DetectorParams& params, Apd apd, Rng& rng) {
  const double p = params.dcp(apd);
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

double avalanche_amplitude(std::uint64_t detected, bool dark_fired, const DetectorParams& params,
                           Rng& rng) {
  const std::uint64_t draws = detected + (dark_fired ? 1 : 0);
  if (draws == 0) return 0.0;
  if (draws == 1) return std::exponential_distribution<double>(1.0 / params.gain_mean)(rng);
  // The k-fold sum of Exp(g0) draws is Gamma(k, g0).
  return std::gamma_distribution<double>(static_cast<double>(draws), params.gain_mean)(rng);
}

double limited_amplitude(double amplitude, const DetectorParams& params) {
  return is_strong(amplitude, params) ? params.saturation_amplitude : amplitude;
}

ArmSignals illuminate(const OpticalPulse& pulse, Phase bob_phase, const DetectorParams& params,
                      Rng& rng) {
  ArmSignals s;
  s.arrived = route_photons(pulse.sampled_photons, phase_difference(pulse.phase, bob_phase), rng);
  s.detected.apd1 = detect(s.arrived.apd1, params, rng);
  s.detected.apd2 = detect(s.arrived.apd2, params, rng);
  s.dark1 = dark_fire(params, Apd::One, rng);
  s.dark2 = dark_fire(params, Apd::Two, rng);
  s.amp1 = avalanche_amplitude(s.detected.apd1, s.dark1, params, rng);
  s.amp2 = avalanche_amplitude(s.detected.apd2, s.dark2, params, rng);
  return s;
}

}  // namespace bncsim
