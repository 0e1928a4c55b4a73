#pragma once

#include "bncsim/signal_model.hpp"

namespace bncsim::analytics {

// Closed-form count-rate, link-budget and QBER relations used as oracles for
// the Monte Carlo. Nothing in here draws random numbers.

inline constexpr double kElectronVolt = 1.602176634e-19;  // J
inline constexpr double kPhotonEnergyEv = 0.7999;         // 1.55 um
inline constexpr double kPhotonEnergy = kPhotonEnergyEv * kElectronVolt;

// mu * QE at or below this is where the linear count-rate formulas apply.
inline constexpr double kLinearRegimeLimit = 0.3;

double avc_one_click(double mu_apd, double qe, double f_gate);
double avc_both_clicks(double mu_apd, double qe, double f_gate);
bool in_linear_regime(double mu_apd, double qe);

double mu_apd_from_budget(double n_photons, double att_total_db);
double photons_per_pulse(double p_ave, double rep_rate, double e_photon = kPhotonEnergy);
// 10 log10(n / mu). Throws NonPhysical when mu exceeds n.
double att_bob_to_eve_alice(double n_photons, double mu_eve_alice);

struct LinkBudget {
  double p_ave = 0.0;     // W
  double rep_rate = 2e6;  // Hz
  double e_photon = kPhotonEnergy;
  double att_bob = 0.0;   // dB
  double mu_eve_alice = 1.0;

  double photons() const { return photons_per_pulse(p_ave, rep_rate, e_photon); }
  double att_eve_alice() const { return att_bob_to_eve_alice(photons(), mu_eve_alice); }
  double att_total() const { return att_eve_alice() + att_bob; }
  double mu_apd() const { return mu_apd_from_budget(photons(), att_total()); }
};

enum class PhaseClass { Same, Diff };

/// p1: exactly one arm detects; p2: both arms detect; p_s: the same-basis
/// (fully controlled) click probability 1 - exp(-mu qe).
struct ClickProbabilities {
  double p1 = 0.0;
  double p2 = 0.0;
  double p_s = 0.0;
};

ClickProbabilities click_probabilities(double mu, double qe, PhaseClass phase_class);

// (p1 / 2) / (p_s + p1). Throws Undefined when both are zero.
double qber_diff_phase(double p1, double p_s);

// Strong fraction of all avalanches, in percent. Throws Undefined on zero total.
double p_cm(double strong_counts, double weak_counts);

/// Per-gate probabilities for one APD whose detected photon number is
/// Poisson(mean_detected), plus an independent dark fire.
struct AvalancheOdds {
  double none = 1.0;
  double weak = 0.0;
  double strong = 0.0;
};

AvalancheOdds avalanche_odds(double mean_detected, double dcp, const DetectorParams& params);

struct ExpectedAvalanches {
  double weak = 0.0;    // per gate, both APDs together
  double strong = 0.0;
};

// Expected weak/strong avalanche counts per gate when Bob sees mu photons/pulse
// and the phase difference is uniform over the selected classes.
ExpectedAvalanches expected_avalanches(double mu, const DetectorParams& params,
                                       bool deterministic_gates, bool split_gates);

// Probability per gate that both APDs carry strong avalanches when the phase
// difference is uniform over all four values.
double blinding_coincidence_probability(double mu, const DetectorParams& params);

}  // namespace bncsim::analytics
