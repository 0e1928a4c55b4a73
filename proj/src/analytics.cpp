#include "bncsim/analytics.hpp"

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

#include "bncsim/errors.hpp"

namespace bncsim::analytics {

namespace {

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be non-negative");
}

}  // namespace

double avc_one_click(double mu_apd, double qe, double f_gate) {
  require_non_negative(mu_apd, "mu_apd");
  require_non_negative(qe, "qe");
  require_non_negative(f_gate, "f_gate");
  return mu_apd * qe * f_gate;
}

double avc_both_clicks(double mu_apd, double qe, double f_gate) {
  return avc_one_click(mu_apd, qe, f_gate) / 2.0;
}

bool in_linear_regime(double mu_apd, double qe) {
  // Relative slack so that e.g. 3 x 0.1 counts as 0.3.
  return mu_apd * qe <= kLinearRegimeLimit * (1.0 + 1e-12);
}

double mu_apd_from_budget(double n_photons, double att_total_db) {
  require_non_negative(n_photons, "n_photons");
  return n_photons / std::pow(10.0, att_total_db / 10.0);
}

double photons_per_pulse(double p_ave, double rep_rate, double e_photon) {
  require_non_negative(p_ave, "p_ave");
  if (!(rep_rate > 0.0)) throw std::invalid_argument("rep_rate must be positive");
  if (!(e_photon > 0.0)) throw std::invalid_argument("e_photon must be positive");
  const double e_pulse = p_ave / rep_rate;
  return e_pulse / e_photon;
}

double att_bob_to_eve_alice(double n_photons, double mu_eve_alice) {
  if (!(n_photons > 0.0) || !(mu_eve_alice > 0.0)) {
    throw std::invalid_argument("photon numbers must be positive");
  }
  if (mu_eve_alice > n_photons) throw NonPhysical("attenuation cannot add photons");
  return 10.0 * std::log10(n_photons / mu_eve_alice);
}

ClickProbabilities click_probabilities(double mu, double qe, PhaseClass phase_class) {
  require_non_negative(mu, "mu");
  ClickProbabilities out;
  out.p_s = -std::expm1(-mu * qe);
  if (phase_class == PhaseClass::Same) {
    out.p1 = out.p_s;
    out.p2 = 0.0;
    return out;
  }
  // Poisson splitting: each arm independently Poisson(mu qe / 2).
  const double arm_click = -std::expm1(-mu * qe / 2.0);
  const double arm_silent = std::exp(-mu * qe / 2.0);
  out.p1 = 2.0 * arm_silent * arm_click;
  out.p2 = arm_click * arm_click;
  return out;
}

double qber_diff_phase(double p1, double p_s) {
  if (p1 < 0.0 || p1 > 1.0 || p_s < 0.0 || p_s > 1.0) {
    throw std::invalid_argument("click probabilities must lie in [0, 1]");
  }
  if (p1 + p_s == 0.0) throw Undefined("no clicks in either basis");
  return (p1 * 0.5) / (p_s + p1);
}

double p_cm(double strong_counts, double weak_counts) {
  require_non_negative(strong_counts, "strong_counts");
  require_non_negative(weak_counts, "weak_counts");
  const double total = weak_counts + strong_counts;
  if (total == 0.0) throw Undefined("no avalanches");
  return strong_counts / total * 100.0;
}

AvalancheOdds avalanche_odds(double mean_detected, double dcp, const DetectorParams& params) {
  require_non_negative(mean_detected, "mean_detected");
  const double x = params.t_strong / params.gain_mean;
  // P(amplitude < t_strong | k draws) is the Erlang CDF.
  auto weak_given = [x](std::size_t k) { return boost::math::gamma_p(static_cast<double>(k), x); };

  AvalancheOdds odds{0.0, 0.0, 0.0};
  if (mean_detected == 0.0) {
    odds.none = 1.0 - dcp;
    odds.weak = dcp * weak_given(1);
    odds.strong = dcp - odds.weak;
    return odds;
  }

  const boost::math::poisson_distribution<double> photons(mean_detected);
  const auto k_max = static_cast<std::size_t>(mean_detected + 40.0 * std::sqrt(mean_detected) + 60.0);
  odds.none = boost::math::pdf(photons, 0.0) * (1.0 - dcp);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double pk = boost::math::pdf(photons, static_cast<double>(k)) * (1.0 - dcp) +
                      boost::math::pdf(photons, static_cast<double>(k - 1)) * dcp;
    const double w = weak_given(k);
    odds.weak += pk * w;
    odds.strong += pk * (1.0 - w);
  }
  return odds;
}

ExpectedAvalanches expected_avalanches(double mu, const DetectorParams& params,
                                       bool deterministic_gates, bool split_gates) {
  if (!deterministic_gates && !split_gates) throw std::invalid_argument("no gate class selected");
  const double m = mu * params.qe;

  ExpectedAvalanches det;
  {
    // Half of the deterministic gates light APD1, half APD2.
    const auto lit1 = avalanche_odds(m, params.dcp_apd1, params);
    const auto dark1 = avalanche_odds(0.0, params.dcp_apd1, params);
    const auto lit2 = avalanche_odds(m, params.dcp_apd2, params);
    const auto dark2 = avalanche_odds(0.0, params.dcp_apd2, params);
    det.weak = 0.5 * (lit1.weak + dark2.weak) + 0.5 * (dark1.weak + lit2.weak);
    det.strong = 0.5 * (lit1.strong + dark2.strong) + 0.5 * (dark1.strong + lit2.strong);
  }
  ExpectedAvalanches split;
  {
    const auto arm1 = avalanche_odds(m / 2.0, params.dcp_apd1, params);
    const auto arm2 = avalanche_odds(m / 2.0, params.dcp_apd2, params);
    split.weak = arm1.weak + arm2.weak;
    split.strong = arm1.strong + arm2.strong;
  }
  if (!split_gates) return det;
  if (!deterministic_gates) return split;
  return {0.5 * (det.weak + split.weak), 0.5 * (det.strong + split.strong)};
}

double blinding_coincidence_probability(double mu, const DetectorParams& params) {
  const double m = mu * params.qe;
  const double lit1 = avalanche_odds(m, params.dcp_apd1, params).strong;
  const double lit2 = avalanche_odds(m, params.dcp_apd2, params).strong;
  const double dark1 = avalanche_odds(0.0, params.dcp_apd1, params).strong;
  const double dark2 = avalanche_odds(0.0, params.dcp_apd2, params).strong;
  const double half1 = avalanche_odds(m / 2.0, params.dcp_apd1, params).strong;
  const double half2 = avalanche_odds(m / 2.0, params.dcp_apd2, params).strong;
  // delta = 0, pi, pi/2, 3pi/2 with probability 1/4 each.
  return 0.25 * (lit1 * dark2 + dark1 * lit2 + 2.0 * half1 * half2);
}

}  // namespace bncsim::analytics
