#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bncsim/attack.hpp"
#include "bncsim/signal_model.hpp"

namespace bncsim {

struct Table1Options {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t eve_trials = 100'000;
  double deterministic_mu = 500.0;
  std::uint64_t deterministic_gates = 100'000;
  double split_mu = 0.1;
  std::uint64_t split_gates = 4'000'000;
  double loss_mu = 0.1;
  std::uint64_t loss_gates = 1'000'000;
};

/// Monte Carlo check of one enumerated row.
///
/// eve_match is the fraction of intercepts of the row's Alice phase in the
/// row's Eve basis whose click lands on the row's Eve APD: 1 in Alice's basis,
/// 1/2 otherwise.
///
/// Deterministic rows resend at deterministic_mu into the balanced detector;
/// `share` is the fraction of gates clicking on the expected side. Case B rows
/// additionally compare the no-click fraction at loss_mu with exp(-mu qe).
///
/// Split rows resend at split_mu into the conventional two-APD read-out;
/// `share` is the fraction of single clicks landing on APD1.
struct Table1Check {
  Table1Row row;
  double eve_match = 0.0;
  double share = 0.0;
  double no_click = -1.0;           // Case B only
  double no_click_expected = -1.0;  // Case B only
  double no_click_sigmas = 0.0;
  std::uint64_t clicks = 0;
  bool passed = false;
};

std::vector<Table1Check> simulate_table1(const DetectorParams& params, const Table1Options& options);

}  // namespace bncsim
