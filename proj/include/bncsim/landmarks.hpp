#pragma once

#include <string>
#include <vector>

#include "bncsim/sweep.hpp"

namespace bncsim {

struct LandmarkResult {
  std::string name;
  double measured = 0.0;  // worst value over the points the landmark covers
  std::string band;
  bool passed = false;
};

// Reference behaviour the blinding attack and countermeasure must show.
// Which landmarks apply depends on the report's scenario and case filter:
//
//   attack_*,  all cases   single-photon QBER, high-flux QBER, weak ratios,
//                          CM success at flux 1 and 500 (attack_cm only)
//   attack_*,  Case C      diff-output hump, click suppression (no CM),
//                          CM coverage of Case-C gates (attack_cm only)
//   honest,    A,B or C    linear count-rate oracles at 0.1, 0.3, 1
//   honest,    all cases   CM false positives against the coincidence oracle,
//                          zero QBER when dark counts are off
//
// Throws MissingFluxPoint when a flux point a landmark needs is absent.
std::vector<LandmarkResult> verify_landmarks(const RunReport& report);

}  // namespace bncsim
