#include <doctest.h>

#include <random>

#include "bncsim/detector_balanced.hpp"
#include "bncsim/errors.hpp"

using namespace bncsim;

namespace {

ComparatorWord4 word(int bits) {
  return {bool(bits & 8), bool(bits & 4), bool(bits & 2), bool(bits & 1)};
}

}  // namespace

TEST_CASE("comparator_bank examples") {
  const DetectorParams p;
  const double s = 2.0 * p.t_strong;
  CHECK(comparator_bank(s, 0.0, p) == ComparatorWord4{true, false, true, false});
  CHECK(comparator_bank(0.0, 0.0, p) == ComparatorWord4{});
  CHECK(comparator_bank(s, s, p) == ComparatorWord4{true, true, false, false});
  CHECK(comparator_bank(0.0, 0.05, p) == ComparatorWord4{false, false, false, true});
}

TEST_CASE("classify follows the truth table") {
  CHECK(classify(word(0b1010)) == GateEvent::Strong1);
  CHECK(classify(word(0b0101)) == GateEvent::Strong2);
  CHECK(classify(word(0b0010)) == GateEvent::Weak1);
  CHECK(classify(word(0b0001)) == GateEvent::Weak2);
  CHECK(classify(word(0b1100)) == GateEvent::BlindingDetected);
  CHECK(classify(word(0b0000)) == GateEvent::NoEvent);
  int reachable = 0;
  for (int bits = 0; bits < 16; ++bits) {
    try {
      classify(word(bits));
      ++reachable;
    } catch (const InconsistentWord&) {
    }
  }
  CHECK(reachable == 6);
  CHECK_THROWS_AS(classify(word(0b1001)), InconsistentWord);
  CHECK_THROWS_AS(classify(word(0b0011)), InconsistentWord);
}

TEST_CASE("baseline_click examples") {
  const DetectorParams p;
  CHECK(baseline_click(5.0 * p.gain_mean, 0.0, p) == BaselineClick::Click1);
  CHECK(baseline_click(5.0 * p.gain_mean, 5.0 * p.gain_mean, p) == BaselineClick::NoClick);
  CHECK(baseline_click(0.0, 0.0, p) == BaselineClick::NoClick);
  CHECK(baseline_click(0.0, 0.5, p) == BaselineClick::Click2);
}

TEST_CASE("conventional read-out discards coincidences") {
  CHECK(conventional_readout(0.3, 0.0).resolved == BaselineClick::Click1);
  CHECK(conventional_readout(0.0, 0.001).resolved == BaselineClick::Click2);
  const ConventionalReadout both = conventional_readout(0.3, 4.0);
  CHECK(both.click1);
  CHECK(both.click2);
  CHECK(both.resolved == BaselineClick::NoClick);
  CHECK(conventional_readout(0.0, 0.0).resolved == BaselineClick::NoClick);
}

TEST_CASE("common background does not change the diff path") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> amp(0.0, 0.4);
  const DetectorParams reference = [] {
    DetectorParams p;
    p.background_amplitude = 0.0;
    return p;
  }();
  std::uniform_real_distribution<double> offset(0.0, reference.t_strong * 0.999);
  for (int i = 0; i < 200'000; ++i) {
    const double a1 = amp(gen), a2 = amp(gen);
    DetectorParams shifted = reference;
    shifted.background_amplitude = offset(gen);
    const ComparatorWord4 w0 = comparator_bank(a1, a2, reference);
    const ComparatorWord4 w1 = comparator_bank(a1, a2, shifted);
    REQUIRE(w0 == w1);
    REQUIRE(baseline_click(a1, a2, reference) == baseline_click(a1, a2, shifted));
  }
}

TEST_CASE("blinding completeness over an amplitude grid") {
  const DetectorParams p;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const double a1 = p.t_strong * (1.0 + 0.05 * i);
      const double a2 = p.t_strong * (1.0 + 0.05 * j);
      REQUIRE(baseline_click(a1, a2, p) == BaselineClick::NoClick);
      REQUIRE(classify(comparator_bank(a1, a2, p)) == GateEvent::BlindingDetected);
    }
  }
}

TEST_CASE("classify after comparator_bank is total on physical amplitudes") {
  const DetectorParams p;
  std::vector<double> grid{0.0, p.t_diff, p.t_strong, p.t_strong + p.t_diff, p.saturation_amplitude};
  for (int i = 0; i <= 300; ++i) grid.push_back(0.002 * i * i);
  for (double base : std::vector<double>(grid)) {
    grid.push_back(std::nextafter(base, 0.0));
    grid.push_back(std::nextafter(base, 1e9));
  }
  for (double a1 : grid) {
    for (double a2 : grid) {
      if (a1 < 0.0 || a2 < 0.0) continue;
      REQUIRE_NOTHROW(classify(comparator_bank(a1, a2, p)));
    }
  }
  std::mt19937_64 gen(1);
  std::exponential_distribution<double> e(5.0);
  for (int i = 0; i < 200'000; ++i) REQUIRE_NOTHROW(classify(comparator_bank(e(gen), e(gen), p)));
}

TEST_CASE("equal weak coincidences are invisible") {
  const DetectorParams p;
  for (double a : {0.001, 0.02, 0.05, 0.1}) {
    CHECK(classify(comparator_bank(a, a, p)) == GateEvent::NoEvent);
  }
}

TEST_CASE("mixed strong and weak coincidence reads as strong") {
  const DetectorParams p;
  CHECK(classify(comparator_bank(3.0, 0.05, p)) == GateEvent::Strong1);
  CHECK(classify(comparator_bank(0.02, 0.9, p)) == GateEvent::Strong2);
}

TEST_CASE("simulate_gate_balanced") {
  DetectorParams p;
  SUBCASE("empty pulse, no dark counts") {
    p.dcp_apd1 = p.dcp_apd2 = 0.0;
    Rng rng(1);
    const OpticalPulse pulse = make_pulse(0, 0.0, Phase::Zero, rng);
    const BalancedGate g = simulate_gate_balanced(pulse, Phase::Zero, p, rng);
    CHECK(g.event == GateEvent::NoEvent);
    CHECK(g.click == BaselineClick::NoClick);
    CHECK(g.signals.arrived == ArmCounts{0, 0});
  }
  SUBCASE("bright split pulses are flagged") {
    const int n = 100'000;
    int blinded = 0;
    for (int i = 0; i < n; ++i) {
      Rng rng = Rng::for_gate(2, 0, i);
      const OpticalPulse pulse = make_pulse(i, 500.0, Phase::HalfPi, rng);
      blinded += simulate_gate_balanced(pulse, Phase::Zero, p, rng).event == GateEvent::BlindingDetected;
    }
    CHECK(blinded >= 0.999 * n);
  }
  SUBCASE("bright deterministic pulses stay controlled") {
    const int n = 100'000;
    int strong1 = 0, blinded = 0;
    for (int i = 0; i < n; ++i) {
      Rng rng = Rng::for_gate(3, 0, i);
      const OpticalPulse pulse = make_pulse(i, 500.0, Phase::Zero, rng);
      const GateEvent e = simulate_gate_balanced(pulse, Phase::Zero, p, rng).event;
      strong1 += e == GateEvent::Strong1;
      blinded += e == GateEvent::BlindingDetected;
    }
    CHECK(strong1 >= 0.999 * n);
    // Only an APD2 dark fire with a strong gain draw can blind: about dcp_apd2 * 0.9 * n = 1.8.
    CHECK(blinded <= 12);
  }
}
