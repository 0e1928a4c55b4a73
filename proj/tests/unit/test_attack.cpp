#include <doctest.h>

#include <cmath>

#include "bncsim/analytics.hpp"
#include "bncsim/attack.hpp"
#include "bncsim/errors.hpp"

using namespace bncsim;

namespace {

LinkConfig attack_config(double mu, Scenario scenario = Scenario::AttackNoCm) {
  LinkConfig c;
  c.scenario = scenario;
  c.mu = mu;
  c.seed = 2024;
  c.stream = 1;
  return c;
}

}  // namespace

TEST_CASE("eve_intercept") {
  Rng rng(1);
  const EveConfig cfg;
  EveState s = eve_intercept(Phase::Zero, Basis::Zero, cfg, rng);
  CHECK(s.guessed_phase == Phase::Zero);
  CHECK(s.evebob_click == Apd::One);
  s = eve_intercept(Phase::Pi, Basis::Zero, cfg, rng);
  CHECK(s.guessed_phase == Phase::Pi);
  CHECK(s.evebob_click == Apd::Two);
  s = eve_intercept(Phase::ThreeHalfPi, Basis::One, cfg, rng);
  CHECK(s.guessed_phase == Phase::ThreeHalfPi);

  int zero = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const EveState e = eve_intercept(Phase::HalfPi, Basis::Zero, cfg, rng);
    REQUIRE(basis_of(e.guessed_phase) == e.evebob_basis);
    REQUIRE((e.guessed_phase == Phase::Zero || e.guessed_phase == Phase::Pi));
    zero += e.guessed_phase == Phase::Zero;
  }
  CHECK(std::abs(zero / double(n) - 0.5) <= 0.01);
}

TEST_CASE("eve_resend") {
  Rng rng(2);
  const EveState guess0 = eve_intercept_outcome(Basis::Zero, Apd::One, 500.0);
  const OpticalPulse p = eve_resend(guess0, 42, rng);
  CHECK(p.phase == Phase::Zero);
  CHECK(p.mean_photons == 500.0);
  CHECK(p.gate_index == 42);
  const OpticalPulse q = eve_resend(eve_intercept_outcome(Basis::One, Apd::Two, 1.0), 0, rng);
  CHECK(q.phase == Phase::ThreeHalfPi);
  CHECK(q.mean_photons == 1.0);

  double sum = 0.0;
  const int n = 20'000;
  for (int i = 0; i < n; ++i) sum += eve_resend(guess0, i, rng).sampled_photons;
  CHECK(std::abs(sum / n - 500.0) <= 3.0 * std::sqrt(500.0 / n));
  CHECK_THROWS_AS(eve_resend(eve_intercept_outcome(Basis::Zero, Apd::One, 0.0), 0, rng),
                  std::invalid_argument);
}

TEST_CASE("sifting table enumeration") {
  const auto rows = enumerate_table1();
  CHECK(rows.size() == 16);
  int c = 0, a = 0, b = 0;
  for (const auto& r : rows) {
    c += r.case_label == CaseLabel::C;
    a += r.case_label == CaseLabel::A;
    b += r.case_label == CaseLabel::B;
    CHECK(basis_of(r.evealice_phase) == r.evebob_basis);
    CHECK(basis_of(r.bob_phase) == basis_of(r.alice_phase));
    const bool split = r.expected == ExpectedOutcome::Split50;
    CHECK(split == (r.case_label == CaseLabel::C));
    CHECK(split == (r.evebob_basis != basis_of(r.alice_phase)));
  }
  CHECK(c == 8);
  CHECK(a == 4);
  CHECK(b == 4);
  CHECK(rows[0].alice_phase == Phase::Zero);
  CHECK(rows[0].evebob_basis == Basis::Zero);
  CHECK(rows[0].bob_phase == Phase::Zero);
  CHECK(rows[0].expected == ExpectedOutcome::Deterministic1);
  CHECK(rows[0].case_label == CaseLabel::A);
}

TEST_CASE("link configuration checks") {
  LinkConfig c = attack_config(1.0);
  CHECK_NOTHROW(c.validate());
  c.detector = DetectorKind::SelfDifferencing;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = attack_config(1.0, Scenario::AttackCm);
  c.detector = DetectorKind::BaselineTwoApd;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = attack_config(0.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = attack_config(1.0);
  c.filter = {false, false, false};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(parse_scenario("eve"), ConfigError);
  CHECK(parse_detector("self_differencing") == DetectorKind::SelfDifferencing);

  LinkConfig honest;
  honest.scenario = Scenario::Honest;
  honest.n_gates = 10;
  CHECK_THROWS_AS(run_attack(honest), ConfigError);
}

TEST_CASE("intercept-resend at one photon per pulse gives 25% QBER") {
  LinkConfig c = attack_config(1.0);
  c.n_gates = 1'000'000;
  const RunCounters k = run_attack(c);
  CHECK(k.sifted > 0);
  CHECK(std::abs(k.qber() - 0.25) <= 0.02);
}

TEST_CASE("bright resend blinds the split gates") {
  LinkConfig c = attack_config(500.0);
  c.n_gates = 1'000'000;
  const RunCounters k = run_attack(c);
  CHECK(k.sifted > 0);
  CHECK(k.qber() < 0.01);
  CHECK(k.cm_detections == 0);

  LinkConfig cm = attack_config(500.0, Scenario::AttackCm);
  cm.n_gates = 200'000;
  cm.filter = CaseFilter::only(CaseLabel::C);
  const RunCounters kc = run_attack(cm);
  CHECK(kc.gates == kc.case_c_gates);
  CHECK(static_cast<double>(kc.cm_detections) >= 0.999 * static_cast<double>(kc.case_c_gates));
}

TEST_CASE("QBER does not increase with resend flux (paired seeds)") {
  double previous = 1.0;
  for (double mu : {1.0, 3.0, 10.0, 30.0, 100.0, 300.0}) {
    LinkConfig c = attack_config(mu);
    c.n_gates = 300'000;
    const double q = run_attack(c).qber();
    // One standard error of the previous point as slack.
    CHECK(q <= previous + 0.003);
    previous = q;
  }
}

TEST_CASE("honest link without dark counts has no errors") {
  for (double mu : {0.1, 1.0, 10.0, 500.0}) {
    for (DetectorKind d : {DetectorKind::BalancedBnc, DetectorKind::BaselineTwoApd}) {
      LinkConfig c;
      c.scenario = Scenario::Honest;
      c.detector = d;
      c.mu = mu;
      c.n_gates = 50'000;
      c.bob.dcp_apd1 = c.bob.dcp_apd2 = 0.0;
      const RunCounters k = run_link(c);
      REQUIRE(k.sifted > 0);
      CHECK(k.errors == 0);
    }
  }
}

TEST_CASE("sifting keeps about half of the clicks") {
  LinkConfig c;
  c.scenario = Scenario::Honest;
  c.detector = DetectorKind::BaselineTwoApd;
  c.mu = 1.0;
  c.n_gates = 400'000;
  const RunCounters k = run_link(c);
  const std::uint64_t clicks = k.diff_clicks[0] + k.diff_clicks[1];
  // Deterministic gates are exactly the sifted-basis gates for an honest link.
  const double p_click = -std::expm1(-0.1);
  CHECK(std::abs(double(k.sifted) / double(k.gates) - 0.5 * p_click) <= 0.003);
  CHECK(clicks > k.sifted);
}

TEST_CASE("honest CM false positives follow the coincidence oracle") {
  LinkConfig c;
  c.scenario = Scenario::Honest;
  c.mu = 0.1;
  c.n_gates = 2'000'000;
  const RunCounters k = run_link(c);
  const double expected = analytics::blinding_coincidence_probability(0.1, c.bob) * c.n_gates;
  CHECK(std::abs(double(k.cm_detections) - expected) <= 5.0 * std::sqrt(expected));
}

TEST_CASE("self-differencing detector flags a blinding-only train") {
  LinkConfig c;
  c.scenario = Scenario::BlindingOnly;
  c.detector = DetectorKind::SelfDifferencing;
  c.mu = 500.0;
  c.n_gates = 10'000;
  const RunCounters k = run_link(c);
  CHECK(k.sifted == 0);
  // Each arm is lit on 3 of the 4 phase differences. A gate is flagged when
  // some arm was lit on it and on the gate before: 14 of 16 ordered pairs.
  CHECK(std::abs(double(k.cm_detections) / double(k.gates) - 14.0 / 16.0) <= 0.02);
}

TEST_CASE("counters merge by addition across shards") {
  for (DetectorKind d : {DetectorKind::BalancedBnc, DetectorKind::SelfDifferencing}) {
    LinkConfig c;
    c.scenario = Scenario::BlindingOnly;
    c.detector = d;
    c.mu = 3.0;
    c.n_gates = 30'001;
    RunCounters whole = run_link_range(c, 0, c.n_gates);
    RunCounters parts = run_link_range(c, 0, 10'000);
    parts += run_link_range(c, 10'000, 7);
    parts += run_link_range(c, 10'007, 19'994);
    CHECK(whole == parts);
  }
}
