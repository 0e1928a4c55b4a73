#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "bncsim/detector_balanced.hpp"
#include "bncsim/phase.hpp"
#include "bncsim/rng.hpp"
#include "bncsim/signal_model.hpp"

namespace bncsim {

// ---------------------------------------------------------------------------
// Eve: intercept with Eve-Bob, resend bright pulses with Eve-Alice.

struct EveConfig {
  double resend_mu = 500.0;  // photons/pulse delivered to Bob
};

struct EveState {
  Basis evebob_basis = Basis::Zero;
  Apd evebob_click = Apd::One;
  Phase guessed_phase = Phase::Zero;
  double resend_mu = 0.0;
};

// Eve-Bob's receiver is ideal: in Alice's basis the click identifies her
// phase, otherwise it falls on either APD with probability 1/2.
EveState eve_intercept(Phase alice_phase, Basis evebob_basis, const EveConfig& config, Rng& rng);

EveState eve_intercept_outcome(Basis evebob_basis, Apd click, double resend_mu);

OpticalPulse eve_resend(const EveState& state, std::uint64_t gate_index, Rng& rng);

// ---------------------------------------------------------------------------
// The 16-row sifting table.

enum class CaseLabel : std::uint8_t { A, B, C };
enum class ExpectedOutcome : std::uint8_t { Deterministic1, Deterministic2, Split50 };

std::string_view to_string(CaseLabel c);
std::string_view to_string(ExpectedOutcome o);

struct Table1Row {
  Phase alice_phase = Phase::Zero;
  Basis evebob_basis = Basis::Zero;
  Apd eve_apd = Apd::One;
  Phase evealice_phase = Phase::Zero;
  Phase bob_phase = Phase::Zero;
  ExpectedOutcome expected = ExpectedOutcome::Deterministic1;
  CaseLabel case_label = CaseLabel::A;
};

// The 16 sifting cases in table order: every Case A row is followed by its
// Case B (detection loss) twin; wrong-basis guesses give two Case C rows,
// one per Eve-Bob APD.
std::vector<Table1Row> enumerate_table1();

// ---------------------------------------------------------------------------
// Gate-by-gate link simulation.

enum class Scenario : std::uint8_t { Honest, AttackNoCm, AttackCm, BlindingOnly };
enum class DetectorKind : std::uint8_t { BaselineTwoApd, BalancedBnc, SelfDifferencing };

std::string_view to_string(Scenario s);
std::string_view to_string(DetectorKind d);
Scenario parse_scenario(std::string_view name);        // throws ConfigError
DetectorKind parse_detector(std::string_view name);    // throws ConfigError

/// Which gates contribute to the counters. A gate is Case C when the phase
/// difference at Bob splits the photons, Case A when it is deterministic and
/// Bob clicked, and Case B when it is deterministic and Bob saw nothing.
struct CaseFilter {
  bool a = true;
  bool b = true;
  bool c = true;

  static CaseFilter all() { return {}; }
  static CaseFilter only(CaseLabel label);
  bool accepts(CaseLabel label) const;
  bool is_all() const { return a && b && c; }
  friend bool operator==(const CaseFilter&, const CaseFilter&) = default;
};

struct LinkConfig {
  Scenario scenario = Scenario::AttackNoCm;
  DetectorKind detector = DetectorKind::BalancedBnc;
  // Mean photons per pulse arriving at Bob: Alice's pulse in the honest
  // scenario, Eve-Alice's resend otherwise.
  double mu = 1.0;
  std::uint64_t n_gates = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  DetectorParams bob;
  CaseFilter filter;
  unsigned threads = 1;

  bool cm_enabled() const { return scenario != Scenario::AttackNoCm; }
  bool has_eve() const { return scenario != Scenario::Honest; }
  bool has_alice() const { return scenario != Scenario::BlindingOnly; }
  void validate() const;  // throws ConfigError
};

/// Aggregate counters of a run. Merging is plain addition, so shards combine
/// in any grouping.
struct RunCounters {
  std::uint64_t simulated_gates = 0;
  std::uint64_t gates = 0;  // gates accepted by the case filter
  std::uint64_t case_a_gates = 0;
  std::uint64_t case_b_gates = 0;
  std::uint64_t case_c_gates = 0;
  std::array<std::uint64_t, 2> avalanches{};   // raw APD avalanches
  std::array<std::uint64_t, 2> diff_clicks{};  // detector output clicks per side
  std::array<std::uint64_t, 2> weak{};
  std::array<std::uint64_t, 2> strong{};
  std::uint64_t cm_detections = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;

  RunCounters& operator+=(const RunCounters& other);
  friend bool operator==(const RunCounters&, const RunCounters&) = default;

  std::uint64_t weak_total() const { return weak[0] + weak[1]; }
  std::uint64_t strong_total() const { return strong[0] + strong[1]; }
  double qber() const;  // throws EmptySiftedKey
};

// Simulates gates [first_gate, first_gate + count) of the configured stream.
RunCounters run_link_range(const LinkConfig& config, std::uint64_t first_gate,
                           std::uint64_t count);

// Whole run, split over config.threads workers.
RunCounters run_link(const LinkConfig& config);

// run_link restricted to the intercept-and-resend scenarios.
RunCounters run_attack(const LinkConfig& config);

}  // namespace bncsim
