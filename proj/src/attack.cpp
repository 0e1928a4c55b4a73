#include "bncsim/attack.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "bncsim/detector_selfdiff.hpp"
#include "bncsim/errors.hpp"
#include "bncsim/protocol.hpp"

namespace bncsim {

EveState eve_intercept_outcome(Basis evebob_basis, Apd click, double resend_mu) {
  return {evebob_basis, click, encode(evebob_basis, click == Apd::One ? 0 : 1), resend_mu};
}

EveState eve_intercept(Phase alice_phase, Basis evebob_basis, const EveConfig& config, Rng& rng) {
  const Phase delta = phase_difference(alice_phase, encode(evebob_basis, 0));
  Apd click;
  if (is_deterministic(delta)) {
    click = delta == Phase::Zero ? Apd::One : Apd::Two;
  } else {
    click = std::bernoulli_distribution(0.5)(rng) ? Apd::One : Apd::Two;
  }
  return eve_intercept_outcome(evebob_basis, click, config.resend_mu);
}

OpticalPulse eve_resend(const EveState& state, std::uint64_t gate_index, Rng& rng) {
  if (!(state.resend_mu > 0.0)) throw std::invalid_argument("resend_mu must be positive");
  return make_pulse(gate_index, state.resend_mu, state.guessed_phase, rng);
}

std::string_view to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::A: return "A";
    case CaseLabel::B: return "B";
    case CaseLabel::C: return "C";
  }
  return "?";
}

std::string_view to_string(ExpectedOutcome o) {
  switch (o) {
    case ExpectedOutcome::Deterministic1: return "APD1";
    case ExpectedOutcome::Deterministic2: return "APD2";
    case ExpectedOutcome::Split50: return "50/50";
  }
  return "?";
}

std::vector<Table1Row> enumerate_table1() {
  std::vector<Table1Row> rows;
  for (Basis eve_basis : {Basis::Zero, Basis::One}) {
    for (Phase alice : kAllPhases) {
      const Phase bob = encode(basis_of(alice), 0);
      const bool eve_in_alice_basis = basis_of(alice) == eve_basis;
      auto make_row = [&](Apd eve_apd, CaseLabel label) {
        const EveState eve = eve_intercept_outcome(eve_basis, eve_apd, 0.0);
        const Phase delta = phase_difference(eve.guessed_phase, bob);
        ExpectedOutcome expected = ExpectedOutcome::Split50;
        if (delta == Phase::Zero) expected = ExpectedOutcome::Deterministic1;
        if (delta == Phase::Pi) expected = ExpectedOutcome::Deterministic2;
        return Table1Row{alice, eve_basis, eve_apd, eve.guessed_phase, bob, expected, label};
      };
      if (eve_in_alice_basis) {
        const Apd apd = bit_of(alice) == 0 ? Apd::One : Apd::Two;
        rows.push_back(make_row(apd, CaseLabel::A));
        rows.push_back(make_row(apd, CaseLabel::B));
      } else {
        rows.push_back(make_row(Apd::One, CaseLabel::C));
        rows.push_back(make_row(Apd::Two, CaseLabel::C));
      }
    }
  }
  return rows;
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::Honest: return "honest";
    case Scenario::AttackNoCm: return "attack_no_cm";
    case Scenario::AttackCm: return "attack_cm";
    case Scenario::BlindingOnly: return "blinding_only";
  }
  return "?";
}

std::string_view to_string(DetectorKind d) {
  switch (d) {
    case DetectorKind::BaselineTwoApd: return "baseline_two_apd";
    case DetectorKind::BalancedBnc: return "balanced_bnc";
    case DetectorKind::SelfDifferencing: return "self_differencing";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::Honest, Scenario::AttackNoCm, Scenario::AttackCm,
                     Scenario::BlindingOnly}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

DetectorKind parse_detector(std::string_view name) {
  for (DetectorKind d : {DetectorKind::BaselineTwoApd, DetectorKind::BalancedBnc,
                         DetectorKind::SelfDifferencing}) {
    if (to_string(d) == name) return d;
  }
  throw ConfigError("unknown detector '" + std::string(name) + "'");
}

CaseFilter CaseFilter::only(CaseLabel label) {
  return {label == CaseLabel::A, label == CaseLabel::B, label == CaseLabel::C};
}

bool CaseFilter::accepts(CaseLabel label) const {
  switch (label) {
    case CaseLabel::A: return a;
    case CaseLabel::B: return b;
    case CaseLabel::C: return c;
  }
  return false;
}

void LinkConfig::validate() const {
  bob.validate();
  if (!(mu >= 0.0)) throw ConfigError("mu must be non-negative");
  if (has_eve() && !(mu > 0.0)) throw ConfigError("Eve's resend flux must be positive");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (!filter.a && !filter.b && !filter.c) throw ConfigError("case filter rejects every gate");
  if (detector == DetectorKind::SelfDifferencing && scenario != Scenario::BlindingOnly) {
    throw ConfigError("the self-differencing detector is only driven by the blinding_only scenario");
  }
  if (scenario == Scenario::AttackCm && detector != DetectorKind::BalancedBnc) {
    throw ConfigError("attack_cm requires the balanced_bnc detector");
  }
}

RunCounters& RunCounters::operator+=(const RunCounters& o) {
  simulated_gates += o.simulated_gates;
  gates += o.gates;
  case_a_gates += o.case_a_gates;
  case_b_gates += o.case_b_gates;
  case_c_gates += o.case_c_gates;
  for (int i = 0; i < 2; ++i) {
    avalanches[i] += o.avalanches[i];
    diff_clicks[i] += o.diff_clicks[i];
    weak[i] += o.weak[i];
    strong[i] += o.strong[i];
  }
  cm_detections += o.cm_detections;
  sifted += o.sifted;
  errors += o.errors;
  return *this;
}

double RunCounters::qber() const {
  if (sifted == 0) throw EmptySiftedKey("no record survived sifting");
  return static_cast<double>(errors) / static_cast<double>(sifted);
}

namespace {

struct GateDraw {
  Phase alice = Phase::Zero;
  Phase pulse_phase = Phase::Zero;
  Phase bob = Phase::Zero;
  ArmSignals signals;
};

// Everything random about gate g comes from that gate's own generator.
GateDraw draw_gate(const LinkConfig& config, std::uint64_t gate) {
  Rng rng = Rng::for_gate(config.seed, config.stream, gate);
  GateDraw d;
  OpticalPulse pulse;
  switch (config.scenario) {
    case Scenario::Honest:
      d.alice = choose_alice_phase(rng);
      pulse = make_pulse(gate, config.mu, d.alice, rng);
      break;
    case Scenario::AttackNoCm:
    case Scenario::AttackCm: {
      d.alice = choose_alice_phase(rng);
      const Basis eve_basis = choose_basis(rng);
      const EveState eve = eve_intercept(d.alice, eve_basis, EveConfig{config.mu}, rng);
      pulse = eve_resend(eve, gate, rng);
      break;
    }
    case Scenario::BlindingOnly:
      // Eve-Alice alone, cycling through all four phases.
      pulse = make_pulse(gate, config.mu, choose_alice_phase(rng), rng);
      break;
  }
  d.pulse_phase = pulse.phase;
  d.bob = choose_bob_phase(rng);
  d.signals = illuminate(pulse, d.bob, config.bob, rng);
  return d;
}

bool is_rise(SdGateEvent e) { return e == SdGateEvent::StrongRise || e == SdGateEvent::WeakRise; }

}  // namespace

RunCounters run_link_range(const LinkConfig& config, std::uint64_t first_gate,
                           std::uint64_t count) {
  config.validate();
  const DetectorParams& p = config.bob;
  RunCounters out;

  std::optional<SelfDifferencingDetector> sd1, sd2;
  if (config.detector == DetectorKind::SelfDifferencing) {
    sd1.emplace(p);
    sd2.emplace(p);
    if (first_gate > 0) {
      const GateDraw previous = draw_gate(config, first_gate - 1);
      sd1->prime(previous.signals.amp1);
      sd2->prime(previous.signals.amp2);
    }
  }

  for (std::uint64_t g = first_gate; g < first_gate + count; ++g) {
    const GateDraw d = draw_gate(config, g);
    const ArmSignals& s = d.signals;

    std::array<bool, 2> side{};
    BaselineClick click = BaselineClick::NoClick;
    bool blinded = false;
    switch (config.detector) {
      case DetectorKind::BalancedBnc: {
        const BalancedGate bg = read_out_balanced(s, p);
        side = {bg.word.c, bg.word.d};
        click = bg.click;
        blinded = bg.event == GateEvent::BlindingDetected;
        break;
      }
      case DetectorKind::BaselineTwoApd: {
        const ConventionalReadout r = conventional_readout(s.amp1, s.amp2);
        side = {r.click1, r.click2};
        click = r.resolved;
        break;
      }
      case DetectorKind::SelfDifferencing: {
        const SdGateEvent e1 = sd1->step(s.amp1);
        const SdGateEvent e2 = sd2->step(s.amp2);
        side = {is_rise(e1), is_rise(e2)};
        if (side[0] != side[1]) click = side[0] ? BaselineClick::Click1 : BaselineClick::Click2;
        blinded = e1 == SdGateEvent::BlindingDetected || e2 == SdGateEvent::BlindingDetected;
        break;
      }
    }

    const Phase delta = phase_difference(d.pulse_phase, d.bob);
    CaseLabel label = CaseLabel::C;
    if (is_deterministic(delta)) label = (side[0] || side[1]) ? CaseLabel::A : CaseLabel::B;

    ++out.simulated_gates;
    if (!config.filter.accepts(label)) continue;
    ++out.gates;
    switch (label) {
      case CaseLabel::A: ++out.case_a_gates; break;
      case CaseLabel::B: ++out.case_b_gates; break;
      case CaseLabel::C: ++out.case_c_gates; break;
    }

    const std::array<double, 2> amps{s.amp1, s.amp2};
    for (int i = 0; i < 2; ++i) {
      if (side[i]) ++out.diff_clicks[i];
      if (amps[i] > 0.0) {
        ++out.avalanches[i];
        if (is_strong(amps[i], p)) {
          ++out.strong[i];
        } else {
          ++out.weak[i];
        }
      }
    }
    if (config.cm_enabled() && blinded) ++out.cm_detections;

    if (config.has_alice()) {
      const SiftingRecord r = make_record(g, d.alice, d.bob, click);
      if (r.kept) {
        ++out.sifted;
        if (r.error) ++out.errors;
      }
    }
  }
  return out;
}

RunCounters run_link(const LinkConfig& config) {
  config.validate();
  const std::uint64_t workers =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(config.threads, config.n_gates));
  if (workers == 1) return run_link_range(config, 0, config.n_gates);

  std::vector<std::future<RunCounters>> parts;
  const std::uint64_t chunk = config.n_gates / workers;
  const std::uint64_t extra = config.n_gates % workers;
  std::uint64_t first = 0;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t count = chunk + (w < extra ? 1 : 0);
    parts.push_back(std::async(std::launch::async, run_link_range, std::cref(config), first, count));
    first += count;
  }
  RunCounters total;
  for (auto& part : parts) total += part.get();
  return total;
}

RunCounters run_attack(const LinkConfig& config) {
  if (config.scenario != Scenario::AttackNoCm && config.scenario != Scenario::AttackCm) {
    throw ConfigError("run_attack needs an attack scenario");
  }
  return run_link(config);
}

}  // namespace bncsim
