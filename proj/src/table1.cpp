#include "bncsim/table1.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "bncsim/detector_balanced.hpp"

namespace bncsim {

namespace {

enum Purpose : std::uint64_t { kEve = 1, kDeterministic = 2, kSplit = 3, kLoss = 4 };

std::uint64_t stream_of(std::size_t row, Purpose purpose) { return row * 16 + purpose; }

Table1Check check_row(std::size_t index, const Table1Row& row, const DetectorParams& params,
                      const Table1Options& opt) {
  Table1Check out;
  out.row = row;

  const EveConfig eve_config{opt.deterministic_mu};
  std::uint64_t matched = 0;
  bool guesses_consistent = true;
  for (std::uint64_t t = 0; t < opt.eve_trials; ++t) {
    Rng rng = Rng::for_gate(opt.seed, stream_of(index, kEve), t);
    const EveState eve = eve_intercept(row.alice_phase, row.evebob_basis, eve_config, rng);
    if (eve.evebob_click == row.eve_apd) {
      ++matched;
      guesses_consistent = guesses_consistent && eve.guessed_phase == row.evealice_phase;
    }
  }
  out.eve_match = static_cast<double>(matched) / static_cast<double>(opt.eve_trials);

  bool ok = guesses_consistent;
  if (row.case_label == CaseLabel::C) {
    ok = ok && std::abs(out.eve_match - 0.5) <= 0.01;
    std::uint64_t ones = 0;
    for (std::uint64_t g = 0; g < opt.split_gates; ++g) {
      Rng rng = Rng::for_gate(opt.seed, stream_of(index, kSplit), g);
      const OpticalPulse pulse = make_pulse(g, opt.split_mu, row.evealice_phase, rng);
      const ArmSignals s = illuminate(pulse, row.bob_phase, params, rng);
      const ConventionalReadout r = conventional_readout(s.amp1, s.amp2);
      if (r.resolved == BaselineClick::NoClick) continue;
      ++out.clicks;
      ones += r.resolved == BaselineClick::Click1;
    }
    out.share = out.clicks == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(out.clicks);
    ok = ok && std::abs(out.share - 0.5) <= 0.01;
  } else {
    ok = ok && out.eve_match == 1.0;
    const BaselineClick want = row.expected == ExpectedOutcome::Deterministic1
                                   ? BaselineClick::Click1
                                   : BaselineClick::Click2;
    for (std::uint64_t g = 0; g < opt.deterministic_gates; ++g) {
      Rng rng = Rng::for_gate(opt.seed, stream_of(index, kDeterministic), g);
      const OpticalPulse pulse = make_pulse(g, opt.deterministic_mu, row.evealice_phase, rng);
      out.clicks += simulate_gate_balanced(pulse, row.bob_phase, params, rng).click == want;
    }
    out.share = static_cast<double>(out.clicks) / static_cast<double>(opt.deterministic_gates);
    ok = ok && out.share >= 0.999;
  }

  if (row.case_label == CaseLabel::B) {
    std::uint64_t silent = 0;
    for (std::uint64_t g = 0; g < opt.loss_gates; ++g) {
      Rng rng = Rng::for_gate(opt.seed, stream_of(index, kLoss), g);
      const OpticalPulse pulse = make_pulse(g, opt.loss_mu, row.evealice_phase, rng);
      const ArmSignals s = illuminate(pulse, row.bob_phase, params, rng);
      silent += s.amp1 == 0.0 && s.amp2 == 0.0;
    }
    const double n = static_cast<double>(opt.loss_gates);
    const double p = std::exp(-opt.loss_mu * params.qe) * (1.0 - params.dcp_apd1) *
                     (1.0 - params.dcp_apd2);
    out.no_click = static_cast<double>(silent) / n;
    out.no_click_expected = p;
    out.no_click_sigmas = std::abs(static_cast<double>(silent) - n * p) / std::sqrt(n * p * (1.0 - p));
    ok = ok && out.no_click_sigmas <= 5.0;
  }

  out.passed = ok;
  return out;
}

}  // namespace

std::vector<Table1Check> simulate_table1(const DetectorParams& params, const Table1Options& options) {
  params.validate();
  const std::vector<Table1Row> rows = enumerate_table1();
  std::vector<Table1Check> out(rows.size());
  const std::size_t width = std::max(1u, options.threads);
  for (std::size_t start = 0; start < rows.size(); start += width) {
    std::vector<std::future<Table1Check>> batch;
    for (std::size_t i = start; i < std::min(rows.size(), start + width); ++i) {
      batch.push_back(std::async(std::launch::async, check_row, i, std::cref(rows[i]),
                                 std::cref(params), std::cref(options)));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) out[start + k] = batch[k].get();
  }
  return out;
}

}  // namespace bncsim
