#include "bncsim/sweep.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "bncsim/analytics.hpp"
#include "bncsim/errors.hpp"

namespace bncsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? kNaN : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

SweepSpec::SweepSpec() : flux_grid(default_flux_grid()) {}

std::vector<double> default_flux_grid() {
  constexpr int kPoints = 13;
  constexpr double kLow = 0.1;
  constexpr double kHigh = 500.0;
  std::vector<double> grid;
  for (int i = 0; i < kPoints; ++i) {
    grid.push_back(kLow * std::pow(kHigh / kLow, static_cast<double>(i) / (kPoints - 1)));
  }
  grid.back() = kHigh;
  return grid;
}

void SweepSpec::validate() const {
  if (n_gates_per_point < kMinGatesPerPoint) {
    throw ConfigError("gates per point must be at least " + std::to_string(kMinGatesPerPoint));
  }
  if (threads == 0) throw ConfigError("threads must be at least 1");
  for (std::size_t i = 0; i < flux_grid.size(); ++i) {
    if (!(flux_grid[i] >= 0.0) || !std::isfinite(flux_grid[i])) {
      throw ConfigError("flux values must be finite and non-negative");
    }
    if (i > 0 && !(flux_grid[i] > flux_grid[i - 1])) {
      throw ConfigError("flux grid must be strictly increasing");
    }
  }
}

const ReportRow* RunReport::find(double flux) const {
  for (const auto& row : rows) {
    if (std::abs(row.flux - flux) <= 1e-9 * std::max(1.0, std::abs(flux))) return &row;
  }
  return nullptr;
}

LinkConfig point_config(const SweepSpec& spec, const DetectorParams& params, double flux) {
  LinkConfig c;
  c.scenario = spec.scenario;
  c.detector = spec.detector;
  c.mu = flux;
  c.n_gates = spec.n_gates_per_point;
  c.seed = spec.seed;
  c.stream = std::bit_cast<std::uint64_t>(flux);
  c.bob = params;
  c.filter = spec.table1_row_filter;
  c.threads = spec.threads;
  return c;
}

ReportRow make_row(double flux, const RunCounters& k, const LinkConfig& config) {
  const double f = config.bob.f_gate;
  auto rate = [&](std::uint64_t count) { return ratio(count, k.gates) * f; };
  ReportRow row;
  row.flux = flux;
  row.apd1_rate = rate(k.avalanches[0]);
  row.apd2_rate = rate(k.avalanches[1]);
  row.diff1_rate = rate(k.diff_clicks[0]);
  row.diff2_rate = rate(k.diff_clicks[1]);
  const std::uint64_t total = k.weak_total() + k.strong_total();
  row.weak_ratio = ratio(k.weak_total(), total);
  row.strong_ratio = ratio(k.strong_total(), total);
  row.cm_rate = config.cm_enabled() ? rate(k.cm_detections) : 0.0;
  row.qber = ratio(k.errors, k.sifted);
  row.cm_success = config.cm_enabled() && total > 0
                       ? analytics::p_cm(static_cast<double>(k.strong_total()),
                                         static_cast<double>(k.weak_total()))
                       : kNaN;
  row.gates = k.gates;
  row.sifted = k.sifted;
  row.errors = k.errors;
  row.cm_detections = config.cm_enabled() ? k.cm_detections : 0;
  return row;
}

void fill_oracle_columns(ReportRow& row, const DetectorParams& params, const CaseFilter& filter) {
  using namespace analytics;
  row.oracle_avc_one_click = avc_one_click(row.flux, params.qe, params.f_gate);
  row.oracle_avc_both_clicks = avc_both_clicks(row.flux, params.qe, params.f_gate);
  const ClickProbabilities diff = click_probabilities(row.flux, params.qe, PhaseClass::Diff);
  row.oracle_qber_diff_phase = diff.p1 + diff.p_s > 0.0 ? qber_diff_phase(diff.p1, diff.p_s) : kNaN;
  const ExpectedAvalanches expected =
      expected_avalanches(row.flux, params, filter.a || filter.b, filter.c);
  row.oracle_p_cm = expected.weak + expected.strong > 0.0 ? p_cm(expected.strong, expected.weak)
                                                          : kNaN;
  row.linear_regime = in_linear_regime(row.flux, params.qe);
}

RunReport run_sweep(const SweepSpec& spec, const DetectorParams& params) {
  spec.validate();
  params.validate();
  RunReport report{spec, params, {}};
  for (double flux : spec.flux_grid) {
    const LinkConfig config = point_config(spec, params, flux);
    ReportRow row = make_row(flux, run_link(config), config);
    fill_oracle_columns(row, params, spec.table1_row_filter);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bncsim
