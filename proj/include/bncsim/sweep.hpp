#pragma once

#include <cstdint>
#include <vector>

#include "bncsim/attack.hpp"
#include "bncsim/signal_model.hpp"

namespace bncsim {

struct SweepSpec {
  std::vector<double> flux_grid;  // photons/pulse at Bob, strictly increasing
  std::uint64_t n_gates_per_point = 1'000'000;
  Scenario scenario = Scenario::AttackNoCm;
  DetectorKind detector = DetectorKind::BalancedBnc;
  CaseFilter table1_row_filter;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  SweepSpec();
  void validate() const;  // throws ConfigError
};

inline constexpr std::uint64_t kMinGatesPerPoint = 10'000;

// 13 logarithmically spaced points from 0.1 to 500 photons/pulse.
std::vector<double> default_flux_grid();

/// One line of the report. Rates are counts/s over the gates accepted by the
/// case filter; ratios that have no denominator are NaN.
struct ReportRow {
  double flux = 0.0;
  double apd1_rate = 0.0;
  double apd2_rate = 0.0;
  double diff1_rate = 0.0;
  double diff2_rate = 0.0;
  double weak_ratio = 0.0;
  double strong_ratio = 0.0;
  double cm_rate = 0.0;
  double qber = 0.0;
  double cm_success = 0.0;  // percent
  double oracle_avc_one_click = 0.0;
  double oracle_avc_both_clicks = 0.0;
  double oracle_qber_diff_phase = 0.0;
  double oracle_p_cm = 0.0;
  std::uint64_t gates = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  std::uint64_t cm_detections = 0;
  bool linear_regime = true;
};

struct RunReport {
  SweepSpec spec;
  DetectorParams params;
  std::vector<ReportRow> rows;

  const ReportRow* find(double flux) const;
};

// Monte Carlo columns of a row from the run counters.
ReportRow make_row(double flux, const RunCounters& counters, const LinkConfig& config);

// Columns that depend only on flux and detector parameters.
void fill_oracle_columns(ReportRow& row, const DetectorParams& params, const CaseFilter& filter);

// Each flux point runs on its own stream keyed by the flux value, so a point's
// numbers do not depend on the rest of the grid.
RunReport run_sweep(const SweepSpec& spec, const DetectorParams& params);

LinkConfig point_config(const SweepSpec& spec, const DetectorParams& params, double flux);

}  // namespace bncsim
