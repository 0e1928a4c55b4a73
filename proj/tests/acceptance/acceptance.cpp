// Acceptance suite: one PASS/FAIL line per criterion, per-point detail lines
// indented beneath it. Exit status is the number of failed criteria.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bncsim/analytics.hpp"
#include "bncsim/config.hpp"
#include "bncsim/detector_balanced.hpp"
#include "bncsim/detector_selfdiff.hpp"
#include "bncsim/report.hpp"
#include "bncsim/sweep.hpp"
#include "bncsim/table1.hpp"

using namespace bncsim;

namespace {

const std::vector<double> kGrid{0.1, 0.3, 1, 3, 10, 30, 100, 200, 500};
constexpr std::uint64_t kGates = 1'000'000;
constexpr std::uint64_t kSeed = 20'240'601;

unsigned g_threads = 1;
int g_failures = 0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> details;
  bool ok = true;

  // Records one sub-check and returns its outcome.
  bool check(bool passed, const std::string& what) {
    details.push_back(std::string(passed ? "ok   " : "MISS ") + what);
    ok = ok && passed;
    return passed;
  }

  ~Criterion() {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << "\n";
    for (const auto& d : details) std::cout << "    " << d << "\n";
    std::cout.flush();
    g_failures += !ok;
  }
};

RunReport sweep(Scenario scenario, DetectorKind detector, CaseFilter filter,
                std::vector<double> grid, std::uint64_t gates = kGates,
                const DetectorParams& params = DetectorParams{}) {
  SweepSpec s;
  s.scenario = scenario;
  s.detector = detector;
  s.table1_row_filter = filter;
  s.flux_grid = std::move(grid);
  s.n_gates_per_point = gates;
  s.seed = kSeed;
  s.threads = g_threads;
  return run_sweep(s, params);
}

const ReportRow& at(const RunReport& r, double flux) {
  const ReportRow* row = r.find(flux);
  if (!row) throw std::runtime_error("missing flux " + num(flux));
  return *row;
}

std::vector<const ReportRow*> rows_from(const RunReport& r, double lo, double hi) {
  std::vector<const ReportRow*> out;
  for (const auto& row : r.rows) {
    if (row.flux >= lo && row.flux <= hi) out.push_back(&row);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  app.add_option("--threads", g_threads, "worker threads");
  CLI11_PARSE(app, argc, argv);
  if (g_threads == 0) g_threads = 1;

  const DetectorParams params;
  const CaseFilter all = CaseFilter::all();
  const CaseFilter case_c = CaseFilter::only(CaseLabel::C);

  auto t0 = std::chrono::steady_clock::now();
  const RunReport no_cm_all =
      sweep(Scenario::AttackNoCm, DetectorKind::BalancedBnc, all, {1.0});
  const double single_point_seconds = seconds_since(t0);
  const RunReport no_cm = sweep(Scenario::AttackNoCm, DetectorKind::BalancedBnc, all, kGrid);
  const RunReport no_cm_c = sweep(Scenario::AttackNoCm, DetectorKind::BalancedBnc, case_c, kGrid);
  const RunReport cm_c = sweep(Scenario::AttackCm, DetectorKind::BalancedBnc, case_c, kGrid);
  const RunReport cm_all = sweep(Scenario::AttackCm, DetectorKind::BalancedBnc, all, kGrid);

  {
    Criterion c{1, "single-photon attack QBER = 0.25 +/- 0.02 at flux 1, 10^6 gates"};
    const ReportRow& r = at(no_cm_all, 1.0);
    c.check(std::abs(r.qber - 0.25) <= 0.02,
            "qber=" + num(r.qber) + " sifted=" + std::to_string(r.sifted));
    c.check(r.qber == at(no_cm, 1.0).qber, "same value inside the full sweep");
    c.check(single_point_seconds < 30.0, "runtime " + num(single_point_seconds) + " s (< 30 s)");
  }

  {
    Criterion c{2, "flux >= 100: QBER < 0.01 and Case-C click rate < 2% of the flux-10 rate"};
    for (const ReportRow* r : rows_from(no_cm, 100.0, 1e9)) {
      const double se = std::sqrt(r->qber * (1 - r->qber) / double(r->sifted));
      c.check(r->qber < 0.01, "flux=" + num(r->flux) + " qber=" + num(r->qber) + " (+/- " +
                                  num(se) + ", oracle " + num(r->oracle_qber_diff_phase) + ")");
    }
    const ReportRow& peak = at(no_cm_c, 10.0);
    const double ref = peak.diff1_rate + peak.diff2_rate;
    for (const ReportRow* r : rows_from(no_cm_c, 100.0, 1e9)) {
      const double rel = (r->diff1_rate + r->diff2_rate) / ref;
      c.check(rel < 0.02, "flux=" + num(r->flux) + " case-C click rate / flux-10 rate = " + num(rel));
    }
  }

  {
    Criterion c{3, "diff-output hump: rate(30) > 3 rate(0.1), rate(500) < 0.05 rate(30)"};
    const ReportRow &lo = at(no_cm_c, 0.1), &mid = at(no_cm_c, 30.0), &hi = at(no_cm_c, 500.0);
    for (int side = 1; side <= 2; ++side) {
      const double r_lo = side == 1 ? lo.diff1_rate : lo.diff2_rate;
      const double r_mid = side == 1 ? mid.diff1_rate : mid.diff2_rate;
      const double r_hi = side == 1 ? hi.diff1_rate : hi.diff2_rate;
      const std::string s = "diff" + std::to_string(side);
      c.check(r_mid > 3 * r_lo, s + " rate(30)/rate(0.1) = " + num(r_mid / r_lo));
      c.check(r_hi < 0.05 * r_mid, s + " rate(500)/rate(30) = " + num(r_hi / r_mid));
    }
    std::string curve = "diff1+diff2 counts/s:";
    for (const auto& r : no_cm_c.rows) curve += " " + num(r.flux) + ":" + num(r.diff1_rate + r.diff2_rate);
    c.details.push_back("     " + curve);
  }

  {
    Criterion c{4, "CM detections per Case-C gate >= 0.999 at flux >= 100"};
    for (const ReportRow* r : rows_from(cm_c, 100.0, 1e9)) {
      const double frac = double(r->cm_detections) / double(r->gates);
      const auto both =
          analytics::click_probabilities(r->flux, params.qe, analytics::PhaseClass::Diff).p2;
      c.check(frac >= 0.999, "flux=" + num(r->flux) + " coverage=" + num(frac) +
                                 " (both-arms-detect probability " + num(both) + ")");
    }
  }

  {
    Criterion c{5, "CM success at flux 1 in [83, 92] percent"};
    const ReportRow& r = at(cm_all, 1.0);
    c.check(r.cm_success >= 83.0 && r.cm_success <= 92.0,
            "cm_success=" + num(r.cm_success) + " (oracle " + num(r.oracle_p_cm) + ")");
    const ReportRow& h = at(cm_all, 500.0);
    c.details.push_back("     flux=500 cm_success=" + num(h.cm_success));
  }

  {
    Criterion c{6, "weak ratio 0.10 +/- 0.02 at flux <= 1 and < 1e-3 at flux >= 100"};
    for (const ReportRow* r : rows_from(no_cm, 0.0, 1.0)) {
      c.check(std::abs(r->weak_ratio - 0.10) <= 0.02,
              "flux=" + num(r->flux) + " weak_ratio=" + num(r->weak_ratio));
    }
    for (const ReportRow* r : rows_from(no_cm, 100.0, 1e9)) {
      c.check(r->weak_ratio < 1e-3, "flux=" + num(r->flux) + " weak_ratio=" + num(r->weak_ratio) +
                                        " (oracle " + num(1.0 - r->oracle_p_cm / 100.0) + ")");
    }
  }

  {
    Criterion c{7, "honest click rates vs the linear oracles within 3 sigma at 0.1, 0.3, 1"};
    const std::vector<double> pts{0.1, 0.3, 1.0};
    const RunReport det =
        sweep(Scenario::Honest, DetectorKind::BaselineTwoApd, {true, true, false}, pts);
    const RunReport split = sweep(Scenario::Honest, DetectorKind::BaselineTwoApd, case_c, pts);
    for (double mu : pts) {
      const ReportRow& r = at(det, mu);
      const double n = double(r.gates);
      const double observed = (r.diff1_rate + r.diff2_rate) / params.f_gate * n;
      const double expected = r.oracle_avc_one_click / params.f_gate * n;
      const double z = (observed - expected) / std::sqrt(expected);
      c.check(std::abs(z) <= 3.0, "flux=" + num(mu) + " case A+B clicks " + num(observed) +
                                      " vs " + num(expected) + " (" + num(z) + " sigma)");
    }
    for (double mu : pts) {
      const ReportRow& r = at(split, mu);
      const double n = double(r.gates);
      const double expected = r.oracle_avc_both_clicks / params.f_gate * n;
      for (int side = 1; side <= 2; ++side) {
        const double observed = (side == 1 ? r.diff1_rate : r.diff2_rate) / params.f_gate * n;
        const double z = (observed - expected) / std::sqrt(expected);
        c.check(std::abs(z) <= 3.0, "flux=" + num(mu) + " case C APD" + std::to_string(side) + " " +
                                        num(observed) + " vs " + num(expected) + " (" + num(z) +
                                        " sigma)");
      }
    }
  }

  {
    Criterion c{8, "sifting table: 16 rows, 8 Case C, every row reproduced by simulation"};
    Table1Options opt;
    opt.seed = kSeed;
    opt.threads = g_threads;
    const auto checks = simulate_table1(params, opt);
    int split = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const auto& k = checks[i];
      split += k.row.case_label == CaseLabel::C;
      std::string what = "row " + std::to_string(i + 1) + " case " +
                         std::string(to_string(k.row.case_label)) + " expect " +
                         std::string(to_string(k.row.expected)) + ": eve_match=" +
                         num(k.eve_match) + " share=" + num(k.share);
      if (k.row.case_label == CaseLabel::B) {
        what += " no_click=" + num(k.no_click) + " vs " + num(k.no_click_expected) + " (" +
                num(k.no_click_sigmas) + " sigma)";
      }
      c.check(k.passed, what);
    }
    c.check(checks.size() == 16, "row count " + std::to_string(checks.size()));
    c.check(split == 8, "Case C rows " + std::to_string(split));
  }

  {
    Criterion c{9, "every both-arms-strong gate reads NoClick and BlindingDetected"};
    long cells = 0, bad = 0;
    for (int i = 0; i <= 1000; ++i) {
      for (int j = 0; j <= 1000; ++j) {
        const double a1 = params.t_strong * std::pow(1.01, i);
        const double a2 = params.t_strong * std::pow(1.01, j);
        ++cells;
        bad += baseline_click(a1, a2, params) != BaselineClick::NoClick ||
               classify(comparator_bank(a1, a2, params)) != GateEvent::BlindingDetected;
      }
    }
    c.check(bad == 0, std::to_string(cells) + " grid cells from t_strong to " +
                          num(params.t_strong * std::pow(1.01, 1000)) + ", " +
                          std::to_string(bad) + " violations");
  }

  {
    Criterion c{10, "self-differencing: blinding train flagged, isolated avalanche rise + fall"};
    const std::vector<double> train(1000, 2.0 * params.t_strong);
    int blinded = 0;
    for (auto e : process_amplitudes(train, params)) blinded += e == SdGateEvent::BlindingDetected;
    c.check(blinded >= 998, "1000-gate constant train: " + std::to_string(blinded) + " BlindingDetected");

    std::vector<OpticalPulse> pulses;
    Rng rng(kSeed);
    for (std::uint64_t g = 0; g < 1000; ++g) pulses.push_back(make_pulse(g, 500.0, Phase::Zero, rng));
    int sim_blinded = 0;
    for (auto e : simulate_stream_sd(pulses, params, rng)) sim_blinded += e == SdGateEvent::BlindingDetected;
    c.check(sim_blinded >= 998, "1000 simulated 500-photon pulses: " + std::to_string(sim_blinded));

    const auto iso = process_amplitudes(std::vector<double>{0, 0, 3.0, 0, 0}, params);
    int rises = 0, falls = 0;
    for (auto e : iso) {
      rises += e == SdGateEvent::StrongRise || e == SdGateEvent::WeakRise;
      falls += e == SdGateEvent::DelayedFall;
    }
    c.check(rises == 1 && falls == 1 && iso[2] == SdGateEvent::StrongRise &&
                iso[3] == SdGateEvent::DelayedFall,
            "isolated strong avalanche at gate 2: rise at 2, fall at 3");
  }

  {
    Criterion c{11, "honest BlindingDetected rate within 5 sigma of the coincidence oracle, 10^7 gates"};
    for (double mu : {0.0, 0.1}) {
      const RunReport r = sweep(Scenario::Honest, DetectorKind::BalancedBnc, all, {mu}, 10'000'000);
      const ReportRow& row = r.rows.front();
      const double expected =
          analytics::blinding_coincidence_probability(mu, params) * double(row.gates);
      const double sigma = std::sqrt(std::max(expected, 1e-300));
      const double z = (double(row.cm_detections) - expected) / sigma;
      c.check(std::abs(z) <= 5.0, "flux=" + num(mu) + " detections=" +
                                      std::to_string(row.cm_detections) + " expected=" +
                                      num(expected) + " (" + num(z) + " sigma)");
    }
    c.details.push_back("     dark-count product dcp1*dcp2 = " +
                        num(params.dcp_apd1 * params.dcp_apd2));
  }

  {
    Criterion c{12, "identical seed and config give byte-identical reports"};
    const auto dir = std::filesystem::temp_directory_path() / "bncsim_acceptance";
    std::filesystem::create_directories(dir);
    SweepSpec s;
    s.scenario = Scenario::AttackCm;
    s.flux_grid = kGrid;
    s.n_gates_per_point = 100'000;
    s.seed = kSeed;
    s.threads = g_threads;
    emit_report(run_sweep(s, params), dir / "first.csv");
    s.threads = 1;
    emit_report(run_sweep(s, params), dir / "second.csv");
    const std::string a = slurp(dir / "first.csv"), b = slurp(dir / "second.csv");
    c.check(!a.empty() && a == b, std::to_string(a.size()) + " bytes, threads " +
                                      std::to_string(g_threads) + " vs 1");
    c.check(slurp(manifest_path(dir / "first.csv")) == slurp(manifest_path(dir / "second.csv")),
            "manifests identical");
  }

  std::cout << "SUMMARY " << (12 - g_failures) << "/12 criteria passed\n";
  return g_failures;
}
