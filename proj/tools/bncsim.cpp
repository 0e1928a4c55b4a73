// bncsim: sweep runner, sifting-table check, landmark verifier and oracle evaluator.
#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bncsim/analytics.hpp"
#include "bncsim/config.hpp"
#include "bncsim/errors.hpp"
#include "bncsim/landmarks.hpp"
#include "bncsim/report.hpp"
#include "bncsim/sweep.hpp"
#include "bncsim/table1.hpp"

using namespace bncsim;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> flux;
  std::optional<std::uint64_t> gates;
  std::optional<std::string> scenario;
  std::optional<std::string> detector;
  std::optional<std::string> case_filter;
  std::optional<unsigned> threads;
  std::vector<std::string> set;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "key=value config file");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--flux", f.flux, "comma-separated photons/pulse grid");
  app->add_option("--gates", f.gates, "gates per flux point");
  app->add_option("--scenario", f.scenario, "honest|attack_no_cm|attack_cm|blinding_only");
  app->add_option("--detector", f.detector, "baseline_two_apd|balanced_bnc|self_differencing");
  app->add_option("--case-filter", f.case_filter, "all, or a comma list of A,B,C");
  app->add_option("--threads", f.threads, "worker threads");
  app->add_option("--set", f.set, "extra key=value override, repeatable");
}

// Precedence: built-in defaults < config file < --set < dedicated flags.
Settings settings_from(const CommonFlags& f) {
  ConfigValues values;
  if (!f.config.empty()) values = load_config(f.config);
  ConfigValues flags;
  for (const std::string& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    flags[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (f.seed) flags["seed"] = std::to_string(*f.seed);
  if (f.flux) flags["flux"] = *f.flux;
  if (f.gates) flags["gates"] = std::to_string(*f.gates);
  if (f.scenario) flags["scenario"] = *f.scenario;
  if (f.detector) flags["detector"] = *f.detector;
  if (f.case_filter) flags["case_filter"] = *f.case_filter;
  if (f.threads) flags["threads"] = std::to_string(*f.threads);
  return resolve_settings(merge(values, flags));
}

std::string fmt(double v) { return format_double(v); }

int cmd_sweep(const CommonFlags& flags, const std::string& out) {
  const Settings s = settings_from(flags);
  const RunReport report = run_sweep(s.spec, s.params);
  if (out.empty()) {
    write_report_table(report, std::cout);
  } else {
    emit_report(report, out);
    std::cerr << "wrote " << out << " and " << manifest_path(out).string() << "\n";
  }
  return 0;
}

int cmd_table1(const CommonFlags& flags, bool quick) {
  const Settings s = settings_from(flags);
  Table1Options opt;
  opt.seed = s.spec.seed;
  opt.threads = s.spec.threads;
  if (quick) {
    opt.eve_trials = 20'000;
    opt.deterministic_gates = 20'000;
    opt.split_gates = 2'000'000;
    opt.loss_gates = 200'000;
  }
  const auto checks = simulate_table1(s.params, opt);
  std::cout << "row,alice,eve_basis,eve_apd,evealice,bob,case,expected,eve_match,simulated_share,"
               "no_click,no_click_expected,result\n";
  int failures = 0;
  int case_c = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Table1Check& c = checks[i];
    const Table1Row& r = c.row;
    case_c += r.case_label == CaseLabel::C;
    failures += !c.passed;
    std::cout << i + 1 << ',' << to_string(r.alice_phase) << ','
              << static_cast<int>(r.evebob_basis) << ',' << static_cast<int>(r.eve_apd) << ','
              << to_string(r.evealice_phase) << ',' << to_string(r.bob_phase) << ','
              << to_string(r.case_label) << ',' << to_string(r.expected) << ','
              << fmt(c.eve_match) << ',' << fmt(c.share) << ','
              << (c.no_click >= 0 ? fmt(c.no_click) : "") << ','
              << (c.no_click_expected >= 0 ? fmt(c.no_click_expected) : "") << ','
              << (c.passed ? "PASS" : "FAIL") << '\n';
  }
  std::cout << "rows=" << checks.size() << " case_c=" << case_c << " failures=" << failures << "\n";
  return failures == 0 && checks.size() == 16 && case_c == 8 ? 0 : 1;
}

int cmd_verify(const std::string& path) {
  const RunReport report = read_report(path);
  const auto results = verify_landmarks(report);
  int failures = 0;
  for (const LandmarkResult& r : results) {
    failures += !r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << fmt(r.measured)
              << " band=" << r.band << "\n";
  }
  if (results.empty()) {
    std::cout << "no landmarks apply to scenario " << to_string(report.spec.scenario)
              << " with case filter " << format_case_filter(report.spec.table1_row_filter) << "\n";
  }
  return failures == 0 ? 0 : 1;
}

struct BudgetFlags {
  std::optional<double> p_ave;
  double rep_rate = 2e6;
  double att_bob = 0.0;
  double mu_eve_alice = 1.0;
};

int cmd_oracle(const CommonFlags& flags, const BudgetFlags& budget) {
  using namespace analytics;
  const Settings s = settings_from(flags);
  const DetectorParams& p = s.params;
  std::cout << "flux,avc_one_click,avc_both_clicks,linear_regime,p1_diff,p2_diff,p_s,"
               "qber_diff_phase,weak_per_gate,strong_per_gate,p_cm,blinding_coincidence\n";
  for (double mu : s.spec.flux_grid) {
    const ClickProbabilities c = click_probabilities(mu, p.qe, PhaseClass::Diff);
    const ExpectedAvalanches e = expected_avalanches(mu, p, true, true);
    const double q = c.p1 + c.p_s > 0.0 ? qber_diff_phase(c.p1, c.p_s) : NAN;
    const double cm = e.weak + e.strong > 0.0 ? p_cm(e.strong, e.weak) : NAN;
    std::cout << fmt(mu) << ',' << fmt(avc_one_click(mu, p.qe, p.f_gate)) << ','
              << fmt(avc_both_clicks(mu, p.qe, p.f_gate)) << ','
              << (in_linear_regime(mu, p.qe) ? 1 : 0) << ',' << fmt(c.p1) << ',' << fmt(c.p2)
              << ',' << fmt(c.p_s) << ',' << fmt(q) << ',' << fmt(e.weak) << ','
              << fmt(e.strong) << ',' << fmt(cm) << ','
              << fmt(blinding_coincidence_probability(mu, p)) << '\n';
  }
  if (budget.p_ave) {
    LinkBudget b;
    b.p_ave = *budget.p_ave;
    b.rep_rate = budget.rep_rate;
    b.att_bob = budget.att_bob;
    b.mu_eve_alice = budget.mu_eve_alice;
    std::cout << "photons_per_pulse=" << fmt(b.photons()) << "\n"
              << "att_bob_to_eve_alice_db=" << fmt(b.att_eve_alice()) << "\n"
              << "att_total_db=" << fmt(b.att_total()) << "\n"
              << "mu_apd=" << fmt(b.mu_apd()) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator of a blinding attack on balanced-APD QKD detectors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CommonFlags sweep_flags, table_flags, oracle_flags;
  std::string out;
  auto* sweep = app.add_subcommand("sweep", "run a flux sweep and emit the report");
  add_common(sweep, sweep_flags);
  sweep->add_option("--out", out, "report path; the manifest goes next to it (stdout if omitted)");

  bool quick = false;
  auto* table = app.add_subcommand("table1", "enumerate the 16 sifting cases and check them by simulation");
  add_common(table, table_flags);
  table->add_flag("--quick", quick, "fewer trials per row");

  std::string report_path;
  auto* verify = app.add_subcommand("verify", "check a report against the reference landmarks");
  verify->add_option("report", report_path, "report file")->required();

  BudgetFlags budget;
  auto* oracle = app.add_subcommand("oracle", "evaluate the closed-form relations on a flux grid");
  add_common(oracle, oracle_flags);
  oracle->add_option("--p-ave", budget.p_ave, "average power at Bob's laser, W");
  oracle->add_option("--rep-rate", budget.rep_rate, "repetition rate, Hz");
  oracle->add_option("--att-bob", budget.att_bob, "Bob's internal attenuation, dB");
  oracle->add_option("--mu-eve-alice", budget.mu_eve_alice, "Eve-Alice output, photons/pulse");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return cmd_sweep(sweep_flags, out);
    if (*table) return cmd_table1(table_flags, quick);
    if (*verify) return cmd_verify(report_path);
    if (*oracle) return cmd_oracle(oracle_flags, budget);
  } catch (const MissingFluxPoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
