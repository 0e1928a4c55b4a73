#include "bncsim/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bncsim/analytics.hpp"
#include "bncsim/config.hpp"
#include "bncsim/errors.hpp"

namespace bncsim {

namespace {

constexpr double kHighFlux = 100.0;

const ReportRow& require(const RunReport& report, double flux) {
  if (const ReportRow* row = report.find(flux)) return *row;
  throw MissingFluxPoint("report has no row at " + format_double(flux) + " photons/pulse");
}

std::vector<const ReportRow*> rows_where(const RunReport& report, auto predicate) {
  std::vector<const ReportRow*> out;
  for (const auto& row : report.rows) {
    if (predicate(row)) out.push_back(&row);
  }
  return out;
}

// NaN never satisfies a band.
bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

double count_of(double rate, const ReportRow& row, const DetectorParams& p) {
  return rate / p.f_gate * static_cast<double>(row.gates);
}

// |observed - expected| in units of sqrt(expected).
double poisson_sigmas(double observed, double expected) {
  if (expected <= 0.0) return observed == 0.0 ? 0.0 : INFINITY;
  return std::abs(observed - expected) / std::sqrt(expected);
}

void attack_all_cases(const RunReport& report, std::vector<LandmarkResult>& out) {
  const bool cm = report.spec.scenario == Scenario::AttackCm;
  {
    const double q = require(report, 1.0).qber;
    out.push_back({"qber_single_photon", q, "0.25 +/- 0.02", within(q, 0.23, 0.27)});
  }
  {
    require(report, kHighFlux);
    double worst = 0.0;
    bool ok = true;
    for (const ReportRow* r : rows_where(report, [](const ReportRow& r) { return r.flux >= kHighFlux; })) {
      worst = std::max(worst, std::isnan(r->qber) ? 0.0 : r->qber);
      ok = ok && !(r->qber >= 0.01);
    }
    out.push_back({"qber_high_flux", worst, "< 0.01 for flux >= 100", ok});
  }
  {
    require(report, 1.0);
    double worst = 0.10;
    bool ok = true;
    for (const ReportRow* r : rows_where(report, [](const ReportRow& r) { return r.flux <= 1.0; })) {
      if (std::abs(r->weak_ratio - 0.10) > std::abs(worst - 0.10) || std::isnan(r->weak_ratio)) {
        worst = r->weak_ratio;
      }
      ok = ok && within(r->weak_ratio, 0.08, 0.12);
    }
    out.push_back({"weak_ratio_low_flux", worst, "0.10 +/- 0.02 for flux <= 1", ok});
  }
  {
    require(report, kHighFlux);
    double worst = 0.0;
    bool ok = true;
    for (const ReportRow* r : rows_where(report, [](const ReportRow& r) { return r.flux >= kHighFlux; })) {
      worst = std::max(worst, r->weak_ratio);
      ok = ok && r->weak_ratio < 1e-3;
    }
    out.push_back({"weak_ratio_high_flux", worst, "< 1e-3 for flux >= 100", ok});
  }
  if (cm) {
    const double s = require(report, 1.0).cm_success;
    out.push_back({"cm_success_single_photon", s, "[83, 92] percent", within(s, 83.0, 92.0)});
    const double high = require(report, 500.0).cm_success;
    out.push_back({"cm_success_high_flux", high, ">= 99.9 percent at flux 500", high >= 99.9});
  }
}

void attack_case_c(const RunReport& report, std::vector<LandmarkResult>& out) {
  const bool cm = report.spec.scenario == Scenario::AttackCm;
  {
    const ReportRow& low = require(report, 0.1);
    const ReportRow& mid = require(report, 30.0);
    const ReportRow& high = require(report, 500.0);
    bool ok = true;
    double worst_rise = INFINITY;
    double worst_fall = 0.0;
    for (auto side : {&ReportRow::diff1_rate, &ReportRow::diff2_rate}) {
      const double rise = mid.*side / low.*side;
      const double fall = high.*side / mid.*side;
      worst_rise = std::min(worst_rise, rise);
      worst_fall = std::max(worst_fall, fall);
      ok = ok && mid.*side > 3.0 * low.*side && high.*side < 0.05 * mid.*side;
    }
    std::ostringstream band;
    band << "rate(30)/rate(0.1) > 3 (worst " << format_double(worst_rise)
         << "), rate(500)/rate(30) < 0.05";
    out.push_back({"diff_output_hump", worst_fall, band.str(), ok});
  }
  if (!cm) {
    const ReportRow& peak = require(report, 10.0);
    require(report, kHighFlux);
    const double reference = peak.diff1_rate + peak.diff2_rate;
    double worst = 0.0;
    bool ok = true;
    for (const ReportRow* r : rows_where(report, [](const ReportRow& r) { return r.flux >= kHighFlux; })) {
      const double rel = (r->diff1_rate + r->diff2_rate) / reference;
      worst = std::max(worst, rel);
      ok = ok && rel < 0.02;
    }
    out.push_back({"case_c_click_suppression", worst, "< 0.02 of the flux-10 rate for flux >= 100", ok});
  } else {
    require(report, kHighFlux);
    double worst = 1.0;
    bool ok = true;
    for (const ReportRow* r : rows_where(report, [](const ReportRow& r) { return r.flux >= kHighFlux; })) {
      const double frac = r->gates == 0 ? 0.0
                                        : static_cast<double>(r->cm_detections) /
                                              static_cast<double>(r->gates);
      worst = std::min(worst, frac);
      ok = ok && frac >= 0.999;
    }
    out.push_back({"cm_case_c_coverage", worst, ">= 0.999 for flux >= 100", ok});
  }
}

void honest(const RunReport& report, std::vector<LandmarkResult>& out) {
  const CaseFilter& f = report.spec.table1_row_filter;
  const DetectorParams& p = report.params;
  if (f == CaseFilter{true, true, false} || f == CaseFilter::only(CaseLabel::C)) {
    const bool deterministic = f.a;
    double worst = 0.0;
    for (double flux : {0.1, 0.3, 1.0}) {
      const ReportRow& r = require(report, flux);
      const double gates = static_cast<double>(r.gates);
      if (deterministic) {
        const double expected = r.oracle_avc_one_click / p.f_gate * gates;
        worst = std::max(worst, poisson_sigmas(count_of(r.diff1_rate + r.diff2_rate, r, p), expected));
      } else {
        const double expected = r.oracle_avc_both_clicks / p.f_gate * gates;
        worst = std::max(worst, poisson_sigmas(count_of(r.diff1_rate, r, p), expected));
        worst = std::max(worst, poisson_sigmas(count_of(r.diff2_rate, r, p), expected));
      }
    }
    out.push_back({deterministic ? "ideal_one_click_rate" : "ideal_both_clicks_rate", worst,
                   "within 3 sigma at flux 0.1, 0.3, 1", worst <= 3.0});
  }
  if (f.is_all()) {
    if (report.spec.detector == DetectorKind::BalancedBnc) {
      double worst = 0.0;
      for (const auto& r : report.rows) {
        const double expected =
            analytics::blinding_coincidence_probability(r.flux, p) * static_cast<double>(r.gates);
        worst = std::max(worst, poisson_sigmas(static_cast<double>(r.cm_detections), expected));
      }
      out.push_back({"cm_false_positive_rate", worst, "within 5 sigma of the coincidence oracle",
                     worst <= 5.0});
    }
    if (p.dcp_apd1 == 0.0 && p.dcp_apd2 == 0.0) {
      double worst = 0.0;
      for (const auto& r : report.rows) {
        if (r.sifted > 0) worst = std::max(worst, r.qber);
      }
      out.push_back({"honest_qber_zero", worst, "== 0 without dark counts", worst == 0.0});
    }
  }
}

}  // namespace

std::vector<LandmarkResult> verify_landmarks(const RunReport& report) {
  std::vector<LandmarkResult> out;
  const CaseFilter& f = report.spec.table1_row_filter;
  switch (report.spec.scenario) {
    case Scenario::AttackNoCm:
    case Scenario::AttackCm:
      if (f.is_all()) attack_all_cases(report, out);
      if (f == CaseFilter::only(CaseLabel::C)) attack_case_c(report, out);
      break;
    case Scenario::Honest:
      honest(report, out);
      break;
    case Scenario::BlindingOnly:
      break;
  }
  return out;
}

}  // namespace bncsim
