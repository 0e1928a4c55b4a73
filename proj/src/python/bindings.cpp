#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "bncsim/analytics.hpp"
#include "bncsim/attack.hpp"
#include "bncsim/config.hpp"
#include "bncsim/detector_balanced.hpp"
#include "bncsim/detector_selfdiff.hpp"
#include "bncsim/errors.hpp"
#include "bncsim/landmarks.hpp"
#include "bncsim/report.hpp"
#include "bncsim/sweep.hpp"
#include "bncsim/table1.hpp"

namespace py = pybind11;
using namespace bncsim;

namespace {

Settings settings_from_dict(const py::dict& d) {
  ConfigValues values;
  for (auto [k, v] : d) {
    std::string value;
    if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      for (auto item : v) {
        if (!value.empty()) value += ',';
        value += py::str(item).cast<std::string>();
      }
    } else if (py::isinstance<py::str>(v)) {
      value = v.cast<std::string>();
    } else {
      value = py::str(v).cast<std::string>();
    }
    values[k.cast<std::string>()] = value;
  }
  return resolve_settings(values);
}

py::dict row_dict(const ReportRow& r) {
  py::dict d;
  d["flux"] = r.flux;
  d["apd1_rate"] = r.apd1_rate;
  d["apd2_rate"] = r.apd2_rate;
  d["diff1_rate"] = r.diff1_rate;
  d["diff2_rate"] = r.diff2_rate;
  d["weak_ratio"] = r.weak_ratio;
  d["strong_ratio"] = r.strong_ratio;
  d["cm_rate"] = r.cm_rate;
  d["qber"] = r.qber;
  d["cm_success"] = r.cm_success;
  d["oracle_avc_one_click"] = r.oracle_avc_one_click;
  d["oracle_avc_both_clicks"] = r.oracle_avc_both_clicks;
  d["oracle_qber_diff_phase"] = r.oracle_qber_diff_phase;
  d["oracle_p_cm"] = r.oracle_p_cm;
  d["gates"] = r.gates;
  d["sifted"] = r.sifted;
  d["errors"] = r.errors;
  d["cm_detections"] = r.cm_detections;
  d["linear_regime"] = r.linear_regime;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monte Carlo simulator of detector blinding on balanced-APD QKD receivers";
  m.attr("__version__") = kVersion;
  m.attr("REPORT_HEADER") = kReportHeader;

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InconsistentWord>(m, "InconsistentWord", error.ptr());
  py::register_exception<NotSiftable>(m, "NotSiftable", error.ptr());
  py::register_exception<EmptySiftedKey>(m, "EmptySiftedKey", error.ptr());
  py::register_exception<NonPhysical>(m, "NonPhysical", error.ptr());
  py::register_exception<Undefined>(m, "Undefined", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<MissingFluxPoint>(m, "MissingFluxPoint", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());

  py::class_<DetectorParams>(m, "DetectorParams")
      .def(py::init<>())
      .def_readwrite("qe", &DetectorParams::qe)
      .def_readwrite("dcp_apd1", &DetectorParams::dcp_apd1)
      .def_readwrite("dcp_apd2", &DetectorParams::dcp_apd2)
      .def_readwrite("f_gate", &DetectorParams::f_gate)
      .def_readwrite("gain_mean", &DetectorParams::gain_mean)
      .def_readwrite("t_strong", &DetectorParams::t_strong)
      .def_readwrite("t_diff", &DetectorParams::t_diff)
      .def_readwrite("background_amplitude", &DetectorParams::background_amplitude)
      .def_readwrite("saturation_amplitude", &DetectorParams::saturation_amplitude)
      .def("validate", &DetectorParams::validate);

  // Detector read-outs, by event name.
  m.def("comparator_bank", [](double a1, double a2, const DetectorParams& p) {
    const ComparatorWord4 w = comparator_bank(a1, a2, p);
    return py::make_tuple(w.a, w.b, w.c, w.d);
  }, py::arg("amp1"), py::arg("amp2"), py::arg("params") = DetectorParams{});
  m.def("classify", [](bool a, bool b, bool c, bool d) {
    return std::string(to_string(classify({a, b, c, d})));
  });
  m.def("balanced_event", [](double a1, double a2, const DetectorParams& p) {
    return std::string(to_string(classify(comparator_bank(a1, a2, p))));
  }, py::arg("amp1"), py::arg("amp2"), py::arg("params") = DetectorParams{});
  m.def("baseline_click", [](double a1, double a2, const DetectorParams& p) {
    return std::string(to_string(baseline_click(a1, a2, p)));
  }, py::arg("amp1"), py::arg("amp2"), py::arg("params") = DetectorParams{});
  m.def("self_differencing_events", [](const std::vector<double>& amps, const DetectorParams& p) {
    std::vector<std::string> out;
    for (SdGateEvent e : process_amplitudes(amps, p)) out.emplace_back(to_string(e));
    return out;
  }, py::arg("amplitudes"), py::arg("params") = DetectorParams{});

  m.def("enumerate_table1", [] {
    py::list rows;
    for (const Table1Row& r : enumerate_table1()) {
      py::dict d;
      d["alice_phase"] = std::string(to_string(r.alice_phase));
      d["evebob_basis"] = static_cast<int>(r.evebob_basis);
      d["eve_apd"] = static_cast<int>(r.eve_apd);
      d["evealice_phase"] = std::string(to_string(r.evealice_phase));
      d["bob_phase"] = std::string(to_string(r.bob_phase));
      d["expected"] = std::string(to_string(r.expected));
      d["case"] = std::string(to_string(r.case_label));
      rows.append(d);
    }
    return rows;
  });

  m.def("run_link", [](const std::string& scenario, double mu, std::uint64_t gates,
                       std::uint64_t seed, const std::string& detector,
                       const std::string& case_filter, const DetectorParams& p, unsigned threads) {
    LinkConfig c;
    c.scenario = parse_scenario(scenario);
    c.detector = parse_detector(detector);
    c.mu = mu;
    c.n_gates = gates;
    c.seed = seed;
    c.filter = parse_case_filter(case_filter);
    c.bob = p;
    c.threads = threads;
    RunCounters k;
    {
      py::gil_scoped_release release;
      k = run_link(c);
    }
    py::dict d;
    d["simulated_gates"] = k.simulated_gates;
    d["gates"] = k.gates;
    d["case_a_gates"] = k.case_a_gates;
    d["case_b_gates"] = k.case_b_gates;
    d["case_c_gates"] = k.case_c_gates;
    d["avalanches"] = k.avalanches;
    d["diff_clicks"] = k.diff_clicks;
    d["weak"] = k.weak;
    d["strong"] = k.strong;
    d["cm_detections"] = k.cm_detections;
    d["sifted"] = k.sifted;
    d["errors"] = k.errors;
    return d;
  }, py::arg("scenario"), py::arg("mu"), py::arg("gates") = 100'000, py::arg("seed") = 1,
     py::arg("detector") = "balanced_bnc", py::arg("case_filter") = "all",
     py::arg("params") = DetectorParams{}, py::arg("threads") = 1);

  // Sweeps take the same keys as a config file.
  m.def("run_sweep", [](const py::dict& config, const std::optional<std::filesystem::path>& out) {
    const Settings s = settings_from_dict(config);
    RunReport report;
    {
      py::gil_scoped_release release;
      report = run_sweep(s.spec, s.params);
    }
    if (out) emit_report(report, *out);
    py::list rows;
    for (const auto& r : report.rows) rows.append(row_dict(r));
    return rows;
  }, py::arg("config") = py::dict(), py::arg("out") = py::none());

  m.def("read_report", [](const std::filesystem::path& path) {
    py::list rows;
    for (const auto& r : read_report(path).rows) rows.append(row_dict(r));
    return rows;
  });

  m.def("verify_report", [](const std::filesystem::path& path) {
    py::list out;
    for (const LandmarkResult& r : verify_landmarks(read_report(path))) {
      out.append(py::make_tuple(r.name, r.measured, r.band, r.passed));
    }
    return out;
  });

  auto a = m.def_submodule("analytics", "closed-form oracles");
  a.attr("PHOTON_ENERGY") = analytics::kPhotonEnergy;
  a.def("avc_one_click", &analytics::avc_one_click);
  a.def("avc_both_clicks", &analytics::avc_both_clicks);
  a.def("mu_apd_from_budget", &analytics::mu_apd_from_budget);
  a.def("photons_per_pulse", &analytics::photons_per_pulse, py::arg("p_ave"), py::arg("rep_rate"),
        py::arg("e_photon") = analytics::kPhotonEnergy);
  a.def("att_bob_to_eve_alice", &analytics::att_bob_to_eve_alice);
  a.def("click_probabilities", [](double mu, double qe, const std::string& phase_class) {
    if (phase_class != "same" && phase_class != "diff") {
      throw py::value_error("phase_class must be 'same' or 'diff'");
    }
    const auto c = analytics::click_probabilities(
        mu, qe, phase_class == "same" ? analytics::PhaseClass::Same : analytics::PhaseClass::Diff);
    return py::make_tuple(c.p1, c.p2, c.p_s);
  }, py::arg("mu"), py::arg("qe"), py::arg("phase_class") = "diff");
  a.def("qber_diff_phase", &analytics::qber_diff_phase);
  a.def("p_cm", &analytics::p_cm);
  a.def("blinding_coincidence_probability", &analytics::blinding_coincidence_probability,
        py::arg("mu"), py::arg("params") = DetectorParams{});
}
