#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "bncsim/signal_model.hpp"
#include "bncsim/sweep.hpp"

namespace bncsim {

/// Flat key=value configuration. Blank lines and lines starting with '#' are
/// ignored; whitespace around keys and values is trimmed.
///
/// Sweep keys:    seed, scenario, detector, flux, gates, threads, case_filter
/// Detector keys: qe, dcp_apd1, dcp_apd2, f_gate, gain_mean, t_strong, t_diff,
///                background_amplitude, saturation_amplitude
///
/// Unset thresholds follow gain_mean: t_strong = g0 ln(10/9), t_diff = 0.01 g0,
/// background_amplitude = 0.05 g0, saturation_amplitude = 2 t_strong.
using ConfigValues = std::map<std::string, std::string, std::less<>>;

ConfigValues parse_config(std::string_view text);             // throws ConfigError
ConfigValues load_config(const std::filesystem::path& path);  // throws IoError, ConfigError

// Later values win: merge(file, flags) gives flags precedence.
ConfigValues merge(ConfigValues base, const ConfigValues& overrides);

struct Settings {
  SweepSpec spec;
  DetectorParams params;
};

// Throws ConfigError on unknown keys or malformed values.
Settings resolve_settings(const ConfigValues& values);

// Canonical key=value text of the effective settings, one key per line in
// sorted order. Feeds the manifest digest.
std::string canonical_config(const Settings& settings);

std::string format_case_filter(const CaseFilter& filter);
CaseFilter parse_case_filter(std::string_view text);

// Shortest text that parses back to the same double; "nan" for NaN.
std::string format_double(double value);
double parse_double(std::string_view text);  // throws ConfigError

}  // namespace bncsim
