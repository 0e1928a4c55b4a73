#include "bncsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "bncsim/errors.hpp"

namespace bncsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size()) return v;
  // Accept integral scientific notation such as 1e6.
  const double d = parse_double(text);
  if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
  throw ConfigError("key '" + std::string(key) + "': expected a non-negative integer, got '" +
                    std::string(text) + "'");
}

}  // namespace

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "nan") return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

ConfigValues parse_config(std::string_view text) {
  ConfigValues values;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (values.contains(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    values.emplace(key, std::string(trim(line.substr(eq + 1))));
  }
  return values;
}

ConfigValues load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

ConfigValues merge(ConfigValues base, const ConfigValues& overrides) {
  for (const auto& [key, value] : overrides) base.insert_or_assign(key, value);
  return base;
}

std::string format_case_filter(const CaseFilter& filter) {
  std::string out;
  for (auto [on, name] : {std::pair{filter.a, "A"}, {filter.b, "B"}, {filter.c, "C"}}) {
    if (!on) continue;
    if (!out.empty()) out += ',';
    out += name;
  }
  return out;
}

CaseFilter parse_case_filter(std::string_view text) {
  text = trim(text);
  if (text.empty() || text == "all") return CaseFilter::all();
  CaseFilter f{false, false, false};
  for (std::string_view part : split(text, ',')) {
    if (part == "A") {
      f.a = true;
    } else if (part == "B") {
      f.b = true;
    } else if (part == "C") {
      f.c = true;
    } else {
      throw ConfigError("case_filter: unknown case label '" + std::string(part) + "'");
    }
  }
  return f;
}

Settings resolve_settings(const ConfigValues& values) {
  Settings s;
  auto get = [&](std::string_view key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  auto number = [&](std::string_view key, double& target) {
    if (const auto* v = get(key)) {
      try {
        target = parse_double(*v);
      } catch (const ConfigError& e) {
        throw ConfigError("key '" + std::string(key) + "': " + e.what());
      }
    }
  };

  static const char* const kKnown[] = {
      "seed", "scenario", "detector", "flux", "gates", "threads", "case_filter", "qe",
      "dcp_apd1", "dcp_apd2", "f_gate", "gain_mean", "t_strong", "t_diff",
      "background_amplitude", "saturation_amplitude"};
  for (const auto& [key, value] : values) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }

  if (const auto* v = get("seed")) s.spec.seed = parse_u64("seed", *v);
  if (const auto* v = get("scenario")) s.spec.scenario = parse_scenario(*v);
  if (const auto* v = get("detector")) s.spec.detector = parse_detector(*v);
  if (const auto* v = get("gates")) s.spec.n_gates_per_point = parse_u64("gates", *v);
  if (const auto* v = get("threads")) {
    s.spec.threads = static_cast<unsigned>(parse_u64("threads", *v));
  }
  if (const auto* v = get("case_filter")) s.spec.table1_row_filter = parse_case_filter(*v);
  if (const auto* v = get("flux")) {
    s.spec.flux_grid.clear();
    if (!trim(*v).empty()) {
      for (std::string_view item : split(*v, ',')) s.spec.flux_grid.push_back(parse_double(item));
    }
  }

  DetectorParams& p = s.params;
  number("gain_mean", p.gain_mean);
  p.t_strong = DetectorParams::calibrated_t_strong(p.gain_mean);
  p.t_diff = 0.01 * p.gain_mean;
  p.background_amplitude = 0.05 * p.gain_mean;
  number("qe", p.qe);
  number("dcp_apd1", p.dcp_apd1);
  number("dcp_apd2", p.dcp_apd2);
  number("f_gate", p.f_gate);
  number("t_strong", p.t_strong);
  number("t_diff", p.t_diff);
  number("background_amplitude", p.background_amplitude);
  p.saturation_amplitude = 2.0 * p.t_strong;
  number("saturation_amplitude", p.saturation_amplitude);

  s.spec.validate();
  p.validate();
  return s;
}

std::string canonical_config(const Settings& settings) {
  const SweepSpec& spec = settings.spec;
  const DetectorParams& p = settings.params;
  std::string flux;
  for (double f : spec.flux_grid) {
    if (!flux.empty()) flux += ',';
    flux += format_double(f);
  }
  ConfigValues v;
  v["seed"] = std::to_string(spec.seed);
  v["scenario"] = std::string(to_string(spec.scenario));
  v["detector"] = std::string(to_string(spec.detector));
  v["flux"] = flux;
  v["gates"] = std::to_string(spec.n_gates_per_point);
  v["case_filter"] = format_case_filter(spec.table1_row_filter);
  v["qe"] = format_double(p.qe);
  v["dcp_apd1"] = format_double(p.dcp_apd1);
  v["dcp_apd2"] = format_double(p.dcp_apd2);
  v["f_gate"] = format_double(p.f_gate);
  v["gain_mean"] = format_double(p.gain_mean);
  v["t_strong"] = format_double(p.t_strong);
  v["t_diff"] = format_double(p.t_diff);
  v["background_amplitude"] = format_double(p.background_amplitude);
  v["saturation_amplitude"] = format_double(p.saturation_amplitude);
  // threads does not affect results and stays out of the digest.
  std::string out;
  for (const auto& [key, value] : v) out += key + "=" + value + "\n";
  return out;
}

}  // namespace bncsim
