#include "bncsim/report.hpp"

#include <openssl/evp.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "bncsim/config.hpp"
#include "bncsim/errors.hpp"

namespace bncsim {

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* const kHex = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": " + std::strerror(errno));
  out << content;
  out.flush();
  if (!out) throw IoError(path.string() + ": " + std::strerror(errno));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": " + std::strerror(errno));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

constexpr std::size_t kColumns = 19;

}  // namespace

void write_report_table(const RunReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const ReportRow& r : report.rows) {
    const double values[] = {r.flux,         r.apd1_rate,
                             r.apd2_rate,    r.diff1_rate,
                             r.diff2_rate,   r.weak_ratio,
                             r.strong_ratio, r.cm_rate,
                             r.qber,         r.cm_success,
                             r.oracle_avc_one_click, r.oracle_avc_both_clicks,
                             r.oracle_qber_diff_phase, r.oracle_p_cm};
    for (double v : values) out << format_double(v) << ',';
    out << r.gates << ',' << r.sifted << ',' << r.errors << ',' << r.cm_detections << ','
        << (r.linear_regime ? 1 : 0) << '\n';
  }
}

std::string config_digest(const RunReport& report) {
  return sha256_hex(canonical_config({report.spec, report.params}));
}

std::string manifest_text(const RunReport& report) {
  std::string out;
  out += "tool=bncsim\n";
  out += std::string("version=") + kVersion + "\n";
  out += "config_digest=" + config_digest(report) + "\n";
  out += "rows=" + std::to_string(report.rows.size()) + "\n";
  out += canonical_config({report.spec, report.params});
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& report_path) {
  std::filesystem::path p = report_path;
  p += ".manifest";
  return p;
}

void emit_report(const RunReport& report, const std::filesystem::path& path) {
  std::ostringstream table;
  write_report_table(report, table);
  write_file(path, table.str());
  write_file(manifest_path(path), manifest_text(report));
}

RunReport read_report(const std::filesystem::path& path) {
  ConfigValues manifest = parse_config(read_file(manifest_path(path)));
  for (const char* key : {"tool", "version", "config_digest", "rows"}) manifest.erase(key);
  const Settings settings = resolve_settings(manifest);

  RunReport report{settings.spec, settings.params, {}};
  std::istringstream table(read_file(path));
  std::string line;
  if (!std::getline(table, line) || line != kReportHeader) {
    throw ConfigError(path.string() + ": unexpected report header");
  }
  int line_no = 1;
  while (std::getline(table, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != kColumns) {
      throw ConfigError(path.string() + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(f.size()) + " columns");
    }
    ReportRow r;
    double* targets[] = {&r.flux,         &r.apd1_rate,  &r.apd2_rate,   &r.diff1_rate,
                         &r.diff2_rate,   &r.weak_ratio, &r.strong_ratio, &r.cm_rate,
                         &r.qber,         &r.cm_success, &r.oracle_avc_one_click,
                         &r.oracle_avc_both_clicks, &r.oracle_qber_diff_phase, &r.oracle_p_cm};
    std::size_t i = 0;
    for (double* t : targets) *t = parse_double(f[i++]);
    std::uint64_t* counts[] = {&r.gates, &r.sifted, &r.errors, &r.cm_detections};
    for (std::uint64_t* c : counts) *c = static_cast<std::uint64_t>(std::stoull(f[i++]));
    r.linear_regime = f[i] == "1";
    report.rows.push_back(r);
  }
  return report;
}

}  // namespace bncsim
