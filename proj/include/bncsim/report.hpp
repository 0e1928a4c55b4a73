#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bncsim/sweep.hpp"

namespace bncsim {

inline constexpr const char* kVersion = "1.0.0";

// Fixed header of the report table, in column order.
inline constexpr const char* kReportHeader =
    "flux,apd1_rate,apd2_rate,diff1_rate,diff2_rate,weak_ratio,strong_ratio,cm_rate,qber,"
    "cm_success,oracle_avc_one_click,oracle_avc_both_clicks,oracle_qber_diff_phase,oracle_p_cm,"
    "gates,sifted,errors,cm_detections,linear_regime";

void write_report_table(const RunReport& report, std::ostream& out);
std::string manifest_text(const RunReport& report);

// Hex SHA-256 of the canonical configuration.
std::string config_digest(const RunReport& report);

// Writes the table to `path` and the manifest to manifest_path(path).
// Throws IoError with the OS message on failure.
void emit_report(const RunReport& report, const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& report_path);

// Reads a table and its manifest back. Throws IoError or ConfigError.
RunReport read_report(const std::filesystem::path& path);

}  // namespace bncsim
