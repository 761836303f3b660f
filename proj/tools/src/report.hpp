#pragma once

#include "mzlaw/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mzlaw::cli {

using nlohmann::json;

/// Finite values as numbers; infinities and NaN as the strings "inf",
/// "-inf" and "nan", which plain JSON cannot represent.
[[nodiscard]] json number(double v);

[[nodiscard]] json summary_json(const SummaryStats& s);

/// per_n array, slope and stderr of a rate report.
[[nodiscard]] json rate_json(const RateReport& rep);

/// Rows `n,metric,value,replication_stat` for D_n and n^r D_n.
void append_rate_csv(std::string& csv, const RateReport& rep, const std::string& prefix = "");

[[nodiscard]] std::string csv_header();

/// Polyline of log median D_n against log n, one series per entry.
[[nodiscard]] std::string rate_svg(const std::vector<std::pair<std::string, const RateReport*>>& series);

/// Pretty-printed with sorted keys, so equal inputs give equal bytes.
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Run metadata kept out of the report so that reports are reproducible.
[[nodiscard]] json metadata_json(const std::string& subcommand, const std::string& config_path,
                                 const std::vector<std::string>& overrides);

}  // namespace mzlaw::cli
