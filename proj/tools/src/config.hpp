#pragma once

#include "mzlaw/harness.hpp"
#include "mzlaw/mixing.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace mzlaw::cli {

using nlohmann::json;

/// Malformed or invalid configuration. The message names the location,
/// either line:column in the file or a JSON path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses `path` and applies `key=value` overrides. Keys are dotted paths
/// ("generator.model.alpha"); values are read as JSON when they parse as
/// JSON, otherwise as strings.
[[nodiscard]] json load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Parses JSON text; syntax errors report line and column.
[[nodiscard]] json parse_config_text(const std::string& text, const std::string& origin);

void apply_override(json& cfg, const std::string& assignment);

[[nodiscard]] DistributionModel parse_model(const json& j, const std::string& where);
[[nodiscard]] WeightFunction parse_weight(const json& j, const DistributionModel& marginal,
                                          const std::string& where);
[[nodiscard]] FunctionalSpec parse_functional(const json& j, const std::string& where);
[[nodiscard]] MixingRateModel parse_mixing(const json& j, const std::string& where);
[[nodiscard]] GeneratorSpec parse_generator(const json& j, const std::string& where);

/// Full experiment section: generator, weight, functional, r, n_grid,
/// replications, seed, sup_resolution.
[[nodiscard]] ExperimentConfig parse_experiment(const json& cfg);

// Typed field access with path-qualified errors.
[[nodiscard]] const json& require(const json& j, const std::string& key, const std::string& where);
[[nodiscard]] double get_number(const json& j, const std::string& key, const std::string& where);
[[nodiscard]] double get_number(const json& j, const std::string& key, const std::string& where,
                                double fallback);
[[nodiscard]] std::size_t get_count(const json& j, const std::string& key, const std::string& where,
                                    std::size_t fallback);
[[nodiscard]] std::string get_string(const json& j, const std::string& key, const std::string& where);
[[nodiscard]] std::vector<double> get_numbers(const json& j, const std::string& key,
                                              const std::string& where,
                                              std::vector<double> fallback);

}  // namespace mzlaw::cli
