#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixbench/metrics.hpp"
#include "mixbench/mixer.hpp"

namespace mixbench {

enum class Measurement { cg, p1db, iip3, isolation, nf, harmonics, transient, power };

std::string_view to_string(Measurement m) noexcept;
std::optional<Measurement> parse_measurement(std::string_view name) noexcept;

enum class OutputFormat { csv, json };

std::string_view to_string(OutputFormat f) noexcept;

/// One experiment: a scenario plus the measurements to run on it.
struct RunConfig {
    Scenario scenario = reference_65nm_scenario();
    std::vector<Measurement> measurements{Measurement::cg,        Measurement::p1db,      Measurement::iip3,
                                          Measurement::isolation, Measurement::nf,        Measurement::harmonics,
                                          Measurement::transient, Measurement::power};
    ReportConfig report;
    int harmonic_order = 5;
    std::size_t transient_decimation = 1;
    OutputFormat format = OutputFormat::csv;

    bool requests(Measurement m) const;

    /// Throws Error(config) naming the violated invariant.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses YAML text; omitted fields keep the default calibration.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// The effective (defaults-merged) configuration as YAML.
std::string serialize_config(const RunConfig& config);

/// FNV-1a over the serialized configuration.
std::string parameter_hash(const RunConfig& config);

}  // namespace mixbench
