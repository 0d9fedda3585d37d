#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mixbench/config.hpp"
#include "mixbench/mixer.hpp"

namespace mixbench {

enum class ExitCode : int { success = 0, partial_failure = 1, config_error = 2, io_error = 3 };

std::string_view tool_version() noexcept;

struct MeasurementStatus {
    Measurement measurement;
    bool ok = false;
    std::string error_kind;
    std::string message;
    std::vector<std::string> files;
};

struct OutputBundle {
    std::filesystem::path directory;
    std::vector<MeasurementStatus> statuses;
    ExitCode exit_code = ExitCode::success;
};

/// Runs every requested measurement and writes data files, summary.json,
/// summary.txt, metadata.json and effective_config.yaml into `out_dir`.
/// Measurement failures are recorded, not thrown; I/O failures throw.
OutputBundle run(const RunConfig& config, const std::filesystem::path& out_dir);

/// (time, v_out[, v_out_filtered]) table, every `decimation`-th sample.
void emit_transient(const TransientResult& result, const std::filesystem::path& path, std::size_t decimation,
                    OutputFormat format = OutputFormat::csv);

/// Re-renders summary.txt from the summary.json in `out_dir`.
void regenerate_report(const std::filesystem::path& out_dir);

}  // namespace mixbench
