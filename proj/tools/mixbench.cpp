#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <optional>
#include <string>

#include "mixbench/config.hpp"
#include "mixbench/error.hpp"
#include "mixbench/runner.hpp"

namespace {

int code(mixbench::ExitCode c) { return static_cast<int>(c); }

int exit_code_for(const mixbench::Error& e) {
    return e.kind() == mixbench::ErrorKind::io ? code(mixbench::ExitCode::io_error)
                                               : code(mixbench::ExitCode::config_error);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioral single-balanced mixer simulator and measurement bench"};
    app.set_version_flag("--version", std::string(mixbench::tool_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Simulate a scenario and write all requested measurements");
    run->add_option("--config", config_path, "Scenario/measurement file (YAML)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--format", format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", seed, "Override the scenario noise seed");

    auto* report = app.add_subcommand("report", "Regenerate summary.txt from an output directory");
    report->add_option("--out", out_dir, "Output directory of a previous run")->required();

    auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
    validate->add_option("--config", config_path, "Scenario/measurement file (YAML)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : code(mixbench::ExitCode::config_error);
    }

    try {
        if (*run) {
            mixbench::RunConfig config = mixbench::load_config(config_path);
            if (!format.empty()) config.format = format == "json" ? mixbench::OutputFormat::json : mixbench::OutputFormat::csv;
            if (seed) config.scenario.noise_seed = *seed;
            const auto bundle = mixbench::run(config, out_dir);
            for (const auto& st : bundle.statuses) {
                if (st.ok) {
                    fmt::print("{:<10} ok\n", mixbench::to_string(st.measurement));
                } else {
                    fmt::print("{:<10} FAILED ({}): {}\n", mixbench::to_string(st.measurement), st.error_kind, st.message);
                }
            }
            fmt::print("summary written to {}/summary.txt\n", out_dir);
            return code(bundle.exit_code);
        }
        if (*report) {
            mixbench::regenerate_report(out_dir);
            std::FILE* f = std::fopen((out_dir + "/summary.txt").c_str(), "r");
            if (f) {
                char buf[4096];
                std::size_t n = 0;
                while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) std::fwrite(buf, 1, n, stdout);
                std::fclose(f);
            }
            return code(mixbench::ExitCode::success);
        }
        if (*validate) {
            const mixbench::RunConfig config = mixbench::load_config(config_path);
            fmt::print("{}: ok (parameter hash {})\n", config_path, mixbench::parameter_hash(config));
            fmt::print("{}", mixbench::serialize_config(config));
            return code(mixbench::ExitCode::success);
        }
    } catch (const mixbench::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return code(mixbench::ExitCode::io_error);
    }
    return code(mixbench::ExitCode::success);
}
