#include "mixbench/runner.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <variant>

#include "mixbench/error.hpp"
#include "mixbench/metrics.hpp"
#include "mixbench/spectrum.hpp"

#ifndef MIXBENCH_VERSION
#define MIXBENCH_VERSION "0.0.0"
#endif

namespace mixbench {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.12g}", v);
}

ordered_json json_number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, fmt::format("cannot write '{}'", path.string()));
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io, fmt::format("write to '{}' failed", path.string()));
}

std::string render_table(const Table& t, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out = fmt::format("{}\n", fmt::join(t.header, ","));
        for (const auto& row : t.rows) {
            std::vector<std::string> cells;
            for (const Cell& c : row) {
                cells.push_back(std::holds_alternative<double>(c) ? csv_number(std::get<double>(c))
                                                                  : std::get<std::string>(c));
            }
            out += fmt::format("{}\n", fmt::join(cells, ","));
        }
        return out;
    }
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            obj[t.header[i]] = std::holds_alternative<double>(c) ? json_number(std::get<double>(c))
                                                                 : ordered_json(std::get<std::string>(c));
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

// Writes `stem`.<ext> and returns the file name.
std::string write_table(const fs::path& dir, std::string_view stem, const Table& t, OutputFormat format) {
    const std::string name = fmt::format("{}.{}", stem, to_string(format));
    write_file(dir / name, render_table(t, format));
    return name;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json reference_row_json(const ReferenceRow& r) {
    ordered_json j = ordered_json::object();
    j["reference"] = std::string(r.reference);
    j["technology_um"] = r.technology_um;
    j["rf_ghz"] = r.rf_ghz;
    j["conversion_gain_db"] = optional_number(r.conversion_gain_db);
    j["noise_figure_db"] = optional_number(r.noise_figure_db);
    j["p1db_dbm"] = optional_number(r.p1db_dbm);
    j["iip3_dbm"] = optional_number(r.iip3_dbm);
    j["power_mw"] = optional_number(r.power_mw);
    return j;
}

struct Entry {
    MeasurementStatus status;
    ordered_json json;
};

Entry from_measured(Measurement m, const Measured& v, std::string_view unit, std::optional<double> reference) {
    Entry e{{m, v.ok(), {}, {}, {}}, ordered_json::object()};
    if (v.ok()) {
        e.json["status"] = "ok";
        e.json["value"] = json_number(*v.value);
        e.json["unit"] = std::string(unit);
    } else {
        e.status.error_kind = std::string(to_string(*v.error_kind));
        e.status.message = v.error;
        e.json["status"] = "error";
        e.json["error"] = {{"kind", e.status.error_kind}, {"message", v.error}};
    }
    e.json["reference"] = optional_number(reference);
    if (v.warning) e.json["warning"] = *v.warning;
    return e;
}

Entry from_exception(Measurement m, const std::exception& ex) {
    const auto* err = dynamic_cast<const Error*>(&ex);
    const std::string kind(err ? to_string(err->kind()) : "invalid_argument");
    Entry e{{m, false, kind, ex.what(), {}}, ordered_json::object()};
    e.json["status"] = "error";
    e.json["error"] = {{"kind", kind}, {"message", ex.what()}};
    return e;
}

void attach_files(Entry& e, std::vector<std::string> files) {
    e.status.files = files;
    e.json["files"] = files;
}

Table harmonics_table(const RunConfig& c, const TransientResult& r) {
    const Scenario& s = c.scenario;
    Table t{{"signal", "order", "frequency_hz", "amplitude", "power_dbm"}, {}};
    const auto add = [&](std::string_view name, const SampledSignal& sig, double f0) {
        const auto lines = harmonic_table(sig, f0, c.harmonic_order);
        for (std::size_t k = 0; k < lines.size(); ++k) {
            t.rows.push_back({std::string(name), static_cast<double>(k + 1), lines[k].frequency, lines[k].amplitude,
                              lines[k].power});
        }
    };
    add("v_rf", r.v_rf_port, s.rf_tones.front().frequency);
    add("v_out", r.v_out, s.if_frequency());
    if (r.v_out_filtered) add("v_out_filtered", *r.v_out_filtered, s.if_frequency());
    return t;
}

Table transient_table(const TransientResult& r, std::size_t decimation) {
    if (decimation < 1) throw Error(ErrorKind::invalid_argument, "decimation must be >= 1");
    Table t{{"time_s", "v_out"}, {}};
    if (r.v_out_filtered) t.header.push_back("v_out_filtered");
    const SimGrid& grid = r.v_out.grid();
    for (std::size_t n = 0; n < grid.num_samples(); n += decimation) {
        std::vector<Cell> row{grid.time_of(n), r.v_out[n]};
        if (r.v_out_filtered) row.emplace_back((*r.v_out_filtered)[n]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string fmt_value(const ordered_json& v, std::string_view spec) {
    if (!v.is_number()) return "n/a";
    return fmt::format(fmt::runtime(spec), v.get<double>());
}

std::string render_summary_text(const ordered_json& summary) {
    std::string out;
    out += fmt::format("mixbench {} summary\n", summary.value("version", ""));
    out += fmt::format("parameter hash: {}\n", summary.value("parameter_hash", ""));
    out += fmt::format("analytic conversion gain: {} dB\n\n",
                       fmt_value(summary["analytic_conversion_gain_db"], "{:.3f}"));
    out += fmt::format("{:<12} {:>14} {:>8} {:>14}  {}\n", "measurement", "value", "unit", "reference", "notes");
    for (const auto& [name, e] : summary["measurements"].items()) {
        std::string value = "-";
        std::string unit = e.value("unit", "");
        std::string note;
        if (e.value("status", "") == "ok") {
            if (e.contains("value")) value = fmt_value(e["value"], "{:.6g}");
            if (e.contains("files")) note = fmt::format("{}", fmt::join(e["files"].get<std::vector<std::string>>(), " "));
            if (e.contains("warning")) note += " warning: " + e["warning"].get<std::string>();
        } else {
            value = "ERROR";
            note = fmt::format("{}: {}", e["error"].value("kind", ""), e["error"].value("message", ""));
        }
        const std::string ref = e.contains("reference") ? fmt_value(e["reference"], "{:.3f}") : "";
        out += fmt::format("{:<12} {:>14} {:>8} {:>14}  {}\n", name, value, unit, ref, note);
    }
    out += "\nreference table (CG dB, NF dB, P-1 dBm, IIP3 dBm, Pcons mW):\n";
    for (const auto& row : summary["reference_table"]) {
        out += fmt::format("  {:<13} {:>6} um {:>5} GHz  {:>7} {:>7} {:>7} {:>7} {:>6}\n",
                           row.value("reference", ""), fmt_value(row["technology_um"], "{:g}"),
                           fmt_value(row["rf_ghz"], "{:g}"), fmt_value(row["conversion_gain_db"], "{:g}"),
                           fmt_value(row["noise_figure_db"], "{:g}"), fmt_value(row["p1db_dbm"], "{:g}"),
                           fmt_value(row["iip3_dbm"], "{:g}"), fmt_value(row["power_mw"], "{:g}"));
    }
    return out;
}

}  // namespace

std::string_view tool_version() noexcept { return MIXBENCH_VERSION; }

void emit_transient(const TransientResult& result, const fs::path& path, std::size_t decimation, OutputFormat format) {
    write_file(path, render_table(transient_table(result, decimation), format));
}

OutputBundle run(const RunConfig& config, const fs::path& out_dir) {
    config.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::io, fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

    const Scenario& s = config.scenario;
    const OutputFormat format = config.format;
    const ReferenceRow& ref = reference_circuit();

    ReportConfig rc = config.report;
    rc.conversion_gain = config.requests(Measurement::cg);
    rc.p1db = config.requests(Measurement::p1db);
    rc.iip3 = config.requests(Measurement::iip3);
    rc.isolation = config.requests(Measurement::isolation);
    rc.noise_figure = config.requests(Measurement::nf);
    rc.power = config.requests(Measurement::power);
    const MetricsReport report = build_report(s, rc);

    std::vector<Entry> entries;
    for (Measurement m : config.measurements) {
        switch (m) {
            case Measurement::cg: {
                Entry e = from_measured(m, report.conversion_gain, "dB", ref.conversion_gain_db);
                e.json["analytic"] = report.analytic_gain;
                if (e.status.ok) {
                    Table t{{"measured_db", "analytic_db", "reference_db"},
                            {{*report.conversion_gain.value, report.analytic_gain, *ref.conversion_gain_db}}};
                    attach_files(e, {write_table(out_dir, "conversion_gain", t, format)});
                }
                entries.push_back(std::move(e));
                break;
            }
            case Measurement::p1db: {
                Entry e = from_measured(m, report.p1db, "dBm", ref.p1db_dbm);
                if (report.p1db_detail) {
                    e.json["small_signal_gain_db"] = report.p1db_detail->small_signal_gain;
                    e.json["closed_form_dbm"] = nullptr;
                    try {
                        e.json["closed_form_dbm"] = amplitude_to_dbm(a1db_closed_form(s.mixer.transconductor));
                    } catch (const Error&) {
                    }
                    Table t{{"input_dbm", "output_dbm", "gain_db"}, {}};
                    for (const auto& p : report.p1db_detail->sweep) {
                        t.rows.push_back({p.input_power, p.output_power, p.gain});
                    }
                    attach_files(e, {write_table(out_dir, "p1db_sweep", t, format)});
                }
                entries.push_back(std::move(e));
                break;
            }
            case Measurement::iip3: {
                Entry e = from_measured(m, report.iip3, "dBm", ref.iip3_dbm);
                if (report.iip3_detail) {
                    const TwoToneResult& r = *report.iip3_detail;
                    e.json["delta_db"] = r.delta;
                    Table t{{"per_tone_dbm", "p_fund_dbm", "p_im3_lower_dbm", "p_im3_upper_dbm", "delta_db", "iip3_dbm"},
                            {{r.per_tone_power, r.p_fund, r.p_im3_lower, r.p_im3_upper, r.delta, r.iip3}}};
                    attach_files(e, {write_table(out_dir, "iip3", t, format)});
                }
                entries.push_back(std::move(e));
                break;
            }
            case Measurement::isolation: {
                Entry e = from_measured(m, report.isolation, "dB", -37.704);
                if (e.status.ok) {
                    Table t{{"isolation_db", "kappa"}, {{*report.isolation.value, s.mixer.leakage.kappa}}};
                    attach_files(e, {write_table(out_dir, "isolation", t, format)});
                }
                entries.push_back(std::move(e));
                break;
            }
            case Measurement::nf: {
                Entry e = from_measured(m, report.noise_figure, "dB", ref.noise_figure_db);
                if (report.nf_detail) {
                    const NoiseFigureResult& r = *report.nf_detail;
                    Table t{{"n_rf_v_per_rthz", "n_if_v_per_rthz", "gain_db", "nf_db", "relative_spread"},
                            {{r.n_rf, r.n_if, r.gain, r.noise_figure, r.relative_spread}}};
                    attach_files(e, {write_table(out_dir, "noise_figure", t, format)});
                }
                entries.push_back(std::move(e));
                break;
            }
            case Measurement::power: {
                Entry e = from_measured(m, report.power_consumption, "W",
                                        ref.power_mw ? std::optional<double>(*ref.power_mw * 1e-3) : std::nullopt);
                if (e.status.ok) {
                    Table t{{"vdd_v", "i_bias_a", "power_w"},
                            {{s.mixer.bias.vdd, s.mixer.bias.i_bias, *report.power_consumption.value}}};
                    attach_files(e, {write_table(out_dir, "power", t, format)});
                }
                entries.push_back(std::move(e));
                break;
            }
            case Measurement::harmonics:
            case Measurement::transient: {
                try {
                    Scenario single = s;
                    single.rf_tones.resize(1);
                    const TransientResult r = simulate(single);
                    Entry e{{m, true, {}, {}, {}}, ordered_json::object()};
                    e.json["status"] = "ok";
                    if (m == Measurement::harmonics) {
                        attach_files(e, {write_table(out_dir, "harmonics", harmonics_table(config, r), format)});
                    } else {
                        const std::string name = fmt::format("transient.{}", to_string(format));
                        emit_transient(r, out_dir / name, config.transient_decimation, format);
                        attach_files(e, {name});
                    }
                    entries.push_back(std::move(e));
                } catch (const Error& ex) {
                    if (ex.kind() == ErrorKind::io) throw;
                    entries.push_back(from_exception(m, ex));
                }
                break;
            }
        }
    }

    OutputBundle bundle;
    bundle.directory = out_dir;
    ordered_json summary = ordered_json::object();
    summary["tool"] = "mixbench";
    summary["version"] = std::string(tool_version());
    summary["parameter_hash"] = parameter_hash(config);
    summary["analytic_conversion_gain_db"] = report.analytic_gain;
    summary["measurements"] = ordered_json::object();
    for (Entry& e : entries) {
        summary["measurements"][std::string(to_string(e.status.measurement))] = e.json;
        if (!e.status.ok) bundle.exit_code = ExitCode::partial_failure;
        bundle.statuses.push_back(std::move(e.status));
    }
    summary["reference_table"] = ordered_json::array();
    for (const ReferenceRow& row : reference_table()) summary["reference_table"].push_back(reference_row_json(row));

    ordered_json meta = ordered_json::object();
    meta["tool"] = "mixbench";
    meta["version"] = std::string(tool_version());
    meta["parameter_hash"] = parameter_hash(config);
    meta["noise_seed"] = s.noise_seed;
    meta["grid"] = {{"sample_rate_hz", s.grid.sample_rate()},
                    {"num_samples", s.grid.num_samples()},
                    {"resolution_hz", s.grid.resolution()}};
    meta["noise_grid"] = {{"sample_rate_hz", config.report.nf_grid.sample_rate()},
                          {"num_samples", config.report.nf_grid.num_samples()},
                          {"resolution_hz", config.report.nf_grid.resolution()}};
    meta["frequency_plan_hz"] = {{"rf", s.rf_tones.front().frequency},
                                 {"lo", s.lo_tone.frequency},
                                 {"if", s.if_frequency()}};
    meta["format"] = std::string(to_string(format));
    meta["effective_config"] = "effective_config.yaml";

    write_file(out_dir / "effective_config.yaml", serialize_config(config));
    write_file(out_dir / "metadata.json", meta.dump(2) + "\n");
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
    write_file(out_dir / "summary.txt", render_summary_text(summary));
    return bundle;
}

void regenerate_report(const fs::path& out_dir) {
    const fs::path path = out_dir / "summary.json";
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, fmt::format("cannot read '{}'", path.string()));
    ordered_json summary;
    try {
        summary = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::io, fmt::format("'{}' is not a valid summary: {}", path.string(), e.what()));
    }
    write_file(out_dir / "summary.txt", render_summary_text(summary));
}

}  // namespace mixbench
