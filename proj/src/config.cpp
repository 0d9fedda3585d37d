#include "mixbench/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "mixbench/error.hpp"

namespace mixbench {
namespace {

constexpr std::array<std::pair<Measurement, std::string_view>, 8> kMeasurementNames{{
    {Measurement::cg, "cg"},
    {Measurement::p1db, "p1db"},
    {Measurement::iip3, "iip3"},
    {Measurement::isolation, "isolation"},
    {Measurement::nf, "nf"},
    {Measurement::harmonics, "harmonics"},
    {Measurement::transient, "transient"},
    {Measurement::power, "power"},
}};

// Reads one YAML document with field paths in every error message.
class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const YAML::Node& node, std::string_view path, std::string_view message) const {
        const auto mark = node.Mark();
        if (mark.line >= 0) {
            throw Error(ErrorKind::config, fmt::format("{}:{}: {}: {}", source_, mark.line + 1, path, message));
        }
        throw Error(ErrorKind::config, fmt::format("{}: {}: {}", source_, path, message));
    }

    void require_map(const YAML::Node& node, std::string_view path, std::initializer_list<std::string_view> keys) const {
        if (!node.IsMap()) fail(node, path, "expected a mapping");
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                fail(kv.first, path, fmt::format("unknown key '{}'", key));
            }
        }
    }

    double number(const YAML::Node& node, std::string_view path) const {
        if (!node.IsScalar()) fail(node, path, "expected a number");
        const auto text = node.as<std::string>();
        std::istringstream in(text);
        in.imbue(std::locale::classic());
        double v = 0.0;
        in >> v;
        if (in.fail() || !in.eof() || !std::isfinite(v)) fail(node, path, fmt::format("'{}' is not a finite number", text));
        return v;
    }

    std::uint64_t integer(const YAML::Node& node, std::string_view path) const {
        const double v = number(node, path);
        if (v < 0.0 || v != std::floor(v) || v > 9.0e15) fail(node, path, "expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }

    std::string text(const YAML::Node& node, std::string_view path) const {
        if (!node.IsScalar()) fail(node, path, "expected a string");
        return node.as<std::string>();
    }

    void set(const YAML::Node& parent, std::string_view key, std::string_view path, double& field) const {
        if (const auto n = parent[std::string(key)]) field = number(n, fmt::format("{}.{}", path, key));
    }

private:
    std::string source_;
};

void read_tone(const Reader& r, const YAML::Node& node, const std::string& path, ToneSpec& tone, bool need_level) {
    r.require_map(node, path, {"frequency", "power_dbm", "amplitude", "phase"});
    if (const auto n = node["frequency"]) {
        tone.frequency = r.number(n, path + ".frequency");
    } else if (need_level) {
        r.fail(node, path, "missing 'frequency'");
    }
    const auto p = node["power_dbm"];
    const auto a = node["amplitude"];
    if (p && a) r.fail(node, path, "give either 'power_dbm' or 'amplitude', not both");
    if (p) tone.level = Dbm{r.number(p, path + ".power_dbm")};
    if (a) tone.level = VoltsPeak{r.number(a, path + ".amplitude")};
    if (!p && !a && need_level) r.fail(node, path, "missing 'power_dbm' or 'amplitude'");
    r.set(node, "phase", path, tone.phase);
}

void read_scenario(const Reader& r, const YAML::Node& node, Scenario& s) {
    r.require_map(node, "scenario",
                  {"transconductor", "switch", "load", "bias", "leakage", "grid", "rf_tones", "lo_tone", "noise_seed",
                   "input_noise_density", "if_filter"});

    if (const auto n = node["transconductor"]) {
        r.require_map(n, "scenario.transconductor", {"gm", "v_gs1", "a2", "a3"});
        auto& t = s.mixer.transconductor;
        r.set(n, "gm", "scenario.transconductor", t.gm);
        r.set(n, "v_gs1", "scenario.transconductor", t.v_gs1);
        r.set(n, "a2", "scenario.transconductor", t.a2);
        r.set(n, "a3", "scenario.transconductor", t.a3);
    }
    if (const auto n = node["switch"]) {
        r.require_map(n, "scenario.switch", {"mode", "v_sw"});
        if (const auto m = n["mode"]) {
            const auto mode = r.text(m, "scenario.switch.mode");
            if (mode == "ideal_sign") {
                s.mixer.switching.mode = SwitchMode::ideal_sign;
            } else if (mode == "smooth") {
                s.mixer.switching.mode = SwitchMode::smooth;
            } else {
                r.fail(m, "scenario.switch.mode", fmt::format("unknown mode '{}' (ideal_sign|smooth)", mode));
            }
        }
        r.set(n, "v_sw", "scenario.switch", s.mixer.switching.v_sw);
    }
    if (const auto n = node["load"]) {
        r.require_map(n, "scenario.load", {"rd"});
        r.set(n, "rd", "scenario.load", s.mixer.load.rd);
    }
    if (const auto n = node["bias"]) {
        r.require_map(n, "scenario.bias", {"vdd", "i_bias"});
        r.set(n, "vdd", "scenario.bias", s.mixer.bias.vdd);
        r.set(n, "i_bias", "scenario.bias", s.mixer.bias.i_bias);
    }
    if (const auto n = node["leakage"]) {
        r.require_map(n, "scenario.leakage", {"kappa"});
        r.set(n, "kappa", "scenario.leakage", s.mixer.leakage.kappa);
    }
    if (const auto n = node["grid"]) {
        r.require_map(n, "scenario.grid", {"sample_rate", "num_samples"});
        double fs = s.grid.sample_rate();
        std::size_t count = s.grid.num_samples();
        r.set(n, "sample_rate", "scenario.grid", fs);
        if (const auto c = n["num_samples"]) count = r.integer(c, "scenario.grid.num_samples");
        try {
            s.grid = SimGrid(fs, count);
        } catch (const Error& e) {
            r.fail(n, "scenario.grid", e.what());
        }
    }
    if (const auto n = node["rf_tones"]) {
        if (!n.IsSequence()) r.fail(n, "scenario.rf_tones", "expected a list of tones");
        s.rf_tones.clear();
        for (std::size_t i = 0; i < n.size(); ++i) {
            ToneSpec tone;
            read_tone(r, n[i], fmt::format("scenario.rf_tones[{}]", i), tone, true);
            s.rf_tones.push_back(tone);
        }
    }
    if (const auto n = node["lo_tone"]) read_tone(r, n, "scenario.lo_tone", s.lo_tone, false);
    if (const auto n = node["noise_seed"]) s.noise_seed = r.integer(n, "scenario.noise_seed");
    r.set(node, "input_noise_density", "scenario", s.input_noise_density);
    if (const auto n = node["if_filter"]) {
        if (n.IsNull() || (n.IsScalar() && n.as<std::string>() == "none")) {
            s.if_filter.reset();
        } else {
            r.require_map(n, "scenario.if_filter", {"kind", "cutoff"});
            FilterSpec f = s.if_filter.value_or(FilterSpec{});
            if (const auto k = n["kind"]) {
                if (r.text(k, "scenario.if_filter.kind") != "lowpass2") {
                    r.fail(k, "scenario.if_filter.kind", "only 'lowpass2' is supported");
                }
            }
            r.set(n, "cutoff", "scenario.if_filter", f.cutoff);
            s.if_filter = f;
        }
    }
}

void read_document(const Reader& r, const YAML::Node& root, RunConfig& c) {
    if (!root || root.IsNull()) return;
    r.require_map(root, "<root>",
                  {"scenario", "measurements", "sweep", "two_tone", "noise_figure", "harmonics", "transient", "output"});

    if (const auto n = root["scenario"]) read_scenario(r, n, c.scenario);

    if (const auto n = root["measurements"]) {
        c.measurements.clear();
        if (n.IsScalar() && n.as<std::string>() == "all") {
            for (const auto& [m, name] : kMeasurementNames) c.measurements.push_back(m);
        } else {
            if (!n.IsSequence()) r.fail(n, "measurements", "expected a list or 'all'");
            for (std::size_t i = 0; i < n.size(); ++i) {
                const auto name = r.text(n[i], "measurements");
                const auto m = parse_measurement(name);
                if (!m) r.fail(n[i], "measurements", fmt::format("unknown measurement '{}'", name));
                c.measurements.push_back(*m);
            }
        }
        std::ranges::sort(c.measurements);
        const auto dup = std::ranges::unique(c.measurements);
        c.measurements.erase(dup.begin(), dup.end());
    }
    if (const auto n = root["sweep"]) {
        r.require_map(n, "sweep", {"start", "stop", "step"});
        r.set(n, "start", "sweep", c.report.sweep.start);
        r.set(n, "stop", "sweep", c.report.sweep.stop);
        r.set(n, "step", "sweep", c.report.sweep.step);
    }
    if (const auto n = root["two_tone"]) {
        r.require_map(n, "two_tone", {"spacing", "power_dbm"});
        r.set(n, "spacing", "two_tone", c.report.two_tone_spacing);
        r.set(n, "power_dbm", "two_tone", c.report.two_tone_power);
    }
    if (const auto n = root["noise_figure"]) {
        r.require_map(n, "noise_figure",
                      {"sample_rate", "num_samples", "segments", "band_width", "input_density", "input_center",
                       "output_center"});
        double fs = c.report.nf_grid.sample_rate();
        std::size_t count = c.report.nf_grid.num_samples();
        r.set(n, "sample_rate", "noise_figure", fs);
        if (const auto v = n["num_samples"]) count = r.integer(v, "noise_figure.num_samples");
        try {
            c.report.nf_grid = SimGrid(fs, count);
        } catch (const Error& e) {
            r.fail(n, "noise_figure", e.what());
        }
        if (const auto v = n["segments"]) c.report.nf.segments = r.integer(v, "noise_figure.segments");
        r.set(n, "band_width", "noise_figure", c.report.nf.band_width);
        r.set(n, "input_density", "noise_figure", c.report.nf_input_density);
        if (const auto v = n["input_center"]) c.report.nf.input_center = r.number(v, "noise_figure.input_center");
        if (const auto v = n["output_center"]) c.report.nf.output_center = r.number(v, "noise_figure.output_center");
    }
    if (const auto n = root["harmonics"]) {
        r.require_map(n, "harmonics", {"order"});
        if (const auto v = n["order"]) c.harmonic_order = static_cast<int>(r.integer(v, "harmonics.order"));
    }
    if (const auto n = root["transient"]) {
        r.require_map(n, "transient", {"decimation"});
        if (const auto v = n["decimation"]) c.transient_decimation = r.integer(v, "transient.decimation");
    }
    if (const auto n = root["output"]) {
        r.require_map(n, "output", {"format"});
        if (const auto v = n["format"]) {
            const auto f = r.text(v, "output.format");
            if (f == "csv") {
                c.format = OutputFormat::csv;
            } else if (f == "json") {
                c.format = OutputFormat::json;
            } else {
                r.fail(v, "output.format", fmt::format("unknown format '{}' (csv|json)", f));
            }
        }
    }
}

std::string num(double v) { return fmt::format("{}", v); }

void emit_tone(YAML::Emitter& out, const ToneSpec& t) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "frequency" << YAML::Value << num(t.frequency);
    if (const auto* p = std::get_if<Dbm>(&t.level)) {
        out << YAML::Key << "power_dbm" << YAML::Value << num(p->value);
    } else {
        out << YAML::Key << "amplitude" << YAML::Value << num(std::get<VoltsPeak>(t.level).value);
    }
    out << YAML::Key << "phase" << YAML::Value << num(t.phase);
    out << YAML::EndMap;
}

}  // namespace

std::string_view to_string(Measurement m) noexcept {
    for (const auto& [k, name] : kMeasurementNames) {
        if (k == m) return name;
    }
    return "unknown";
}

std::optional<Measurement> parse_measurement(std::string_view name) noexcept {
    for (const auto& [k, n] : kMeasurementNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

bool RunConfig::requests(Measurement m) const {
    return std::ranges::find(measurements, m) != measurements.end();
}

void RunConfig::validate() const {
    auto wrap = [](std::string_view what, auto&& check) {
        try {
            check();
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::config) throw;
            throw Error(ErrorKind::config, fmt::format("{}: {} ({})", what, e.what(), to_string(e.kind())));
        }
    };
    if (measurements.empty()) throw Error(ErrorKind::config, "at least one measurement must be requested");
    wrap("scenario", [&] { scenario.validate(); });
    if (requests(Measurement::p1db)) wrap("sweep", [&] { (void)report.sweep.points(); });
    if (requests(Measurement::iip3)) {
        wrap("two_tone", [&] { make_two_tone(scenario, report.two_tone_spacing, report.two_tone_power).validate(); });
    }
    if (requests(Measurement::nf)) {
        wrap("noise_figure", [&] {
            make_noise_scenario(scenario, report).validate();
            if (report.nf.segments < 4 || report.nf_grid.num_samples() % report.nf.segments != 0) {
                throw Error(ErrorKind::invalid_argument,
                            fmt::format("{} segments must be >= 4 and divide {} samples", report.nf.segments,
                                        report.nf_grid.num_samples()));
            }
        });
    }
    if (requests(Measurement::harmonics)) {
        wrap("harmonics", [&] {
            if (harmonic_order < 1) throw Error(ErrorKind::invalid_argument, "order must be >= 1");
            const double top = harmonic_order * scenario.rf_tones.front().frequency;
            if (top >= scenario.grid.nyquist()) {
                throw Error(ErrorKind::aliasing,
                            fmt::format("harmonic {} of the RF tone ({} Hz) reaches nyquist", harmonic_order, top));
            }
        });
    }
    if (requests(Measurement::transient) && transient_decimation < 1) {
        throw Error(ErrorKind::config, "transient.decimation must be >= 1");
    }
}

RunConfig parse_config(std::string_view text, std::string_view source) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorKind::config, fmt::format("{}:{}: parse error: {}", source, e.mark.line + 1, e.msg));
    }
    RunConfig config;
    const Reader reader(source);
    try {
        read_document(reader, root, config);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::config, fmt::format("{}:{}: {}", source, e.mark.line + 1, e.msg));
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, fmt::format("cannot open config '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

std::string serialize_config(const RunConfig& c) {
    const Scenario& s = c.scenario;
    YAML::Emitter out;
    out << YAML::BeginMap;

    out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
    const auto& t = s.mixer.transconductor;
    out << YAML::Key << "transconductor" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "gm"
        << YAML::Value << num(t.gm) << YAML::Key << "v_gs1" << YAML::Value << num(t.v_gs1) << YAML::Key << "a2"
        << YAML::Value << num(t.a2) << YAML::Key << "a3" << YAML::Value << num(t.a3) << YAML::EndMap;
    out << YAML::Key << "switch" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "mode" << YAML::Value
        << (s.mixer.switching.mode == SwitchMode::ideal_sign ? "ideal_sign" : "smooth") << YAML::Key << "v_sw"
        << YAML::Value << num(s.mixer.switching.v_sw) << YAML::EndMap;
    out << YAML::Key << "load" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "rd" << YAML::Value
        << num(s.mixer.load.rd) << YAML::EndMap;
    out << YAML::Key << "bias" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "vdd" << YAML::Value
        << num(s.mixer.bias.vdd) << YAML::Key << "i_bias" << YAML::Value << num(s.mixer.bias.i_bias)
        << YAML::EndMap;
    out << YAML::Key << "leakage" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "kappa"
        << YAML::Value << num(s.mixer.leakage.kappa) << YAML::EndMap;
    out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "sample_rate"
        << YAML::Value << num(s.grid.sample_rate()) << YAML::Key << "num_samples" << YAML::Value
        << std::to_string(s.grid.num_samples()) << YAML::EndMap;
    out << YAML::Key << "rf_tones" << YAML::Value << YAML::BeginSeq;
    for (const ToneSpec& tone : s.rf_tones) emit_tone(out, tone);
    out << YAML::EndSeq;
    out << YAML::Key << "lo_tone" << YAML::Value;
    emit_tone(out, s.lo_tone);
    out << YAML::Key << "noise_seed" << YAML::Value << std::to_string(s.noise_seed);
    out << YAML::Key << "input_noise_density" << YAML::Value << num(s.input_noise_density);
    out << YAML::Key << "if_filter" << YAML::Value;
    if (s.if_filter) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "lowpass2" << YAML::Key
            << "cutoff" << YAML::Value << num(s.if_filter->cutoff) << YAML::EndMap;
    } else {
        out << "none";
    }
    out << YAML::EndMap;

    out << YAML::Key << "measurements" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (Measurement m : c.measurements) out << std::string(to_string(m));
    out << YAML::EndSeq;

    const auto& rep = c.report;
    out << YAML::Key << "sweep" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "start" << YAML::Value
        << num(rep.sweep.start) << YAML::Key << "stop" << YAML::Value << num(rep.sweep.stop) << YAML::Key << "step"
        << YAML::Value << num(rep.sweep.step) << YAML::EndMap;
    out << YAML::Key << "two_tone" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "spacing"
        << YAML::Value << num(rep.two_tone_spacing) << YAML::Key << "power_dbm" << YAML::Value
        << num(rep.two_tone_power) << YAML::EndMap;
    out << YAML::Key << "noise_figure" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "sample_rate" << YAML::Value << num(rep.nf_grid.sample_rate());
    out << YAML::Key << "num_samples" << YAML::Value << std::to_string(rep.nf_grid.num_samples());
    out << YAML::Key << "segments" << YAML::Value << std::to_string(rep.nf.segments);
    out << YAML::Key << "band_width" << YAML::Value << num(rep.nf.band_width);
    out << YAML::Key << "input_density" << YAML::Value << num(rep.nf_input_density);
    if (rep.nf.input_center) out << YAML::Key << "input_center" << YAML::Value << num(*rep.nf.input_center);
    if (rep.nf.output_center) out << YAML::Key << "output_center" << YAML::Value << num(*rep.nf.output_center);
    out << YAML::EndMap;
    out << YAML::Key << "harmonics" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "order"
        << YAML::Value << std::to_string(c.harmonic_order) << YAML::EndMap;
    out << YAML::Key << "transient" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "decimation"
        << YAML::Value << std::to_string(c.transient_decimation) << YAML::EndMap;
    out << YAML::Key << "output" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "format"
        << YAML::Value << std::string(to_string(c.format)) << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string parameter_hash(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

}  // namespace mixbench
