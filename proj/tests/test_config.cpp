#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "mixbench/config.hpp"
#include "mixbench/error.hpp"

using namespace mixbench;
using Catch::Approx;

namespace {

std::string error_text(std::string_view yaml) {
    try {
        (void)parse_config(yaml, "cfg.yaml");
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::config);
        return e.what();
    }
    FAIL("expected a config error");
    return {};
}

bool contains(const std::string& haystack, std::string_view needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("empty config is the calibrated default", "[config]") {
    const RunConfig empty = parse_config("");
    REQUIRE(empty == RunConfig{});
    REQUIRE(parse_config("{}") == RunConfig{});
    REQUIRE(empty.scenario.mixer.transconductor.gm == 0.034);
    REQUIRE(empty.scenario.mixer.load.rd == 220.0);
    REQUIRE(empty.measurements.size() == 8);
}

TEST_CASE("partial override keeps every other default", "[config]") {
    const RunConfig c = parse_config("scenario:\n  transconductor:\n    gm: 0.05\n");
    RunConfig expected;
    expected.scenario.mixer.transconductor.gm = 0.05;
    REQUIRE(c == expected);
}

TEST_CASE("full document parses", "[config]") {
    const RunConfig c = parse_config(R"(
scenario:
  switch: {mode: smooth, v_sw: 0.02}
  leakage: {kappa: 0.001}
  rf_tones:
    - {frequency: 1.9e9, power_dbm: -35}
  lo_tone: {frequency: 1.8e9, amplitude: 0.8}
  noise_seed: 9
  if_filter: none
measurements: [cg, power, cg]
sweep: {start: -30, stop: -5, step: 1}
harmonics: {order: 3}
transient: {decimation: 4}
output: {format: json}
)");
    REQUIRE(c.scenario.mixer.switching.mode == SwitchMode::smooth);
    REQUIRE(c.scenario.mixer.switching.v_sw == 0.02);
    REQUIRE(c.scenario.mixer.leakage.kappa == 0.001);
    REQUIRE(c.scenario.rf_tones.front().amplitude() == Approx(dbm_to_amplitude(-35.0)));
    REQUIRE(c.scenario.lo_tone.amplitude() == 0.8);
    REQUIRE(c.scenario.noise_seed == 9);
    REQUIRE_FALSE(c.scenario.if_filter.has_value());
    REQUIRE(c.measurements == std::vector<Measurement>{Measurement::cg, Measurement::power});
    REQUIRE(c.report.sweep == SweepSpec{-30.0, -5.0, 1.0});
    REQUIRE(c.harmonic_order == 3);
    REQUIRE(c.transient_decimation == 4);
    REQUIRE(c.format == OutputFormat::json);
}

TEST_CASE("serialization round-trips", "[config]") {
    RunConfig c;
    c.scenario.mixer.transconductor.a3 = -0.123456789012345;
    c.scenario.rf_tones = {ToneSpec::at_amplitude(1.9e9, 0.01, 0.25)};
    c.scenario.input_noise_density = 2e-9;
    c.report.nf.input_center = 1.9e9;
    c.measurements = {Measurement::cg, Measurement::nf};
    c.format = OutputFormat::json;
    const std::string yaml = serialize_config(c);
    REQUIRE(parse_config(yaml) == c);
    REQUIRE(serialize_config(parse_config(yaml)) == yaml);
    REQUIRE(parse_config(serialize_config(RunConfig{})) == RunConfig{});

    REQUIRE(parameter_hash(c) == parameter_hash(parse_config(yaml)));
    REQUIRE(parameter_hash(c) != parameter_hash(RunConfig{}));
    REQUIRE(parameter_hash(c).size() == 16);
}

TEST_CASE("config errors carry location and cause", "[config][errors]") {
    SECTION("off-grid tone names the tone") {
        const auto msg = error_text("scenario:\n  rf_tones:\n    - {frequency: 1.91e9, power_dbm: -30}\n");
        REQUIRE(contains(msg, "rf tone 1"));
        REQUIRE(contains(msg, "coherence"));
    }

    SECTION("unknown keys are rejected with a line number") {
        const auto msg = error_text("scenario:\n  load:\n    rd: 100\n    rl: 50\n");
        REQUIRE(contains(msg, "cfg.yaml:4"));
        REQUIRE(contains(msg, "rl"));
        REQUIRE(contains(error_text("colour: red\n"), "colour"));
    }

    SECTION("bad values") {
        REQUIRE(contains(error_text("scenario:\n  load:\n    rd: fast\n"), "cfg.yaml:3"));
        REQUIRE(contains(error_text("measurements: [cg, gain]\n"), "gain"));
        REQUIRE(contains(error_text("output: {format: xml}\n"), "xml"));
        REQUIRE(contains(error_text("scenario:\n  load:\n    rd: -1\n"), "rd"));
        REQUIRE(contains(error_text("transient: {decimation: 0}\n"), "decimation"));
        (void)error_text("measurements: []\n");
    }

    SECTION("malformed YAML") {
        REQUIRE(contains(error_text("scenario: [\n"), "cfg.yaml:"));
    }

    SECTION("harmonic order beyond nyquist") {
        REQUIRE(contains(error_text("harmonics: {order: 200}\n"), "harmonics"));
    }

    SECTION("missing file is an io error") {
        try {
            (void)load_config("/nonexistent/mixbench.yaml");
            FAIL("expected io error");
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::io);
        }
    }
}
