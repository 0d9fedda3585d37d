#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mixbench/config.hpp"
#include "mixbench/error.hpp"
#include "mixbench/runner.hpp"
#include "mixbench/spectrum.hpp"

using namespace mixbench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(std::string_view name) {
    const fs::path p = fs::path(MIXBENCH_TEST_TMP) / "runner" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, std::string_view text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(MIXBENCH_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig quick_config() {
    RunConfig c;
    c.measurements = {Measurement::cg, Measurement::isolation, Measurement::harmonics, Measurement::transient,
                      Measurement::power};
    return c;
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("run writes every artifact", "[runner]") {
    const fs::path out = scratch("artifacts");
    const auto bundle = run(quick_config(), out);
    REQUIRE(bundle.exit_code == ExitCode::success);
    for (const char* name : {"conversion_gain.csv", "isolation.csv", "harmonics.csv", "transient.csv", "power.csv",
                             "summary.json", "summary.txt", "metadata.json", "effective_config.yaml"}) {
        INFO(name);
        REQUIRE(fs::exists(out / name));
    }

    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    REQUIRE(summary["measurements"]["cg"]["status"] == "ok");
    REQUIRE(summary["measurements"]["power"]["value"].get<double>() == Catch::Approx(1.9998e-3));
    REQUIRE(parse_config(slurp(out / "effective_config.yaml")) == quick_config());
    REQUIRE(slurp(out / "summary.txt").find("cmos-65nm") != std::string::npos);
}

TEST_CASE("runs are byte-identical", "[runner][determinism]") {
    RunConfig c = quick_config();
    c.measurements.push_back(Measurement::p1db);
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    run(c, a);
    run(c, b);
    for (const auto& entry : fs::directory_iterator(a)) {
        INFO(entry.path().filename());
        REQUIRE(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
}

TEST_CASE("partial failure keeps going", "[runner]") {
    RunConfig c = quick_config();
    c.scenario.mixer.transconductor.a3 = 0.0;
    c.measurements = {Measurement::cg, Measurement::p1db, Measurement::power};
    const fs::path out = scratch("partial");
    const auto bundle = run(c, out);
    REQUIRE(bundle.exit_code == ExitCode::partial_failure);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    REQUIRE(summary["measurements"]["p1db"]["error"]["kind"] == "no_compression");
    REQUIRE(summary["measurements"]["cg"]["status"] == "ok");
    REQUIRE_FALSE(fs::exists(out / "p1db_sweep.csv"));
}

TEST_CASE("transient and harmonic outputs", "[runner][transient]") {
    const Scenario s;
    const auto r = simulate(s);

    SECTION("decimation 1 keeps every sample") {
        const fs::path out = scratch("transient");
        emit_transient(r, out / "t.csv", 1);
        REQUIRE(line_count(slurp(out / "t.csv")) == s.grid.num_samples() + 1);
        emit_transient(r, out / "t4.csv", 4);
        REQUIRE(line_count(slurp(out / "t4.csv")) == s.grid.num_samples() / 4 + 1);
        emit_transient(r, out / "t.json", 8, OutputFormat::json);
        REQUIRE(nlohmann::json::parse(slurp(out / "t.json")).size() == s.grid.num_samples() / 8);
        REQUIRE_THROWS_AS(emit_transient(r, out / "bad.csv", 0), Error);
    }

    SECTION("filtered output is a near-sinusoid at the IF") {
        const auto lines = harmonic_table(*r.v_out_filtered, s.if_frequency(), 5);
        REQUIRE(lines[1].amplitude / lines[0].amplitude < 0.01);
    }

    SECTION("unfiltered output carries RF-rate structure") {
        const auto spec = amplitude_spectrum(r.v_out);
        double total = 0.0, fast = 0.0;
        for (std::size_t k = 1; k < spec.size(); ++k) {
            const double p = spec[k] * spec[k];
            total += p;
            if (static_cast<double>(k) * s.grid.resolution() >= 1e9) fast += p;
        }
        REQUIRE(fast / total > 0.10);
    }
}

TEST_CASE("report regeneration", "[runner]") {
    const fs::path out = scratch("report");
    run(quick_config(), out);
    const std::string before = slurp(out / "summary.txt");
    fs::remove(out / "summary.txt");
    regenerate_report(out);
    REQUIRE(slurp(out / "summary.txt") == before);
    REQUIRE_THROWS_AS(regenerate_report(scratch("empty")), Error);
}

TEST_CASE("command-line exit codes", "[runner][cli]") {
    const fs::path dir = scratch("cli");
    write(dir / "ok.yaml", "measurements: [cg, power]\n");
    write(dir / "bad.yaml", "scenario:\n  load: {rd: -5}\n");
    write(dir / "linear.yaml", "scenario:\n  transconductor: {a3: 0}\nmeasurements: [cg, p1db]\n");

    REQUIRE(cli("run --config " + (dir / "ok.yaml").string() + " --out " + (dir / "ok").string()) == 0);
    REQUIRE(fs::exists(dir / "ok" / "summary.txt"));
    REQUIRE(cli("run --config " + (dir / "ok.yaml").string() + " --out " + (dir / "ok_json").string() +
                " --format json") == 0);
    REQUIRE(fs::exists(dir / "ok_json" / "conversion_gain.json"));
    REQUIRE(cli("run --config " + (dir / "linear.yaml").string() + " --out " + (dir / "lin").string()) == 1);
    REQUIRE(cli("run --config " + (dir / "bad.yaml").string() + " --out " + (dir / "bad").string()) == 2);
    REQUIRE(cli("validate --config " + (dir / "bad.yaml").string()) == 2);
    REQUIRE(cli("validate --config " + (dir / "ok.yaml").string()) == 0);
    REQUIRE(cli("run --config " + (dir / "missing.yaml").string() + " --out " + (dir / "x").string()) == 3);
    REQUIRE(cli("report --out " + (dir / "ok").string()) == 0);
    REQUIRE(cli("report --out " + (dir / "nowhere").string()) == 3);
    REQUIRE(cli("frobnicate") == 2);
}
