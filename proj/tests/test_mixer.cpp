#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "mixbench/error.hpp"
#include "mixbench/mixer.hpp"
#include "mixbench/spectrum.hpp"
#include "oracles.hpp"

using namespace mixbench;
using Catch::Approx;

namespace {

Scenario linear_scenario() {
    Scenario s;
    s.mixer.transconductor.a3 = 0.0;
    s.mixer.leakage.kappa = 0.0;
    s.if_filter.reset();
    return s;
}

double if_gain_db(const Scenario& s) {
    const auto r = simulate(s);
    return 20.0 * std::log10(bin_amplitude(r.v_out, s.if_frequency()).amplitude / s.rf_tones.front().amplitude());
}

}  // namespace

TEST_CASE("analytic conversion gain", "[mixer][gain]") {
    const MixerParams m{};
    REQUIRE(analytic_conversion_gain(m) == Approx(13.555634).margin(1e-5));
    REQUIRE(analytic_conversion_gain(m) == Approx(13.55).margin(0.05));

    SECTION("time-domain gain of a linear device matches") {
        REQUIRE(if_gain_db(linear_scenario()) == Approx(13.555634).margin(0.01));
    }

    SECTION("doubling gm adds 6.02 dB") {
        auto s = linear_scenario();
        const double base = if_gain_db(s);
        s.mixer.transconductor.gm *= 2.0;
        REQUIRE(if_gain_db(s) - base == Approx(6.0206).margin(0.01));
    }

    SECTION("rd = pi/(2 gm) is unity gain") {
        auto s = linear_scenario();
        s.mixer.load.rd = std::numbers::pi / (2.0 * s.mixer.transconductor.gm);
        REQUIRE(s.mixer.load.rd == Approx(46.1999).margin(1e-3));
        REQUIRE(analytic_conversion_gain(s.mixer) == Approx(0.0).margin(1e-12));
        REQUIRE(if_gain_db(s) == Approx(0.0).margin(0.01));

        s.mixer.transconductor.gm = 0.01;
        s.mixer.transconductor.v_gs1 = 0.0;
        s.mixer.load.rd = 157.08;
        REQUIRE(analytic_conversion_gain(s.mixer) == Approx(0.0).margin(1e-3));
        REQUIRE(if_gain_db(s) == Approx(0.0).margin(0.01));
    }
}

TEST_CASE("switching products", "[mixer][spectrum]") {
    SECTION("sum and difference rays carry equal amplitude") {
        const auto s = linear_scenario();
        const auto r = simulate(s);
        const double diff = bin_amplitude(r.v_out, 0.1e9).amplitude;
        const double sum = bin_amplitude(r.v_out, 3.7e9).amplitude;
        REQUIRE(sum / diff == Approx(1.0).epsilon(0.01));
    }

    SECTION("no RF drive leaves the bias current chopped at the LO") {
        auto s = linear_scenario();
        s.rf_tones.front().level = VoltsPeak{0.0};
        const auto r = simulate(s);
        const auto& p = s.mixer.transconductor;
        const double expected = 4.0 / std::numbers::pi * p.gm * p.v_gs1 * s.mixer.load.rd;
        REQUIRE(bin_amplitude(r.v_out, 1.8e9).amplitude == Approx(expected).epsilon(0.01));
        REQUIRE(bin_amplitude(r.v_out, 0.1e9).amplitude < 1e-12);
    }

    SECTION("only odd-LO products appear") {
        const auto s = linear_scenario();
        const auto r = simulate(s);
        const auto spec = amplitude_spectrum(r.v_out);
        const auto allowed = oracle::allowed_mixer_bins(s.grid.num_samples(), s.grid.bin_of(1.8e9), s.grid.bin_of(1.9e9));
        double peak = 0.0, stray = 0.0;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            peak = std::max(peak, spec[k]);
            if (!allowed[k]) stray = std::max(stray, spec[k]);
        }
        REQUIRE(stray < 1e-9 * peak);
    }
}

TEST_CASE("IF filter", "[mixer][filter]") {
    const SimGrid g(2.048e9, 2048);  // 1 MHz bins
    const FilterSpec f{FilterKind::lowpass2, 200e6};

    SECTION("passband, corner and stopband magnitudes") {
        for (double freq : {2e6, 200e6, 600e6}) {
            const auto out = apply_if_filter(f, synthesize_tone(g, ToneSpec::at_amplitude(freq, 1.0)));
            REQUIRE(bin_amplitude(out, freq).amplitude == Approx(oracle::butterworth2_magnitude(freq, 200e6)).epsilon(1e-9));
        }
        const auto low = apply_if_filter(f, synthesize_tone(g, ToneSpec::at_amplitude(2e6, 1.0)));
        REQUIRE(bin_amplitude(low, 2e6).amplitude == Approx(1.0).margin(1e-4));
        const auto corner = apply_if_filter(f, synthesize_tone(g, ToneSpec::at_amplitude(200e6, 1.0)));
        REQUIRE(bin_amplitude(corner, 200e6).amplitude == Approx(0.7071).margin(1e-4));
        REQUIRE(bin_amplitude(corner, 200e6).phase == Approx(-std::numbers::pi / 2).margin(1e-9));
    }

    SECTION("phase follows the second-order response") {
        for (double freq : {50e6, 150e6, 400e6}) {
            const auto out = apply_if_filter(f, synthesize_tone(g, ToneSpec::at_amplitude(freq, 1.0)));
            REQUIRE(bin_amplitude(out, freq).phase == Approx(oracle::butterworth2_phase(freq, 200e6)).margin(1e-9));
        }
    }

    SECTION("cutoff must lie below nyquist") {
        try {
            (void)apply_if_filter({FilterKind::lowpass2, 2e9}, SampledSignal::zeros(g));
            FAIL("expected aliasing error");
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::aliasing);
        }
    }

    SECTION("default scenario filters the IF output") {
        const Scenario s;
        const auto r = simulate(s);
        REQUIRE(r.v_out_filtered.has_value());
        const double ratio = bin_amplitude(*r.v_out_filtered, 0.1e9).amplitude / bin_amplitude(r.v_out, 0.1e9).amplitude;
        REQUIRE(ratio == Approx(oracle::butterworth2_magnitude(0.1e9, 200e6)).epsilon(1e-9));
    }
}

TEST_CASE("simulate is deterministic", "[mixer]") {
    Scenario s;
    s.input_noise_density = 1e-9;
    s.noise_seed = 42;
    const auto a = simulate(s);
    const auto b = simulate(s);
    REQUIRE(a.v_out == b.v_out);
    REQUIRE(*a.v_out_filtered == *b.v_out_filtered);
    s.noise_seed = 43;
    REQUIRE_FALSE(simulate(s).v_out == a.v_out);
}

TEST_CASE("scenario validation", "[mixer][validate]") {
    SECTION("off-grid tone is named") {
        Scenario s;
        s.rf_tones.front().frequency = 1.9e9 + 1e6;
        try {
            s.validate();
            FAIL("expected coherence error");
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::coherence);
            REQUIRE(std::string(e.what()).find("rf tone 1") != std::string::npos);
        }
    }

    SECTION("zero IF") {
        Scenario s;
        s.rf_tones.front().frequency = 1.8e9;
        REQUIRE_THROWS_AS(s.validate(), Error);
    }

    SECTION("tone above nyquist") {
        Scenario s;
        s.rf_tones.front().frequency = 300e9;
        try {
            s.validate();
            FAIL("expected aliasing error");
        } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::aliasing);
        }
    }

    SECTION("too many tones and bad parameters") {
        Scenario s;
        s.rf_tones.assign(3, ToneSpec::at_dbm(1.9e9, -30.0));
        REQUIRE_THROWS_AS(s.validate(), Error);
        Scenario t;
        t.mixer.load.rd = 0.0;
        REQUIRE_THROWS_AS(simulate(t), Error);
    }
}
