#include "mixbench/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixbench/spectrum.hpp"

namespace mixbench {
namespace {

Scenario with_single_tone_power(const Scenario& s, double dbm) {
    Scenario out = s;
    out.rf_tones.resize(1);
    out.rf_tones.front().level = Dbm{dbm};
    return out;
}

double ray_amplitude(const SampledSignal& v, double frequency) { return bin_amplitude(v, frequency).amplitude; }

double to_dbm_or_floor(double amplitude) {
    return amplitude > 0.0 ? amplitude_to_dbm(amplitude) : -std::numeric_limits<double>::infinity();
}

// Numerical floor of a line spectrum: most bins carry only rounding (or
// noise), so the median bin sits at the floor.
double spectral_floor(const SampledSignal& v) {
    std::vector<double> spec = amplitude_spectrum(v);
    auto mid = spec.begin() + static_cast<std::ptrdiff_t>(spec.size() / 2);
    std::nth_element(spec.begin(), mid, spec.end());
    return *mid;
}

}  // namespace

std::vector<double> SweepSpec::points() const {
    if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) {
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("bad sweep [{}, {}] dBm step {} dB", start, stop, step));
    }
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

double measure_conversion_gain(const Scenario& s) {
    if (s.rf_tones.size() != 1) {
        throw Error(ErrorKind::wrong_stimulus,
                    fmt::format("conversion gain needs a single RF tone, scenario has {}", s.rf_tones.size()));
    }
    const double a_in = s.rf_tones.front().amplitude();
    if (!(a_in > 0.0)) throw Error(ErrorKind::domain, "conversion gain needs a non-zero RF tone");

    const TransientResult r = simulate(s);
    const double a_out = ray_amplitude(r.v_out, s.if_frequency());
    if (!(a_out > 0.0)) throw Error(ErrorKind::below_floor, "no IF ray at the output");
    return 20.0 * std::log10(a_out / a_in);
}

P1dbResult measure_p1db(const Scenario& s, const SweepSpec& sweep) {
    const double a3 = s.mixer.transconductor.a3;
    if (!(a3 < 0.0)) {
        throw Error(ErrorKind::no_compression, fmt::format("a3 = {} A/V^3 does not compress", a3));
    }

    P1dbResult result;
    for (double p_in : sweep.points()) {
        const Scenario point = with_single_tone_power(s, p_in);
        const double gain = measure_conversion_gain(point);
        result.sweep.push_back({p_in, p_in + gain, gain});
    }
    std::ranges::sort(result.sweep, {}, &GainSweepPoint::input_power);

    result.small_signal_gain = result.sweep.front().gain;
    const double target = result.small_signal_gain - 1.0;
    for (std::size_t i = 1; i < result.sweep.size(); ++i) {
        const GainSweepPoint& lo = result.sweep[i - 1];
        const GainSweepPoint& hi = result.sweep[i];
        if (hi.gain <= target) {
            const double t = (target - lo.gain) / (hi.gain - lo.gain);
            result.p1db = lo.input_power + t * (hi.input_power - lo.input_power);
            return result;
        }
    }
    throw CompressionNotFound(
        fmt::format("gain never fell 1 dB below {:.3f} dB between {} and {} dBm", result.small_signal_gain,
                    sweep.start, sweep.stop),
        std::move(result.sweep));
}

Scenario make_two_tone(const Scenario& s, double spacing, double per_tone_power) {
    if (s.rf_tones.empty()) throw Error(ErrorKind::wrong_stimulus, "scenario has no RF tone");
    Scenario out = s;
    const double f1 = s.rf_tones.front().frequency;
    out.rf_tones = {ToneSpec::at_dbm(f1, per_tone_power), ToneSpec::at_dbm(f1 + spacing, per_tone_power)};
    return out;
}

double iip3_from_delta(double delta_db, double input_power_dbm) { return delta_db / 2.0 + input_power_dbm; }

TwoToneResult measure_iip3(const Scenario& s, double per_tone_power) {
    if (s.rf_tones.size() != 2) {
        throw Error(ErrorKind::wrong_stimulus,
                    fmt::format("IIP3 needs a two-tone scenario, got {} tone(s)", s.rf_tones.size()));
    }
    Scenario hot = s;
    for (ToneSpec& t : hot.rf_tones) t.level = Dbm{per_tone_power};
    hot.validate();

    const double f1 = hot.rf_tones[0].frequency;
    const double f2 = hot.rf_tones[1].frequency;
    const double f_lo = hot.lo_tone.frequency;

    auto read = [&](const Scenario& sc) {
        const TransientResult r = simulate(sc);
        struct Rays {
            double fund, im3_lower, im3_upper, floor;
        };
        return Rays{ray_amplitude(r.v_out, std::abs(f1 - f_lo)), ray_amplitude(r.v_out, std::abs(2 * f1 - f2 - f_lo)),
                    ray_amplitude(r.v_out, std::abs(2 * f2 - f1 - f_lo)), spectral_floor(r.v_out)};
    };

    const auto rays = read(hot);
    TwoToneResult out;
    out.per_tone_power = per_tone_power;
    out.p_fund = to_dbm_or_floor(rays.fund);
    out.p_im3_lower = to_dbm_or_floor(rays.im3_lower);
    out.p_im3_upper = to_dbm_or_floor(rays.im3_upper);
    out.p_im3 = std::max(out.p_im3_lower, out.p_im3_upper);

    const double floor_dbm = std::max(kIm3FloorDbm, to_dbm_or_floor(10.0 * rays.floor));
    if (!(out.p_im3 > floor_dbm)) {
        throw Error(ErrorKind::immeasurable_im3,
                    fmt::format("IM3 ray at {:.1f} dBm is under the {:.1f} dBm floor", out.p_im3, floor_dbm));
    }

    // The fundamental must still be on its small-signal line.
    Scenario cold = hot;
    for (ToneSpec& t : cold.rf_tones) t.level = Dbm{per_tone_power - 30.0};
    const double gain_hot = out.p_fund - per_tone_power;
    const double gain_cold = to_dbm_or_floor(read(cold).fund) - (per_tone_power - 30.0);
    if (std::abs(gain_cold - gain_hot) > 0.5) {
        throw Error(ErrorKind::too_hot, fmt::format("fundamental gain moved {:.2f} dB at {} dBm per tone",
                                                    gain_hot - gain_cold, per_tone_power));
    }

    out.delta = out.p_fund - out.p_im3;
    out.iip3 = iip3_from_delta(out.delta, per_tone_power);
    return out;
}

double measure_isolation(const Scenario& s) {
    const double a_lo = s.lo_tone.amplitude();
    if (!(a_lo > 0.0)) throw Error(ErrorKind::wrong_stimulus, "isolation needs an active LO tone");
    const TransientResult r = simulate(s);
    const double ratio = ray_amplitude(r.v_rf_port, s.lo_tone.frequency) / a_lo;
    if (!(ratio > 1e-15)) return kBelowFloorDb;
    return 20.0 * std::log10(ratio);
}

double noise_figure_from_densities(double n_if, double n_rf, double gain_db) {
    if (!(n_rf > 0.0) || !(n_if > 0.0)) {
        throw Error(ErrorKind::below_floor, "noise densities must be positive");
    }
    return 20.0 * std::log10(n_if / n_rf) - gain_db;
}

NoiseFigureResult measure_noise_figure(const Scenario& s, const NoiseFigureConfig& cfg) {
    if (!(s.input_noise_density > 0.0)) {
        throw Error(ErrorKind::below_floor, "noise figure needs a non-zero input noise density");
    }
    if (s.rf_tones.empty()) throw Error(ErrorKind::wrong_stimulus, "scenario has no RF tone");

    const ToneSpec& tone = s.rf_tones.front();
    const double in_center = cfg.input_center.value_or(tone.frequency);
    const double out_center = cfg.output_center.value_or(s.if_frequency());

    Scenario quiet = s;
    quiet.input_noise_density = 0.0;
    quiet.if_filter.reset();
    Scenario noisy = s;
    noisy.if_filter.reset();

    const TransientResult with_noise = simulate(noisy);
    const TransientResult without = simulate(quiet);

    // Deterministic rays are removed by subtracting the noiseless run; the
    // stimulus bins are masked as well.
    std::vector<double> tones;
    for (const ToneSpec& t : s.rf_tones) tones.push_back(t.frequency);
    tones.push_back(s.lo_tone.frequency);
    tones.push_back(s.if_frequency());

    const NoiseDensity n_rf = noise_density(with_noise.v_rf_port - without.v_rf_port,
                                            {in_center, cfg.band_width}, cfg.segments, tones);
    const NoiseDensity n_if =
        noise_density(with_noise.v_out - without.v_out, {out_center, cfg.band_width}, cfg.segments, tones);

    double gain_db = 0.0;
    const double a_in = tone.amplitude();
    if (a_in > 0.0) {
        gain_db = 20.0 * std::log10(ray_amplitude(without.v_out, out_center) / a_in);
    } else {
        Scenario probe = quiet;
        probe.rf_tones = {ToneSpec::at_dbm(tone.frequency, -60.0, tone.phase)};
        const double a_probe = probe.rf_tones.front().amplitude();
        gain_db = 20.0 * std::log10(ray_amplitude(simulate(probe).v_out, out_center) / a_probe);
    }
    if (!std::isfinite(gain_db)) throw Error(ErrorKind::below_floor, "no signal path to the output band");

    NoiseFigureResult out;
    out.n_rf = n_rf.density;
    out.n_if = n_if.density;
    out.gain = gain_db;
    out.noise_figure = noise_figure_from_densities(n_if.density, n_rf.density, gain_db);
    out.relative_spread = std::max(n_rf.relative_spread, n_if.relative_spread);
    if (out.relative_spread > cfg.max_relative_spread) {
        out.warning = fmt::format("unstable estimate: relative spread {:.1f}% exceeds {:.1f}%",
                                  100.0 * out.relative_spread, 100.0 * cfg.max_relative_spread);
    }
    return out;
}

const std::array<ReferenceRow, 5>& reference_table() {
    static const std::array<ReferenceRow, 5> rows{{
        {"cmos-350nm", 0.35, 0.9, 1.1, std::nullopt, -15.4, -3.3, 7.2},
        {"cmos-250nm", 0.25, 2.44, -2.6, 13.67, 5.07, 12.81, 13.3},
        {"cmos-180nm-a", 0.18, 2.4, 3.3, 14.8, -8.98, 5.46, 5.6},
        {"cmos-180nm-b", 0.18, 1.9, 7.0, 8.0, -10.0, -5.0, 3.8},
        {"cmos-65nm", 0.065, 1.9, 12.42, 8.92, -11.5, 6.0, 2.0},
    }};
    return rows;
}

const ReferenceRow& reference_circuit() { return reference_table().back(); }

Scenario make_noise_scenario(const Scenario& s, const ReportConfig& cfg) {
    Scenario out = s;
    out.grid = cfg.nf_grid;
    out.rf_tones.resize(1);
    out.if_filter.reset();
    if (!(out.input_noise_density > 0.0)) out.input_noise_density = cfg.nf_input_density;
    return out;
}

namespace {

template <typename F>
Measured capture(F&& f) {
    try {
        return Measured::of(f());
    } catch (const Error& e) {
        return Measured::failed(e.kind(), e.what());
    } catch (const std::exception& e) {
        return Measured::failed(ErrorKind::invalid_argument, e.what());
    }
}

}  // namespace

MetricsReport build_report(const Scenario& s, const ReportConfig& cfg) {
    MetricsReport report;
    report.analytic_gain = analytic_conversion_gain(s.mixer);

    if (cfg.conversion_gain) {
        report.conversion_gain = capture([&] {
            Scenario one = s;
            one.rf_tones.resize(1);
            return measure_conversion_gain(one);
        });
    }
    if (cfg.p1db) {
        report.p1db = capture([&] {
            report.p1db_detail = measure_p1db(s, cfg.sweep);
            return report.p1db_detail->p1db;
        });
    }
    if (cfg.iip3) {
        report.iip3 = capture([&] {
            const Scenario two = s.rf_tones.size() == 2 ? s : make_two_tone(s, cfg.two_tone_spacing, cfg.two_tone_power);
            report.iip3_detail = measure_iip3(two, cfg.two_tone_power);
            return report.iip3_detail->iip3;
        });
    }
    if (cfg.isolation) report.isolation = capture([&] { return measure_isolation(s); });
    if (cfg.noise_figure) {
        report.noise_figure = capture([&] {
            report.nf_detail = measure_noise_figure(make_noise_scenario(s, cfg), cfg.nf);
            return report.nf_detail->noise_figure;
        });
        if (report.nf_detail) report.noise_figure.warning = report.nf_detail->warning;
    }
    if (cfg.power) report.power_consumption = capture([&] { return dc_power(s.mixer.bias); });
    return report;
}

}  // namespace mixbench
