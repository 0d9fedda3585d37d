#include "mixbench/mixer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "mixbench/error.hpp"

namespace mixbench {

void MixerParams::validate() const {
    transconductor.validate();
    switching.validate();
    load.validate();
    bias.validate();
    leakage.validate();
}

std::complex<double> FilterSpec::response(double frequency) const {
    const double x = frequency / cutoff;
    return 1.0 / std::complex<double>(1.0 - x * x, std::numbers::sqrt2 * x);
}

double Scenario::if_frequency() const {
    if (rf_tones.empty()) throw Error(ErrorKind::wrong_stimulus, "scenario has no RF tone");
    return std::abs(rf_tones.front().frequency - lo_tone.frequency);
}

void Scenario::validate() const {
    mixer.validate();
    if (rf_tones.empty() || rf_tones.size() > 2) {
        throw Error(ErrorKind::invalid_argument, fmt::format("expected 1 or 2 RF tones, got {}", rf_tones.size()));
    }
    for (std::size_t i = 0; i < rf_tones.size(); ++i) {
        grid.bin_of(rf_tones[i].frequency, fmt::format("rf tone {}", i + 1));
        rf_tones[i].amplitude();
    }
    grid.bin_of(lo_tone.frequency, "lo tone");
    lo_tone.amplitude();

    const double f_if = if_frequency();
    if (f_if == 0.0) throw Error(ErrorKind::invalid_argument, "RF and LO frequencies coincide (zero IF)");
    grid.bin_of(f_if, "intermediate frequency");

    if (rf_tones.size() == 2) {
        const double f1 = rf_tones[0].frequency;
        const double f2 = rf_tones[1].frequency;
        if (f1 == f2) throw Error(ErrorKind::invalid_argument, "two-tone stimulus needs distinct frequencies");
        for (double im3 : {2.0 * f1 - f2, 2.0 * f2 - f1}) {
            grid.bin_of(im3, "IM3 product");
            grid.bin_of(std::abs(im3 - lo_tone.frequency), "down-converted IM3 product");
        }
        grid.bin_of(std::abs(f2 - lo_tone.frequency), "second IF tone");
    }
    if (!(input_noise_density >= 0.0) || !std::isfinite(input_noise_density)) {
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("input noise density must be non-negative, got {}", input_noise_density));
    }
    if (if_filter) {
        if (!(if_filter->cutoff > 0.0) || if_filter->cutoff >= grid.nyquist()) {
            throw Error(ErrorKind::aliasing, fmt::format("filter cutoff {} Hz must lie in (0, {}) Hz",
                                                         if_filter->cutoff, grid.nyquist()));
        }
    }
}

Scenario reference_65nm_scenario() { return Scenario{}; }

TransientResult simulate(const Scenario& s) {
    s.validate();
    const SimGrid& grid = s.grid;

    SampledSignal v_lo = synthesize_tone(grid, s.lo_tone);
    SampledSignal v_rf_port = lo_leakage_at_rf_port(s.mixer.leakage, v_lo);
    for (const ToneSpec& tone : s.rf_tones) v_rf_port = v_rf_port + synthesize_tone(grid, tone);
    if (s.input_noise_density > 0.0) {
        v_rf_port = v_rf_port + white_noise(grid, s.input_noise_density, s.noise_seed);
    }

    SampledSignal i_s = transconductor_current(s.mixer.transconductor, v_rf_port);
    const SampledSignal sw = switch_waveform(s.mixer.switching, v_lo);

    std::vector<double> i_out(grid.num_samples());
    for (std::size_t n = 0; n < i_out.size(); ++n) i_out[n] = i_s[n] * sw[n];
    SampledSignal i_out_sig(grid, std::move(i_out), Unit::ampere);

    // Differential output; the ±1 commutation already resolves the branch subtraction.
    SampledSignal v_out = i_out_sig.scaled(s.mixer.load.rd, Unit::volt);

    std::optional<SampledSignal> filtered;
    if (s.if_filter) filtered = apply_if_filter(*s.if_filter, v_out);

    return TransientResult{std::move(v_rf_port), std::move(v_lo), std::move(i_s), std::move(i_out_sig),
                           std::move(v_out), std::move(filtered)};
}

double analytic_conversion_gain(const MixerParams& m) {
    m.validate();
    return 20.0 * std::log10((2.0 / std::numbers::pi) * m.load.rd * m.transconductor.gm);
}

SampledSignal apply_if_filter(const FilterSpec& f, const SampledSignal& v) {
    const SimGrid& grid = v.grid();
    if (!(f.cutoff > 0.0) || f.cutoff >= grid.nyquist()) {
        throw Error(ErrorKind::aliasing,
                    fmt::format("filter cutoff {} Hz must lie in (0, {}) Hz", f.cutoff, grid.nyquist()));
    }
    auto bins = detail::rfft(v.samples());
    const std::size_t last = bins.size() - 1;
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const auto h = f.response(static_cast<double>(k) * grid.resolution());
        // The nyquist bin must stay real.
        bins[k] *= (k == last) ? std::complex<double>(std::abs(h), 0.0) : h;
    }
    return SampledSignal(grid, detail::irfft(bins, grid.num_samples()), v.unit());
}

}  // namespace mixbench
