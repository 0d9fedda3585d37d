#include "mixbench/signal.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mixbench/error.hpp"

namespace mixbench {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::domain: return "domain";
        case ErrorKind::coherence: return "coherence";
        case ErrorKind::aliasing: return "aliasing";
        case ErrorKind::insufficient_bandwidth: return "insufficient_bandwidth";
        case ErrorKind::no_compression: return "no_compression";
        case ErrorKind::compression_not_found: return "compression_not_found";
        case ErrorKind::immeasurable_im3: return "immeasurable_im3";
        case ErrorKind::too_hot: return "too_hot";
        case ErrorKind::wrong_stimulus: return "wrong_stimulus";
        case ErrorKind::below_floor: return "below_floor";
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

std::string_view to_string(Unit unit) noexcept {
    switch (unit) {
        case Unit::volt: return "V";
        case Unit::ampere: return "A";
        case Unit::none: return "";
    }
    return "";
}

double amplitude_to_dbm(double volts_peak) {
    if (!(volts_peak > 0.0) || !std::isfinite(volts_peak)) {
        throw Error(ErrorKind::domain, fmt::format("amplitude must be positive, got {}", volts_peak));
    }
    const double watts = volts_peak * volts_peak / 2.0 / kReferenceImpedance;
    return 10.0 * std::log10(watts / 1e-3);
}

double dbm_to_amplitude(double dbm) {
    if (!std::isfinite(dbm)) throw Error(ErrorKind::domain, "power in dBm must be finite");
    const double watts = 1e-3 * std::pow(10.0, dbm / 10.0);
    return std::sqrt(2.0 * watts * kReferenceImpedance);
}

SimGrid::SimGrid(double sample_rate, std::size_t num_samples)
    : sample_rate_(sample_rate), num_samples_(num_samples) {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw Error(ErrorKind::invalid_argument, fmt::format("sample rate must be positive, got {}", sample_rate));
    }
    if (num_samples < 16 || num_samples % 2 != 0) {
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("num_samples must be even and >= 16, got {}", num_samples));
    }
}

bool SimGrid::is_bin(double frequency) const noexcept {
    if (!std::isfinite(frequency)) return false;
    const double k = frequency / resolution();
    return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, std::abs(k));
}

std::size_t SimGrid::bin_of_inclusive(double frequency, std::string_view what) const {
    if (!is_bin(frequency)) {
        throw Error(ErrorKind::coherence,
                    fmt::format("{} {} Hz is not a multiple of the grid resolution {} Hz", what, frequency,
                                resolution()));
    }
    const double k = std::round(frequency / resolution());
    if (k < 0.0 || k > static_cast<double>(num_samples_ / 2)) {
        throw Error(ErrorKind::aliasing,
                    fmt::format("{} {} Hz lies outside [0, {}] Hz", what, frequency, nyquist()));
    }
    return static_cast<std::size_t>(k);
}

std::size_t SimGrid::bin_of(double frequency, std::string_view what) const {
    const std::size_t k = bin_of_inclusive(frequency, what);
    if (k == 0 || k >= num_samples_ / 2) {
        throw Error(k == 0 ? ErrorKind::invalid_argument : ErrorKind::aliasing,
                    fmt::format("{} {} Hz must lie strictly inside (0, {}) Hz", what, frequency, nyquist()));
    }
    return k;
}

SampledSignal::SampledSignal(SimGrid grid, std::vector<double> samples, Unit unit)
    : grid_(grid), samples_(std::move(samples)), unit_(unit) {
    if (samples_.size() != grid_.num_samples()) {
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("signal has {} samples, grid expects {}", samples_.size(), grid_.num_samples()));
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) throw Error(ErrorKind::domain, "signal contains a non-finite sample");
    }
}

SampledSignal SampledSignal::zeros(SimGrid grid, Unit unit) {
    return SampledSignal(grid, std::vector<double>(grid.num_samples(), 0.0), unit);
}

SampledSignal SampledSignal::scaled(double factor, Unit unit) const {
    std::vector<double> out(samples_);
    for (double& v : out) v *= factor;
    return SampledSignal(grid_, std::move(out), unit);
}

namespace {

void require_compatible(const SampledSignal& a, const SampledSignal& b) {
    if (!(a.grid() == b.grid())) throw Error(ErrorKind::invalid_argument, "signals live on different grids");
    if (a.unit() != b.unit()) throw Error(ErrorKind::invalid_argument, "signals carry different units");
}

}  // namespace

SampledSignal operator+(const SampledSignal& a, const SampledSignal& b) {
    require_compatible(a, b);
    std::vector<double> out(a.samples_);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += b.samples_[n];
    return SampledSignal(a.grid_, std::move(out), a.unit_);
}

SampledSignal operator-(const SampledSignal& a, const SampledSignal& b) {
    require_compatible(a, b);
    std::vector<double> out(a.samples_);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] -= b.samples_[n];
    return SampledSignal(a.grid_, std::move(out), a.unit_);
}

double ToneSpec::amplitude() const {
    if (const auto* p = std::get_if<Dbm>(&level)) return dbm_to_amplitude(p->value);
    const double a = std::get<VoltsPeak>(level).value;
    if (!(a >= 0.0) || !std::isfinite(a)) {
        throw Error(ErrorKind::domain, fmt::format("tone amplitude must be non-negative, got {}", a));
    }
    return a;
}

SpectrumLine make_line(double frequency, double amplitude, double phase) {
    const double power = amplitude > 0.0 ? amplitude_to_dbm(amplitude) : -std::numeric_limits<double>::infinity();
    return {frequency, amplitude, power, phase};
}

SampledSignal synthesize_tone(const SimGrid& grid, const ToneSpec& tone) {
    if (!(tone.frequency > 0.0)) {
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("tone frequency must be positive, got {} Hz", tone.frequency));
    }
    const std::size_t k = grid.bin_of(tone.frequency, "tone");
    const double a = tone.amplitude();
    const std::size_t n_total = grid.num_samples();

    // Reduce k·n modulo N in integers so the phase stays exact over long records.
    std::vector<double> out(n_total);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_total);
    std::size_t idx = 0;
    for (std::size_t n = 0; n < n_total; ++n) {
        out[n] = a * std::cos(step * static_cast<double>(idx) + tone.phase);
        idx += k;
        if (idx >= n_total) idx -= n_total;
    }
    return SampledSignal(grid, std::move(out), Unit::volt);
}

SampledSignal white_noise(const SimGrid& grid, double density, std::uint64_t seed) {
    if (!(density >= 0.0) || !std::isfinite(density)) {
        throw Error(ErrorKind::domain, fmt::format("noise density must be non-negative, got {}", density));
    }
    std::vector<double> out(grid.num_samples(), 0.0);
    if (density == 0.0) return SampledSignal(grid, std::move(out), Unit::volt);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, density * std::sqrt(grid.sample_rate() / 2.0));
    for (double& v : out) v = gauss(rng);
    return SampledSignal(grid, std::move(out), Unit::volt);
}

}  // namespace mixbench
