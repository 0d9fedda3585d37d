#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace mixbench {

/// Every dBm value in the project is referred to this impedance.
inline constexpr double kReferenceImpedance = 50.0;

/// Peak amplitude (V) to power (dBm) into kReferenceImpedance. Throws on a <= 0.
double amplitude_to_dbm(double volts_peak);
double dbm_to_amplitude(double dbm);

/// Coherent sampling grid. Tones are only ever placed on exact bins of this
/// grid, so single-bin projections are leakage-free without windowing.
class SimGrid {
public:
    SimGrid(double sample_rate, std::size_t num_samples);

    double sample_rate() const noexcept { return sample_rate_; }
    std::size_t num_samples() const noexcept { return num_samples_; }
    double resolution() const noexcept { return sample_rate_ / static_cast<double>(num_samples_); }
    double nyquist() const noexcept { return sample_rate_ / 2.0; }

    bool is_bin(double frequency) const noexcept;

    /// Bin index of an on-grid frequency strictly inside (0, nyquist).
    /// Throws coherence or aliasing errors naming `what`.
    std::size_t bin_of(double frequency, std::string_view what = "frequency") const;

    /// Bin index of an on-grid frequency in [0, nyquist]; DC and nyquist allowed.
    std::size_t bin_of_inclusive(double frequency, std::string_view what = "frequency") const;

    double time_of(std::size_t n) const noexcept { return static_cast<double>(n) / sample_rate_; }

    friend bool operator==(const SimGrid&, const SimGrid&) = default;

private:
    double sample_rate_;
    std::size_t num_samples_;
};

enum class Unit { volt, ampere, none };

std::string_view to_string(Unit unit) noexcept;

/// Uniformly sampled real waveform. Immutable once built; every sample finite.
class SampledSignal {
public:
    SampledSignal(SimGrid grid, std::vector<double> samples, Unit unit = Unit::volt);

    static SampledSignal zeros(SimGrid grid, Unit unit = Unit::volt);

    const SimGrid& grid() const noexcept { return grid_; }
    Unit unit() const noexcept { return unit_; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t n) const noexcept { return samples_[n]; }

    /// Moves the storage out; the signal is left empty.
    std::vector<double> release() && { return std::move(samples_); }

    SampledSignal scaled(double factor, Unit unit) const;
    SampledSignal scaled(double factor) const { return scaled(factor, unit_); }

    friend SampledSignal operator+(const SampledSignal& a, const SampledSignal& b);
    friend SampledSignal operator-(const SampledSignal& a, const SampledSignal& b);

    friend bool operator==(const SampledSignal&, const SampledSignal&) = default;

private:
    SimGrid grid_;
    std::vector<double> samples_;
    Unit unit_;
};

struct Dbm {
    double value;
    friend bool operator==(const Dbm&, const Dbm&) = default;
};

struct VoltsPeak {
    double value;
    friend bool operator==(const VoltsPeak&, const VoltsPeak&) = default;
};

/// A stimulus tone; the level is either a power or a peak amplitude, never both.
struct ToneSpec {
    double frequency = 0.0;
    std::variant<Dbm, VoltsPeak> level = VoltsPeak{0.0};
    double phase = 0.0;

    double amplitude() const;

    static ToneSpec at_dbm(double frequency, double dbm, double phase = 0.0) {
        return {frequency, Dbm{dbm}, phase};
    }
    static ToneSpec at_amplitude(double frequency, double volts_peak, double phase = 0.0) {
        return {frequency, VoltsPeak{volts_peak}, phase};
    }

    friend bool operator==(const ToneSpec&, const ToneSpec&) = default;
};

struct SpectrumLine {
    double frequency = 0.0;
    double amplitude = 0.0;  // volts-peak (or amperes-peak)
    double power = 0.0;      // dBm, -inf for a zero line
    double phase = 0.0;      // radians, cosine reference
};

SpectrumLine make_line(double frequency, double amplitude, double phase = 0.0);

/// A·cos(2π f n / fs + φ). The tone must sit on a grid bin below nyquist.
SampledSignal synthesize_tone(const SimGrid& grid, const ToneSpec& tone);

/// Gaussian white noise with one-sided density `density` (V/√Hz), i.e.
/// per-sample standard deviation density·sqrt(fs/2). Deterministic in `seed`.
SampledSignal white_noise(const SimGrid& grid, double density, std::uint64_t seed);

}  // namespace mixbench
