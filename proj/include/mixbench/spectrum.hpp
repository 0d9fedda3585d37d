#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixbench/signal.hpp"

namespace mixbench {

/// Single-bin complex projection (Goertzel-style correlation). Scaled so a
/// pure tone of peak A on that bin reads exactly A; DC reads the mean.
SpectrumLine bin_amplitude(const SampledSignal& signal, double frequency);

/// Lines at k·fundamental for k = 1..order.
std::vector<SpectrumLine> harmonic_table(const SampledSignal& signal, double fundamental, int order);

/// One-sided peak-amplitude spectrum of the whole record, bins 0..N/2.
/// Same scaling as bin_amplitude; the nyquist bin is a cosine amplitude too.
std::vector<double> amplitude_spectrum(const SampledSignal& signal);

struct NoiseBand {
    double center = 0.0;
    double width = 0.0;
};

struct NoiseDensity {
    double density = 0.0;          // V/√Hz, one-sided
    double relative_spread = 0.0;  // standard error of the segment average, relative
    std::size_t bins_used = 0;
    std::size_t segments = 0;
    double segment_resolution = 0.0;
};

/// Averaged periodogram (rectangular, non-overlapping segments) of the
/// one-sided voltage noise density inside `band`. Bins nearest to each
/// frequency in `tones` are masked, together with one guard bin either side.
NoiseDensity noise_density(const SampledSignal& signal, NoiseBand band, std::size_t segments,
                           std::span<const double> tones = {});

}  // namespace mixbench
