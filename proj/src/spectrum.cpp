#include "mixbench/spectrum.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "fft.hpp"
#include "mixbench/error.hpp"

namespace mixbench {

SpectrumLine bin_amplitude(const SampledSignal& signal, double frequency) {
    const SimGrid& grid = signal.grid();
    const std::size_t k = grid.bin_of_inclusive(frequency, "analysis frequency");
    const std::size_t n_total = grid.num_samples();
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_total);

    std::complex<double> acc{0.0, 0.0};
    std::size_t idx = 0;
    for (std::size_t n = 0; n < n_total; ++n) {
        const double angle = step * static_cast<double>(idx);
        acc += signal[n] * std::complex<double>(std::cos(angle), -std::sin(angle));
        idx += k;
        if (idx >= n_total) idx -= n_total;
    }

    const bool edge = (k == 0 || k == n_total / 2);
    const double scale = (edge ? 1.0 : 2.0) / static_cast<double>(n_total);
    return make_line(k * grid.resolution(), std::abs(acc) * scale, std::arg(acc));
}

std::vector<SpectrumLine> harmonic_table(const SampledSignal& signal, double fundamental, int order) {
    if (order < 1) throw Error(ErrorKind::invalid_argument, fmt::format("harmonic order must be >= 1, got {}", order));
    if (!(fundamental > 0.0)) {
        throw Error(ErrorKind::invalid_argument, fmt::format("fundamental must be positive, got {} Hz", fundamental));
    }
    const double top = order * fundamental;
    if (top >= signal.grid().nyquist()) {
        throw Error(ErrorKind::aliasing, fmt::format("harmonic {} of {} Hz reaches nyquist {} Hz", order, fundamental,
                                                     signal.grid().nyquist()));
    }
    std::vector<SpectrumLine> lines;
    lines.reserve(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k) lines.push_back(bin_amplitude(signal, k * fundamental));
    return lines;
}

std::vector<double> amplitude_spectrum(const SampledSignal& signal) {
    const auto bins = detail::rfft(signal.samples());
    const std::size_t n_total = signal.size();
    std::vector<double> out(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const bool edge = (k == 0 || k == n_total / 2);
        out[k] = std::abs(bins[k]) * (edge ? 1.0 : 2.0) / static_cast<double>(n_total);
    }
    return out;
}

NoiseDensity noise_density(const SampledSignal& signal, NoiseBand band, std::size_t segments,
                           std::span<const double> tones) {
    const SimGrid& grid = signal.grid();
    if (segments < 4) throw Error(ErrorKind::invalid_argument, fmt::format("need at least 4 segments, got {}", segments));
    if (grid.num_samples() % segments != 0) {
        throw Error(ErrorKind::invalid_argument,
                    fmt::format("{} samples do not split into {} segments", grid.num_samples(), segments));
    }
    const double lo = band.center - band.width / 2.0;
    const double hi = band.center + band.width / 2.0;
    if (!(band.width > 0.0) || lo < 0.0 || hi > grid.nyquist()) {
        throw Error(ErrorKind::aliasing,
                    fmt::format("noise band [{}, {}] Hz must lie within [0, {}] Hz", lo, hi, grid.nyquist()));
    }

    const std::size_t seg_len = grid.num_samples() / segments;
    const double seg_res = grid.sample_rate() / static_cast<double>(seg_len);

    std::set<long long> masked;
    for (double f : tones) {
        const auto c = static_cast<long long>(std::llround(f / seg_res));
        masked.insert({c - 1, c, c + 1});
    }

    const auto first = static_cast<long long>(std::max(1.0, std::ceil(lo / seg_res - 1e-9)));
    const auto last = static_cast<long long>(
        std::min(static_cast<double>(seg_len / 2 - 1), std::floor(hi / seg_res + 1e-9)));
    std::vector<std::size_t> used;
    for (long long k = first; k <= last; ++k) {
        if (!masked.contains(k)) used.push_back(static_cast<std::size_t>(k));
    }
    if (used.size() < 2) {
        throw Error(ErrorKind::insufficient_bandwidth,
                    fmt::format("only {} unmasked bins of {} Hz in band [{}, {}] Hz", used.size(), seg_res, lo, hi));
    }

    // One-sided PSD of a rectangular segment: 2|X_k|² / (fs·L).
    const double psd_scale = 2.0 / (grid.sample_rate() * static_cast<double>(seg_len));
    std::vector<double> per_segment;
    per_segment.reserve(segments);
    const auto all = signal.samples();
    for (std::size_t s = 0; s < segments; ++s) {
        const auto bins = detail::rfft(all.subspan(s * seg_len, seg_len));
        double sum = 0.0;
        for (std::size_t k : used) sum += std::norm(bins[k]);
        per_segment.push_back(sum * psd_scale / static_cast<double>(used.size()));
    }

    double mean = 0.0;
    for (double p : per_segment) mean += p;
    mean /= static_cast<double>(segments);
    double var = 0.0;
    for (double p : per_segment) var += (p - mean) * (p - mean);
    var /= static_cast<double>(segments - 1);

    NoiseDensity result;
    result.density = std::sqrt(mean);
    result.relative_spread = mean > 0.0 ? std::sqrt(var / static_cast<double>(segments)) / mean : 0.0;
    result.bins_used = used.size();
    result.segments = segments;
    result.segment_resolution = seg_res;
    return result;
}

}  // namespace mixbench
