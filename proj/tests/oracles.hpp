#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's own spectral routines.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace mixbench::oracle {

/// Peak amplitude of bin k by a direct inner product in long double.
inline long double dft_amplitude(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    std::complex<long double> acc{0.0L, 0.0L};
    const long double w = 2.0L * std::numbers::pi_v<long double> / static_cast<long double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double angle = w * static_cast<long double>((k * i) % n);
        acc += static_cast<long double>(x[i]) * std::complex<long double>(std::cos(angle), -std::sin(angle));
    }
    const long double scale = (k == 0 || 2 * k == n) ? 1.0L : 2.0L;
    return std::abs(acc) * scale / static_cast<long double>(n);
}

/// Fourier magnitude of harmonic k of a unit ±1 square wave.
inline double square_wave_harmonic(int k) { return k % 2 == 0 ? 0.0 : 4.0 / (k * std::numbers::pi); }

/// Noise folding through an ideal commutating switch: each odd LO harmonic m
/// whose upper sideband lies below nyquist contributes both sidebands with
/// weight (1/m)², relative to the single-sideband signal path through m = 1.
inline double folding_noise_figure_db(double f_lo, double f_if, double nyquist) {
    double sum = 0.0;
    for (int m = 1; m * f_lo + f_if < nyquist; m += 2) sum += 1.0 / (static_cast<double>(m) * m);
    return 10.0 * std::log10(2.0 * sum);
}

/// Fundamental output current of the cubic for a single cosine of peak A.
inline double cubic_fundamental(double gm, double a3, double a) { return gm * a + 0.75 * a3 * a * a * a; }

/// IM3 current amplitude for two equal tones of peak A each.
inline double cubic_im3(double a3, double a) { return 0.75 * std::abs(a3) * a * a * a; }

inline double butterworth2_magnitude(double f, double fc) { return 1.0 / std::sqrt(1.0 + std::pow(f / fc, 4.0)); }

inline double butterworth2_phase(double f, double fc) {
    const double x = f / fc;
    return -std::atan2(std::numbers::sqrt2 * x, 1.0 - x * x);
}

/// Ordinary least-squares slope of y on x.
inline double slope(std::span<const double> x, std::span<const double> y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

/// Odd-LO mixing products and LO harmonics of a single-tone mixer, folded
/// onto the grid (bin indices 0..n/2). Covers every alias by walking m over
/// two full periods of the LO bin modulo n.
inline std::vector<bool> allowed_mixer_bins(std::size_t n, std::size_t k_lo, std::size_t k_rf) {
    std::vector<bool> allowed(n / 2 + 1, false);
    const auto fold = [n](long long k) {
        long long r = ((k % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n);
        if (r > static_cast<long long>(n / 2)) r = static_cast<long long>(n) - r;
        return static_cast<std::size_t>(r);
    };
    for (long long m = 1; m < 2 * static_cast<long long>(n); m += 2) {
        const long long lo = m * static_cast<long long>(k_lo);
        allowed[fold(lo)] = true;
        allowed[fold(lo + static_cast<long long>(k_rf))] = true;
        allowed[fold(lo - static_cast<long long>(k_rf))] = true;
    }
    return allowed;
}

}  // namespace mixbench::oracle
