#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mixbench::detail {

/// Forward real DFT, bins 0..n/2, unnormalized.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft including the 1/n factor.
std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t n);

}  // namespace mixbench::detail
