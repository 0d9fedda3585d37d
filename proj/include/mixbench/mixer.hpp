#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "mixbench/device.hpp"
#include "mixbench/signal.hpp"

namespace mixbench {

struct MixerParams {
    TransconductorParams transconductor;
    SwitchParams switching;
    LoadParams load;
    BiasParams bias;
    LeakageParams leakage;

    void validate() const;
    friend bool operator==(const MixerParams&, const MixerParams&) = default;
};

enum class FilterKind { lowpass2 };

/// Second-order Butterworth low-pass on the output node.
struct FilterSpec {
    FilterKind kind = FilterKind::lowpass2;
    double cutoff = 200e6;  // Hz

    std::complex<double> response(double frequency) const;

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

struct Scenario {
    MixerParams mixer;
    SimGrid grid{409.2e9, 16368};
    std::vector<ToneSpec> rf_tones{ToneSpec::at_dbm(1.9e9, -30.0)};
    ToneSpec lo_tone = ToneSpec::at_amplitude(1.8e9, 1.0);
    std::uint64_t noise_seed = 1;
    double input_noise_density = 0.0;  // V/√Hz at the RF port
    std::optional<FilterSpec> if_filter = FilterSpec{};

    /// |f_RF - f_LO| of the first RF tone.
    double if_frequency() const;

    /// Throws coherence/aliasing/invalid_argument errors naming the offender.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// The default calibration: gm = 34 mA/V, Rd = 220 Ω, a3 = -0.696 A/V³,
/// κ = 0.01303, Vdd = 1.8 V, 1.111 mA tail, 1.9/1.8/0.1 GHz plan on a
/// 25 MHz coherent grid.
Scenario reference_65nm_scenario();

struct TransientResult {
    SampledSignal v_rf_port;
    SampledSignal v_lo;
    SampledSignal i_s;
    SampledSignal i_out;
    SampledSignal v_out;
    std::optional<SampledSignal> v_out_filtered;
};

TransientResult simulate(const Scenario& s);

/// 20·log10((2/π)·Rd·gm).
double analytic_conversion_gain(const MixerParams& m);

/// Exact frequency-domain filtering on the coherent grid.
SampledSignal apply_if_filter(const FilterSpec& f, const SampledSignal& v);

}  // namespace mixbench
