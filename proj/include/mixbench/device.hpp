#pragma once

#include "mixbench/signal.hpp"

namespace mixbench {

/// RF input device (M1): memoryless polynomial transconductor.
///   i_s = gm·v_gs1 + gm·v + a2·v² + a3·v³
struct TransconductorParams {
    double gm = 0.034;      // A/V
    double v_gs1 = 1.111e-3 / 0.034;  // V, gate bias; gm·v_gs1 equals the tail current
    double a2 = 0.0;        // A/V²
    double a3 = -0.696;     // A/V³

    void validate() const;
    friend bool operator==(const TransconductorParams&, const TransconductorParams&) = default;
};

enum class SwitchMode { ideal_sign, smooth };

/// LO-driven commutating pair (M2/M3).
struct SwitchParams {
    SwitchMode mode = SwitchMode::ideal_sign;
    double v_sw = 0.05;  // V, tanh transition scale; smooth mode only

    void validate() const;
    friend bool operator==(const SwitchParams&, const SwitchParams&) = default;
};

struct LoadParams {
    double rd = 220.0;  // ohms, per branch

    void validate() const;
    friend bool operator==(const LoadParams&, const LoadParams&) = default;
};

/// Supply and tail current. The tail device (M4) is an ideal current source.
struct BiasParams {
    double vdd = 1.8;         // V
    double i_bias = 1.111e-3;  // A

    void validate() const;
    friend bool operator==(const BiasParams&, const BiasParams&) = default;
};

/// Linear LO-to-RF-port voltage coupling.
struct LeakageParams {
    double kappa = 0.01303;

    void validate() const;
    friend bool operator==(const LeakageParams&, const LeakageParams&) = default;
};

SampledSignal transconductor_current(const TransconductorParams& p, const SampledSignal& v_rf);

/// ±1 in ideal mode (sign(0) = +1), tanh(v/v_sw) in smooth mode.
SampledSignal switch_waveform(const SwitchParams& p, const SampledSignal& v_lo);

double dc_power(const BiasParams& b);

/// Input peak amplitude at which the fundamental current gain of the cubic
/// has dropped by exactly 1 dB. Requires a3 < 0.
double a1db_closed_form(const TransconductorParams& p);

/// Input peak amplitude where the extrapolated fundamental and IM3 lines
/// meet: sqrt(4/3 · gm / |a3|). Requires a3 != 0.
double aiip3_closed_form(const TransconductorParams& p);

SampledSignal lo_leakage_at_rf_port(const LeakageParams& l, const SampledSignal& v_lo);

}  // namespace mixbench
