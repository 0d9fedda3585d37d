#include "mixbench/device.hpp"

#include <fmt/format.h>

#include <cmath>

#include "mixbench/error.hpp"

namespace mixbench {
namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorKind::invalid_argument, message);
}

}  // namespace

void TransconductorParams::validate() const {
    require(gm > 0.0 && std::isfinite(gm), fmt::format("gm must be positive, got {}", gm));
    require(std::isfinite(v_gs1), "v_gs1 must be finite");
    require(std::isfinite(a2) && std::isfinite(a3), "a2 and a3 must be finite");
}

void SwitchParams::validate() const {
    if (mode == SwitchMode::smooth) {
        require(v_sw > 0.0 && std::isfinite(v_sw), fmt::format("v_sw must be positive in smooth mode, got {}", v_sw));
    }
}

void LoadParams::validate() const {
    require(rd > 0.0 && std::isfinite(rd), fmt::format("rd must be positive, got {}", rd));
}

void BiasParams::validate() const {
    require(vdd > 0.0 && std::isfinite(vdd), fmt::format("vdd must be positive, got {}", vdd));
    require(i_bias >= 0.0 && std::isfinite(i_bias), fmt::format("i_bias must be non-negative, got {}", i_bias));
}

void LeakageParams::validate() const {
    require(kappa >= 0.0 && kappa < 1.0, fmt::format("kappa must lie in [0, 1), got {}", kappa));
}

SampledSignal transconductor_current(const TransconductorParams& p, const SampledSignal& v_rf) {
    p.validate();
    const double dc = p.gm * p.v_gs1;
    std::vector<double> out(v_rf.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double v = v_rf[n];
        out[n] = dc + v * (p.gm + v * (p.a2 + v * p.a3));
    }
    return SampledSignal(v_rf.grid(), std::move(out), Unit::ampere);
}

SampledSignal switch_waveform(const SwitchParams& p, const SampledSignal& v_lo) {
    p.validate();
    std::vector<double> out(v_lo.size());
    if (p.mode == SwitchMode::ideal_sign) {
        for (std::size_t n = 0; n < out.size(); ++n) out[n] = v_lo[n] < 0.0 ? -1.0 : 1.0;
    } else {
        for (std::size_t n = 0; n < out.size(); ++n) out[n] = std::tanh(v_lo[n] / p.v_sw);
    }
    return SampledSignal(v_lo.grid(), std::move(out), Unit::none);
}

double dc_power(const BiasParams& b) {
    b.validate();
    return b.vdd * b.i_bias;
}

double a1db_closed_form(const TransconductorParams& p) {
    p.validate();
    if (!(p.a3 < 0.0)) {
        throw Error(ErrorKind::no_compression, fmt::format("a3 = {} does not compress", p.a3));
    }
    const double drop = 1.0 - std::pow(10.0, -1.0 / 20.0);
    return std::sqrt(drop * (4.0 / 3.0) * p.gm / std::abs(p.a3));
}

double aiip3_closed_form(const TransconductorParams& p) {
    p.validate();
    if (p.a3 == 0.0) throw Error(ErrorKind::immeasurable_im3, "a3 = 0 has no third-order intercept");
    return std::sqrt((4.0 / 3.0) * p.gm / std::abs(p.a3));
}

SampledSignal lo_leakage_at_rf_port(const LeakageParams& l, const SampledSignal& v_lo) {
    l.validate();
    return v_lo.scaled(l.kappa, Unit::volt);
}

}  // namespace mixbench
