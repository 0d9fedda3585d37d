#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixbench/error.hpp"
#include "mixbench/mixer.hpp"

namespace mixbench {

/// Isolation reported when no LO ray reaches the RF port at all.
inline constexpr double kBelowFloorDb = -300.0;

/// Absolute floor under which an IM3 ray counts as absent.
inline constexpr double kIm3FloorDbm = -200.0;

struct GainSweepPoint {
    double input_power = 0.0;   // dBm
    double output_power = 0.0;  // dBm, IF ray
    double gain = 0.0;          // dB
};

struct SweepSpec {
    double start = -40.0;  // dBm
    double stop = 0.0;     // dBm
    double step = 0.5;     // dB

    std::vector<double> points() const;
    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct P1dbResult {
    double p1db = 0.0;               // dBm, input referred
    double small_signal_gain = 0.0;  // dB, at the lowest sweep power
    std::vector<GainSweepPoint> sweep;
};

class CompressionNotFound : public Error {
public:
    CompressionNotFound(const std::string& message, std::vector<GainSweepPoint> sweep)
        : Error(ErrorKind::compression_not_found, message), sweep_(std::move(sweep)) {}

    const std::vector<GainSweepPoint>& sweep() const noexcept { return sweep_; }

private:
    std::vector<GainSweepPoint> sweep_;
};

struct TwoToneResult {
    double per_tone_power = 0.0;  // dBm
    double p_fund = 0.0;          // dBm at f1 - f_LO
    double p_im3_lower = 0.0;     // dBm at |2f1 - f2 - f_LO|
    double p_im3_upper = 0.0;     // dBm at |2f2 - f1 - f_LO|
    double p_im3 = 0.0;           // max of the two
    double delta = 0.0;           // p_fund - p_im3
    double iip3 = 0.0;            // delta/2 + per_tone_power
};

struct NoiseFigureConfig {
    std::size_t segments = 32;
    double band_width = 180e6;                 // Hz, both ports
    std::optional<double> input_center;        // default: first RF tone
    std::optional<double> output_center;       // default: IF
    double max_relative_spread = 0.10;
    friend bool operator==(const NoiseFigureConfig&, const NoiseFigureConfig&) = default;
};

struct NoiseFigureResult {
    double noise_figure = 0.0;  // dB
    double n_rf = 0.0;          // V/√Hz at the RF port
    double n_if = 0.0;          // V/√Hz at the output
    double gain = 0.0;          // dB, voltage gain input_center -> output_center
    double relative_spread = 0.0;
    std::optional<std::string> warning;
};

double measure_conversion_gain(const Scenario& s);

P1dbResult measure_p1db(const Scenario& s, const SweepSpec& sweep = {});

/// Two-tone scenario at `per_tone_power` each; IF-side IM3 rays are read.
TwoToneResult measure_iip3(const Scenario& s, double per_tone_power);

/// Copy of `s` stimulated by f_RF and f_RF + spacing at `per_tone_power` each.
Scenario make_two_tone(const Scenario& s, double spacing, double per_tone_power);

/// Input intercept from the fundamental/IM3 gap.
double iip3_from_delta(double delta_db, double input_power_dbm);

double measure_isolation(const Scenario& s);

NoiseFigureResult measure_noise_figure(const Scenario& s, const NoiseFigureConfig& cfg = {});

/// Power-ratio reading of F = N_IF / (N_RF · G): densities in V/√Hz,
/// conversion gain as a voltage ratio in dB.
double noise_figure_from_densities(double n_if, double n_rf, double gain_db);

/// One row of the published comparison table.
struct ReferenceRow {
    std::string_view reference;
    double technology_um;
    double rf_ghz;
    std::optional<double> conversion_gain_db;
    std::optional<double> noise_figure_db;
    std::optional<double> p1db_dbm;
    std::optional<double> iip3_dbm;
    std::optional<double> power_mw;
};

/// The published comparison table; the last row is the reference circuit.
const std::array<ReferenceRow, 5>& reference_table();
const ReferenceRow& reference_circuit();

/// A measured value or the reason it could not be measured.
struct Measured {
    std::optional<double> value;
    std::optional<ErrorKind> error_kind;
    std::string error;
    std::optional<std::string> warning;

    bool ok() const noexcept { return value.has_value(); }
    static Measured of(double v) { return Measured{v, std::nullopt, {}, std::nullopt}; }
    static Measured failed(ErrorKind kind, std::string message) {
        return Measured{std::nullopt, kind, std::move(message), std::nullopt};
    }
};

struct ReportConfig {
    bool conversion_gain = true;
    bool p1db = true;
    bool iip3 = true;
    bool isolation = true;
    bool noise_figure = true;
    bool power = true;

    SweepSpec sweep;
    double two_tone_spacing = 25e6;   // Hz
    double two_tone_power = -40.0;    // dBm per tone
    NoiseFigureConfig nf;
    SimGrid nf_grid{54e9, 3'456'000};
    double nf_input_density = 1e-9;   // V/√Hz, used when the scenario itself is noiseless

    friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct MetricsReport {
    double analytic_gain = 0.0;  // dB
    Measured conversion_gain;    // dB
    Measured p1db;               // dBm
    Measured iip3;               // dBm
    Measured isolation;          // dB
    Measured noise_figure;       // dB
    Measured power_consumption;  // W

    std::optional<P1dbResult> p1db_detail;
    std::optional<TwoToneResult> iip3_detail;
    std::optional<NoiseFigureResult> nf_detail;

    ReferenceRow reference = reference_circuit();
};

/// Copy of `s` on the noise grid with white input noise; the IF filter is dropped.
Scenario make_noise_scenario(const Scenario& s, const ReportConfig& cfg);

MetricsReport build_report(const Scenario& s, const ReportConfig& cfg = {});

}  // namespace mixbench
