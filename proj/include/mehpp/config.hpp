#pragma once

#include "mehpp/model.hpp"
#include "mehpp/pump.hpp"
#include "mehpp/waveform.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mehpp {

struct WaveformSpec {
    /// paper-fsi, square-500ms, square (period + ramp_fraction) or knots.
    std::string kind = std::string(kPresetPaperFsi);
    double p_high = 7.0;
    double p_low = -1.0;
    double period = 1.0;
    double ramp_fraction = 0.0;
    std::vector<Knot> knots;

    Waveform build() const;
    bool operator==(const WaveformSpec&) const = default;
};

struct CellCoefficients {
    double a_mo = 0.0;
    double a_mi = 0.0;
    double length = 1.0;
    bool operator==(const CellCoefficients&) const = default;
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;
    bool operator==(const SweepAxis&) const = default;
};

enum class SweepMetric { NetVolumePerCycle, LoopArea, CriticalMargin };

std::string_view to_string(SweepMetric m);

struct SweepSpec {
    std::vector<SweepAxis> axes;
    SweepMetric metric = SweepMetric::LoopArea;
    long max_points = 10000;
    int threads = 0;  ///< 0 = hardware concurrency

    void validate() const;
    long grid_size() const;
    bool operator==(const SweepSpec&) const = default;
};

/// Names accepted as sweep axes.
const std::vector<std::string>& sweep_axis_names();

struct RunConfig {
    // Exactly one parameter source: `dimensional` when set, otherwise `model`.
    MagnetoElasticParams model = MagnetoElasticParams::symmetric(0.1);
    std::optional<DimensionalParams> dimensional;

    std::vector<double> analyze_a_values;  ///< empty: analyse the model itself
    int profile_samples = 1000;

    int cycles = 3;
    int samples_per_cycle = kDefaultSamplesPerCycle;

    std::string chain_preset = kChainPaper2Cell;  ///< ignored when `cells` is non-empty
    std::vector<CellCoefficients> cells;
    double conductance = 1e5;
    double leak_height = 0.01;
    double mobility = 10.0;
    double reservoir_in = 0.0;
    double reservoir_out = 0.0;
    int max_iterations = 50;

    WaveformSpec waveform;

    double dt = 1e-4;
    std::optional<double> duration;  ///< default: 3 waveform periods
    int scan_intervals = kScanIntervals;

    std::optional<SweepSpec> sweep;

    std::string out_dir = "out";
    bool svg = false;
    int csv_stride = 10;

    /// Dimensionless parameters in force (converted from `dimensional` if set).
    MagnetoElasticParams resolved_model() const;
    ChainConfig resolved_chain() const;
    Waveform resolved_waveform() const { return waveform.build(); }
    double resolved_duration() const;

    /// Checks every cross-field invariant; throws ConfigError.
    void validate() const;

    /// Returns a copy with one sweep axis applied.
    RunConfig with_axis(const std::string& name, double value) const;

    bool operator==(const RunConfig&) const = default;
};

/// Parses the YAML configuration format. Errors carry "line N: field".
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Canonical YAML form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

} // namespace mehpp
