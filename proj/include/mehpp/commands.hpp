#pragma once

#include "mehpp/config.hpp"
#include "mehpp/cycle.hpp"
#include "mehpp/model.hpp"
#include "mehpp/pump.hpp"

#include <filesystem>
#include <string>
#include <vector>

// The four CLI commands. Each computes its result from a validated RunConfig,
// writes its files under `out_dir` and returns the result for callers that
// want the numbers directly.

namespace mehpp {

struct AnalyzeEntry {
    MagnetoElasticParams params;
    std::vector<StationaryPoint> stationary;
    bool hysteretic() const { return !stationary.empty(); }
};

struct AnalyzeResult {
    double a_crit = 0.0;
    std::vector<AnalyzeEntry> entries;
};

/// profiles.csv, stationary_points.csv, regimes.csv, critical.csv and
/// optionally profiles.svg.
AnalyzeResult cmd_analyze(const RunConfig& config, const std::filesystem::path& out_dir, bool svg);

struct CycleResult {
    CycleTrace trace;
    double loop_area = 0.0;
    std::size_t snaps_last_cycle = 0;
    /// |z*| change between the last two cycle boundaries; 0 for one cycle.
    double boundary_drift = 0.0;
};

/// trace.csv, snaps.csv, summary.csv and optionally loop.svg.
CycleResult cmd_cycle(const RunConfig& config, const std::filesystem::path& out_dir, bool svg);

struct PumpResult {
    PumpSeries series;
    NetFlowMetrics metrics;
    std::vector<std::vector<CellCycleEvents>> events;
    FlowSigns signs;
    double mass_balance_error = 0.0;
    double max_total_volume = 0.0;
    double stroke_volume = 0.0;
};

/// timeseries.csv, events.csv, cycles.csv, metrics.csv and optionally
/// flow.svg and volume.svg.
PumpResult cmd_pump(const RunConfig& config, const std::filesystem::path& out_dir, bool svg);

struct SweepResult {
    std::vector<std::string> axes;
    std::vector<std::vector<double>> points;  ///< lexicographic, first axis slowest
    std::vector<double> values;
};

/// Metric for one configuration (the sweep's per-point evaluation).
double evaluate_metric(const RunConfig& config, SweepMetric metric);

/// Cartesian product of the sweep axes evaluated in parallel; rows are written
/// to sweep.csv in lexicographic order.
SweepResult cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir);

} // namespace mehpp
