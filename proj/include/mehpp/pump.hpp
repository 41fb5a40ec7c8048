#pragma once

#include "mehpp/cycle.hpp"
#include "mehpp/model.hpp"
#include "mehpp/waveform.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

// Lumped peristaltic pump: a row of membrane cells, each an overdamped version
// of the quasi-static membrane, joined by lubrication-type conductances
// g = c * h^3 and fed from two pressure reservoirs.
namespace mehpp {

struct CellSpec {
    MagnetoElasticParams params;
    double length = 1.0;
    bool operator==(const CellSpec&) const = default;
};

struct ChainConfig {
    std::vector<CellSpec> cells;
    double conductance = 1e5;     ///< c in g = c * h^3
    double leak_height = 0.01;    ///< floor on the hydraulic gap while in contact
    double mobility = 10.0;       ///< membrane rate per unit net pressure
    double reservoir_in = 0.0;
    double reservoir_out = 0.0;
    int max_iterations = 50;

    void validate() const;
    bool operator==(const ChainConfig&) const = default;
};

/// Preset chains. The MEH coefficient `a` is the value given to the magnet-
/// carrying cells; cells without magnets get 0.
inline constexpr const char* kChainPaper2Cell = "paper-2cell";
inline constexpr const char* kChainGraded5Cell = "graded-5cell";
inline constexpr const char* kChainSymmetric2Cell = "symmetric-2cell";

ChainConfig make_chain_preset(const std::string& name, const MagnetoElasticParams& model);

/// Reverse the cell order and swap the reservoirs.
ChainConfig mirror(const ChainConfig& config);

/// Total membrane-swept volume between all-open and all-closed.
double stroke_volume(const ChainConfig& config);

struct Cell {
    MagnetoElasticParams params;
    double length = 1.0;
    double z_star = 1.0;
    WallContact wall = WallContact::Interior;
};

struct CellChain {
    ChainConfig config;
    std::vector<Cell> cells;
    std::vector<double> conductances;  ///< N + 1 interfaces, inlet first
    double t = 0.0;
    double accumulated_flow = 0.0;
    double volume_conveyed = 0.0;

    double total_volume() const;
};

struct FlowRecord {
    double t = 0.0;
    double p_pneu = 0.0;
    double inflow = 0.0;   ///< positive into the tube
    double outflow = 0.0;  ///< positive out of the tube
    std::vector<double> cell_pressures;
    std::vector<double> openings;
    std::vector<WallContact> walls;
    double accumulated_flow = 0.0;
    double volume_conveyed = 0.0;
};

/// Hydraulic gap of one interface: the smaller free gap (z* - z_in*) of the
/// adjacent cells, floored at the leak height.
std::vector<double> interface_conductances(const ChainConfig& config, const std::vector<Cell>& cells);

CellChain build_chain(const ChainConfig& config);

/// Record describing the chain at rest at time chain.t (no membrane motion).
FlowRecord snapshot(const CellChain& chain, const Waveform& waveform);

/// Advance from chain.t to chain.t + dt. Rates in the returned record hold over
/// the whole step; the running integrals include it.
std::pair<CellChain, FlowRecord> step(const CellChain& chain, double dt, const Waveform& waveform);

struct PumpSeries {
    std::vector<FlowRecord> records;  ///< records[0] is the initial state at t = 0
    std::vector<double> lengths;
    double period = 0.0;
    double dt = 0.0;
};

PumpSeries run(const ChainConfig& config, const Waveform& waveform, double duration, double dt);

struct NetFlowMetrics {
    std::vector<double> t;
    std::vector<double> accumulated_flow;
    std::vector<double> volume_conveyed;
    std::vector<double> conveyed_per_cycle;  ///< one entry per full cycle
    double net_volume_per_cycle = 0.0;       ///< conveyed volume over the last full cycle
};

/// Recomputes both running integrals from the recorded rates.
NetFlowMetrics net_flow_metrics(const PumpSeries& series);

struct CellCycleEvents {
    std::size_t cycle = 0;
    std::optional<double> closure_time;
    std::optional<double> detach_time;
};

/// Per cell, per full or partial cycle: first entry into and first exit from
/// inner-wall contact.
std::vector<std::vector<CellCycleEvents>> event_times(const PumpSeries& series);

/// |integral(inflow - outflow) - (V(T) - V(0))| over the whole series.
double mass_balance_error(const PumpSeries& series);

/// Largest total chain volume seen in the series.
double max_total_volume(const PumpSeries& series);

struct FlowSigns {
    bool inflow_negative_while_pressurized = false;
    bool outflow_negative_while_depressurized = false;
};

/// Evaluated over the last full cycle; pressurized means p_pneu > 0.
FlowSigns flow_signs(const PumpSeries& series);

} // namespace mehpp
