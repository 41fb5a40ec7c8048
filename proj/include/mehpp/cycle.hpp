#pragma once

#include "mehpp/model.hpp"
#include "mehpp/waveform.hpp"

#include <string_view>
#include <vector>

namespace mehpp {

enum class WallContact { Interior, InnerContact, OuterContact };

std::string_view to_string(WallContact w);

struct CycleState {
    double z_star = 1.0;
    WallContact wall = WallContact::Interior;
    double p_applied = 0.0;

    bool operator==(const CycleState&) const = default;
};

/// Normal force the wall exerts on a membrane in contact. Outer contact:
/// p*(z_out*) - p; inner contact: p - p*(z_in*). Throws InvalidStateError for
/// an interior state.
double contact_force(const CycleState& state, const MagnetoElasticParams& params);

/// Discontinuous jump between equilibria at constant applied pressure.
struct SnapEvent {
    double t = 0.0;
    double p_applied = 0.0;
    double z_from = 0.0;
    double z_to = 0.0;
};

/// Outcome of a quasi-static pressure increment. `path` lists the states at
/// which the trajectory changes character between the two pressures (wall
/// arrival, peel, snap take-off and landing) in the order they occur.
struct StepResult {
    CycleState state;
    std::vector<CycleState> path;
    std::vector<SnapEvent> snaps;
};

/// Equilibrium reached from rest at applied pressure zero: latched to the outer
/// wall when p*(z_out*) > 0, otherwise the first equilibrium met moving inward
/// from the outer wall.
CycleState initial_state(const MagnetoElasticParams& params);

/// Quasi-static update as the applied pressure moves linearly from
/// state.p_applied to p_next. Wall peel and fold points are located exactly on
/// that pressure path; snaps happen at the threshold pressure.
StepResult step_quasi_static_detailed(const CycleState& state, double p_next, const MagnetoElasticParams& params);

CycleState step_quasi_static(const CycleState& state, double p_next, const MagnetoElasticParams& params);

struct TraceSample {
    double t;
    CycleState state;
    bool on_grid;  ///< false for interpolated event points inserted between grid samples
};

struct CycleTrace {
    std::vector<TraceSample> samples;
    std::vector<SnapEvent> snap_events;
    /// Index into samples of each cycle boundary (n_cycles + 1 entries).
    std::vector<std::size_t> cycle_starts;
    double period = 0.0;

    std::size_t cycles() const { return cycle_starts.empty() ? 0 : cycle_starts.size() - 1; }
    /// Snap events with cycle_start < t <= cycle_end for the given cycle.
    std::vector<SnapEvent> snaps_in_cycle(std::size_t cycle) const;
};

inline constexpr int kDefaultSamplesPerCycle = 512;

CycleTrace trace_cycle(const MagnetoElasticParams& params, const Waveform& waveform, int n_cycles,
                       int samples_per_cycle = kDefaultSamplesPerCycle);

/// Signed shoelace area of the (z*, p*) loop of the last cycle. Positive when
/// the loop is traversed counter-clockwise, i.e. net work done on the membrane.
double loop_area(const CycleTrace& trace);

} // namespace mehpp
