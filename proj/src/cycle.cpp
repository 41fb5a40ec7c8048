#include "mehpp/cycle.hpp"

#include "mehpp/error.hpp"
#include "mehpp/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace mehpp {

std::string_view to_string(WallContact w)
{
    switch (w) {
    case WallContact::Interior: return "interior";
    case WallContact::InnerContact: return "inner";
    case WallContact::OuterContact: return "outer";
    }
    return "?";
}

double contact_force(const CycleState& state, const MagnetoElasticParams& params)
{
    switch (state.wall) {
    case WallContact::OuterContact: return pressure_star(params.z_out_star, params) - state.p_applied;
    case WallContact::InnerContact: return state.p_applied - pressure_star(params.z_in_star, params);
    case WallContact::Interior: break;
    }
    throw InvalidStateError("contact_force: membrane is not in contact with a wall");
}

namespace {

// Minimum separation for a landing point to count as a different equilibrium.
constexpr double kSnapSeparation = 1e-9;
constexpr int kMaxTransitions = 64;

class Landscape {
public:
    explicit Landscape(const MagnetoElasticParams& params) : params_(params), branches_(stable_branches(params)) {}

    const MagnetoElasticParams& params() const { return params_; }

    const StableBranch* branch_at(double z) const
    {
        for (const auto& b : branches_) {
            if (z >= b.z_low && z <= b.z_high) return &b;
        }
        return nullptr;
    }

    const StableBranch* branch_ending_at(double z_wall) const
    {
        for (const auto& b : branches_) {
            if (b.z_low == z_wall || b.z_high == z_wall) return &b;
        }
        return nullptr;
    }

    double root_on(const StableBranch& b, double p) const
    {
        if (p >= b.p_high) return b.z_low;
        if (p <= b.p_low) return b.z_high;
        return roots::bisect([&](double z) { return pressure_star(z, params_) - p; }, b.z_low, b.z_high,
                             kRootTolerance);
    }

    /// Nearest stable equilibrium at pressure p strictly beyond z_from in the
    /// given direction (-1 inward, +1 outward), or the wall in that direction.
    CycleState land(double p, double z_from, int direction) const
    {
        std::optional<double> best;
        for (const auto& b : branches_) {
            if (p < b.p_low || p > b.p_high) continue;
            const double z = root_on(b, p);
            const double gap = (z - z_from) * direction;
            if (gap <= kSnapSeparation) continue;
            if (!best || gap < (*best - z_from) * direction) best = z;
        }
        if (best) return {*best, WallContact::Interior, p};
        if (direction < 0) return {params_.z_in_star, WallContact::InnerContact, p};
        return {params_.z_out_star, WallContact::OuterContact, p};
    }

private:
    MagnetoElasticParams params_;
    std::vector<StableBranch> branches_;
};

StepResult advance(const Landscape& land, const CycleState& start, double target)
{
    const auto& params = land.params();
    StepResult out;
    CycleState s = start;

    auto snap = [&](double p, double z_from, int direction) {
        CycleState next = land.land(p, z_from, direction);
        out.snaps.push_back({0.0, p, z_from, next.z_star});
        out.path.push_back(next);
        s = next;
    };

    for (int guard = 0; guard < kMaxTransitions; ++guard) {
        const double p = s.p_applied;
        switch (s.wall) {
        case WallContact::OuterContact: {
            const double peel = pressure_star(params.z_out_star, params);
            if (target <= peel) {
                s.p_applied = target;
                out.state = s;
                return out;
            }
            const double pd = std::max(p, peel);
            s.p_applied = pd;
            out.path.push_back(s);
            const StableBranch* b = land.branch_ending_at(params.z_out_star);
            if (b && pd <= b->p_high) {
                s = {params.z_out_star, WallContact::Interior, pd};
            } else {
                snap(pd, params.z_out_star, -1);
            }
            break;
        }
        case WallContact::InnerContact: {
            const double peel = pressure_star(params.z_in_star, params);
            if (target >= peel) {
                s.p_applied = target;
                out.state = s;
                return out;
            }
            const double pd = std::min(p, peel);
            s.p_applied = pd;
            out.path.push_back(s);
            const StableBranch* b = land.branch_ending_at(params.z_in_star);
            if (b && pd >= b->p_low) {
                s = {params.z_in_star, WallContact::Interior, pd};
            } else {
                snap(pd, params.z_in_star, +1);
            }
            break;
        }
        case WallContact::Interior: {
            const StableBranch* b = land.branch_at(s.z_star);
            if (!b) {
                // Off every stable branch: move with the net outward force.
                const double force = pressure_star(s.z_star, params) - p;
                const int direction = force < 0.0 || (force == 0.0 && target > p) ? -1 : +1;
                snap(p, s.z_star, direction);
                break;
            }
            if (target <= b->p_high && target >= b->p_low) {
                s = {land.root_on(*b, target), WallContact::Interior, target};
                out.state = s;
                return out;
            }
            if (target > b->p_high) {
                s = {b->z_low, WallContact::Interior, b->p_high};
                if (b->z_low == params.z_in_star) {
                    s.wall = WallContact::InnerContact;
                    out.path.push_back(s);
                } else {
                    out.path.push_back(s);
                    snap(b->p_high, b->z_low, -1);
                }
            } else {
                s = {b->z_high, WallContact::Interior, b->p_low};
                if (b->z_high == params.z_out_star) {
                    s.wall = WallContact::OuterContact;
                    out.path.push_back(s);
                } else {
                    out.path.push_back(s);
                    snap(b->p_low, b->z_high, +1);
                }
            }
            break;
        }
        }
    }
    throw NumericError("step_quasi_static: too many transitions in one pressure step", 0.0, target - s.p_applied);
}

} // namespace

CycleState initial_state(const MagnetoElasticParams& params)
{
    params.validate();
    const double peel = pressure_star(params.z_out_star, params);
    if (peel > 0.0) return {params.z_out_star, WallContact::OuterContact, 0.0};
    const Landscape land(params);
    const StableBranch* b = land.branch_ending_at(params.z_out_star);
    if (peel == 0.0 && b && b->z_high == params.z_out_star) return {params.z_out_star, WallContact::Interior, 0.0};
    return land.land(0.0, params.z_out_star, -1);
}

StepResult step_quasi_static_detailed(const CycleState& state, double p_next, const MagnetoElasticParams& params)
{
    return advance(Landscape(params), state, p_next);
}

CycleState step_quasi_static(const CycleState& state, double p_next, const MagnetoElasticParams& params)
{
    return step_quasi_static_detailed(state, p_next, params).state;
}

std::vector<SnapEvent> CycleTrace::snaps_in_cycle(std::size_t cycle) const
{
    std::vector<SnapEvent> out;
    if (cycle >= cycles()) return out;
    const double t0 = samples[cycle_starts[cycle]].t;
    const double t1 = samples[cycle_starts[cycle + 1]].t;
    for (const auto& e : snap_events) {
        const bool after_start = cycle == 0 ? e.t >= t0 : e.t > t0;
        if (after_start && e.t <= t1) out.push_back(e);
    }
    return out;
}

CycleTrace trace_cycle(const MagnetoElasticParams& params, const Waveform& waveform, int n_cycles,
                       int samples_per_cycle)
{
    params.validate();
    if (n_cycles < 1) throw ConfigError("n_cycles", "must be >= 1");
    if (samples_per_cycle < 8) throw ConfigError("samples_per_cycle", "must be >= 8");
    const double period = waveform.period();
    if (!(period > 0.0)) throw ConfigError("waveform.period", "must be > 0");

    const Landscape land(params);
    CycleTrace trace;
    trace.period = period;

    CycleState state = initial_state(params);
    double t_prev = 0.0;
    const long total = static_cast<long>(n_cycles) * samples_per_cycle;
    for (long k = 0; k <= total; ++k) {
        const double t = period * static_cast<double>(k) / samples_per_cycle;
        const double p_prev = state.p_applied;
        const double p_next = waveform.pressure_at(t);
        StepResult r = advance(land, state, p_next);

        const auto time_of = [&](double p) {
            if (p_next == p_prev) return t;
            const double frac = std::clamp((p - p_prev) / (p_next - p_prev), 0.0, 1.0);
            return t_prev + (t - t_prev) * frac;
        };
        for (const auto& s : r.path) trace.samples.push_back({time_of(s.p_applied), s, false});
        for (auto e : r.snaps) {
            e.t = time_of(e.p_applied);
            trace.snap_events.push_back(e);
        }
        if (k % samples_per_cycle == 0) trace.cycle_starts.push_back(trace.samples.size());
        trace.samples.push_back({t, r.state, true});
        state = r.state;
        t_prev = t;
    }
    return trace;
}

double loop_area(const CycleTrace& trace)
{
    if (trace.cycles() < 1) throw ConfigError("trace", "loop_area needs at least one full cycle");
    const std::size_t c = trace.cycles() - 1;
    const std::size_t first = trace.cycle_starts[c];
    const std::size_t last = trace.cycle_starts[c + 1];
    double twice = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const std::size_t j = (i == last) ? first : i + 1;
        const auto& a = trace.samples[i].state;
        const auto& b = trace.samples[j].state;
        twice += a.z_star * b.p_applied - b.z_star * a.p_applied;
    }
    return 0.5 * twice;
}

} // namespace mehpp
