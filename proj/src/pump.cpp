#include "mehpp/pump.hpp"

#include "mehpp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mehpp {

void ChainConfig::validate() const
{
    if (cells.size() < 2) throw ConfigError("chain.cells", "at least 2 cells are required");
    if (!(std::isfinite(conductance) && conductance > 0.0)) throw ConfigError("chain.conductance", "must be > 0");
    if (!(std::isfinite(mobility) && mobility > 0.0)) throw ConfigError("chain.mobility", "must be > 0");
    if (!std::isfinite(reservoir_in)) throw ConfigError("chain.reservoir_in", "must be finite");
    if (!std::isfinite(reservoir_out)) throw ConfigError("chain.reservoir_out", "must be finite");
    if (max_iterations < 1) throw ConfigError("chain.max_iterations", "must be >= 1");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string field = "chain.cells[" + std::to_string(i) + "]";
        try {
            cells[i].params.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(field + "." + e.locus(), "invalid cell parameters");
        }
        if (!(std::isfinite(cells[i].length) && cells[i].length > 0.0)) {
            throw ConfigError(field + ".length", "must be > 0");
        }
        if (!(leak_height > 0.0 && leak_height < cells[i].params.z_in_star)) {
            throw ConfigError("chain.leak_height", "must satisfy 0 < leak_height < z_in_star");
        }
    }
}

ChainConfig make_chain_preset(const std::string& name, const MagnetoElasticParams& model)
{
    auto cell = [&](double a_scale) {
        CellSpec c;
        c.params = model;
        c.params.a_mo = model.a_mo * a_scale;
        c.params.a_mi = model.a_mi * a_scale;
        return c;
    };
    ChainConfig cfg;
    if (name == kChainPaper2Cell) {
        cfg.cells = {cell(0.0), cell(1.0)};
    } else if (name == kChainSymmetric2Cell) {
        cfg.cells = {cell(0.0), cell(0.0)};
    } else if (name == kChainGraded5Cell) {
        for (int i = 0; i < 5; ++i) cfg.cells.push_back(cell(i / 4.0));
    } else {
        throw ConfigError("chain.preset", "unknown preset '" + name + "'");
    }
    return cfg;
}

ChainConfig mirror(const ChainConfig& config)
{
    ChainConfig out = config;
    std::reverse(out.cells.begin(), out.cells.end());
    std::swap(out.reservoir_in, out.reservoir_out);
    return out;
}

double stroke_volume(const ChainConfig& config)
{
    double v = 0.0;
    for (const auto& c : config.cells) v += c.length * (c.params.z_out_star - c.params.z_in_star);
    return v;
}

double CellChain::total_volume() const
{
    double v = 0.0;
    for (const auto& c : cells) v += c.length * c.z_star;
    return v;
}

std::vector<double> interface_conductances(const ChainConfig& config, const std::vector<Cell>& cells)
{
    const std::size_t n = cells.size();
    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i) gap[i] = std::max(cells[i].z_star - cells[i].params.z_in_star, 0.0);

    std::vector<double> g(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        double h = 0.0;
        if (j == 0) h = gap[0];
        else if (j == n) h = gap[n - 1];
        else h = std::min(gap[j - 1], gap[j]);
        h = std::max(h, config.leak_height);
        g[j] = config.conductance * h * h * h;
    }
    return g;
}

CellChain build_chain(const ChainConfig& config)
{
    config.validate();
    CellChain chain;
    chain.config = config;
    for (const auto& spec : config.cells) {
        const CycleState s = initial_state(spec.params);
        chain.cells.push_back({spec.params, spec.length, s.z_star, s.wall});
    }
    chain.conductances = interface_conductances(config, chain.cells);
    return chain;
}

namespace {

enum class Motion { Free, Latched, LandInner, LandOuter };

// Thomas algorithm for -lower[i] x[i-1] + diag[i] x[i] - upper[i] x[i+1] = rhs[i].
std::vector<double> solve_tridiagonal(const std::vector<double>& lower, std::vector<double> diag,
                                      const std::vector<double>& upper, std::vector<double> rhs)
{
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] += w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] + upper[i] * x[i + 1]) / diag[i];
    return x;
}

struct NetworkSolution {
    std::vector<double> pressures;
    std::vector<double> rates;  ///< dz*/dt per cell
    double inflow = 0.0;
    double outflow = 0.0;
};

// Solve the node balances for fixed motion modes. `mobility_eff` and `drive`
// give the free-cell rate as mobility_eff * (drive + P).
NetworkSolution solve_network(const CellChain& chain, const std::vector<double>& g, const std::vector<Motion>& modes,
                              const std::vector<double>& mobility_eff, const std::vector<double>& drive, double dt)
{
    const auto& cfg = chain.config;
    const std::size_t n = chain.cells.size();
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    std::vector<double> prescribed(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = chain.cells[i];
        lower[i] = g[i];
        upper[i] = g[i + 1];
        diag[i] = g[i] + g[i + 1];
        if (i == 0) rhs[i] += g[0] * cfg.reservoir_in;
        if (i == n - 1) rhs[i] += g[n] * cfg.reservoir_out;
        switch (modes[i]) {
        case Motion::Free:
            diag[i] += c.length * mobility_eff[i];
            rhs[i] -= c.length * mobility_eff[i] * drive[i];
            break;
        case Motion::LandInner:
            prescribed[i] = (c.params.z_in_star - c.z_star) / dt;
            rhs[i] -= c.length * prescribed[i];
            break;
        case Motion::LandOuter:
            prescribed[i] = (c.params.z_out_star - c.z_star) / dt;
            rhs[i] -= c.length * prescribed[i];
            break;
        case Motion::Latched: break;
        }
    }
    NetworkSolution sol;
    sol.pressures = solve_tridiagonal(lower, diag, upper, rhs);
    sol.rates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sol.rates[i] = modes[i] == Motion::Free ? mobility_eff[i] * (drive[i] + sol.pressures[i]) : prescribed[i];
    }
    sol.inflow = g[0] * (cfg.reservoir_in - sol.pressures.front());
    sol.outflow = g[n] * (sol.pressures.back() - cfg.reservoir_out);
    return sol;
}

FlowRecord make_record(const CellChain& chain, double p_pneu, const NetworkSolution& sol)
{
    FlowRecord r;
    r.t = chain.t;
    r.p_pneu = p_pneu;
    r.inflow = sol.inflow;
    r.outflow = sol.outflow;
    r.cell_pressures = sol.pressures;
    for (const auto& c : chain.cells) {
        r.openings.push_back(c.z_star);
        r.walls.push_back(c.wall);
    }
    r.accumulated_flow = chain.accumulated_flow;
    r.volume_conveyed = chain.volume_conveyed;
    return r;
}

} // namespace

FlowRecord snapshot(const CellChain& chain, const Waveform& waveform)
{
    const std::size_t n = chain.cells.size();
    const std::vector<Motion> modes(n, Motion::Latched);
    const std::vector<double> zeros(n, 0.0);
    const auto sol = solve_network(chain, chain.conductances, modes, zeros, zeros, 1.0);
    return make_record(chain, waveform.pressure_at(chain.t), sol);
}

std::pair<CellChain, FlowRecord> step(const CellChain& chain, double dt, const Waveform& waveform)
{
    if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
    const auto& cfg = chain.config;
    const std::size_t n = chain.cells.size();
    const double t_next = chain.t + dt;
    const double p = waveform.pressure_at(t_next);
    const std::vector<double> g = interface_conductances(cfg, chain.cells);

    // Free-cell rate, linearised implicitly on the stable (negative slope) part:
    //   dz/dt = m * (p*(z) + P - p),  m = mu / (1 - dt mu min(slope, 0))
    std::vector<double> m(n), drive(n);
    std::vector<Motion> modes(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = chain.cells[i];
        const double slope = pressure_star_slope(c.z_star, c.params);
        m[i] = cfg.mobility / (1.0 - dt * cfg.mobility * std::min(slope, 0.0));
        drive[i] = pressure_star(c.z_star, c.params) - p;
        modes[i] = c.wall == WallContact::Interior ? Motion::Free : Motion::Latched;
    }

    NetworkSolution sol;
    // Residual reported on failure: number of cells whose contact mode was
    // still switching in the last iteration.
    double residual = 0.0;
    bool converged = false;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        sol = solve_network(chain, g, modes, m, drive, dt);
        bool changed = false;
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& c = chain.cells[i];
            const double P = sol.pressures[i];
            Motion next = modes[i];
            if (modes[i] == Motion::Latched) {
                // Latch holds while the wall still has to push back (cycle peel rule).
                const CycleState contact{c.z_star, c.wall, p - P};
                if (contact_force(contact, c.params) < 0.0) next = Motion::Free;
            } else {
                const double z_free = c.z_star + dt * m[i] * (drive[i] + P);
                if (z_free < c.params.z_in_star) next = Motion::LandInner;
                else if (z_free > c.params.z_out_star) next = Motion::LandOuter;
                else next = Motion::Free;
            }
            if (next != modes[i]) {
                modes[i] = next;
                changed = true;
                residual += 1.0;
            }
        }
        // Unchanged modes reproduce the same linear solve, so the pressures are final.
        if (!changed) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericError("pump step: contact modes still switching after max_iterations", t_next, residual);

    CellChain next = chain;
    next.t = t_next;
    for (std::size_t i = 0; i < n; ++i) {
        auto& c = next.cells[i];
        switch (modes[i]) {
        case Motion::Latched: break;
        case Motion::Free:
            c.z_star += dt * sol.rates[i];
            c.wall = WallContact::Interior;
            break;
        case Motion::LandInner:
            c.z_star = c.params.z_in_star;
            c.wall = WallContact::InnerContact;
            break;
        case Motion::LandOuter:
            c.z_star = c.params.z_out_star;
            c.wall = WallContact::OuterContact;
            break;
        }
    }
    next.conductances = interface_conductances(cfg, next.cells);
    next.accumulated_flow += dt * 0.5 * (sol.inflow + sol.outflow);
    next.volume_conveyed += dt * sol.outflow;

    FlowRecord rec = make_record(next, p, sol);
    return {std::move(next), std::move(rec)};
}

PumpSeries run(const ChainConfig& config, const Waveform& waveform, double duration, double dt)
{
    const double period = waveform.period();
    if (!(duration >= period)) throw ConfigError("duration", "must cover at least one waveform period");
    if (!(dt > 0.0 && dt <= period / 1000.0 * (1.0 + 1e-12))) {
        throw ConfigError("dt", "must satisfy 0 < dt <= period/1000");
    }
    CellChain chain = build_chain(config);

    PumpSeries series;
    series.period = period;
    series.dt = dt;
    for (const auto& c : chain.cells) series.lengths.push_back(c.length);

    const long steps = std::lround(duration / dt);
    series.records.reserve(steps + 1);
    series.records.push_back(snapshot(chain, waveform));
    for (long k = 1; k <= steps; ++k) {
        auto [next, rec] = step(chain, dt, waveform);
        // Re-anchor the clock to the grid so long runs do not drift.
        next.t = static_cast<double>(k) * dt;
        rec.t = next.t;
        chain = std::move(next);
        series.records.push_back(std::move(rec));
    }
    return series;
}

namespace {

double total_volume(const PumpSeries& s, const FlowRecord& r)
{
    double v = 0.0;
    for (std::size_t i = 0; i < r.openings.size(); ++i) v += s.lengths[i] * r.openings[i];
    return v;
}

// Cycle owning a record time: (k T, (k+1) T] belongs to cycle k.
std::size_t cycle_of(double t, double period)
{
    if (t <= 0.0) return 0;
    const double c = std::ceil(t / period - 1e-9);
    return c < 1.0 ? 0 : static_cast<std::size_t>(c) - 1;
}

std::size_t full_cycles(const PumpSeries& s)
{
    if (s.records.empty()) return 0;
    return static_cast<std::size_t>(std::floor(s.records.back().t / s.period + 1e-9));
}

// Piecewise-linear interpolation of a cumulative quantity at time t.
double value_at(const std::vector<double>& ts, const std::vector<double>& vs, double t)
{
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return vs.front();
    if (it == ts.end()) return vs.back();
    const std::size_t j = static_cast<std::size_t>(it - ts.begin());
    const double span = ts[j] - ts[j - 1];
    if (span <= 0.0) return vs[j];
    return vs[j - 1] + (vs[j] - vs[j - 1]) * (t - ts[j - 1]) / span;
}

} // namespace

NetFlowMetrics net_flow_metrics(const PumpSeries& series)
{
    const std::size_t cycles = full_cycles(series);
    if (cycles < 1) throw ConfigError("series", "net_flow_metrics needs at least one full cycle");

    NetFlowMetrics m;
    double acc = 0.0;
    double conv = 0.0;
    for (std::size_t k = 0; k < series.records.size(); ++k) {
        const auto& r = series.records[k];
        if (k > 0) {
            // Recorded rates are constant over (t[k-1], t[k]].
            const double dt = r.t - series.records[k - 1].t;
            acc += dt * 0.5 * (r.inflow + r.outflow);
            conv += dt * r.outflow;
        }
        m.t.push_back(r.t);
        m.accumulated_flow.push_back(acc);
        m.volume_conveyed.push_back(conv);
    }
    for (std::size_t c = 0; c < cycles; ++c) {
        const double a = value_at(m.t, m.volume_conveyed, c * series.period);
        const double b = value_at(m.t, m.volume_conveyed, (c + 1) * series.period);
        m.conveyed_per_cycle.push_back(b - a);
    }
    m.net_volume_per_cycle = m.conveyed_per_cycle.back();
    return m;
}

std::vector<std::vector<CellCycleEvents>> event_times(const PumpSeries& series)
{
    std::vector<std::vector<CellCycleEvents>> out;
    if (series.records.empty()) return out;
    const std::size_t n = series.records.front().walls.size();
    const std::size_t cycles = cycle_of(series.records.back().t, series.period) + 1;
    out.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        out[i].resize(cycles);
        for (std::size_t c = 0; c < cycles; ++c) out[i][c].cycle = c;
        for (std::size_t k = 1; k < series.records.size(); ++k) {
            const bool was = series.records[k - 1].walls[i] == WallContact::InnerContact;
            const bool is = series.records[k].walls[i] == WallContact::InnerContact;
            auto& ev = out[i][cycle_of(series.records[k].t, series.period)];
            if (!was && is && !ev.closure_time) ev.closure_time = series.records[k].t;
            if (was && !is && !ev.detach_time) ev.detach_time = series.records[k].t;
        }
    }
    return out;
}

double mass_balance_error(const PumpSeries& series)
{
    if (series.records.size() < 2) return 0.0;
    double net_in = 0.0;
    for (std::size_t k = 1; k < series.records.size(); ++k) {
        const auto& r = series.records[k];
        net_in += (r.t - series.records[k - 1].t) * (r.inflow - r.outflow);
    }
    const double dv = total_volume(series, series.records.back()) - total_volume(series, series.records.front());
    return std::abs(net_in - dv);
}

double max_total_volume(const PumpSeries& series)
{
    double v = 0.0;
    for (const auto& r : series.records) v = std::max(v, total_volume(series, r));
    return v;
}

FlowSigns flow_signs(const PumpSeries& series)
{
    FlowSigns s;
    const std::size_t cycles = full_cycles(series);
    if (cycles < 1) return s;
    const std::size_t last = cycles - 1;
    for (const auto& r : series.records) {
        if (r.t <= 0.0 || cycle_of(r.t, series.period) != last) continue;
        if (r.p_pneu > 0.0 && r.inflow < 0.0) s.inflow_negative_while_pressurized = true;
        if (r.p_pneu < 0.0 && r.outflow < 0.0) s.outflow_negative_while_depressurized = true;
    }
    return s;
}

} // namespace mehpp
