#include "mehpp/commands.hpp"

#include "mehpp/error.hpp"
#include "mehpp/output.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace mehpp {

namespace fs = std::filesystem;

namespace {

std::string stationary_kind(StationaryKind k)
{
    return k == StationaryKind::LocalMaximum ? "local_maximum" : "local_minimum";
}

std::string optional_time(const std::optional<double>& t)
{
    return t ? format_number(*t) : std::string();
}

} // namespace

AnalyzeResult cmd_analyze(const RunConfig& config, const fs::path& out_dir, bool svg)
{
    const MagnetoElasticParams base = config.resolved_model();
    AnalyzeResult result;
    result.a_crit = critical_coefficient(base.z1_star, base.z_in_star);

    std::vector<MagnetoElasticParams> models;
    if (config.analyze_a_values.empty()) {
        models.push_back(base);
    } else {
        for (double a : config.analyze_a_values) {
            MagnetoElasticParams m = base;
            m.a_mo = m.a_mi = a;
            models.push_back(m);
        }
    }
    for (const auto& m : models) {
        m.validate();
        result.entries.push_back({m, stationary_points(m, config.scan_intervals)});
    }

    ensure_directory(out_dir);
    const double z_lo = base.z_in_star;
    const double z_hi = base.z1_star - 0.02 * (base.z1_star - base.z_in_star);
    const int n = config.profile_samples;

    PlotSpec plot{"Equilibrium pressure profiles", "z*", "p*", {}};
    CsvWriter profiles(out_dir / "profiles.csv", {"a_mo", "a_mi", "z_star", "p_star"});
    for (const auto& e : result.entries) {
        PlotSeries series{"a_mo=" + format_number(e.params.a_mo) + " a_mi=" + format_number(e.params.a_mi), {}, {}};
        for (int i = 0; i < n; ++i) {
            const double z = z_lo + (z_hi - z_lo) * i / (n - 1);
            const double p = pressure_star(z, e.params);
            profiles << e.params.a_mo << e.params.a_mi << z << p;
            profiles.end_row();
            series.x.push_back(z);
            series.y.push_back(p);
        }
        plot.series.push_back(std::move(series));
    }
    profiles.close();

    CsvWriter points(out_dir / "stationary_points.csv", {"a_mo", "a_mi", "z_star", "p_star", "kind"});
    for (const auto& e : result.entries) {
        for (const auto& sp : e.stationary) {
            points << e.params.a_mo << e.params.a_mi << sp.z_star << sp.p_star << stationary_kind(sp.kind);
            points.end_row();
        }
    }
    points.close();

    CsvWriter regimes(out_dir / "regimes.csv", {"a_mo", "a_mi", "stationary_count", "regime"});
    for (const auto& e : result.entries) {
        regimes << e.params.a_mo << e.params.a_mi << e.stationary.size()
                << (e.hysteretic() ? "hysteretic" : "monotonic");
        regimes.end_row();
    }
    regimes.close();

    CsvWriter critical(out_dir / "critical.csv", {"z1_star", "z_in_star", "a_crit"});
    critical << base.z1_star << base.z_in_star << result.a_crit;
    critical.end_row();
    critical.close();

    if (svg) {
        // Near the outer magnet p* grows without bound; clip the plot so the
        // interesting region stays visible.
        for (auto& s : plot.series) {
            for (auto& y : s.y) y = std::clamp(y, -2.0, 8.0);
        }
        write_text(out_dir / "profiles.svg", render_svg(plot));
    }
    return result;
}

CycleResult cmd_cycle(const RunConfig& config, const fs::path& out_dir, bool svg)
{
    const MagnetoElasticParams params = config.resolved_model();
    const Waveform waveform = config.resolved_waveform();
    CycleResult result;
    result.trace = trace_cycle(params, waveform, config.cycles, config.samples_per_cycle);
    result.loop_area = loop_area(result.trace);
    const std::size_t last = result.trace.cycles() - 1;
    result.snaps_last_cycle = result.trace.snaps_in_cycle(last).size();
    if (result.trace.cycles() >= 2) {
        const auto& s = result.trace.samples;
        const auto& cs = result.trace.cycle_starts;
        result.boundary_drift = std::abs(s[cs[cs.size() - 1]].state.z_star - s[cs[cs.size() - 2]].state.z_star);
    }

    ensure_directory(out_dir);
    CsvWriter trace(out_dir / "trace.csv", {"t", "p_applied", "z_star", "wall_state", "contact_force"});
    PlotSeries loop{"last cycle", {}, {}};
    for (std::size_t i = 0; i < result.trace.samples.size(); ++i) {
        const auto& smp = result.trace.samples[i];
        trace << smp.t << smp.state.p_applied << smp.state.z_star << std::string(to_string(smp.state.wall));
        if (smp.state.wall == WallContact::Interior) trace << std::string();
        else trace << contact_force(smp.state, params);
        trace.end_row();
        if (i >= result.trace.cycle_starts[last]) {
            loop.x.push_back(smp.state.z_star);
            loop.y.push_back(smp.state.p_applied);
        }
    }
    trace.close();

    CsvWriter snaps(out_dir / "snaps.csv", {"cycle", "t", "p_applied", "z_from", "z_to"});
    for (std::size_t c = 0; c < result.trace.cycles(); ++c) {
        for (const auto& ev : result.trace.snaps_in_cycle(c)) {
            snaps << c << ev.t << ev.p_applied << ev.z_from << ev.z_to;
            snaps.end_row();
        }
    }
    snaps.close();

    CsvWriter summary(out_dir / "summary.csv",
                      {"a_mo", "a_mi", "cycles", "loop_area", "snaps_last_cycle", "boundary_drift"});
    summary << params.a_mo << params.a_mi << config.cycles << result.loop_area << result.snaps_last_cycle
            << result.boundary_drift;
    summary.end_row();
    summary.close();

    if (svg) {
        write_text(out_dir / "loop.svg", render_svg({"Deformation path over one cycle", "z*", "p applied", {loop}}));
    }
    return result;
}

PumpResult cmd_pump(const RunConfig& config, const fs::path& out_dir, bool svg)
{
    const ChainConfig chain = config.resolved_chain();
    const Waveform waveform = config.resolved_waveform();
    PumpResult result;
    result.series = run(chain, waveform, config.resolved_duration(), config.dt);
    result.metrics = net_flow_metrics(result.series);
    result.events = event_times(result.series);
    result.signs = flow_signs(result.series);
    result.mass_balance_error = mass_balance_error(result.series);
    result.max_total_volume = max_total_volume(result.series);
    result.stroke_volume = stroke_volume(chain);

    ensure_directory(out_dir);
    const std::size_t n_cells = chain.cells.size();
    std::vector<std::string> header{"t", "p_pneu", "inflow", "outflow", "accumulated_flow", "volume_conveyed"};
    for (std::size_t i = 0; i < n_cells; ++i) {
        const std::string k = std::to_string(i);
        header.push_back("z_star_" + k);
        header.push_back("P_" + k);
        header.push_back("wall_" + k);
    }
    CsvWriter ts(out_dir / "timeseries.csv", header);
    PlotSeries in{"inflow", {}, {}}, out{"outflow", {}, {}};
    PlotSeries acc{"accumulated flow", {}, {}}, conv{"volume conveyed", {}, {}};
    const auto& recs = result.series.records;
    const std::size_t stride = static_cast<std::size_t>(config.csv_stride);
    for (std::size_t r = 0; r < recs.size(); ++r) {
        if (r % stride != 0 && r + 1 != recs.size()) continue;
        const auto& rec = recs[r];
        ts << rec.t << rec.p_pneu << rec.inflow << rec.outflow << rec.accumulated_flow << rec.volume_conveyed;
        for (std::size_t i = 0; i < n_cells; ++i) {
            ts << rec.openings[i] << rec.cell_pressures[i] << std::string(to_string(rec.walls[i]));
        }
        ts.end_row();
        in.x.push_back(rec.t);
        in.y.push_back(rec.inflow);
        out.x.push_back(rec.t);
        out.y.push_back(rec.outflow);
        acc.x.push_back(rec.t);
        acc.y.push_back(rec.accumulated_flow);
        conv.x.push_back(rec.t);
        conv.y.push_back(rec.volume_conveyed);
    }
    ts.close();

    CsvWriter ev(out_dir / "events.csv", {"cell", "cycle", "closure_time", "detach_time"});
    for (std::size_t i = 0; i < result.events.size(); ++i) {
        for (const auto& e : result.events[i]) {
            ev << i << e.cycle << optional_time(e.closure_time) << optional_time(e.detach_time);
            ev.end_row();
        }
    }
    ev.close();

    CsvWriter cyc(out_dir / "cycles.csv", {"cycle", "volume_conveyed"});
    for (std::size_t c = 0; c < result.metrics.conveyed_per_cycle.size(); ++c) {
        cyc << c << result.metrics.conveyed_per_cycle[c];
        cyc.end_row();
    }
    cyc.close();

    CsvWriter m(out_dir / "metrics.csv",
                {"net_volume_per_cycle", "stroke_volume", "full_cycles", "inflow_negative_while_pressurized",
                 "outflow_negative_while_depressurized", "mass_balance_error", "max_total_volume"});
    m << result.metrics.net_volume_per_cycle << result.stroke_volume << result.metrics.conveyed_per_cycle.size()
      << (result.signs.inflow_negative_while_pressurized ? 1 : 0)
      << (result.signs.outflow_negative_while_depressurized ? 1 : 0) << result.mass_balance_error
      << result.max_total_volume;
    m.end_row();
    m.close();

    if (svg) {
        write_text(out_dir / "flow.svg", render_svg({"Inlet and outlet flow rate", "t", "flow rate", {in, out}}));
        write_text(out_dir / "volume.svg", render_svg({"Running flow integrals", "t", "volume", {acc, conv}}));
    }
    return result;
}

double evaluate_metric(const RunConfig& config, SweepMetric metric)
{
    config.validate();
    switch (metric) {
    case SweepMetric::LoopArea: {
        const auto trace = trace_cycle(config.resolved_model(), config.resolved_waveform(), config.cycles,
                                       config.samples_per_cycle);
        return loop_area(trace);
    }
    case SweepMetric::NetVolumePerCycle: {
        const auto series =
            run(config.resolved_chain(), config.resolved_waveform(), config.resolved_duration(), config.dt);
        return net_flow_metrics(series).net_volume_per_cycle;
    }
    case SweepMetric::CriticalMargin: {
        const auto m = config.resolved_model();
        return critical_coefficient(m.z1_star, m.z_in_star) - std::max(m.a_mo, m.a_mi);
    }
    }
    return 0.0;
}

SweepResult cmd_sweep(const RunConfig& config, const fs::path& out_dir)
{
    if (!config.sweep) throw ConfigError("sweep", "the sweep command needs a sweep block");
    const SweepSpec& spec = *config.sweep;
    spec.validate();
    const long total = spec.grid_size();
    if (total > spec.max_points) {
        throw ConfigError("sweep.max_points", "grid has " + std::to_string(total) + " points, cap is " +
                                                  std::to_string(spec.max_points));
    }

    SweepResult result;
    for (const auto& ax : spec.axes) result.axes.push_back(ax.name);
    const std::size_t n = static_cast<std::size_t>(total);
    result.points.resize(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::vector<double> p(spec.axes.size());
        std::size_t rest = idx;
        for (std::size_t k = spec.axes.size(); k-- > 0;) {
            const auto& vals = spec.axes[k].values;
            p[k] = vals[rest % vals.size()];
            rest /= vals.size();
        }
        result.points[idx] = std::move(p);
    }

    result.values.assign(n, 0.0);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < n; idx = next++) {
            try {
                RunConfig c = config;
                for (std::size_t k = 0; k < spec.axes.size(); ++k) c = c.with_axis(spec.axes[k].name, result.points[idx][k]);
                result.values[idx] = evaluate_metric(c, spec.metric);
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };
    unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ensure_directory(out_dir);
    std::vector<std::string> header = result.axes;
    header.emplace_back(to_string(spec.metric));
    CsvWriter csv(out_dir / "sweep.csv", header);
    for (std::size_t idx = 0; idx < n; ++idx) {
        for (double v : result.points[idx]) csv << v;
        csv << result.values[idx];
        csv.end_row();
    }
    csv.close();
    return result;
}

} // namespace mehpp
