#include "mehpp/commands.hpp"
#include "mehpp/config.hpp"
#include "mehpp/error.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNumeric = 3 };

struct Options {
    std::string config_path;
    std::string out_dir;
    bool svg = false;
};

void add_common(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--config", opt.config_path, "YAML configuration file")->required();
    cmd->add_option("--out", opt.out_dir, "output directory (overrides output.dir)");
    cmd->add_flag("--svg", opt.svg, "also write SVG plots");
}

int dispatch(const std::string& command, const Options& opt)
{
    const mehpp::RunConfig config = mehpp::load_config(opt.config_path);
    const std::string out = opt.out_dir.empty() ? config.out_dir : opt.out_dir;
    const bool svg = opt.svg || config.svg;

    if (command == "analyze") {
        const auto r = mehpp::cmd_analyze(config, out, svg);
        std::printf("a_crit = %.6f\n", r.a_crit);
        for (const auto& e : r.entries) {
            std::printf("a_mo = %g, a_mi = %g: %zu stationary points (%s)\n", e.params.a_mo, e.params.a_mi,
                        e.stationary.size(), e.hysteretic() ? "hysteretic" : "monotonic");
        }
    } else if (command == "cycle") {
        const auto r = mehpp::cmd_cycle(config, out, svg);
        std::printf("loop area = %.6f, snaps in last cycle = %zu\n", r.loop_area, r.snaps_last_cycle);
    } else if (command == "pump") {
        const auto r = mehpp::cmd_pump(config, out, svg);
        std::printf("net volume per cycle = %.6g (stroke volume %.6g)\n", r.metrics.net_volume_per_cycle,
                    r.stroke_volume);
        std::printf("mass balance error = %.3g\n", r.mass_balance_error);
    } else {
        const auto r = mehpp::cmd_sweep(config, out);
        std::printf("%zu grid points evaluated\n", r.values.size());
    }
    std::printf("results written to %s\n", out.c_str());
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Magneto-elastic hysteresis peristaltic pump toolkit"};
    app.require_subcommand(1);
    Options opt;
    for (const char* name : {"analyze", "cycle", "pump", "sweep"}) {
        add_common(app.add_subcommand(name), opt);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), opt);
    } catch (const mehpp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const mehpp::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const mehpp::DomainError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const mehpp::InvalidStateError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
