#include "mehpp/config.hpp"
#include "mehpp/error.hpp"

#include <doctest.h>

using namespace mehpp;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_SUITE("config")
{
    TEST_CASE("minimal config fills defaults")
    {
        const auto c = parse_config("preset: \"paper-2cell\"\nwaveform: \"paper-fsi\"\n");
        CHECK(c.model.z1_star == 1.5);
        CHECK(c.model.z_in_star == 0.25);
        CHECK(c.model.z_out_star == 1.25);
        CHECK(c.model.a_mo == 0.1);
        CHECK(c.dt == 1e-4);
        CHECK(c.chain_preset == "paper-2cell");
        CHECK(c.waveform.kind == "paper-fsi");
        CHECK(c.resolved_duration() == doctest::Approx(3.6));
        CHECK(c == RunConfig{});
        CHECK(parse_config("") == RunConfig{});
    }

    TEST_CASE("parameter blocks are exclusive")
    {
        const std::string both = "model:\n  a: 0.1\ndimensional:\n  k_e: 1\n";
        CHECK(error_of(both).find("not both") != std::string::npos);
        CHECK(error_of("model:\n  a: 0.1\n  a_mo: 0.2\n").find("a_mo") != std::string::npos);
    }

    TEST_CASE("dimensional block is converted")
    {
        const auto c = parse_config("dimensional:\n  k_e: 2\n  z0: 1\n  z1: 1.5\n  k_mo: 0.2\n  k_mi: 0.2\n");
        REQUIRE(c.dimensional.has_value());
        CHECK(c.resolved_model().a_mo == doctest::Approx(0.1));
        CHECK(c.resolved_model().z1_star == doctest::Approx(1.5));
    }

    TEST_CASE("unknown keys are rejected with a line number")
    {
        const auto msg = error_of("preset: paper-2cell\nchain:\n  conductanse: 1e5\n");
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("chain.conductanse") != std::string::npos);
        CHECK(error_of("colour: red\n").find("line 1: colour") != std::string::npos);
    }

    TEST_CASE("type and syntax errors carry a locus")
    {
        CHECK(error_of("numerics:\n  dt: fast\n").find("line 2: numerics.dt") != std::string::npos);
        CHECK(error_of("model: [1, 2\n").find("line") != std::string::npos);
        CHECK(error_of("cycle:\n  cycles: 2.5\n").find("cycle.cycles") != std::string::npos);
    }

    TEST_CASE("validation names the invariant")
    {
        CHECK(error_of("chain:\n  leak_height: 0\n").find("leak_height") != std::string::npos);
        CHECK(error_of("numerics:\n  dt: 0.01\n").find("period/1000") != std::string::npos);
        CHECK(error_of("waveform: triangle\n").find("unknown preset") != std::string::npos);
        CHECK(error_of("preset: paper-3cell\n").find("unknown preset") != std::string::npos);
        CHECK(error_of("model:\n  a: -0.1\n").find("a_mo") != std::string::npos);
        CHECK(error_of("chain:\n  preset: paper-2cell\n  cells:\n    - {a: 0}\n    - {a: 0.1}\n").find("not both") !=
              std::string::npos);
        CHECK(error_of("sweep:\n  axes: []\n").find("sweep.axes") != std::string::npos);
        CHECK(error_of("sweep:\n  axes:\n    - {name: a, values: [0.1]}\n").find("at least 2") != std::string::npos);
        CHECK(error_of("sweep:\n  axes:\n    - {name: colour, values: [1, 2]}\n").find("unknown axis") !=
              std::string::npos);
    }

    TEST_CASE("overriding a beyond the critical value")
    {
        const auto c = parse_config("model:\n  a: 0.2\n");
        CHECK(stationary_points(c.resolved_model()).empty());
    }

    TEST_CASE("explicit cells")
    {
        const auto c = parse_config("chain:\n  cells:\n    - {a: 0, length: 2}\n    - {a_mo: 0.1, a_mi: 0.05}\n");
        CHECK(c.chain_preset.empty());
        const auto chain = c.resolved_chain();
        REQUIRE(chain.cells.size() == 2);
        CHECK(chain.cells[0].length == 2);
        CHECK(chain.cells[1].params.a_mo == 0.1);
        CHECK(chain.cells[1].params.a_mi == 0.05);
    }

    TEST_CASE("knots and square waveforms")
    {
        const auto k = parse_config("waveform:\n  preset: knots\n  period: 2\n  knots: [[0, 0], [1, 3], [2, 0]]\n");
        CHECK(k.resolved_waveform().pressure_at(1.0) == 3.0);
        const auto s = parse_config("waveform:\n  preset: square\n  period: 1\n  ramp_fraction: 0.1\n  p_high: 5\n");
        CHECK(s.resolved_waveform().pressure_at(0.25) == 5.0);
    }

    TEST_CASE("round trip")
    {
        std::vector<RunConfig> configs;
        configs.emplace_back();
        {
            RunConfig c;
            c.model = MagnetoElasticParams::symmetric(0.1234567890123, 1.7);
            c.model.a_mi = 1.0 / 3.0;
            c.analyze_a_values = {0.05, 0.1341, 0.5};
            c.cells = {{0.0, 0.1, 1.5}, {0.1, 0.1, 0.7}, {0.2, 0.0, 1.0}};
            c.chain_preset.clear();
            c.waveform.kind = "knots";
            c.waveform.period = 2.0;
            c.waveform.knots = {{0, 0}, {0.5, 7}, {0.5, -1}, {2, 0}};
            c.duration = 7.1;
            c.dt = 2e-4;
            c.svg = true;
            c.out_dir = "results/run one";
            c.sweep = SweepSpec{{{"a", {0, 0.05, 0.1}}, {"p_high", {6, 7}}}, SweepMetric::NetVolumePerCycle, 50, 2};
            configs.push_back(c);
        }
        {
            RunConfig c;
            DimensionalParams d;
            d.k_e = 123.456;
            d.z0 = 0.004;
            d.z1 = 0.006;
            d.z_in = 0.001;
            d.z_out = 0.005;
            d.k_mo = 1e-9;
            d.k_mi = 2e-9;
            c.dimensional = d;
            c.waveform.kind = "square";
            c.waveform.ramp_fraction = 0.15;
            c.sweep = SweepSpec{{{"z1_star", {1.5, 2.0}}}, SweepMetric::CriticalMargin, 10000, 0};
            configs.push_back(c);
        }
        for (const auto& c : configs) {
            c.validate();
            const std::string text = serialize_config(c);
            CAPTURE(text);
            CHECK(parse_config(text) == c);
            CHECK(serialize_config(parse_config(text)) == text);
        }
    }

    TEST_CASE("sweep axis application")
    {
        RunConfig c;
        CHECK(c.with_axis("a", 0.05).model.a_mi == 0.05);
        CHECK(c.with_axis("p_low", -2).waveform.p_low == -2);
        CHECK(c.with_axis("mobility", 3).mobility == 3);
        CHECK_THROWS_AS(c.with_axis("nope", 1), ConfigError);
    }
}
