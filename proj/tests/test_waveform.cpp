#include "mehpp/error.hpp"
#include "mehpp/waveform.hpp"

#include <doctest.h>

#include <random>

using namespace mehpp;

TEST_SUITE("waveform")
{
    TEST_CASE("constant schedule")
    {
        const Waveform w({{0, 0}, {1, 0}}, 1);
        for (double t : {0.0, 0.3, 1.0, 17.25}) CHECK(w.pressure_at(t) == 0.0);
    }

    TEST_CASE("exact at knots and linear between")
    {
        const Waveform w({{0, 0}, {0.5, 2}, {1.0, -2}}, 2.0);
        CHECK(w.pressure_at(0.5) == 2.0);
        CHECK(w.pressure_at(1.0) == -2.0);
        CHECK(w.pressure_at(0.25) == doctest::Approx(1.0));
        CHECK(w.pressure_at(0.75) == doctest::Approx(0.0));
        // wrap segment from (1, -2) back to (2, 0)
        CHECK(w.pressure_at(1.5) == doctest::Approx(-1.0));
    }

    TEST_CASE("presets")
    {
        const auto sq = make_square_500ms(7, -1);
        CHECK(sq.period() == 1.0);
        CHECK(sq.pressure_at(0.25) == 7.0);
        CHECK(sq.pressure_at(0.75) == -1.0);
        CHECK(sq.pressure_at(0.5) == -1.0);  // right-continuous at the switch
        CHECK(sq.pressure_at(0.4999) == 7.0);

        const auto fsi = make_paper_fsi(7, -1);
        CHECK(fsi.pressure_at(0.1) == 0.0);
        CHECK(fsi.pressure_at(0.4) == 7.0);
        CHECK(fsi.pressure_at(0.9) == -1.0);
        CHECK(fsi.pressure_at(0.6) == doctest::Approx(3.0));
        CHECK(fsi.period() == doctest::Approx(1.2));

        CHECK(make_waveform_preset("paper-fsi", 7, -1) == fsi);
        CHECK_THROWS_AS(make_waveform_preset("sawtooth", 7, -1), ConfigError);
    }

    TEST_CASE("make_square")
    {
        const auto ideal = make_square(1, 7, -1, 0);
        CHECK(ideal.pressure_at(0.1) == 7.0);
        CHECK(ideal.pressure_at(0.9) == -1.0);

        // ramp 0.1 of the period per transition leaves plateaus of 0.4
        const auto w = make_square(1, 7, -1, 0.1);
        int high = 0, low = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const double p = w.pressure_at((i + 0.5) / n);
            high += p == 7.0;
            low += p == -1.0;
        }
        CHECK(high / double(n) == doctest::Approx(0.4).epsilon(1e-3));
        CHECK(low / double(n) == doctest::Approx(0.4).epsilon(1e-3));

        CHECK(std::abs(make_square(1, 3, -3, 0).mean()) < 1e-12);
        CHECK(std::abs(make_square(2, 3, -3, 0.2).mean()) < 1e-12);
        CHECK_THROWS_AS(make_square(1, 7, -1, 0.5), ConfigError);
        CHECK_THROWS_AS(make_square(1, 7, -1, -0.1), ConfigError);
        CHECK_THROWS_AS(make_square(0, 7, -1, 0.1), ConfigError);
    }

    TEST_CASE("periodicity and bounds")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0, 50);
        for (const auto& w : {make_paper_fsi(7, -1), make_square(1, 7, -1, 0.2), make_square_500ms(5, -2)}) {
            for (int i = 0; i < 1000; ++i) {
                const double t = u(rng);
                CHECK(std::abs(w.pressure_at(t) - w.pressure_at(t + w.period())) <= 1e-12);
                const double p = w.pressure_at(t);
                CHECK(p >= w.min_pressure());
                CHECK(p <= w.max_pressure());
            }
        }
    }

    TEST_CASE("invalid knots")
    {
        CHECK_THROWS_AS(Waveform({{0, 0}, {1, 0}}, 0), ConfigError);
        CHECK_THROWS_AS(Waveform({{0.5, 0}, {0.2, 0}}, 1), ConfigError);
        CHECK_THROWS_AS(Waveform({{0, 0}, {2, 0}}, 1), ConfigError);
        CHECK_THROWS_AS(Waveform({{0.5, 0}, {0.5, 1}, {0.5, 2}}, 1), ConfigError);
        CHECK_THROWS_AS(Waveform({}, 1), ConfigError);
    }
}
