#include "mehpp/cycle.hpp"
#include "mehpp/error.hpp"

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <map>

using namespace mehpp;

namespace {

const MagnetoElasticParams kA01 = MagnetoElasticParams::symmetric(0.1);

double hand_p(double z, double a) { return 1 - z + a / std::pow(1.5 - z, 3) - a / (8 * z * z * z); }

} // namespace

TEST_SUITE("cycle")
{
    TEST_CASE("contact force")
    {
        CHECK(contact_force({1.25, WallContact::OuterContact, 0.0}, kA01) == doctest::Approx(6.1436).epsilon(1e-4));
        const double peel = pressure_star(1.25, kA01);
        CHECK(contact_force({0.25, WallContact::InnerContact, peel}, kA01) ==
              doctest::Approx(peel - pressure_star(0.25, kA01)));
        CHECK(contact_force({0.25, WallContact::InnerContact, 6.1436}, kA01) == doctest::Approx(6.1424).epsilon(1e-4));
        CHECK(contact_force({1.25, WallContact::OuterContact, peel}, kA01) == 0.0);
        CHECK_THROWS_AS(contact_force({1.0, WallContact::Interior, 0.0}, kA01), InvalidStateError);
    }

    TEST_CASE("initial state")
    {
        const auto s = initial_state(kA01);
        CHECK(s.wall == WallContact::OuterContact);
        CHECK(s.z_star == 1.25);
        const auto s0 = initial_state(MagnetoElasticParams::symmetric(0.0));
        CHECK(s0.wall == WallContact::Interior);
        CHECK(s0.z_star == doctest::Approx(1.0).epsilon(1e-9));
    }

    TEST_CASE("step: full-gap snaps")
    {
        const CycleState open{1.25, WallContact::OuterContact, 0.0};
        const auto closed = step_quasi_static_detailed(open, 6.2, kA01);
        CHECK(closed.state.wall == WallContact::InnerContact);
        CHECK(closed.state.z_star == 0.25);
        REQUIRE(closed.snaps.size() == 1);
        CHECK(closed.snaps[0].p_applied == doctest::Approx(hand_p(1.25, 0.1)).epsilon(1e-12));

        const auto reopened = step_quasi_static_detailed(closed.state, -0.5, kA01);
        CHECK(reopened.state.wall == WallContact::OuterContact);
        REQUIRE(reopened.snaps.size() == 1);
        CHECK(reopened.snaps[0].p_applied == doctest::Approx(hand_p(0.25, 0.1)).epsilon(1e-9));

        // below the peel pressure nothing moves
        const auto held = step_quasi_static_detailed(open, 5.0, kA01);
        CHECK(held.state.wall == WallContact::OuterContact);
        CHECK(held.snaps.empty());
    }

    TEST_CASE("step: no hysteresis without magnets")
    {
        const auto p0 = MagnetoElasticParams::symmetric(0.0);
        CycleState s = initial_state(p0);
        for (double p : {0.3, 0.8, -0.2, 2.0, -1.0, 0.0, 0.5}) {
            const auto r = step_quasi_static_detailed(s, p, p0);
            CHECK(r.snaps.empty());
            const double expected = std::clamp(1.0 - p, 0.25, 1.25);
            CHECK(r.state.z_star == doctest::Approx(expected).epsilon(1e-9));
            s = r.state;
        }
    }

    TEST_CASE("step: interior branch continuation and fold")
    {
        // stable branch between the local max (z~0.477) and local min (z~0.734)
        const CycleState mid{0.5, WallContact::Interior, 0.5};
        const auto r = step_quasi_static_detailed(mid, 0.47, kA01);
        CHECK(r.state.wall == WallContact::Interior);
        CHECK(r.snaps.empty());
        CHECK(r.state.z_star > 0.5);
        CHECK(r.state.z_star < 0.74);
        CHECK(hand_p(r.state.z_star, 0.1) == doctest::Approx(0.47).epsilon(1e-8));

        // below the branch minimum the branch ends; net force points outward
        const auto f = step_quasi_static_detailed(r.state, 0.45, kA01);
        REQUIRE(f.snaps.size() == 1);
        CHECK(f.snaps[0].p_applied == doctest::Approx(0.4569).epsilon(1e-3));
        CHECK(f.state.wall == WallContact::OuterContact);

        // above the branch maximum it snaps inward to the wall
        const auto g = step_quasi_static_detailed(mid, 0.6, kA01);
        REQUIRE(g.snaps.size() == 1);
        CHECK(g.snaps[0].p_applied == doctest::Approx(0.5012).epsilon(1e-3));
        CHECK(g.state.wall == WallContact::InnerContact);
    }

    TEST_CASE("trace: two snaps per cycle for the full-range square wave")
    {
        const auto w = make_square(1, 7, -1, 0);
        const auto tr = trace_cycle(kA01, w, 3, 512);
        REQUIRE(tr.cycles() == 3);
        for (std::size_t c = 1; c < 3; ++c) {
            auto snaps = tr.snaps_in_cycle(c);
            REQUIRE(snaps.size() == 2);
            // the cycle opens on the high plateau, so order the events by pressure
            std::sort(snaps.begin(), snaps.end(), [](auto& x, auto& y) { return x.p_applied > y.p_applied; });
            CHECK(std::abs(snaps[0].p_applied - 6.1436) < 0.01);
            CHECK(std::abs(snaps[1].p_applied - 0.0012) < 0.01);
            CHECK(snaps[0].z_from == 1.25);
            CHECK(snaps[0].z_to == 0.25);
            CHECK(snaps[1].z_from == 0.25);
            CHECK(snaps[1].z_to == 1.25);
        }
        CHECK(std::abs(loop_area(tr) - 6.1424) < 0.02);
        CHECK(loop_area(tr) == doctest::Approx((hand_p(1.25, 0.1) - hand_p(0.25, 0.1)) * 1.0).epsilon(1e-9));
    }

    TEST_CASE("trace: below the peel pressure the membrane stays open")
    {
        const auto tr = trace_cycle(kA01, make_square(1, 5, -1, 0), 3, 256);
        CHECK(tr.snap_events.empty());
        for (const auto& s : tr.samples) CHECK(s.state.wall == WallContact::OuterContact);
        CHECK(loop_area(tr) == 0.0);
    }

    TEST_CASE("trace invariants")
    {
        for (double a : {0.0, 0.02, 0.05, 0.1, 0.12, 0.2}) {
            const auto p = MagnetoElasticParams::symmetric(a);
            for (const auto& w : {make_square(1, 7, -1, 0), make_paper_fsi(7, -1), make_square(1, 7, -1, 0.3)}) {
                const auto tr = trace_cycle(p, w, 3, 256);
                for (const auto& s : tr.samples) {
                    CHECK(s.state.z_star >= p.z_in_star);
                    CHECK(s.state.z_star <= p.z_out_star);
                    if (s.state.wall == WallContact::InnerContact) CHECK(s.state.z_star == p.z_in_star);
                    if (s.state.wall == WallContact::OuterContact) CHECK(s.state.z_star == p.z_out_star);
                    if (s.state.wall != WallContact::Interior) CHECK(contact_force(s.state, p) >= -1e-12);
                    if (s.on_grid) CHECK(s.state.p_applied == w.pressure_at(s.t));
                }
                for (const auto& ev : tr.snap_events) CHECK(ev.z_from != ev.z_to);
                // snap isobarity: the trace holds the same pressure on both sides of the jump
                // (t = 0 is excluded: it holds the initial load from rest to p(0))
                for (std::size_t i = 1; i < tr.samples.size(); ++i) {
                    if (tr.samples[i].t == 0.0) continue;
                    const auto& a0 = tr.samples[i - 1].state;
                    const auto& a1 = tr.samples[i].state;
                    const bool jump = tr.samples[i].t == tr.samples[i - 1].t && std::abs(a0.z_star - a1.z_star) > 1e-6;
                    if (jump) CHECK(a0.p_applied == a1.p_applied);
                }
                // periodic from the second cycle on
                const auto& cs = tr.cycle_starts;
                CHECK(std::abs(tr.samples[cs[2]].state.z_star - tr.samples[cs[3]].state.z_star) <= 1e-9);
                CHECK(std::abs(tr.samples[cs[1]].state.z_star - tr.samples[cs[2]].state.z_star) <= 1e-9);
            }
        }
    }

    TEST_CASE("snap events appear in the trace as isobaric jumps")
    {
        const auto tr = trace_cycle(kA01, make_paper_fsi(7, -1), 2, 512);
        for (const auto& ev : tr.snap_events) {
            bool found = false;
            for (std::size_t i = 1; i < tr.samples.size(); ++i) {
                const auto& a = tr.samples[i - 1];
                const auto& b = tr.samples[i];
                if (a.state.z_star == ev.z_from && b.state.z_star == ev.z_to && a.t == ev.t && b.t == ev.t) {
                    found = true;
                    CHECK(a.state.p_applied == ev.p_applied);
                    CHECK(b.state.p_applied == ev.p_applied);
                }
            }
            CHECK(found);
        }
    }

    TEST_CASE("determinism")
    {
        const auto w = make_paper_fsi(7, -1);
        const auto t1 = trace_cycle(kA01, w, 2, 300);
        const auto t2 = trace_cycle(kA01, w, 2, 300);
        REQUIRE(t1.samples.size() == t2.samples.size());
        for (std::size_t i = 0; i < t1.samples.size(); ++i) {
            CHECK(t1.samples[i].t == t2.samples[i].t);
            CHECK(t1.samples[i].state == t2.samples[i].state);
        }
    }

    TEST_CASE("loop area grows with the magnet coefficient")
    {
        const auto w = make_square(1, 7, -1, 0);
        double prev = -1;
        for (double a : {0.0, 0.02, 0.05, 0.1}) {
            const double area = loop_area(trace_cycle(MagnetoElasticParams::symmetric(a), w, 3, 512));
            CHECK(area > prev);
            prev = area;
        }
    }

    TEST_CASE("no hysteresis at a = 0")
    {
        const auto p0 = MagnetoElasticParams::symmetric(0.0);
        const auto tr = trace_cycle(p0, make_square(1, 7, -1, 0.2), 3, 512);
        CHECK(std::abs(loop_area(tr)) < 1e-9);
        CHECK(tr.snap_events.empty());
        std::map<double, double> z_of_p;
        for (std::size_t i = tr.cycle_starts[1]; i < tr.samples.size(); ++i) {
            const auto& s = tr.samples[i].state;
            auto [it, inserted] = z_of_p.emplace(s.p_applied, s.z_star);
            if (!inserted) CHECK(it->second == doctest::Approx(s.z_star).epsilon(1e-12));
        }
    }

    TEST_CASE("sampling refinement")
    {
        for (const auto& w : {make_square(1, 7, -1, 0), make_paper_fsi(7, -1), make_square(1, 7, -1, 0.2)}) {
            const double a256 = loop_area(trace_cycle(kA01, w, 3, 256));
            const double a512 = loop_area(trace_cycle(kA01, w, 3, 512));
            CHECK(std::abs(a512 - a256) < 1e-3 * std::abs(a512));
        }
    }

    TEST_CASE("argument checks")
    {
        const auto w = make_square(1, 7, -1, 0);
        CHECK_THROWS_AS(trace_cycle(kA01, w, 0, 512), ConfigError);
        CHECK_THROWS_AS(trace_cycle(kA01, w, 1, 4), ConfigError);
        CycleTrace empty;
        CHECK_THROWS_AS(loop_area(empty), ConfigError);
    }
}
