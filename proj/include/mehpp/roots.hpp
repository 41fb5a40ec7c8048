#pragma once

#include <cmath>
#include <utility>
#include <vector>

// Bracketing root finders used by the membrane model. Bisection is preferred
// over Newton because the pressure curve has poles next to the search window.
namespace mehpp::roots {

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs (or one is zero).
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-10)
{
    double f_lo = f(lo);
    if (f_lo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// A sign change of f located by scan_roots. `rising` means f goes from
/// negative to positive with increasing x.
struct Crossing {
    double x;
    bool rising;
};

/// All roots of f on [lo, hi] detected as strict sign changes over a uniform
/// grid of `intervals` cells, refined by bisection. An exact zero on an interior
/// node counts when its neighbours have opposite signs; with `include_touching`
/// every exact zero counts (endpoints included) and is reported as non-rising
/// unless a crossing is visible. Tangential roots between nodes are not found.
template <class F>
std::vector<Crossing> scan_roots(F&& f, double lo, double hi, int intervals, double tol = 1e-10,
                                 bool include_touching = false)
{
    std::vector<Crossing> out;
    std::vector<double> x(intervals + 1);
    std::vector<double> y(intervals + 1);
    for (int k = 0; k <= intervals; ++k) {
        x[k] = (k == intervals) ? hi : lo + (hi - lo) * k / intervals;
        y[k] = f(x[k]);
    }
    for (int k = 0; k <= intervals; ++k) {
        if (y[k] == 0.0) {
            const bool edge = (k == 0 || k == intervals);
            const bool crossing = !edge && y[k - 1] * y[k + 1] < 0.0;
            if (crossing || include_touching) out.push_back({x[k], crossing && y[k - 1] < 0.0});
            continue;
        }
        if (k < intervals && y[k + 1] != 0.0 && y[k] * y[k + 1] < 0.0) {
            out.push_back({bisect(f, x[k], x[k + 1], tol), y[k] < 0.0});
        }
    }
    return out;
}

/// Minimizer of a unimodal function on [lo, hi] by golden-section search.
template <class F>
double golden_section_min(F&& f, double lo, double hi, double tol = 1e-10)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace mehpp::roots
