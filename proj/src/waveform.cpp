#include "mehpp/waveform.hpp"

#include "mehpp/error.hpp"

#include <algorithm>
#include <cmath>

namespace mehpp {

Waveform::Waveform(std::vector<Knot> knots, double period, std::string note)
    : knots_(std::move(knots)), period_(period), note_(std::move(note))
{
    if (!(std::isfinite(period_) && period_ > 0.0)) throw ConfigError("period", "must be > 0");
    if (knots_.empty()) throw ConfigError("knots", "at least one knot is required");
    for (std::size_t k = 0; k < knots_.size(); ++k) {
        const auto& kn = knots_[k];
        if (!std::isfinite(kn.t) || !std::isfinite(kn.p)) throw ConfigError("knots", "non-finite knot");
        if (kn.t < 0.0 || kn.t > period_) throw ConfigError("knots", "knot time outside [0, period]");
        if (k > 0 && kn.t < knots_[k - 1].t) throw ConfigError("knots", "knot times must be nondecreasing");
        if (k > 1 && kn.t == knots_[k - 2].t) throw ConfigError("knots", "at most two knots may share a time");
    }
}

double Waveform::pressure_at(double t) const
{
    double tau = std::fmod(t, period_);
    if (tau < 0.0) tau += period_;
    if (knots_.size() == 1) return knots_.front().p;

    const auto it = std::upper_bound(knots_.begin(), knots_.end(), tau,
                                     [](double v, const Knot& k) { return v < k.t; });
    Knot left;
    Knot right;
    if (it == knots_.begin()) {
        left = {knots_.back().t - period_, knots_.back().p};
        right = knots_.front();
    } else if (it == knots_.end()) {
        left = knots_.back();
        right = {knots_.front().t + period_, knots_.front().p};
    } else {
        left = *(it - 1);
        right = *it;
    }
    const double span = right.t - left.t;
    if (span <= 0.0) return right.p;
    return left.p + (right.p - left.p) * ((tau - left.t) / span);
}

double Waveform::min_pressure() const
{
    return std::min_element(knots_.begin(), knots_.end(), [](auto& a, auto& b) { return a.p < b.p; })->p;
}

double Waveform::max_pressure() const
{
    return std::max_element(knots_.begin(), knots_.end(), [](auto& a, auto& b) { return a.p < b.p; })->p;
}

double Waveform::mean() const
{
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
        area += 0.5 * (knots_[k].p + knots_[k + 1].p) * (knots_[k + 1].t - knots_[k].t);
    }
    // wrap segment
    const double wrap = knots_.front().t + period_ - knots_.back().t;
    area += 0.5 * (knots_.back().p + knots_.front().p) * wrap;
    return area / period_;
}

Waveform make_square(double period, double p_high, double p_low, double ramp_fraction)
{
    if (!(ramp_fraction >= 0.0 && ramp_fraction < 0.5)) {
        throw ConfigError("ramp_fraction", "must satisfy 0 <= ramp_fraction < 0.5");
    }
    if (!(std::isfinite(period) && period > 0.0)) throw ConfigError("period", "must be > 0");
    const double half = 0.5 * period;
    if (ramp_fraction == 0.0) {
        return Waveform({{0.0, p_high}, {half, p_high}, {half, p_low}, {period, p_low}}, period,
                        "ideal square wave");
    }
    const double r = 0.5 * ramp_fraction * period;
    const double mid = 0.5 * (p_high + p_low);
    return Waveform({{0.0, mid}, {r, p_high}, {half - r, p_high}, {half + r, p_low}, {period - r, p_low}, {period, mid}},
                    period, "trapezoidal square wave");
}

Waveform make_paper_fsi(double p_high, double p_low)
{
    return Waveform({{0.0, 0.0}, {0.2, 0.0}, {0.3, p_high}, {0.5, p_high}, {0.7, p_low}, {1.1, p_low}, {1.2, 0.0}}, 1.2,
                    "paper-fsi: trapezoid, zero to 0.2 s, p_high from 0.3 to 0.5 s, p_low from 0.7 to 1.1 s, "
                    "linear ramps in between and back to zero at 1.2 s");
}

Waveform make_square_500ms(double p_high, double p_low)
{
    Waveform w = make_square(1.0, p_high, p_low, 0.0);
    return Waveform(w.knots(), w.period(), "square-500ms: pressure switched every 500 ms; magnitudes not reported");
}

Waveform make_waveform_preset(std::string_view name, double p_high, double p_low)
{
    if (name == kPresetPaperFsi) return make_paper_fsi(p_high, p_low);
    if (name == kPresetSquare500ms) return make_square_500ms(p_high, p_low);
    throw ConfigError("waveform.preset", "unknown preset '" + std::string(name) + "'");
}

} // namespace mehpp
