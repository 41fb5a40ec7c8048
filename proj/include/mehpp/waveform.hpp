#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mehpp {

struct Knot {
    double t;
    double p;
    bool operator==(const Knot&) const = default;
};

/// Periodic piecewise-linear pneumatic pressure schedule.
///
/// Knot times lie in [0, period] and are nondecreasing; a time may repeat once
/// to encode a jump, in which case evaluation is right-continuous. Between the
/// last knot and the first knot of the next period the schedule interpolates
/// across the wrap.
class Waveform {
public:
    Waveform(std::vector<Knot> knots, double period, std::string note = {});

    double pressure_at(double t) const;

    double period() const noexcept { return period_; }
    const std::vector<Knot>& knots() const noexcept { return knots_; }
    const std::string& note() const noexcept { return note_; }

    double min_pressure() const;
    double max_pressure() const;
    /// Exact time average over one period.
    double mean() const;

    bool operator==(const Waveform& other) const { return knots_ == other.knots_ && period_ == other.period_; }

private:
    std::vector<Knot> knots_;
    double period_;
    std::string note_;
};

/// Two equal plateaus: p_high centred on period/4, p_low centred on 3*period/4.
/// Each transition is a linear ramp lasting ramp_fraction * period
/// (0 gives an ideal square wave).
Waveform make_square(double period, double p_high, double p_low, double ramp_fraction);

/// Zero until 0.2 s, ramp to p_high by 0.3 s, hold to 0.5 s, ramp to p_low by
/// 0.7 s, hold to 1.1 s, return to zero at the 1.2 s period.
Waveform make_paper_fsi(double p_high = 7.0, double p_low = -1.0);

/// Ideal square wave switching every 500 ms.
Waveform make_square_500ms(double p_high = 7.0, double p_low = -1.0);

inline constexpr std::string_view kPresetPaperFsi = "paper-fsi";
inline constexpr std::string_view kPresetSquare500ms = "square-500ms";

/// Named preset lookup; throws ConfigError for unknown names.
Waveform make_waveform_preset(std::string_view name, double p_high, double p_low);

} // namespace mehpp
