#pragma once

#include <vector>

// Force balance of a magnet-loaded elastic membrane between two rigid walls.
//
// The membrane half-opening z is held by a linear spring (k_e), an outer magnet
// pair at z1 pulling outward (k_mo / (z1 - z)^3) and the opposing inner magnet
// pulling inward (k_mi / (2z)^3). p(z) is the external pressure that holds the
// membrane in equilibrium at z when it touches neither wall.
namespace mehpp {

struct DimensionalParams {
    double k_e = 1.0;   ///< spring constant per unit area [pressure/length]
    double k_mi = 0.0;  ///< inner-magnet coefficient [pressure*length^3]
    double k_mo = 0.0;  ///< outer-magnet coefficient [pressure*length^3]
    double z0 = 1.0;    ///< natural half-gap
    double z1 = 1.5;    ///< outer-magnet plane
    double z_in = 0.25;
    double z_out = 1.25;

    /// Throws ConfigError naming the violated invariant.
    void validate() const;
    bool operator==(const DimensionalParams&) const = default;
};

struct MagnetoElasticParams {
    double a_mo = 0.0;
    double a_mi = 0.0;
    double z1_star = 1.5;
    double z_in_star = 0.25;
    double z_out_star = 1.25;

    /// Equal inner/outer coefficients, the case analysed throughout.
    static MagnetoElasticParams symmetric(double a, double z1_star = 1.5);

    void validate() const;
    bool operator==(const MagnetoElasticParams&) const = default;
};

enum class StationaryKind { LocalMaximum, LocalMinimum };

struct StationaryPoint {
    double z_star;
    double p_star;
    StationaryKind kind;
};

struct EquilibriumRoot {
    double z_star;
    bool stable;  ///< dp*/dz* < 0 under pressure control
};

/// Default resolution of the sign-scan grids.
inline constexpr int kScanIntervals = 2048;
inline constexpr double kRootTolerance = 1e-10;

double pressure_dimensional(double z, const DimensionalParams& params);

MagnetoElasticParams nondimensionalize(const DimensionalParams& params);

double pressure_star(double z_star, const MagnetoElasticParams& params);

double pressure_star_slope(double z_star, const MagnetoElasticParams& params);

/// Extrema of p*(z*) strictly inside (z_in*, z1*), ordered by position.
std::vector<StationaryPoint> stationary_points(const MagnetoElasticParams& params,
                                               int intervals = kScanIntervals);

/// Largest a (with a_mo = a_mi = a) for which p*(z*) still has extrema inside
/// the window (z_in*, z1*).
double critical_coefficient(double z1_star, double z_in_star = 0.25);

/// Every z* in [z_in*, z_out*] with p*(z*) = p_star, ordered by position.
std::vector<EquilibriumRoot> equilibria_at_pressure(double p_star, const MagnetoElasticParams& params,
                                                    int intervals = kScanIntervals);

/// A contiguous z* interval inside [z_in*, z_out*] on which dp*/dz* < 0.
/// p* decreases along it: p_high at z_low, p_low at z_high.
struct StableBranch {
    double z_low;
    double z_high;
    double p_high;
    double p_low;
};

std::vector<StableBranch> stable_branches(const MagnetoElasticParams& params);

} // namespace mehpp
