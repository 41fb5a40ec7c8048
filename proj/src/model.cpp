#include "mehpp/model.hpp"

#include "mehpp/error.hpp"
#include "mehpp/roots.hpp"

#include <cmath>
#include <string>

namespace mehpp {

namespace {

void require(bool ok, const char* field, const std::string& what)
{
    if (!ok) throw ConfigError(field, what);
}

bool finite(double v) { return std::isfinite(v); }

double cube(double v) { return v * v * v; }
double fourth(double v) { return (v * v) * (v * v); }

} // namespace

void DimensionalParams::validate() const
{
    require(finite(k_e) && k_e > 0.0, "k_e", "must be > 0");
    require(finite(k_mi) && k_mi >= 0.0, "k_mi", "must be >= 0");
    require(finite(k_mo) && k_mo >= 0.0, "k_mo", "must be >= 0");
    require(finite(z_in) && z_in > 0.0, "z_in", "must be > 0");
    require(finite(z0) && z0 > z_in, "z0", "must satisfy z_in < z0");
    require(finite(z_out) && z_out > z0, "z_out", "must satisfy z0 < z_out");
    require(finite(z1) && z1 > z_out, "z1", "must satisfy z_out < z1");
}

MagnetoElasticParams MagnetoElasticParams::symmetric(double a, double z1_star)
{
    MagnetoElasticParams p;
    p.a_mo = a;
    p.a_mi = a;
    p.z1_star = z1_star;
    return p;
}

void MagnetoElasticParams::validate() const
{
    require(finite(a_mo) && a_mo >= 0.0, "a_mo", "must be >= 0");
    require(finite(a_mi) && a_mi >= 0.0, "a_mi", "must be >= 0");
    require(finite(z_in_star) && z_in_star > 0.0 && z_in_star < 1.0, "z_in_star", "must satisfy 0 < z_in_star < 1");
    require(finite(z_out_star) && z_out_star > 1.0, "z_out_star", "must satisfy 1 < z_out_star");
    require(finite(z1_star) && z1_star > z_out_star, "z1_star", "must satisfy z_out_star < z1_star");
}

double pressure_dimensional(double z, const DimensionalParams& params)
{
    if (!(z > 0.0) || !(z < params.z1)) {
        throw DomainError("pressure_dimensional: z=" + std::to_string(z) + " outside (0, z1)");
    }
    return params.k_e * (params.z0 - z) + params.k_mo / cube(params.z1 - z) - params.k_mi / (8.0 * cube(z));
}

MagnetoElasticParams nondimensionalize(const DimensionalParams& params)
{
    params.validate();
    const double scale = params.k_e * fourth(params.z0);
    MagnetoElasticParams out;
    out.a_mo = params.k_mo / scale;
    out.a_mi = params.k_mi / scale;
    out.z1_star = params.z1 / params.z0;
    out.z_in_star = params.z_in / params.z0;
    out.z_out_star = params.z_out / params.z0;
    return out;
}

double pressure_star(double z_star, const MagnetoElasticParams& params)
{
    if (!(z_star > 0.0) || !(z_star < params.z1_star)) {
        throw DomainError("pressure_star: z*=" + std::to_string(z_star) + " outside (0, z1*)");
    }
    return 1.0 - z_star + params.a_mo / cube(params.z1_star - z_star) - params.a_mi / (8.0 * cube(z_star));
}

double pressure_star_slope(double z_star, const MagnetoElasticParams& params)
{
    if (!(z_star > 0.0) || !(z_star < params.z1_star)) {
        throw DomainError("pressure_star_slope: z*=" + std::to_string(z_star) + " outside (0, z1*)");
    }
    return -1.0 + 3.0 * params.a_mo / fourth(params.z1_star - z_star)
           + 3.0 * params.a_mi / (8.0 * fourth(z_star));
}

std::vector<StationaryPoint> stationary_points(const MagnetoElasticParams& params, int intervals)
{
    // The slope diverges at z1*; stop the scan just short of the pole.
    const double lo = params.z_in_star;
    const double hi = params.z1_star - 1e-9 * (params.z1_star - lo);
    const auto slope = [&](double z) { return pressure_star_slope(z, params); };

    std::vector<StationaryPoint> out;
    for (const auto& c : roots::scan_roots(slope, lo, hi, intervals, kRootTolerance)) {
        if (!(c.x > lo && c.x < params.z1_star)) continue;
        out.push_back({c.x, pressure_star(c.x, params),
                       c.rising ? StationaryKind::LocalMinimum : StationaryKind::LocalMaximum});
    }
    return out;
}

double critical_coefficient(double z1_star, double z_in_star)
{
    if (!(z1_star > z_in_star) || !(z_in_star > 0.0)) {
        throw ConfigError("z1_star", "analysis window (z_in*, z1*) is empty");
    }
    // slope = -1 + 3a * f(z); extrema exist iff 3a * min f < 1.
    const auto f = [&](double z) { return 1.0 / fourth(z1_star - z) + 1.0 / (8.0 * fourth(z)); };
    const double hi = z1_star - 1e-12 * z1_star;
    const double z_min = roots::golden_section_min(f, z_in_star, hi, kRootTolerance);
    return 1.0 / (3.0 * f(z_min));
}

std::vector<EquilibriumRoot> equilibria_at_pressure(double p_star, const MagnetoElasticParams& params,
                                                    int intervals)
{
    const auto residual = [&](double z) { return pressure_star(z, params) - p_star; };
    std::vector<EquilibriumRoot> out;
    for (const auto& c : roots::scan_roots(residual, params.z_in_star, params.z_out_star, intervals,
                                           kRootTolerance, true)) {
        out.push_back({c.x, pressure_star_slope(c.x, params) < 0.0});
    }
    return out;
}

std::vector<StableBranch> stable_branches(const MagnetoElasticParams& params)
{
    std::vector<double> edges{params.z_in_star};
    for (const auto& sp : stationary_points(params)) {
        if (sp.z_star > params.z_in_star && sp.z_star < params.z_out_star) edges.push_back(sp.z_star);
    }
    edges.push_back(params.z_out_star);

    std::vector<StableBranch> out;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k];
        const double hi = edges[k + 1];
        if (pressure_star_slope(0.5 * (lo + hi), params) < 0.0) {
            out.push_back({lo, hi, pressure_star(lo, params), pressure_star(hi, params)});
        }
    }
    return out;
}

} // namespace mehpp
