#pragma once

// Physical description of a double-slit run and the scales derived from it.
//
// Every input is SI. The closed-form and weak-coupling formulas are evaluated
// in the scale-free groups (theta, beta, kappa, dtilde) with the packet width
// as length unit, which keeps hbar^2 ~ 1e-68 out of the arithmetic.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dslit/errors.hpp"

namespace dslit {

namespace codata {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double electron_mass = 9.1093837015e-31;    // kg
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double speed_of_light = 299792458.0;    // m/s
} // namespace codata

struct PhysicalParams {
    double mass = 0.0;                  // kg
    double slit_separation = 0.0;       // m, d (packets start at +-d/2)
    double packet_width = 0.0;          // m, epsilon
    double de_broglie_wavelength = 0.0; // m
    double path_length = 0.0;           // m, slit to screen
    double coupling_rate = 0.0;         // 1/s, gamma
    double temperature = 0.0;           // K
    double hbar = codata::hbar;
    double boltzmann = codata::boltzmann;

    bool operator==(const PhysicalParams&) const = default;
};

/// Slit-plane geometry alone; enough for the weak-coupling pattern when the
/// decoherence strength is given directly as t_L/tau_D.
struct Geometry {
    double slit_separation = 0.0;
    double packet_width = 0.0;
    double de_broglie_wavelength = 0.0;
    double path_length = 0.0;

    bool operator==(const Geometry&) const = default;
};

inline Geometry geometry_of(const PhysicalParams& p) {
    return {p.slit_separation, p.packet_width, p.de_broglie_wavelength, p.path_length};
}

namespace detail {

inline void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

inline void require_positive(double v, const char* field) {
    require_finite(v, field);
    if (!(v > 0.0)) throw ValidationError(field, "must be strictly positive");
}

inline void require_non_negative(double v, const char* field) {
    require_finite(v, field);
    if (v < 0.0) throw ValidationError(field, "must be non-negative");
}

inline std::vector<std::string> validate_geometry(const Geometry& g) {
    require_non_negative(g.slit_separation, "slit_separation");
    require_positive(g.packet_width, "packet_width");
    require_positive(g.de_broglie_wavelength, "de_broglie_wavelength");
    require_positive(g.path_length, "path_length");
    std::vector<std::string> warnings;
    if (g.slit_separation <= 2.0 * g.packet_width) {
        warnings.emplace_back(
            "slit_separation <= 2*packet_width: the two packets overlap at the slits");
    }
    return warnings;
}

} // namespace detail

/// Throws ValidationError naming the first bad field; returns soft warnings.
///
/// d = 0 (both packets on top of each other) and T = 0 are accepted: they are
/// the degenerate single-packet and noiseless limits.
inline std::vector<std::string> validate(const PhysicalParams& p) {
    detail::require_positive(p.mass, "mass");
    auto warnings = detail::validate_geometry(geometry_of(p));
    detail::require_non_negative(p.coupling_rate, "coupling_rate");
    detail::require_non_negative(p.temperature, "temperature");
    detail::require_positive(p.hbar, "hbar");
    detail::require_positive(p.boltzmann, "boltzmann");
    return warnings;
}

struct DerivedScales {
    double flight_time = 0.0;      // s, t_L = m L / p0
    double diffusion = 0.0;        // kg^2 m^2 / s^3, D = 2 m gamma k_B T
    double decoherence_time = 0.0; // s, +inf without coupling
    double envelope_width = 0.0;   // m, sigma = lambda L / (pi epsilon)
    double fringe_spacing = 0.0;   // m, lambda L / d

    bool operator==(const DerivedScales&) const = default;
};

inline DerivedScales derive_scales(const PhysicalParams& p) {
    validate(p);
    constexpr double pi = std::numbers::pi;
    constexpr double inf = std::numeric_limits<double>::infinity();

    DerivedScales s;
    const double p0 = 2.0 * pi * p.hbar / p.de_broglie_wavelength;
    s.flight_time = p.mass * p.path_length / p0;
    s.diffusion = 2.0 * p.mass * p.coupling_rate * p.boltzmann * p.temperature;

    const double d2 = p.slit_separation * p.slit_separation;
    if (s.diffusion > 0.0 && d2 > 0.0) {
        const double hbar_over_d = p.hbar / p.slit_separation;
        s.decoherence_time = hbar_over_d * hbar_over_d / s.diffusion;
    } else {
        s.decoherence_time = inf;
    }

    const double lambda_l = p.de_broglie_wavelength * p.path_length;
    s.envelope_width = lambda_l / (pi * p.packet_width);
    s.fringe_spacing = p.slit_separation > 0.0 ? lambda_l / p.slit_separation : inf;
    return s;
}

struct DimensionlessGroups {
    double theta = 0.0;  // gamma t_L, damping per flight
    double beta = 0.0;   // hbar t_L / (m eps^2), spreading per flight
    double kappa = 0.0;  // D t_L^3 / (m^2 eps^2), decoherence strength
    double dtilde = 0.0; // d / eps

    /// t_L / tau_D expressed through the groups.
    double t_ratio() const { return beta > 0.0 ? kappa * dtilde * dtilde / (beta * beta) : 0.0; }

    bool operator==(const DimensionlessGroups&) const = default;
};

inline DimensionlessGroups dimensionless(const PhysicalParams& p, const DerivedScales& s) {
    const double eps = p.packet_width;
    const double t = s.flight_time;
    DimensionlessGroups g;
    g.theta = p.coupling_rate * t;
    // hbar t_L / m is lambda L / (2 pi) exactly, so the mass never enters beta.
    g.beta = p.de_broglie_wavelength * p.path_length / (2.0 * std::numbers::pi * eps * eps);
    // D / m^2 = 2 gamma k_B T / m; grouped so no intermediate leaves double range.
    const double t_over_eps = t / eps;
    g.kappa = 2.0 * p.coupling_rate * p.boltzmann * p.temperature / p.mass * t * t_over_eps *
              t_over_eps;
    g.dtilde = p.slit_separation / eps;
    return g;
}

/// Scale-free problem plus the packet width (m) that maps it back to SI.
struct ScaledSetup {
    DimensionlessGroups groups;
    double length_unit = 1.0;

    bool operator==(const ScaledSetup&) const = default;
};

inline ScaledSetup scaled(const PhysicalParams& p) {
    return {dimensionless(p, derive_scales(p)), p.packet_width};
}

/// Build the groups from geometry plus t_L/tau_D, in the weak-coupling limit
/// theta -> 0. Which (gamma, T, m) realise the ratio is left open.
inline ScaledSetup scaled_from_ratio(const Geometry& geo, double t_ratio) {
    detail::validate_geometry(geo);
    detail::require_non_negative(t_ratio, "t_ratio");
    const double eps = geo.packet_width;
    DimensionlessGroups g;
    g.theta = 0.0;
    g.beta = geo.de_broglie_wavelength * geo.path_length / (2.0 * std::numbers::pi * eps * eps);
    g.dtilde = geo.slit_separation / eps;
    if (t_ratio > 0.0) {
        if (!(g.dtilde > 0.0))
            throw ValidationError("slit_separation", "t_ratio > 0 needs a non-zero separation");
        g.kappa = t_ratio * g.beta * g.beta / (g.dtilde * g.dtilde);
    }
    return {g, eps};
}

/// Parameters in units hbar = m = eps = k_B = 1 realising the requested
/// flight time and groups. L = 1 and lambda = 2 pi t so that t_L = t.
inline PhysicalParams natural_units(double dtilde, double flight_time, double theta, double kappa) {
    detail::require_non_negative(dtilde, "slit_separation");
    detail::require_positive(flight_time, "flight_time");
    detail::require_non_negative(theta, "theta");
    detail::require_non_negative(kappa, "kappa");
    if (theta == 0.0 && kappa > 0.0)
        throw ValidationError("kappa", "kappa > 0 requires theta > 0 (D = 2 m gamma k_B T)");

    PhysicalParams p;
    p.mass = 1.0;
    p.packet_width = 1.0;
    p.hbar = 1.0;
    p.boltzmann = 1.0;
    p.slit_separation = dtilde;
    p.path_length = 1.0;
    p.de_broglie_wavelength = 2.0 * std::numbers::pi * flight_time;
    p.coupling_rate = theta / flight_time;
    p.temperature = theta > 0.0 ? kappa / (2.0 * p.coupling_rate * std::pow(flight_time, 3)) : 0.0;
    return p;
}

} // namespace dslit
