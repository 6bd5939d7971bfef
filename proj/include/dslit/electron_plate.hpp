#pragma once

// Coupling rate for an electron beam passing a resistive plate:
//
//   gamma = e^2 rho / (32 pi m z^3)
//
// The combination e^2 rho is the same number in Gaussian units (statC^2 times
// resistivity in seconds) and in SI (C^2 times Ohm m), because the factor
// 4 pi eps0 that converts e^2 is exactly undone by the one that converts rho.
// Both entry points therefore evaluate the same expression; they differ only
// in which units the caller is expected to pass.

#include <numbers>

#include "dslit/errors.hpp"
#include "dslit/params.hpp"

namespace dslit::closedform {

namespace detail {

inline double plate_rate(double resistivity, double mass, double distance, double charge) {
    dslit::detail::require_positive(resistivity, "resistivity");
    dslit::detail::require_positive(mass, "mass");
    dslit::detail::require_positive(charge, "charge");
    dslit::detail::require_finite(distance, "distance_z");
    if (distance == 0.0) throw ValidationError("distance_z", "z = 0 is singular");
    dslit::detail::require_positive(distance, "distance_z");
    return charge * charge * resistivity / (32.0 * std::numbers::pi * mass * distance * distance * distance);
}

} // namespace detail

/// SI inputs: Ohm m, kg, m, C. Returns 1/s.
inline double gamma_electron_plate(double resistivity_ohm_m, double mass_kg, double distance_m,
                                   double charge_c = codata::elementary_charge) {
    return detail::plate_rate(resistivity_ohm_m, mass_kg, distance_m, charge_c);
}

/// Gaussian inputs: resistivity in s, g, cm, statC. Returns 1/s.
inline double gamma_electron_plate_gaussian(double resistivity_s, double mass_g, double distance_cm,
                                            double charge_statc) {
    return detail::plate_rate(resistivity_s, mass_g, distance_cm, charge_statc);
}

} // namespace dslit::closedform
