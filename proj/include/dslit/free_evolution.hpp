#pragma once

// Closed-form Schroedinger evolution of the two-packet state with no
// environment. Built from the textbook spreading of a single Gaussian,
//
//   e^{-x^2/eps^2} -> (1 + i tau)^{-1/2} e^{-x^2 / (eps^2 (1 + i tau))},  tau = 2 hbar t / (m eps^2),
//
// and used as a reference for the gamma = D = 0 limit of every other path.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "dslit/params.hpp"
#include "dslit/profile.hpp"

namespace dslit {

/// psi(x, t) for the symmetric two-packet state (normalised per packet).
inline std::complex<double> free_wavefunction(const PhysicalParams& p, double x, double t) {
    using complex = std::complex<double>;
    const double eps = p.packet_width;
    const double x0 = 0.5 * p.slit_separation;
    const double tau = 2.0 * p.hbar * t / (p.mass * eps * eps);
    const complex spread{1.0, tau};
    const double norm = 1.0 / (std::sqrt(2.0) * std::pow(std::numbers::pi / 2.0, 0.25) * std::sqrt(eps));
    const complex a = std::exp(-(x - x0) * (x - x0) / (eps * eps * spread));
    const complex b = std::exp(-(x + x0) * (x + x0) / (eps * eps * spread));
    return norm * (a + b) / std::sqrt(spread);
}

inline PatternProfile free_profile(const PhysicalParams& p, double t, std::span<const double> grid) {
    PatternProfile out;
    out.positions.assign(grid.begin(), grid.end());
    out.intensities.reserve(grid.size());
    for (double x : grid) out.intensities.push_back(std::norm(free_wavefunction(p, x, t)));
    out.meta.source = Source::exact;
    out.meta.parameters = {{"t", t}};
    return out;
}

} // namespace dslit
