#pragma once

// Closed-form screen distributions.
//
// All formulas are evaluated with lengths in units of the packet width eps:
// xs = x / eps, x0s = dtilde / 2. Intensities are returned in 1/m.
//
//   rho(x) = 1/(sqrt(pi) eps W) [ 1/2 e^{-(xs-x0s)^2/W^2} + 1/2 e^{-(xs+x0s)^2/W^2}
//                                 + e^{-(xs^2+x0s^2)/W^2} S cos(k xs) ]
//
// where W, S and k depend on the model (exact or weak coupling) and on the
// Convention. See docs/derivation.md for where the calibrated constants come
// from.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dslit/errors.hpp"
#include "dslit/params.hpp"
#include "dslit/profile.hpp"
#include "dslit/series.hpp"

namespace dslit::closedform {

/// Coefficients of the exact diagonal at t_L, in packet-width units.
struct ExactPatternParams {
    double gamma_big = 0.0;   // Gamma / eps^2 = kappa f(theta) / (16 theta^3)
    double omega_sq = 0.0;    // Omega^2 / eps^2
    double cos_coeff = 0.0;   // cosine wavenumber in 1/eps
    double cross_decay = 0.0; // cross term carries exp(-cross_decay x0s^2 / omega_sq)
};

inline ExactPatternParams exact_pattern_params(const DimensionlessGroups& g,
                                               Convention convention = Convention::calibrated,
                                               series::Branch branch = series::Branch::automatic) {
    const double q = series::relaxation_ratio(g.theta, branch); // (1 - e^{-2 theta}) / theta
    const double spread = g.beta * g.beta * q * q;

    ExactPatternParams e;
    e.gamma_big = g.kappa * series::gamma_kernel(g.theta, branch);
    if (convention == Convention::published) {
        e.omega_sq = 1.0 + spread + e.gamma_big;
        e.cross_decay = e.gamma_big;
    } else {
        e.omega_sq = 0.5 + 0.5 * spread + e.gamma_big;
        e.cross_decay = 2.0 * e.gamma_big;
    }
    e.cos_coeff = g.dtilde * g.beta * q / e.omega_sq;
    return e;
}

/// Shape shared by both models: two direct Gaussians plus the interference term.
struct TwoPacketShape {
    double width_sq = 1.0;    // W^2 in eps^2
    double suppression = 1.0; // S, multiplies the cosine term
    double wavenumber = 0.0;  // k in 1/eps

    /// Intensity in 1/eps at xs = x / eps.
    double operator()(double xs, double x0s) const {
        const double w2 = width_sq;
        const double direct = 0.5 * std::exp(-(xs - x0s) * (xs - x0s) / w2) +
                              0.5 * std::exp(-(xs + x0s) * (xs + x0s) / w2);
        const double cross =
            std::exp(-(xs * xs + x0s * x0s) / w2) * suppression * std::cos(wavenumber * xs);
        return (direct + cross) / (std::sqrt(std::numbers::pi * w2));
    }
};

inline TwoPacketShape exact_shape(const DimensionlessGroups& g, Convention convention,
                                  series::Branch branch = series::Branch::automatic) {
    const auto e = exact_pattern_params(g, convention, branch);
    const double x0s = 0.5 * g.dtilde;
    return {e.omega_sq, std::exp(-e.cross_decay * x0s * x0s / e.omega_sq), e.cos_coeff};
}

/// e^{-t_ratio/24} (published) or e^{-t_ratio/12} (calibrated).
inline double envelope_factor(double t_ratio, Convention convention = Convention::calibrated) {
    if (!(t_ratio >= 0.0)) throw ValidationError("t_ratio", "must be non-negative");
    const double divisor = convention == Convention::published ? 24.0 : 12.0;
    return std::exp(-t_ratio / divisor);
}

/// Weak coupling (theta << 1) and spreading-dominated (sigma >> eps) limit.
inline TwoPacketShape weak_shape(const DimensionlessGroups& g, Convention convention) {
    // sigma / eps = lambda L / (pi eps^2) = 2 beta
    TwoPacketShape s;
    if (convention == Convention::published) {
        s.width_sq = 4.0 * g.beta * g.beta;
        s.wavenumber = g.dtilde / (2.0 * g.beta); // pi x d / (lambda L)
    } else {
        s.width_sq = 2.0 * g.beta * g.beta;
        s.wavenumber = g.dtilde / g.beta; // 2 pi x d / (lambda L)
    }
    s.suppression = envelope_factor(g.t_ratio(), convention);
    return s;
}

namespace detail {

inline std::map<std::string, double> echo(const ScaledSetup& setup) {
    const auto& g = setup.groups;
    return {{"theta", g.theta},   {"beta", g.beta},       {"kappa", g.kappa},
            {"dtilde", g.dtilde}, {"t_ratio", g.t_ratio()}, {"length_unit_m", setup.length_unit}};
}

inline PatternProfile sample(const TwoPacketShape& shape, const ScaledSetup& setup,
                             std::span<const double> grid) {
    require_sorted_finite(grid);
    const double eps = setup.length_unit;
    const double x0s = 0.5 * setup.groups.dtilde;
    PatternProfile out;
    out.positions.assign(grid.begin(), grid.end());
    out.intensities.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double value = shape(grid[i] / eps, x0s) / eps;
        if (!std::isfinite(value))
            throw NumericalError("non-finite intensity at x = " + std::to_string(grid[i]));
        out.intensities[i] = value;
    }
    out.meta.parameters = echo(setup);
    return out;
}

} // namespace detail

/// Exact screen distribution at the flight time, sampled on `grid` (m).
inline PatternProfile pattern_exact(const ScaledSetup& setup, std::span<const double> grid,
                                    Convention convention = Convention::calibrated) {
    auto out = detail::sample(exact_shape(setup.groups, convention), setup, grid);
    out.meta.source = Source::exact;
    out.meta.convention = convention;
    return out;
}

inline PatternProfile pattern_exact(const PhysicalParams& p, std::span<const double> grid,
                                    Convention convention = Convention::calibrated) {
    auto warnings = validate(p);
    auto out = pattern_exact(scaled(p), grid, convention);
    out.meta.warnings = std::move(warnings);
    return out;
}

inline std::vector<std::string> weak_regime_warnings(const DimensionlessGroups& g) {
    std::vector<std::string> w;
    if (g.theta > 1e-2)
        w.push_back("weak-coupling regime violated: gamma t_L = " + std::to_string(g.theta) +
                    " > 1e-2");
    if (2.0 * g.beta < 10.0)
        w.push_back("spreading regime violated: sigma < 10 packet widths");
    return w;
}

/// Weak-coupling screen distribution. Out-of-regime inputs still produce a
/// profile, with the violation listed in meta.warnings.
inline PatternProfile pattern_weak(const ScaledSetup& setup, std::span<const double> grid,
                                   Convention convention = Convention::calibrated) {
    auto out = detail::sample(weak_shape(setup.groups, convention), setup, grid);
    out.meta.source = Source::weak;
    out.meta.convention = convention;
    out.meta.warnings = weak_regime_warnings(setup.groups);
    return out;
}

inline PatternProfile pattern_weak(const PhysicalParams& p, std::span<const double> grid,
                                   Convention convention = Convention::calibrated) {
    auto warnings = validate(p);
    auto out = pattern_weak(scaled(p), grid, convention);
    out.meta.warnings.insert(out.meta.warnings.begin(), warnings.begin(), warnings.end());
    return out;
}

/// Distance between neighbouring bright fringes of the weak pattern, m.
inline double fringe_period(const ScaledSetup& setup, Convention convention = Convention::calibrated) {
    const double k = weak_shape(setup.groups, convention).wavenumber;
    return 2.0 * std::numbers::pi / k * setup.length_unit;
}

/// Position of the n-th bright fringe (cosine argument 2 pi n), m.
inline double fringe_position(const ScaledSetup& setup, int n,
                              Convention convention = Convention::calibrated) {
    return n * fringe_period(setup, convention);
}

/// Flat-background visibility e^{-t_ratio/c} / cosh(2 x_n x0 / W^2) at fringe
/// centre x_n (m).
inline double visibility_formula(const ScaledSetup& setup, double fringe_center,
                                 Convention convention = Convention::calibrated) {
    const auto shape = weak_shape(setup.groups, convention);
    const double xs = fringe_center / setup.length_unit;
    const double x0s = 0.5 * setup.groups.dtilde;
    return shape.suppression / std::cosh(2.0 * xs * x0s / shape.width_sq);
}

inline double visibility_formula(const PhysicalParams& p, double fringe_center,
                                 Convention convention = Convention::calibrated) {
    return visibility_formula(scaled(p), fringe_center, convention);
}

} // namespace dslit::closedform
