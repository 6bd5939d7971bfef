#pragma once

// Semi-analytic solver for the high-temperature master equation
//
//   d rho/dt = (i hbar / 2m)(d_x^2 - d_x'^2) rho - gamma (x - x')(d_x - d_x') rho
//              - D/(4 hbar^2) (x - x')^2 rho
//
// After the change to R = x + x', r = x - x' and a Fourier transform over R,
//
//   d_t rho~ = -(2 hbar k / m + 2 gamma r) d_r rho~ - D r^2 / (4 hbar^2) rho~,
//
// which is first order in r and is integrated exactly along its
// characteristics. The screen distribution follows from one k-quadrature:
//
//   rho(x, x, t) = 1/(2 pi) int rho~(k, 0, t) e^{2 i k x} dk.
//
// Nothing in this file uses the closed-form pattern code; it is the
// independent reference those formulas are checked against. The derivation
// is written out in docs/derivation.md.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dslit/errors.hpp"
#include "dslit/params.hpp"
#include "dslit/profile.hpp"

namespace dslit::oracle {

using complex = std::complex<double>;

/// Which packets the initial state contains. `upper` is the packet at +d/2.
enum class Slits { both, upper, lower };

enum class DecayMethod { closed_form, gauss_legendre };

struct OracleConfig {
    double k_max = 0.0;            // 1/m, integration runs over [-k_max, k_max]
    std::size_t k_points = 0;      // trapezoid nodes; 0 selects automatic sizing
    std::size_t time_quadrature = 48; // Gauss-Legendre nodes for DecayMethod::gauss_legendre
    DecayMethod decay = DecayMethod::closed_form;

    double k_spacing() const { return 2.0 * k_max / static_cast<double>(k_points - 1); }
};

/// Fourier transform over R of the initial two-packet density matrix,
/// int rho(R, r, 0) e^{-i k R} dR.
inline complex initial_transform(const PhysicalParams& p, double k, double r, Slits slits = Slits::both) {
    const double eps = p.packet_width;
    const double d = p.slit_separation;
    const double two_eps2 = 2.0 * eps * eps;
    const double k_envelope = -0.5 * eps * eps * k * k;

    // (R -+ d)^2 + r^2 terms: packets sitting on the diagonal at x = +-d/2.
    const double diag = std::exp(k_envelope - r * r / two_eps2);
    complex value{0.0, 0.0};
    if (slits != Slits::lower) value += diag * std::polar(1.0, -k * d);
    if (slits != Slits::upper) value += diag * std::polar(1.0, k * d);
    if (slits == Slits::both) {
        // (r -+ d)^2 + R^2 terms: the coherences between the two packets.
        value += std::exp(k_envelope - (r - d) * (r - d) / two_eps2);
        value += std::exp(k_envelope - (r + d) * (r + d) / two_eps2);
    }
    return value;
}

namespace kernels {

// Switch to Taylor sums below this gamma t.
inline constexpr double kTaylorThreshold = 5e-2;

template <class Coefficient>
double taylor(double theta, Coefficient c, int first) {
    double sum = 0.0;
    double power = 1.0;
    for (int n = first; n < first + 60; ++n) {
        const double term = c(n) * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        power *= theta;
    }
    return sum;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

inline double sign(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

// (1 - e^{-z}) / z
inline double exprel(double z) {
    if (z >= kTaylorThreshold) return -std::expm1(-z) / z;
    return taylor(z, [](int n) { return sign(n) / factorial(n + 1); }, 0);
}

// Along a characteristic ending at (r, t), with u = t - s the look-back time,
// r(u) = r e^{-2 gamma u} - v phi(u), phi(u) = (1 - e^{-2 gamma u}) / (2 gamma).
// Then int_0^t r(u)^2 du = r^2 t w_rr - 2 r v t^2 w_rv + v^2 t^3 w_vv with
//   w_rr = exprel(4 theta)
//   w_rv = (exprel(2 theta) - exprel(4 theta)) / (2 theta)
//   w_vv = (1 - 2 exprel(2 theta) + exprel(4 theta)) / (4 theta^2)
struct Weights {
    double rr;
    double rv;
    double vv;
};

enum class Branch { automatic, closed_form, taylor };

inline Weights weights(double theta, Branch branch = Branch::automatic) {
    const bool use_taylor =
        branch == Branch::taylor || (branch == Branch::automatic && theta < kTaylorThreshold);
    if (!use_taylor) {
        const double e2 = -std::expm1(-2.0 * theta) / (2.0 * theta);
        const double e4 = -std::expm1(-4.0 * theta) / (4.0 * theta);
        return {e4, (e2 - e4) / (2.0 * theta), (1.0 - 2.0 * e2 + e4) / (4.0 * theta * theta)};
    }
    const double rr = taylor(
        theta, [](int n) { return sign(n) * std::ldexp(1.0, 2 * n) / factorial(n + 1); }, 0);
    const double rv = taylor(
        theta,
        [](int m) {
            const int n = m + 1;
            return sign(n + 1) * (std::ldexp(1.0, 2 * n) - std::ldexp(1.0, n)) / (2.0 * factorial(n + 1));
        },
        0);
    const double vv = taylor(
        theta,
        [](int m) {
            const int n = m + 2;
            return sign(n) * (std::ldexp(1.0, 2 * n) - std::ldexp(1.0, n + 1)) / (4.0 * factorial(n + 1));
        },
        0);
    return {rr, rv, vv};
}

} // namespace kernels

/// Drift speed of r along a characteristic due to the kinetic term, 2 hbar k / m.
inline double drift(const PhysicalParams& p, double k) { return 2.0 * p.hbar / p.mass * k; }

/// Foot r0 at s = 0 of the characteristic through (r, t).
inline double backtrace(const PhysicalParams& p, double k, double r, double t) {
    const double theta = p.coupling_rate * t;
    const double phi = t * kernels::exprel(2.0 * theta);
    return r * std::exp(-2.0 * theta) - drift(p, k) * phi;
}

/// r_char(s) for the characteristic through (r, t), 0 <= s <= t.
inline double characteristic(const PhysicalParams& p, double k, double r, double t, double s) {
    const double u = t - s;
    const double theta_u = p.coupling_rate * u;
    return r * std::exp(-2.0 * theta_u) - drift(p, k) * u * kernels::exprel(2.0 * theta_u);
}

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

} // namespace detail

/// int_0^t r_char(s)^2 ds along the characteristic through (r, t).
inline double decay_integral(const PhysicalParams& p, double k, double r, double t,
                             DecayMethod method = DecayMethod::closed_form,
                             std::size_t nodes = 48) {
    if (method == DecayMethod::gauss_legendre) {
        std::vector<double> z, w;
        detail::gauss_legendre(nodes, z, w);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            const double s = 0.5 * t * (z[i] + 1.0);
            const double rc = characteristic(p, k, r, t, s);
            sum += w[i] * rc * rc;
        }
        return 0.5 * t * sum;
    }
    const auto w = kernels::weights(p.coupling_rate * t);
    const double vt = drift(p, k) * t;
    return t * (r * r * w.rr - 2.0 * r * vt * w.rv + vt * vt * w.vv);
}

/// D / (4 hbar^2), the decoherence rate per unit r^2.
inline double decoherence_rate(const PhysicalParams& p) {
    const double diffusion = 2.0 * p.mass * p.coupling_rate * p.boltzmann * p.temperature;
    return diffusion / p.hbar / p.hbar / 4.0;
}

/// rho~(k, r, t) from the exact characteristic solution.
inline complex evolve_point(const PhysicalParams& p, double k, double r, double t,
                            Slits slits = Slits::both, DecayMethod method = DecayMethod::closed_form,
                            std::size_t time_nodes = 48) {
    if (!(t >= 0.0)) throw ValidationError("t", "time must be non-negative");
    if (p.coupling_rate * t > 50.0)
        throw ValidationError("coupling_rate", "gamma t > 50 is outside the supported range");
    const double r0 = backtrace(p, k, r, t);
    const double decay = decoherence_rate(p) * decay_integral(p, k, r, t, method, time_nodes);
    return initial_transform(p, k, r0, slits) * std::exp(-decay);
}

/// Tr rho = rho~(0, 0, t) / 2. (k, r) = (0, 0) is a fixed point of the flow
/// with zero decay, so this is the initial trace 1 + e^{-d^2 / 2 eps^2}.
inline double trace(const PhysicalParams& p, double t, Slits slits = Slits::both) {
    const double r0 = backtrace(p, 0.0, 0.0, t);
    const double decay = decoherence_rate(p) * decay_integral(p, 0.0, 0.0, t);
    return 0.5 * (initial_transform(p, 0.0, r0, slits) * std::exp(-decay)).real();
}

namespace detail {

inline double grid_extent(const PhysicalParams& p, std::span<const double> grid) {
    double x_max = p.packet_width;
    for (double x : grid) x_max = std::max(x_max, std::abs(x));
    return x_max;
}

inline double reference_magnitude(const PhysicalParams& p, double t, Slits slits) {
    return std::max(std::abs(evolve_point(p, 0.0, 0.0, t, slits)), 1e-300);
}

// Largest |rho~(k, 0, t)| for |k| >= k_edge, sampled out to 4 k_edge.
inline double tail_magnitude(const PhysicalParams& p, double t, double k_edge, Slits slits) {
    double tail = 0.0;
    for (int j = 0; j <= 64; ++j) {
        const double k = k_edge * std::pow(4.0, j / 64.0);
        tail = std::max({tail, std::abs(evolve_point(p, k, 0.0, t, slits)),
                         std::abs(evolve_point(p, -k, 0.0, t, slits))});
    }
    return tail;
}

} // namespace detail

inline constexpr double kTailTolerance = 1e-16;
inline constexpr double kConvergenceTolerance = 1e-8;

/// Size the k-quadrature for a screen extending to |x| <= max|grid|.
///
/// |rho~(k, 0, t)| never exceeds its t = 0 envelope 4 e^{-eps^2 k^2 / 2}, so
/// k = 10 / eps always bounds the integrand. The actual cut is found by
/// scanning the evolved integrand inwards from that bound; at later times it
/// is much narrower than at t = 0.
inline OracleConfig auto_config(const PhysicalParams& p, double t, std::span<const double> grid,
                                Slits slits = Slits::both) {
    const double eps = p.packet_width;
    const double x_max = detail::grid_extent(p, grid);
    const double ref = detail::reference_magnitude(p, t, slits);
    const double k_bound = 10.0 / eps;

    double k_edge = k_bound;
    const double step = std::pow(2.0, -1.0 / 32.0);
    for (int j = 0; j < 32 * 60; ++j) {
        const double k = k_bound * std::pow(step, j);
        const double value = std::max(std::abs(evolve_point(p, k, 0.0, t, slits)),
                                      std::abs(evolve_point(p, -k, 0.0, t, slits)));
        if (value > kTailTolerance * ref) {
            k_edge = std::min(k_bound, 1.5 * k);
            break;
        }
        k_edge = k;
    }

    // Images of the R-space solution sit at multiples of 2 pi / h; keep them
    // clear of the screen window and of the packets at R = +-d.
    const double d = p.slit_separation;
    const double h = std::min({std::numbers::pi / (4.0 * x_max),
                               std::numbers::pi / (2.0 * (x_max + d)), k_edge / 32.0});
    OracleConfig cfg;
    cfg.k_max = k_edge;
    cfg.k_points = 2 * static_cast<std::size_t>(std::ceil(k_edge / h)) + 1;
    return cfg;
}

/// Throws ValidationError if `cfg` cannot resolve a screen out to max|grid|.
inline void validate_config(const PhysicalParams& p, double t, std::span<const double> grid,
                            const OracleConfig& cfg, Slits slits = Slits::both) {
    if (!(cfg.k_max > 0.0) || !std::isfinite(cfg.k_max))
        throw ValidationError("k_max", "must be positive and finite");
    if (cfg.k_points < 3) throw ValidationError("k_points", "need at least 3 nodes");
    if (cfg.decay == DecayMethod::gauss_legendre && cfg.time_quadrature < 2)
        throw ValidationError("time_quadrature", "need at least 2 nodes");
    const double x_max = detail::grid_extent(p, grid);
    if (cfg.k_spacing() > std::numbers::pi / (4.0 * x_max) * (1.0 + 1e-12))
        throw ValidationError("k_points", "k spacing too coarse for the screen span");
    // k_max * eps >= 10 always suffices; otherwise the evolved tail must be negligible.
    if (cfg.k_max * p.packet_width < 10.0 &&
        detail::tail_magnitude(p, t, cfg.k_max, slits) >
            kTailTolerance * 1e4 * detail::reference_magnitude(p, t, slits))
        throw ValidationError("k_max", "integrand not negligible at k_max");
}

/// Result of one quadrature pass, with the convergence evidence attached.
struct DiagonalResult {
    PatternProfile profile;
    OracleConfig config;          // the finer of the two node sets actually used
    double doubling_change = 0.0; // max |I_2N - I_N| / max |I_2N|
    double imaginary_residue = 0.0; // max |Im I| / max |I|
};

/// rho(x, x, t) on `grid` by trapezoid quadrature over k of rho~(k, 0, t),
/// checked against the same sum with half the nodes. Node values are reduced
/// in index order, so results are bit-reproducible.
inline DiagonalResult diagonal_solve(const PhysicalParams& p, double t, std::span<const double> grid,
                                     OracleConfig cfg = {}, Slits slits = Slits::both) {
    validate(p);
    require_sorted_finite(grid);
    if (cfg.k_points == 0) cfg = auto_config(p, t, grid, slits);
    validate_config(p, t, grid, cfg, slits);

    // Fine set: 2N - 1 nodes at half spacing; the coarse set is every other node.
    const std::size_t n_fine = 2 * cfg.k_points - 1;
    const double h_fine = 2.0 * cfg.k_max / static_cast<double>(n_fine - 1);
    std::vector<double> k(n_fine);
    std::vector<complex> value(n_fine);
    for (std::size_t j = 0; j < n_fine; ++j) {
        k[j] = -cfg.k_max + static_cast<double>(j) * h_fine;
        value[j] = evolve_point(p, k[j], 0.0, t, slits, cfg.decay, cfg.time_quadrature);
        if (!std::isfinite(value[j].real()) || !std::isfinite(value[j].imag()))
            throw NumericalError("non-finite transformed state at k = " + std::to_string(k[j]));
    }

    const double norm = 1.0 / (2.0 * std::numbers::pi);
    std::vector<complex> fine(grid.size()), coarse(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        complex sum_fine{0.0, 0.0}, sum_coarse{0.0, 0.0};
        for (std::size_t j = 0; j < n_fine; ++j) {
            const double w = (j == 0 || j + 1 == n_fine) ? 0.5 : 1.0;
            const complex term = value[j] * std::polar(1.0, 2.0 * k[j] * grid[i]);
            sum_fine += w * term;
            if (j % 2 == 0) sum_coarse += w * term;
        }
        fine[i] = sum_fine * (norm * h_fine);
        coarse[i] = sum_coarse * (norm * 2.0 * h_fine);
    }

    double peak = 0.0, change = 0.0, imag = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) peak = std::max(peak, std::abs(fine[i]));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        change = std::max(change, std::abs(fine[i] - coarse[i]));
        imag = std::max(imag, std::abs(fine[i].imag()));
    }
    const double scale = peak > 0.0 ? peak : 1.0;

    DiagonalResult out;
    out.doubling_change = change / scale;
    out.imaginary_residue = imag / scale;
    out.config = cfg;
    out.config.k_points = n_fine;
    if (out.doubling_change > kConvergenceTolerance)
        throw ConvergenceError("k-quadrature not converged: node doubling changed the profile by " +
                                   std::to_string(out.doubling_change) + " (relative to peak)",
                               out.doubling_change);
    if (out.imaginary_residue > 1e-10)
        throw NumericalError("diagonal has an imaginary residue of " +
                             std::to_string(out.imaginary_residue) + " of its peak");

    auto& prof = out.profile;
    prof.positions.assign(grid.begin(), grid.end());
    prof.intensities.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) prof.intensities[i] = fine[i].real();
    prof.meta.source = Source::oracle;
    prof.meta.parameters = {{"t", t},
                            {"k_max", out.config.k_max},
                            {"k_points", static_cast<double>(out.config.k_points)},
                            {"doubling_change", out.doubling_change}};
    return out;
}

inline PatternProfile diagonal_profile(const PhysicalParams& p, double t, std::span<const double> grid,
                                       OracleConfig cfg = {}, Slits slits = Slits::both) {
    return diagonal_solve(p, t, grid, cfg, slits).profile;
}

} // namespace dslit::oracle
