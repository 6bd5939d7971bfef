#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "dslit/closedform.hpp"
#include "dslit/free_evolution.hpp"
#include "dslit/oracle.hpp"
#include "support/helpers.hpp"

using namespace dslit;
using namespace dslit::oracle;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Initial density matrix in (R, r), straight from the two-packet wavefunction.
double rho_initial(double eps, double d, double R, double r) {
    const double pref = 1.0 / std::sqrt(2.0 * kPi * eps * eps);
    const double e2 = 2.0 * eps * eps;
    return pref * (std::exp(-((R - d) * (R - d) + r * r) / e2) + std::exp(-((R + d) * (R + d) + r * r) / e2) +
                   std::exp(-((r - d) * (r - d) + R * R) / e2) + std::exp(-((r + d) * (r + d) + R * R) / e2));
}

std::complex<double> transform_by_quadrature(double eps, double d, double k, double r) {
    const double span = d + 12.0 * eps;
    auto re = [&](double R) { return rho_initial(eps, d, R, r) * std::cos(k * R); };
    auto im = [&](double R) { return -rho_initial(eps, d, R, r) * std::sin(k * R); };
    return {test::adaptive_simpson(re, -span, span, 1e-15), test::adaptive_simpson(im, -span, span, 1e-15)};
}

} // namespace

TEST_CASE("initial transform against quadrature over R", "[oracle]") {
    const auto p = natural_units(4.0, 1.0, 0.0, 0.0);
    for (double k : {0.0, 0.3, -1.7, 4.0}) {
        for (double r : {0.0, 1.0, -3.5, 4.0}) {
            const auto a = initial_transform(p, k, r);
            const auto b = transform_by_quadrature(1.0, 4.0, k, r);
            INFO("k " << k << " r " << r);
            CHECK(std::abs(a - b) < 1e-10);
        }
    }
    // k = r = 0: twice the trace.
    CHECK(initial_transform(p, 0.0, 0.0).real() == Approx(2.0 * (1.0 + std::exp(-8.0))).epsilon(1e-15));
    CHECK(initial_transform(p, 0.0, 0.0).imag() == 0.0);
}

TEST_CASE("initial transform cross terms vanish for well separated slits", "[oracle]") {
    const auto p = natural_units(10.0, 1.0, 0.0, 0.0);
    // At r = d the coherence between the packets is order one and the
    // packet diagonals are down by e^{-d^2 / 2}.
    const auto both = initial_transform(p, 0.0, 10.0);
    const auto direct = initial_transform(p, 0.0, 10.0, Slits::upper) + initial_transform(p, 0.0, 10.0, Slits::lower);
    CHECK(std::abs(direct) == Approx(2.0 * std::exp(-50.0)).epsilon(1e-14));
    CHECK(std::abs(both - direct) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("initial transform is Hermitian", "[oracle][property]") {
    const auto p = natural_units(6.0, 1.0, 0.0, 0.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> kd(-8.0, 8.0), rd(-12.0, 12.0);
    for (int i = 0; i < 200; ++i) {
        const double k = kd(rng), r = rd(rng);
        const auto a = initial_transform(p, k, r);
        CHECK(std::abs(initial_transform(p, -k, -r) - std::conj(a)) <= 1e-15 * std::max(std::abs(a), 1e-300));
    }
}

TEST_CASE("free evolution is pure advection", "[oracle]") {
    const auto p = natural_units(6.0, 2.0, 0.0, 0.0);
    for (double k : {-2.0, 0.4, 1.3}) {
        for (double r : {-5.0, 0.0, 2.5}) {
            const double t = 2.0;
            const auto evolved = evolve_point(p, k, r, t);
            const auto shifted = initial_transform(p, k, r - 2.0 * k * t);
            CHECK(std::abs(evolved) == Approx(std::abs(shifted)).epsilon(1e-14).margin(1e-300));
        }
    }
}

TEST_CASE("origin is a fixed point of the flow", "[oracle]") {
    const auto p = natural_units(6.0, 1.0, 0.5, 2.0);
    const auto start = initial_transform(p, 0.0, 0.0);
    for (double t : {0.0, 0.3, 1.0, 10.0, 99.0}) CHECK(evolve_point(p, 0.0, 0.0, t) == start);
}

TEST_CASE("closed-form decay integral against adaptive quadrature", "[oracle]") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> kd(-5.0, 5.0), rd(-10.0, 10.0), td(0.01, 3.0), thd(1e-4, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double t = td(rng);
        const double theta = thd(rng);
        const auto p = natural_units(6.0, t, theta, 1.0);
        const double k = kd(rng), r = rd(rng);
        auto sq = [&](double s) {
            const double rc = characteristic(p, k, r, t, s);
            return rc * rc;
        };
        const double closed = decay_integral(p, k, r, t);
        const double numeric = test::adaptive_simpson(sq, 0.0, t, 1e-15 * closed);
        INFO("k " << k << " r " << r << " t " << t << " theta " << theta);
        CHECK(test::relative_difference(closed, numeric) < 1e-12);
        const double gl = decay_integral(p, k, r, t, DecayMethod::gauss_legendre, 48);
        CHECK(test::relative_difference(gl, closed) < 1e-12);
    }
}

TEST_CASE("characteristic solves its ODE", "[oracle]") {
    // dr/ds = 2 hbar k / m + 2 gamma r, checked by central differences.
    const auto p = natural_units(6.0, 1.5, 0.8, 1.0);
    const double k = 0.7, r = -1.2, t = 1.5, h = 1e-5;
    for (double s : {0.2, 0.7, 1.3}) {
        const double deriv = (characteristic(p, k, r, t, s + h) - characteristic(p, k, r, t, s - h)) / (2 * h);
        const double rhs = 2.0 * k + 2.0 * p.coupling_rate * characteristic(p, k, r, t, s);
        CHECK(deriv == Approx(rhs).epsilon(1e-8));
    }
    CHECK(characteristic(p, k, r, t, t) == Approx(r).epsilon(1e-15));
    CHECK(characteristic(p, k, r, t, 0.0) == Approx(backtrace(p, k, r, t)).epsilon(1e-15));
}

TEST_CASE("gamma -> 0 continuity", "[oracle]") {
    auto p0 = natural_units(6.0, 1.0, 0.0, 0.0);
    auto p1 = p0;
    p1.coupling_rate = 1e-12;
    p0.temperature = p1.temperature = 1.0;
    for (double k : {-1.0, 0.5, 2.0}) {
        for (double r : {-3.0, 0.0, 4.0}) {
            const auto a = evolve_point(p0, k, r, 1.0);
            const auto b = evolve_point(p1, k, r, 1.0);
            CHECK(std::abs(a - b) <= 1e-8 * std::max(std::abs(a), 1e-300));
        }
    }
}

TEST_CASE("decay kernels are continuous across the Taylor switch", "[oracle][continuity]") {
    const double t0 = kernels::kTaylorThreshold;
    for (double theta : {std::nextafter(t0, 0.0), t0, 0.5 * t0, 2.0 * t0}) {
        const auto a = kernels::weights(theta, kernels::Branch::taylor);
        const auto b = kernels::weights(theta, kernels::Branch::closed_form);
        CHECK(test::relative_difference(a.rr, b.rr) < 1e-10);
        CHECK(test::relative_difference(a.rv, b.rv) < 1e-10);
        CHECK(test::relative_difference(a.vv, b.vv) < 1e-10);
    }
    const auto below = natural_units(6.0, 1.0, std::nextafter(t0, 0.0), 1.0);
    const auto at = natural_units(6.0, 1.0, t0, 1.0);
    CHECK(test::relative_difference(decay_integral(below, 1.3, -0.4, 1.0), decay_integral(at, 1.3, -0.4, 1.0)) <
          1e-10);
}

TEST_CASE("evolution preserves Hermiticity", "[oracle][property]") {
    const auto p = natural_units(6.0, 1.0, 0.5, 2.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> kd(-6.0, 6.0), rd(-10.0, 10.0), td(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double k = kd(rng), r = rd(rng), t = td(rng);
        const auto a = evolve_point(p, -k, -r, t);
        const auto b = std::conj(evolve_point(p, k, r, t));
        CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), 1e-300));
    }
}

TEST_CASE("trace", "[oracle]") {
    const auto p = natural_units(10.0, 1.0, 0.5, 2.0);
    const double tr = trace(p, 0.0);
    CHECK(tr == Approx(1.0 + std::exp(-50.0)).epsilon(1e-15));
    for (double t : {0.1, 1.0, 7.0, 100.0, 1e6}) CHECK(trace(p, t) == tr);
    CHECK(trace(natural_units(0.0, 1.0, 0.5, 2.0), 3.0) == 2.0);
}

TEST_CASE("diagonal at t = 0 is the initial probability density", "[oracle]") {
    const auto p = natural_units(6.0, 1.0, 0.5, 2.0);
    const auto grid = symmetric_grid(10.0, 801);
    const auto prof = diagonal_profile(p, 0.0, grid);
    const auto ref = free_profile(p, 0.0, grid);
    CHECK(test::peak_relative_deviation(prof.intensities, ref.intensities) < 1e-10);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(prof.intensities[i] - ref.intensities[i]) < 1e-10);
}

TEST_CASE("free diagonal matches analytic spreading", "[oracle]") {
    const auto p = natural_units(6.0, 5.0, 0.0, 0.0);
    const auto grid = symmetric_grid(40.0, 1601);
    const auto prof = diagonal_profile(p, 5.0, grid);
    const auto ref = free_profile(p, 5.0, grid);
    CHECK(test::peak_relative_deviation(prof.intensities, ref.intensities) < 1e-10);
}

TEST_CASE("diagonal is positive and conserves probability", "[oracle][property]") {
    for (double kappa : {0.0, 2.0, 10.0}) {
        for (double theta : {1e-3, 0.5, 1.0}) {
            const auto p = natural_units(8.0, 1.0, theta, kappa);
            const auto grid = symmetric_grid(25.0, 2001);
            const auto res = diagonal_solve(p, 1.0, grid);
            const auto& I = res.profile.intensities;
            const double peak = *std::max_element(I.begin(), I.end());
            for (double v : I) CHECK(v >= -1e-10 * peak);
            CHECK(integrate(res.profile) == Approx(trace(p, 1.0)).epsilon(1e-9));
            CHECK(res.doubling_change < kConvergenceTolerance);
            CHECK(res.imaginary_residue < 1e-10);
        }
    }
}

TEST_CASE("single-slit runs decompose the two-slit diagonal", "[oracle]") {
    // rho = psi1 psi1* + psi2 psi2* + cross terms; the remainder after removing
    // the single-packet diagonals is the interference term.
    const auto p = natural_units(4.0, 1.0, 0.5, 2.0);
    const auto grid = symmetric_grid(8.0, 401);
    const auto both = diagonal_profile(p, 0.0, grid);
    const auto upper = diagonal_profile(p, 0.0, grid, {}, Slits::upper);
    const auto lower = diagonal_profile(p, 0.0, grid, {}, Slits::lower);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double pref = 1.0 / std::sqrt(2.0 * kPi);
        CHECK(upper.intensities[i] == Approx(pref * std::exp(-2.0 * (x - 2.0) * (x - 2.0))).margin(1e-12));
        CHECK(lower.intensities[i] == Approx(pref * std::exp(-2.0 * (x + 2.0) * (x + 2.0))).margin(1e-12));
        const double cross = both.intensities[i] - upper.intensities[i] - lower.intensities[i];
        CHECK(cross == Approx(2.0 * pref * std::exp(-2.0 * (x * x + 4.0))).margin(1e-12));
    }
    // Later on the direct terms are still mirror images of each other.
    const auto up_t = diagonal_profile(p, 1.0, grid, {}, Slits::upper);
    const auto lo_t = diagonal_profile(p, 1.0, grid, {}, Slits::lower);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(up_t.intensities[i] == Approx(lo_t.intensities[grid.size() - 1 - i]).margin(1e-12));
}

TEST_CASE("under-resolved quadrature is reported", "[oracle]") {
    // Packets at R = +-12 alias onto a window of half-width 1 at this spacing.
    const auto p = natural_units(12.0, 1.0, 0.0, 0.0);
    const auto grid = symmetric_grid(1.0, 64);
    OracleConfig cfg;
    cfg.k_max = 10.0;
    cfg.k_points = 27;
    CHECK_THROWS_AS(diagonal_profile(p, 0.0, grid, cfg), ConvergenceError);

    cfg.k_points = 5; // spacing far too coarse for the window
    CHECK_THROWS_AS(diagonal_profile(p, 0.0, grid, cfg), ValidationError);
}

TEST_CASE("diagonal is bit-reproducible", "[oracle]") {
    const auto p = natural_units(6.0, 1.0, 0.5, 2.0);
    const auto grid = symmetric_grid(20.0, 512);
    const auto a = diagonal_profile(p, 1.0, grid);
    const auto b = diagonal_profile(p, 1.0, grid);
    CHECK(a.intensities == b.intensities);
}

TEST_CASE("oracle adjudicates the exact-pattern constants", "[oracle][regression]") {
    // theta = 0.5, kappa = 2, dtilde = 6 with t_L = 1 in natural units.
    const auto p = natural_units(6.0, 1.0, 0.5, 2.0);
    const auto grid = symmetric_grid(20.0, 4096);
    const auto truth = diagonal_solve(p, 1.0, grid);
    CHECK(truth.doubling_change < 1e-8);
    const auto cal = closedform::pattern_exact(p, grid, Convention::calibrated);
    const auto pub = closedform::pattern_exact(p, grid, Convention::published);
    const double dev_cal = test::peak_relative_deviation(cal.intensities, truth.profile.intensities);
    const double dev_pub = test::peak_relative_deviation(pub.intensities, truth.profile.intensities);
    CHECK(dev_cal < 1e-6);
    CHECK(dev_pub > 0.1);
}
