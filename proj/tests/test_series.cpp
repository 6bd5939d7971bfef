#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dslit/series.hpp"
#include "support/helpers.hpp"

using namespace dslit;
using dslit::series::Branch;

TEST_CASE("kernels at theta = 0", "[series]") {
    CHECK(series::relaxation_ratio(0.0) == 2.0);
    CHECK(series::gamma_kernel(0.0) == Catch::Approx(1.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("gamma kernel against quadrature of its defining integral", "[series]") {
    // f(theta) / (16 theta^3) = int_0^1 (1 - e^{-2 theta s})^2 / (4 theta^2) ds
    for (double theta : {1e-7, 1e-4, 3e-3, 9.9e-3, 1.01e-2, 0.1, 0.5, 1.0, 5.0, 40.0}) {
        auto integrand = [theta](double s) {
            const double a = -std::expm1(-2.0 * theta * s) / (2.0 * theta);
            return a * a;
        };
        const double reference = test::adaptive_simpson(integrand, 0.0, 1.0, 1e-17);
        INFO("theta = " << theta);
        CHECK(test::relative_difference(series::gamma_kernel(theta), reference) < 1e-12);
    }
}

TEST_CASE("relaxation ratio against expm1", "[series]") {
    for (double theta : {1e-9, 1e-5, 5e-3, 0.02, 0.7, 12.0}) {
        const double reference = -std::expm1(-2.0 * theta) / theta;
        CHECK(test::relative_difference(series::relaxation_ratio(theta), reference) < 1e-14);
    }
}

TEST_CASE("leading Taylor coefficients of f", "[series]") {
    // f = (16/3) theta^3 - 8 theta^4 + O(theta^5)
    const double theta = 1e-5;
    const double f = 16.0 * theta * theta * theta * series::gamma_kernel(theta);
    const double leading = 16.0 / 3.0 * std::pow(theta, 3) - 8.0 * std::pow(theta, 4);
    CHECK(test::relative_difference(f, leading) < 1e-9);
}

TEST_CASE("branch switch is continuous", "[series][continuity]") {
    const double t0 = series::kSeriesThreshold;
    const double below = std::nextafter(t0, 0.0);
    CHECK(test::relative_difference(series::gamma_kernel(below), series::gamma_kernel(t0)) < 1e-10);
    CHECK(test::relative_difference(series::relaxation_ratio(below), series::relaxation_ratio(t0)) < 1e-10);
    // Both branches evaluated at the same points around the switch.
    for (double theta : {0.5 * t0, t0, 2.0 * t0}) {
        CHECK(test::relative_difference(series::gamma_kernel(theta, Branch::taylor),
                                        series::gamma_kernel(theta, Branch::closed_form)) < 1e-10);
        CHECK(test::relative_difference(series::relaxation_ratio(theta, Branch::taylor),
                                        series::relaxation_ratio(theta, Branch::closed_form)) < 1e-10);
    }
}
