#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "dslit/params.hpp"
#include "support/helpers.hpp"

using namespace dslit;
using Catch::Approx;

namespace {

// Reference geometry (1 um slits, 0.1 um packets, 20 cm flight) with a C60-like particle at room temperature.
PhysicalParams reference_params() {
    PhysicalParams p;
    p.mass = 1.196e-24;
    p.slit_separation = 1e-6;
    p.packet_width = 1e-7;
    p.de_broglie_wavelength = 5e-12;
    p.path_length = 0.2;
    p.coupling_rate = 3e-9;
    p.temperature = 300.0;
    return p;
}

} // namespace

TEST_CASE("derived scales for the reference geometry", "[params]") {
    const auto s = derive_scales(reference_params());
    // sigma = lambda L / (pi eps) = 1e-12 / (pi 1e-7)
    CHECK(s.envelope_width == Approx(3.1830988618379e-6).epsilon(1e-12));
    CHECK(s.fringe_spacing == Approx(1.0e-6).epsilon(1e-14));
    CHECK(s.flight_time > 0.0);
    CHECK(std::isfinite(s.decoherence_time));
    CHECK(s.decoherence_time > 0.0);
}

TEST_CASE("no coupling means no decoherence", "[params]") {
    auto p = reference_params();
    p.coupling_rate = 0.0;
    const auto s = derive_scales(p);
    CHECK(s.decoherence_time == std::numeric_limits<double>::infinity());
    const auto g = dimensionless(p, s);
    CHECK(g.theta == 0.0);
    CHECK(g.kappa == 0.0);

    p.coupling_rate = 1e-9;
    p.temperature = 0.0;
    CHECK(derive_scales(p).decoherence_time == std::numeric_limits<double>::infinity());
    CHECK(scaled(p).groups.kappa == 0.0);
    CHECK(scaled(p).groups.theta > 0.0);
}

TEST_CASE("decoherence time scales as 1/d^2", "[params]") {
    auto p = reference_params();
    const double tau1 = derive_scales(p).decoherence_time;
    p.slit_separation *= 2.0;
    const double tau2 = derive_scales(p).decoherence_time;
    CHECK(tau1 / tau2 == Approx(4.0).epsilon(1e-15));
}

TEST_CASE("dtilde is the separation in packet widths", "[params]") {
    auto p = reference_params();
    p.slit_separation = 2.0 * p.packet_width;
    CHECK(scaled(p).groups.dtilde == 2.0);
}

TEST_CASE("t_L / tau_D from SI agrees with the groups", "[params]") {
    const auto p = reference_params();
    const auto s = derive_scales(p);
    const auto g = dimensionless(p, s);
    // direct SI: t_L / tau_D = D d^2 t_L / hbar^2
    const double direct = s.diffusion * p.slit_separation * p.slit_separation * s.flight_time /
                          (p.hbar * p.hbar);
    CHECK(test::relative_difference(direct, g.t_ratio()) < 1e-12);
    CHECK(test::relative_difference(s.flight_time / s.decoherence_time, direct) < 1e-12);
}

TEST_CASE("flight time two ways", "[params]") {
    for (double mass : {9.109e-31, 1.196e-24, 3.0e-23}) {
        auto p = reference_params();
        p.mass = mass;
        const auto s = derive_scales(p);
        // hbar t_L / m = lambda L / (2 pi)
        const double other = p.de_broglie_wavelength * p.path_length / (2.0 * std::numbers::pi) * p.mass /
                             p.hbar;
        CHECK(test::relative_difference(s.flight_time, other) < 4 * std::numeric_limits<double>::epsilon());
        // tau_D * (t_L / tau_D) = t_L
        CHECK(test::relative_difference(s.decoherence_time * (s.flight_time / s.decoherence_time),
                                        s.flight_time) < 1e-15);
    }
}

TEST_CASE("groups are finite, non-negative and vanish with the coupling", "[params][property]") {
    // Deterministic sweep over a log grid of the SI inputs.
    for (double gamma : {0.0, 1e-12, 1e-6, 1.0, 1e3}) {
        for (double temp : {0.0, 1e-3, 300.0}) {
            for (double mass : {1e-30, 1e-24, 1e-20}) {
                auto p = reference_params();
                p.coupling_rate = gamma;
                p.temperature = temp;
                p.mass = mass;
                const auto g = scaled(p).groups;
                for (double v : {g.theta, g.beta, g.kappa, g.dtilde}) {
                    CHECK(std::isfinite(v));
                    CHECK(v >= 0.0);
                }
                CHECK((g.theta == 0.0) == (gamma == 0.0));
                CHECK((g.kappa == 0.0) == (gamma * temp == 0.0));
            }
        }
    }
}

TEST_CASE("validation names the offending field", "[params]") {
    auto check_field = [](PhysicalParams p, const char* field) {
        try {
            derive_scales(p);
            FAIL("expected a ValidationError for " << field);
        } catch (const ValidationError& e) {
            CHECK(e.field() == field);
        }
    };
    auto p = reference_params();
    auto bad = p;
    bad.mass = 0.0;
    check_field(bad, "mass");
    bad = p;
    bad.packet_width = -1.0;
    check_field(bad, "packet_width");
    bad = p;
    bad.de_broglie_wavelength = std::numeric_limits<double>::quiet_NaN();
    check_field(bad, "de_broglie_wavelength");
    bad = p;
    bad.path_length = std::numeric_limits<double>::infinity();
    check_field(bad, "path_length");
    bad = p;
    bad.coupling_rate = -1e-3;
    check_field(bad, "coupling_rate");
    bad = p;
    bad.temperature = -1.0;
    check_field(bad, "temperature");
    bad = p;
    bad.slit_separation = -1e-6;
    check_field(bad, "slit_separation");
}

TEST_CASE("overlapping packets warn but are accepted", "[params]") {
    auto p = reference_params();
    CHECK(validate(p).empty());
    p.slit_separation = 1.5 * p.packet_width;
    const auto w = validate(p);
    REQUIRE(w.size() == 1);
    CHECK(w.front().find("overlap") != std::string::npos);
}

TEST_CASE("natural units reproduce the requested groups", "[params]") {
    const auto p = natural_units(6.0, 1.0, 0.5, 2.0);
    const auto g = scaled(p).groups;
    CHECK(g.theta == Approx(0.5).epsilon(1e-14));
    CHECK(g.kappa == Approx(2.0).epsilon(1e-14));
    CHECK(g.beta == Approx(1.0).epsilon(1e-14));
    CHECK(g.dtilde == 6.0);
    CHECK(derive_scales(p).flight_time == Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(natural_units(6.0, 1.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("ratio mode puts the decoherence strength into kappa", "[params]") {
    const Geometry geo{1e-6, 1e-7, 5e-12, 0.2};
    const auto s = scaled_from_ratio(geo, 20.0);
    CHECK(s.groups.theta == 0.0);
    CHECK(s.groups.t_ratio() == Approx(20.0).epsilon(1e-14));
    CHECK(s.length_unit == 1e-7);
    CHECK_THROWS_AS(scaled_from_ratio(geo, -1.0), ValidationError);
}
