#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "riskplan/errors.hpp"
#include "riskplan/risk_models.hpp"

using namespace riskplan;

namespace {

// Numerically integrates the drop dynamics dv/dt = g - (c/2m) v^2,
// dx/dt = v in the time domain with classic RK4 and refines the crossing
// of the target height with hundredfold smaller steps. Independent of the
// closed form under test.
double drop_velocity_ode(const UavModel& uav, double h_m) {
    const double c = uav.drag_coefficient * uav.impact_area_m2 * uav.air_density_kg_m3;
    const double m = uav.mass_kg, g = uav.gravity_m_s2;
    const auto acc = [&](double v) { return g - c / (2.0 * m) * v * v; };
    const auto rk4 = [&](double& x, double& v, double dt) {
        const double k1v = acc(v), k1x = v;
        const double k2v = acc(v + 0.5 * dt * k1v), k2x = v + 0.5 * dt * k1v;
        const double k3v = acc(v + 0.5 * dt * k2v), k3x = v + 0.5 * dt * k2v;
        const double k4v = acc(v + dt * k3v), k4x = v + dt * k3v;
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    };
    double x = 0.0, v = 0.0;
    const double dt = 1e-4;
    while (true) {
        double xn = x, vn = v;
        rk4(xn, vn, dt);
        if (xn >= h_m) break;
        x = xn;
        v = vn;
    }
    while (x < h_m) rk4(x, v, dt / 100.0);
    return v;
}

}  // namespace

TEST_CASE("gravity factor endpoints are exact") {
    REQUIRE(gravity_factor(0.0) == std::exp(1.0));
    REQUIRE(gravity_factor(1.0) == 1.0);
    REQUIRE(gravity_factor(2.0) == Catch::Approx(std::exp(-3.0)).epsilon(1e-15));
    REQUIRE(gravity_factor(0.5) > 1.0);
    REQUIRE(gravity_factor(1.5) < 1.0);
    REQUIRE_THROWS_AS(gravity_factor(-0.1), InvalidConfig);
}

TEST_CASE("impact velocity matches the drop ODE") {
    const UavModel uav;
    for (const double h : {1.0, 10.0, 30.0, 60.0, 120.0}) {
        const double closed = impact_velocity(uav, h);
        const double ode = drop_velocity_ode(uav, h);
        REQUIRE(std::abs(closed - ode) / ode < 1e-4);
    }
}

TEST_CASE("impact velocity is monotone and bounded by terminal velocity") {
    const UavModel uav;
    const double c = uav.drag_coefficient * uav.impact_area_m2 * uav.air_density_kg_m3;
    const double terminal = std::sqrt(2.0 * uav.mass_kg * uav.gravity_m_s2 / c);
    REQUIRE(terminal == Catch::Approx(62.57).margin(0.01));
    REQUIRE(impact_velocity(uav, 0.0) == 0.0);
    double prev = 0.0;
    for (const double h : {1.0, 10.0, 30.0, 60.0, 120.0, 1000.0, 1e6}) {
        const double v = impact_velocity(uav, h);
        REQUIRE(v > prev);
        REQUIRE(v <= terminal);
        prev = v;
    }
    REQUIRE(impact_velocity(uav, 120.0) == Catch::Approx(42.05).margin(0.01));
    REQUIRE_THROWS_AS(impact_velocity(uav, -1.0), NonPositiveHeight);
}

TEST_CASE("impact energy is the kinetic energy at impact") {
    const UavModel uav;
    const double v = impact_velocity(uav, 120.0);
    REQUIRE(impact_energy(uav, 120.0) == 0.5 * uav.mass_kg * v * v);
    REQUIRE(impact_energy(uav, 120.0) == Catch::Approx(1219.86).margin(0.5));
}

TEST_CASE("fatality rate passes the half-fatal calibration point") {
    const ShelterModel shelter;  // s_c = 0.5, alpha 1e6, beta 100
    REQUIRE(std::abs(fatality_rate(1e6, shelter) - 0.5) < 1e-12);
}

TEST_CASE("fatality rate grows with impact energy and spans (0,1)") {
    const ShelterModel shelter;
    double prev = 0.0;
    for (const double e : {1.0, 10.0, 100.0, 1e4, 1e6, 1e8, 1e12}) {
        const double r = fatality_rate(e, shelter);
        REQUIRE(r > prev);
        REQUIRE(r > 0.0);
        REQUIRE(r < 1.0);
        prev = r;
    }
    REQUIRE(fatality_rate(1e300, shelter) == Catch::Approx(1.0).margin(1e-6));
    REQUIRE_THROWS_AS(fatality_rate(0.0, shelter), NonPositiveEnergy);
    REQUIRE_THROWS_AS(fatality_rate(-5.0, shelter), NonPositiveEnergy);
    ShelterModel bad;
    bad.sheltering_coefficient = 0.0;
    REQUIRE_THROWS_AS(fatality_rate(100.0, bad), InvalidConfig);
}

TEST_CASE("hand-checked fatality rate at the 120 m impact energy") {
    const ShelterModel shelter;
    const double e = 1219.86;
    // 1 / (1 + sqrt(1e6/100) * (100/E)^(1/(4*0.5))), written out long-form
    const double expected = 1.0 / (1.0 + 100.0 * std::sqrt(100.0 / e));
    REQUIRE(fatality_rate(e, shelter) == Catch::Approx(expected).epsilon(1e-12));
    REQUIRE(expected == Catch::Approx(0.033749).margin(1e-5));
}

TEST_CASE("people risk composes crash rate, hit count and fatality rate") {
    const UavModel uav;
    const ShelterModel shelter;
    const double r = people_risk(uav, 8358.0, 120.0, shelter);
    const double hit_count = uav.impact_area_m2 * 8358.0 / 1e6;
    const double expected =
        uav.crash_rate_per_hour * hit_count * fatality_rate(impact_energy(uav, 120.0), shelter);
    REQUIRE(r == expected);
    REQUIRE(r == Catch::Approx(3.20e-10).epsilon(0.01));
    REQUIRE(people_risk(uav, 0.0, 120.0, shelter) == 0.0);
    REQUIRE_THROWS_AS(people_risk(uav, -1.0, 120.0, shelter), InvalidConfig);
}

TEST_CASE("vehicle risk is altitude independent and linear in density") {
    const UavModel uav;
    const double r = vehicle_risk(uav, 7120.0);
    REQUIRE(r == Catch::Approx(6.04e-5 * 0.0188 * 7120.0 / 1e6 * 0.27).epsilon(1e-12));
    REQUIRE(r == Catch::Approx(2.18299e-9).epsilon(1e-4));
    REQUIRE(vehicle_risk(uav, 2.0 * 7120.0) == Catch::Approx(2.0 * r).epsilon(1e-12));
    REQUIRE(vehicle_risk(uav, 7120.0, 0.0) == 0.0);
    REQUIRE_THROWS_AS(vehicle_risk(uav, -1.0), InvalidConfig);
    REQUIRE_THROWS_AS(vehicle_risk(uav, 7120.0, -0.1), InvalidConfig);
}

TEST_CASE("lognormal pdf matches the textbook formula") {
    const double x = 17.0, mu = 3.0467, sigma = 0.5;
    const double d = std::log(x) - mu;
    const double expected =
        std::exp(-d * d / (2.0 * sigma * sigma)) / (x * sigma * std::sqrt(2.0 * kPi));
    REQUIRE(lognormal_pdf(x, mu, sigma) == expected);
}

TEST_CASE("property risk plateaus below the modal height and decays above") {
    const double knee = std::exp(3.0467);
    REQUIRE(knee == Catch::Approx(21.046).margin(0.001));
    const double plateau = property_risk(knee);
    REQUIRE(plateau == Catch::Approx(std::exp(-3.0467) / (0.5 * std::sqrt(2.0 * kPi))).epsilon(1e-12));
    for (const double h : {0.5, 1.0, 5.0, 10.0, 21.0}) REQUIRE(property_risk(h) == plateau);
    double prev = plateau;
    for (const double h : {21.1, 25.0, 30.0, 60.0, 120.0}) {
        const double p = property_risk(h);
        REQUIRE(p < prev);
        prev = p;
    }
    REQUIRE_THROWS_AS(property_risk(0.0), NonPositiveHeight);
    REQUIRE_THROWS_AS(property_risk(-3.0), NonPositiveHeight);
    REQUIRE_THROWS_AS(property_risk(10.0, 3.0, 0.0), InvalidConfig);
}

TEST_CASE("property risk respects fitted parameters") {
    // Higher mu moves the knee up; the plateau then covers more altitudes.
    REQUIRE(property_risk(30.0, 3.5, 0.5) == property_risk(std::exp(3.5), 3.5, 0.5));
    REQUIRE(property_risk(40.0, 3.5, 0.5) < property_risk(30.0, 3.5, 0.5));
}

TEST_CASE("noise risk follows the inverse square law below the cutoff") {
    REQUIRE(noise_risk(30.0) == 60.0 / (900.0 + 9.144 * 9.144));
    REQUIRE(noise_risk(10.0) == 60.0 / (100.0 + 9.144 * 9.144));
    REQUIRE(noise_risk(30.0) / noise_risk(10.0) == Catch::Approx(0.186671).margin(1e-5));
    for (const double h : {40.0, 41.0, 100.0, 1e5}) REQUIRE(noise_risk(h) == 0.0);
    REQUIRE(noise_risk(39.999) > 0.0);
    REQUIRE_THROWS_AS(noise_risk(0.0), NonPositiveHeight);
}

TEST_CASE("model structs validate their parameters") {
    UavModel uav;
    uav.mass_kg = 0.0;
    REQUIRE_THROWS_AS(uav.validate(), InvalidConfig);
    ShelterModel shelter;
    shelter.beta_J = -1.0;
    REQUIRE_THROWS_AS(shelter.validate(), InvalidConfig);
    const RiskWeights w{0.5, 0.25, 0.24};
    REQUIRE_THROWS_AS(w.validate(), InvalidConfig);
    const RiskWeights negative{1.2, -0.1, -0.1};
    REQUIRE_THROWS_AS(negative.validate(), InvalidConfig);
    REQUIRE_NOTHROW(RiskWeights{}.validate());
    const RiskWeights fatality_only{1.0, 0.0, 0.0};
    REQUIRE_NOTHROW(fatality_only.validate());
    const RiskWeights two_thirds{2.0 / 3.0, 1.0 / 3.0, 0.0};
    REQUIRE_NOTHROW(two_thirds.validate());
}
