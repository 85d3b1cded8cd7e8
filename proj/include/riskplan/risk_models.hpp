#pragma once

// Scalar third-party risk models for a small UAV over an urban area:
// ground fatality (people and vehicles), property damage and noise
// annoyance. All functions are pure; field-level evaluation lives in
// risk_map.hpp.

#include <cmath>

#include "riskplan/errors.hpp"

namespace riskplan {

inline constexpr double kPi = 3.14159265358979323846;

// Physical and reliability parameters of the vehicle. Defaults describe a
// consumer quadcopter in the 1.4 kg class.
struct UavModel {
    double mass_kg = 1.38;
    double crash_rate_per_hour = 6.04e-5;  // probability of a crash event per flight hour
    double impact_area_m2 = 0.0188;        // area swept on impact, S_hit
    double drag_coefficient = 0.3;         // resistance impact factor R_I
    double air_density_kg_m3 = 1.225;
    double gravity_m_s2 = 9.8;

    void validate() const {
        if (!(mass_kg > 0) || !(crash_rate_per_hour > 0) || !(impact_area_m2 > 0) ||
            !(drag_coefficient > 0) || !(air_density_kg_m3 > 0) || !(gravity_m_s2 > 0))
            throw InvalidConfig("UavModel: all parameters must be positive");
    }

    friend bool operator==(const UavModel&, const UavModel&) = default;
};

// Sheltering of people on the ground plus the energy calibration constants
// of the fatality curve: alpha is the impact energy with 50% fatality at
// s_c = 0.5, beta the harmless threshold energy.
struct ShelterModel {
    double sheltering_coefficient = 0.5;  // s_c > 0
    double alpha_J = 1e6;
    double beta_J = 100.0;

    void validate() const {
        if (!(sheltering_coefficient > 0)) throw InvalidConfig("ShelterModel: s_c must be positive");
        if (!(alpha_J > 0) || !(beta_J > 0))
            throw InvalidConfig("ShelterModel: energy constants must be positive");
    }

    friend bool operator==(const ShelterModel&, const ShelterModel&) = default;
};

// A point of interest that concentrates people around it.
struct Amenity {
    double x_m = 0.0;
    double y_m = 0.0;
    double influence_radius_km = 1.0;

    friend bool operator==(const Amenity&, const Amenity&) = default;
};

// Weights of the three normalized cost components; must sum to 1.
struct RiskWeights {
    double fatality = 0.5;
    double property = 0.25;
    double noise = 0.25;

    void validate() const {
        if (fatality < 0 || property < 0 || noise < 0)
            throw InvalidConfig("RiskWeights: weights must be non-negative");
        if (std::abs(fatality + property + noise - 1.0) > 1e-9)
            throw InvalidConfig("RiskWeights: weights must sum to 1");
    }

    friend bool operator==(const RiskWeights&, const RiskWeights&) = default;
};

// Gravity-model amplification of an average density around an amenity.
// r is the distance to the nearest amenity in units of its influence
// radius (km at the default radius): exp(1 - r^2), i.e. e at the amenity,
// 1 at one radius, decaying below 1 beyond.
inline double gravity_factor(double r_km) {
    if (r_km < 0) throw InvalidConfig("gravity_factor: negative distance");
    return std::exp(1.0 - r_km * r_km);
}

// Impact velocity after a drag-limited fall from altitude h (closed form
// of the drop ODE). h = 0 gives 0; large h approaches terminal velocity.
inline double impact_velocity(const UavModel& uav, double h_m) {
    if (h_m < 0) throw NonPositiveHeight("impact_velocity: negative altitude");
    const double c = uav.drag_coefficient * uav.impact_area_m2 * uav.air_density_kg_m3;
    const double vt2 = 2.0 * uav.mass_kg * uav.gravity_m_s2 / c;
    return std::sqrt(vt2 * (1.0 - std::exp(-h_m * c / uav.mass_kg)));
}

inline double impact_energy(const UavModel& uav, double h_m) {
    const double v = impact_velocity(uav, h_m);
    return 0.5 * uav.mass_kg * v * v;
}

// Fatality probability of a person hit with impact energy e under the
// given sheltering. Logistic in log-energy, calibrated by alpha/beta.
inline double fatality_rate(double impact_energy_J, const ShelterModel& shelter) {
    shelter.validate();
    if (!(impact_energy_J > 0)) throw NonPositiveEnergy("fatality_rate: impact energy must be positive");
    const double k = std::sqrt(shelter.alpha_J / shelter.beta_J);
    const double exponent = 1.0 / (4.0 * shelter.sheltering_coefficient);
    return 1.0 / (1.0 + k * std::pow(shelter.beta_J / impact_energy_J, exponent));
}

// Hourly fatality risk to people, for a population density in people/km^2
// and a fall from h meters.
inline double people_risk(const UavModel& uav, double population_per_km2, double h_m,
                          const ShelterModel& shelter) {
    if (population_per_km2 < 0) throw InvalidConfig("people_risk: negative density");
    const double hit_count = uav.impact_area_m2 * population_per_km2 / 1e6;
    return uav.crash_rate_per_hour * hit_count * fatality_rate(impact_energy(uav, h_m), shelter);
}

// Hourly fatality risk from striking ground vehicles; the casualty number
// per involved vehicle is the average traffic accident fatality rate.
inline double vehicle_risk(const UavModel& uav, double vehicles_per_km2,
                           double accident_fatality_rate = 0.27) {
    if (vehicles_per_km2 < 0) throw InvalidConfig("vehicle_risk: negative density");
    if (accident_fatality_rate < 0) throw InvalidConfig("vehicle_risk: negative fatality rate");
    const double hit_count = uav.impact_area_m2 * vehicles_per_km2 / 1e6;
    return uav.crash_rate_per_hour * hit_count * accident_fatality_rate;
}

inline double lognormal_pdf(double x, double mu, double sigma) {
    const double d = std::log(x) - mu;
    return std::exp(-d * d / (2.0 * sigma * sigma)) / (x * sigma * std::sqrt(2.0 * kPi));
}

// Property damage cost at flight altitude h. Building heights follow a
// log-normal density; below the modal height exp(mu) the cost plateaus at
// the density's value there, above it the density tail applies.
inline double property_risk(double h_m, double mu = 3.0467, double sigma = 0.5) {
    if (!(h_m > 0)) throw NonPositiveHeight("property_risk: altitude must be positive");
    if (!(sigma > 0)) throw InvalidConfig("property_risk: sigma must be positive");
    const double knee = std::exp(mu);
    return lognormal_pdf(h_m <= knee ? knee : h_m, mu, sigma);
}

// Noise annoyance cost at flight altitude h: inverse-square falloff of the
// reference level over the slant distance to a bystander at the standard
// lateral offset. Above threshold_m the remaining level is taken as
// acceptable and the cost is 0.
inline double noise_risk(double h_m, double lateral_offset_m = 9.144, double reference_level_db = 60.0,
                         double threshold_m = 40.0) {
    if (!(h_m > 0)) throw NonPositiveHeight("noise_risk: altitude must be positive");
    if (h_m >= threshold_m) return 0.0;
    return reference_level_db / (h_m * h_m + lateral_offset_m * lateral_offset_m);
}

}  // namespace riskplan
