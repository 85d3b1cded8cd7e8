#pragma once

// Field-level risk evaluation: per-cell densities from districts and
// amenities, the three raw risk components per layer and cell,
// max-normalization over unoccupied cells and the weighted total map the
// planners search over. Occupied cells carry an infinite total.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskplan/errors.hpp"
#include "riskplan/grid.hpp"
#include "riskplan/risk_models.hpp"
#include "riskplan/scenario.hpp"
#include "riskplan/util.hpp"

namespace riskplan {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

struct DensityField {
    GridSpec spec;
    std::vector<double> population;  // people per km^2, nx*ny, x fastest
    std::vector<double> traffic;     // vehicles per km^2
};

// Per-cell densities: the district average amplified by the gravity
// factor of the nearest amenity (distance from the cell's ground centroid,
// in units of the amenity's influence radius). Without amenities the
// factor is 1 everywhere.
inline DensityField estimate_densities(const UrbanScenario& scenario, const GridSpec& spec) {
    if (scenario.grid != spec)
        throw DimensionMismatch("estimate_densities: scenario grid does not match the evaluation grid");
    DensityField field;
    field.spec = spec;
    field.population.assign(spec.footprint_size(), 0.0);
    field.traffic.assign(spec.footprint_size(), 0.0);
    for (int y = 0; y < spec.ny; ++y)
        for (int x = 0; x < spec.nx; ++x) {
            const District* home = nullptr;
            for (const auto& d : scenario.districts)
                if (d.contains(x, y)) {
                    home = &d;
                    break;
                }
            if (!home)
                throw MissingDistrict("estimate_densities: ground cell (" + std::to_string(x) + "," +
                                      std::to_string(y) + ") is covered by no district");
            double factor = 1.0;
            if (!scenario.amenities.empty()) {
                const Vec3 c = spec.ground_center(x, y);
                double r = std::numeric_limits<double>::infinity();
                for (const auto& a : scenario.amenities) {
                    const double dx = c.x - a.x_m, dy = c.y - a.y_m;
                    r = std::min(r, std::sqrt(dx * dx + dy * dy) / 1000.0 / a.influence_radius_km);
                }
                factor = gravity_factor(r);
            }
            const std::size_t i = static_cast<std::size_t>(x) + static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(y);
            field.population[i] = factor * home->pop_avg;
            field.traffic[i] = factor * home->veh_avg;
        }
    return field;
}

struct RiskMap {
    GridSpec spec;
    RiskWeights weights;
    OccupancyGrid occupancy;
    std::vector<double> raw_fatality, raw_property, raw_noise;
    std::vector<double> norm_fatality, norm_property, norm_noise;
    std::vector<double> total;           // weighted sum; +inf at occupied cells
    std::array<double, 3> omega{};       // 1/max per component; 0 marks an identically zero component

    bool is_occupied(std::size_t i) const { return occupancy.occupied[i] != 0; }
};

// Normalizes one raw component by its maximum over unoccupied cells, so
// the hottest unoccupied cell lands at exactly 1. omega_out receives the
// reported scale factor 1/max.
inline std::vector<double> normalize_component(const std::vector<double>& raw,
                                               const std::vector<std::uint8_t>& occupied,
                                               double& omega_out) {
    if (raw.size() != occupied.size())
        throw DimensionMismatch("normalize_component: field and occupancy sizes differ");
    double mx = 0.0;
    bool any_open = false;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (!occupied[i]) {
            any_open = true;
            mx = std::max(mx, raw[i]);
        }
    if (!any_open || !(mx > 0))
        throw ZeroMaximum("normalize_component: maximum over unoccupied cells is zero");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / mx;
    omega_out = 1.0 / mx;
    return out;
}

namespace detail {

// Same as normalize_component but an identically zero component comes back
// as all zeros with omega 0 instead of an error, so weight vectors can
// carry inert components.
inline std::vector<double> normalize_or_zero(const std::vector<double>& raw,
                                             const std::vector<std::uint8_t>& occupied, double& omega_out) {
    double mx = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (!occupied[i]) mx = std::max(mx, raw[i]);
    if (!(mx > 0)) {
        omega_out = 0.0;
        return std::vector<double>(raw.size(), 0.0);
    }
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / mx;
    omega_out = 1.0 / mx;
    return out;
}

}  // namespace detail

// Evaluates the full map: fatality (people + vehicles), property and noise
// per cell at the layer's representative altitude, normalized per
// component and combined with the given weights. Property-model
// parameters are fitted from the scenario's building heights; with fewer
// than two buildings (or a degenerate spread) the defaults stand in.
inline RiskMap build_risk_map(const UrbanScenario& scenario, const GridSpec& spec, const UavModel& uav,
                              const RiskWeights& weights, double accident_fatality_rate = 0.27) {
    uav.validate();
    weights.validate();
    validate_scenario(scenario);
    if (accident_fatality_rate < 0) throw InvalidConfig("build_risk_map: negative accident fatality rate");
    if (scenario.grid != spec)
        throw DimensionMismatch("build_risk_map: scenario grid does not match the planning grid");

    RiskMap map;
    map.spec = spec;
    map.weights = weights;
    map.occupancy = mark_obstacles(spec, scenario.building_heights_m);
    const DensityField dens = estimate_densities(scenario, spec);

    double mu = 3.0467, sigma = 0.5;
    {
        std::vector<double> logs;
        for (const double h : scenario.building_heights_m)
            if (h > 0) logs.push_back(std::log(h));
        if (logs.size() >= 2) {
            double mean = 0.0;
            for (const double v : logs) mean += v;
            mean /= static_cast<double>(logs.size());
            double ss = 0.0;
            for (const double v : logs) ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / static_cast<double>(logs.size() - 1));
            mu = mean;
            // Identical heights have zero spread even when round-off leaves
            // ss slightly positive; a collapsed sigma would underflow the
            // density to zero at any altitude off the knee.
            const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
            if (*lo < *hi && sd > 0) sigma = sd;
        } else if (logs.size() == 1) {
            mu = logs[0];
        }
    }

    const std::size_t n = spec.size();
    map.raw_fatality.assign(n, 0.0);
    map.raw_property.assign(n, 0.0);
    map.raw_noise.assign(n, 0.0);
    for (int z = 0; z < spec.nz; ++z) {
        const double h = layer_altitude(spec, z);
        const double property_cost = property_risk(h, mu, sigma);
        const double noise_cost = noise_risk(h);
        for (int y = 0; y < spec.ny; ++y)
            for (int x = 0; x < spec.nx; ++x) {
                const std::size_t g = static_cast<std::size_t>(x) +
                                      static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(y);
                const std::size_t i = spec.flat({x, y, z});
                map.raw_fatality[i] = people_risk(uav, dens.population[g], h, scenario.shelter) +
                                      vehicle_risk(uav, dens.traffic[g], accident_fatality_rate);
                map.raw_property[i] = property_cost;
                map.raw_noise[i] = noise_cost;
            }
    }

    const auto& occ = map.occupancy.occupied;
    map.norm_fatality = detail::normalize_or_zero(map.raw_fatality, occ, map.omega[0]);
    map.norm_property = detail::normalize_or_zero(map.raw_property, occ, map.omega[1]);
    map.norm_noise = detail::normalize_or_zero(map.raw_noise, occ, map.omega[2]);

    map.total.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        map.total[i] = occ[i] ? kInfiniteCost
                              : weights.fatality * map.norm_fatality[i] +
                                    weights.property * map.norm_property[i] +
                                    weights.noise * map.norm_noise[i];
    return map;
}

// Obstacle-respecting map with unit cost everywhere, the distance-only
// surrogate used by the weight ablation.
inline RiskMap uniform_cost_map(const GridSpec& spec, const OccupancyGrid& occupancy) {
    if (occupancy.spec != spec) throw DimensionMismatch("uniform_cost_map: occupancy grid mismatch");
    RiskMap map;
    map.spec = spec;
    map.occupancy = occupancy;
    const std::size_t n = spec.size();
    map.raw_fatality.assign(n, 0.0);
    map.raw_property.assign(n, 0.0);
    map.raw_noise.assign(n, 0.0);
    map.norm_fatality.assign(n, 0.0);
    map.norm_property.assign(n, 0.0);
    map.norm_noise.assign(n, 0.0);
    map.total.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        if (occupancy.occupied[i]) map.total[i] = kInfiniteCost;
    return map;
}

inline constexpr int kRiskMapSchemaVersion = 1;

// Single JSON document: grid spec plus flattened arrays (x fastest, then
// y, then z). Occupied totals serialize as null (JSON has no infinity)
// and are restored from the occupancy array on load.
inline nlohmann::json risk_map_to_json(const RiskMap& map, const std::string& scenario_name = {}) {
    nlohmann::json j;
    j["version"] = kRiskMapSchemaVersion;
    j["layout"] = "x-fastest";
    if (!scenario_name.empty()) j["scenario"] = scenario_name;
    j["grid"] = {{"nx", map.spec.nx},
                 {"ny", map.spec.ny},
                 {"nz", map.spec.nz},
                 {"unit_m", {map.spec.unit_x, map.spec.unit_y, map.spec.unit_z}}};
    if (!(map.spec.ground_origin == Vec3{}))
        j["grid"]["origin_m"] = {map.spec.ground_origin.x, map.spec.ground_origin.y, map.spec.ground_origin.z};
    j["weights"] = {{"fatality", map.weights.fatality},
                    {"property", map.weights.property},
                    {"noise", map.weights.noise}};
    j["omega"] = {map.omega[0], map.omega[1], map.omega[2]};
    j["occupied"] = map.occupancy.occupied;
    j["raw"] = {{"fatality", map.raw_fatality}, {"property", map.raw_property}, {"noise", map.raw_noise}};
    j["normalized"] = {{"fatality", map.norm_fatality}, {"property", map.norm_property}, {"noise", map.norm_noise}};
    j["total"] = map.total;
    return j;
}

inline RiskMap risk_map_from_json(const nlohmann::json& j) {
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw ParseError("risk map: missing version");
    if (j["version"].get<int>() != kRiskMapSchemaVersion)
        throw SchemaVersionMismatch("risk map: unsupported schema version " + j["version"].dump());
    RiskMap map;
    const auto& g = j.at("grid");
    map.spec.nx = g.at("nx").get<int>();
    map.spec.ny = g.at("ny").get<int>();
    map.spec.nz = g.at("nz").get<int>();
    map.spec.unit_x = g.at("unit_m").at(0).get<double>();
    map.spec.unit_y = g.at("unit_m").at(1).get<double>();
    map.spec.unit_z = g.at("unit_m").at(2).get<double>();
    if (g.contains("origin_m"))
        map.spec.ground_origin = {g["origin_m"].at(0).get<double>(), g["origin_m"].at(1).get<double>(),
                                  g["origin_m"].at(2).get<double>()};
    if (map.spec.nx <= 0 || map.spec.ny <= 0 || map.spec.nz <= 0)
        throw ParseError("risk map: grid dimensions must be positive");
    map.weights.fatality = j.at("weights").at("fatality").get<double>();
    map.weights.property = j.at("weights").at("property").get<double>();
    map.weights.noise = j.at("weights").at("noise").get<double>();
    map.omega = {j.at("omega").at(0).get<double>(), j.at("omega").at(1).get<double>(),
                 j.at("omega").at(2).get<double>()};
    map.occupancy.spec = map.spec;
    map.occupancy.occupied = j.at("occupied").get<std::vector<std::uint8_t>>();
    map.raw_fatality = j.at("raw").at("fatality").get<std::vector<double>>();
    map.raw_property = j.at("raw").at("property").get<std::vector<double>>();
    map.raw_noise = j.at("raw").at("noise").get<std::vector<double>>();
    map.norm_fatality = j.at("normalized").at("fatality").get<std::vector<double>>();
    map.norm_property = j.at("normalized").at("property").get<std::vector<double>>();
    map.norm_noise = j.at("normalized").at("noise").get<std::vector<double>>();
    const std::size_t n = map.spec.size();
    for (const auto* field : {&map.occupancy.occupied})
        if (field->size() != n) throw ParseError("risk map: occupied array size does not match the grid");
    for (const auto* field : {&map.raw_fatality, &map.raw_property, &map.raw_noise, &map.norm_fatality,
                              &map.norm_property, &map.norm_noise})
        if (field->size() != n) throw ParseError("risk map: component array size does not match the grid");
    const auto& tj = j.at("total");
    if (!tj.is_array() || tj.size() != n) throw ParseError("risk map: total array size does not match the grid");
    map.total.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (map.occupancy.occupied[i] || tj[i].is_null())
            map.total[i] = kInfiniteCost;
        else
            map.total[i] = tj[i].get<double>();
    }
    return map;
}

inline void save_risk_map(const RiskMap& map, const std::filesystem::path& path,
                          const std::string& scenario_name = {}) {
    atomic_write_text(path, risk_map_to_json(map, scenario_name).dump(2) + "\n");
}

inline RiskMap load_risk_map(const std::filesystem::path& path) {
    try {
        return risk_map_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("risk map: " + path.string() + ": " + e.what());
    }
}

// One layer as CSV with 1-based coordinates; component columns carry the
// normalized values that enter the weighted total.
inline std::string risk_map_layer_csv(const RiskMap& map, int z) {
    if (z < 0 || z >= map.spec.nz) throw OutOfBounds("risk_map_layer_csv: layer index outside the grid");
    std::string out = "x,y,z,fatality,property,noise,total\n";
    for (int y = 0; y < map.spec.ny; ++y)
        for (int x = 0; x < map.spec.nx; ++x) {
            const std::size_t i = map.spec.flat({x, y, z});
            out += std::to_string(x + 1) + "," + std::to_string(y + 1) + "," + std::to_string(z + 1) + "," +
                   format_double(map.norm_fatality[i]) + "," + format_double(map.norm_property[i]) + "," +
                   format_double(map.norm_noise[i]) + "," + format_double(map.total[i]) + "\n";
        }
    return out;
}

}  // namespace riskplan
