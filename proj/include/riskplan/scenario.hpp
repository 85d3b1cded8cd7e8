#pragma once

// Urban scenario: district densities, amenities, building heights and a
// sheltering model over a grid footprint. Covers the seeded synthetic
// generator and the versioned JSON file format.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "riskplan/errors.hpp"
#include "riskplan/grid.hpp"
#include "riskplan/risk_models.hpp"
#include "riskplan/rng.hpp"
#include "riskplan/util.hpp"

namespace riskplan {

// Axis-aligned district over ground cells; half-open cell rectangle
// [x0,x1) x [y0,y1).
struct District {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double pop_avg = 0.0;  // people per km^2
    double veh_avg = 0.0;  // vehicles per km^2

    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }

    friend bool operator==(const District&, const District&) = default;
};

struct UrbanScenario {
    std::string name;
    GridSpec grid;
    std::vector<District> districts;
    std::vector<Amenity> amenities;
    std::vector<double> building_heights_m;  // nx*ny, meters, x fastest
    ShelterModel shelter;

    friend bool operator==(const UrbanScenario&, const UrbanScenario&) = default;
};

// Structural checks shared by the generator and the loader. Throws
// ParseError naming the offending part.
inline void validate_scenario(const UrbanScenario& s) {
    if (s.grid.nx <= 0 || s.grid.ny <= 0 || s.grid.nz <= 0 || !(s.grid.unit_x > 0) ||
        !(s.grid.unit_y > 0) || !(s.grid.unit_z > 0))
        throw ParseError("scenario: grid dimensions must be positive");
    if (s.building_heights_m.size() != s.grid.footprint_size())
        throw ParseError("scenario: buildings.heights size does not match nx*ny");
    for (std::size_t i = 0; i < s.building_heights_m.size(); ++i)
        if (!(s.building_heights_m[i] >= 0) || !std::isfinite(s.building_heights_m[i]))
            throw ParseError("scenario: buildings.heights[" + std::to_string(i) + "] is negative or not finite");
    if (s.districts.empty()) throw ParseError("scenario: districts must not be empty");
    std::vector<int> cover(s.grid.footprint_size(), 0);
    for (std::size_t d = 0; d < s.districts.size(); ++d) {
        const District& dist = s.districts[d];
        const std::string where = "scenario: districts[" + std::to_string(d) + "]";
        if (dist.x0 < 0 || dist.y0 < 0 || dist.x1 > s.grid.nx || dist.y1 > s.grid.ny ||
            dist.x0 >= dist.x1 || dist.y0 >= dist.y1)
            throw ParseError(where + ".rect is empty or out of bounds");
        if (dist.pop_avg < 0) throw ParseError(where + ".pop_avg is negative");
        if (dist.veh_avg < 0) throw ParseError(where + ".veh_avg is negative");
        for (int y = dist.y0; y < dist.y1; ++y)
            for (int x = dist.x0; x < dist.x1; ++x)
                ++cover[static_cast<std::size_t>(x) + static_cast<std::size_t>(s.grid.nx) * static_cast<std::size_t>(y)];
    }
    for (std::size_t i = 0; i < cover.size(); ++i) {
        if (cover[i] == 0) throw ParseError("scenario: ground cell " + std::to_string(i) + " is covered by no district");
        if (cover[i] > 1) throw ParseError("scenario: ground cell " + std::to_string(i) + " is covered by several districts");
    }
    for (std::size_t a = 0; a < s.amenities.size(); ++a)
        if (!(s.amenities[a].influence_radius_km > 0))
            throw ParseError("scenario: amenities[" + std::to_string(a) + "].r_km must be positive");
    if (!(s.shelter.sheltering_coefficient > 0)) throw ParseError("scenario: shelter.s_c must be positive");
    if (!(s.shelter.alpha_J > 0) || !(s.shelter.beta_J > 0))
        throw ParseError("scenario: shelter energy constants must be positive");
}

struct ScenarioGenConfig {
    std::uint64_t rng_seed = 42;
    int districts = 2;
    int pop_min = 5000;   // per km^2, drawn as integers, inclusive range
    int pop_max = 25000;
    double traffic_density = 7120.0;  // vehicles per km^2, fixed
    int amenity_min = 10;
    int amenity_max = 30;
    double building_coverage = 0.2;  // fraction of ground cells with a building
    double height_mu = 3.0467;       // log-normal parameters of building heights
    double height_sigma = 0.5;
    std::string name;  // defaults to "synthetic-<seed>"

    void validate() const {
        if (districts < 1) throw InvalidConfig("ScenarioGenConfig: districts must be >= 1");
        if (pop_min < 0 || pop_max < pop_min) throw InvalidConfig("ScenarioGenConfig: bad population range");
        if (traffic_density < 0) throw InvalidConfig("ScenarioGenConfig: negative traffic density");
        if (amenity_min < 0 || amenity_max < amenity_min)
            throw InvalidConfig("ScenarioGenConfig: bad amenity count range");
        if (!(building_coverage >= 0.0) || !(building_coverage <= 1.0))
            throw InvalidConfig("ScenarioGenConfig: coverage must be in [0,1]");
        if (!(height_sigma >= 0)) throw InvalidConfig("ScenarioGenConfig: negative height sigma");
    }

    friend bool operator==(const ScenarioGenConfig&, const ScenarioGenConfig&) = default;
};

// Seeded synthetic city in the style of the validation protocol: vertical
// district strips with uniformly drawn population densities, a uniform
// scatter of amenities and log-normal building heights on a random subset
// of ground cells. A pure function of (cfg, spec).
inline UrbanScenario generate_scenario(const ScenarioGenConfig& cfg, const GridSpec& spec) {
    cfg.validate();
    if (cfg.districts > spec.nx)
        throw InvalidConfig("generate_scenario: more districts than footprint columns");
    UrbanScenario s;
    s.name = cfg.name.empty() ? "synthetic-" + std::to_string(cfg.rng_seed) : cfg.name;
    s.grid = spec;

    // Independent substreams per stage keep each stage stable under
    // changes to the others.
    Rng district_rng(substream_seed(cfg.rng_seed, 1));
    Rng amenity_rng(substream_seed(cfg.rng_seed, 2));
    Rng building_rng(substream_seed(cfg.rng_seed, 3));

    const int base = spec.nx / cfg.districts;
    const int extra = spec.nx % cfg.districts;
    int x = 0;
    for (int d = 0; d < cfg.districts; ++d) {
        const int w = base + (d < extra ? 1 : 0);
        District dist;
        dist.x0 = x;
        dist.x1 = x + w;
        dist.y0 = 0;
        dist.y1 = spec.ny;
        dist.pop_avg = static_cast<double>(district_rng.uniform_int(cfg.pop_min, cfg.pop_max));
        dist.veh_avg = cfg.traffic_density;
        s.districts.push_back(dist);
        x += w;
    }

    const auto amenity_count = amenity_rng.uniform_int(cfg.amenity_min, cfg.amenity_max);
    for (std::int64_t a = 0; a < amenity_count; ++a) {
        Amenity am;
        am.x_m = amenity_rng.uniform(spec.ground_origin.x, spec.ground_origin.x + spec.nx * spec.unit_x);
        am.y_m = amenity_rng.uniform(spec.ground_origin.y, spec.ground_origin.y + spec.ny * spec.unit_y);
        s.amenities.push_back(am);
    }

    s.building_heights_m.assign(spec.footprint_size(), 0.0);
    for (std::size_t i = 0; i < s.building_heights_m.size(); ++i)
        if (building_rng.bernoulli(cfg.building_coverage))
            s.building_heights_m[i] = building_rng.lognormal(cfg.height_mu, cfg.height_sigma);

    validate_scenario(s);
    return s;
}

inline constexpr int kScenarioSchemaVersion = 1;

inline nlohmann::json scenario_to_json(const UrbanScenario& s) {
    nlohmann::json j;
    j["version"] = kScenarioSchemaVersion;
    j["name"] = s.name;
    j["grid"] = {{"nx", s.grid.nx},
                 {"ny", s.grid.ny},
                 {"nz", s.grid.nz},
                 {"unit_m", {s.grid.unit_x, s.grid.unit_y, s.grid.unit_z}}};
    if (!(s.grid.ground_origin == Vec3{}))
        j["grid"]["origin_m"] = {s.grid.ground_origin.x, s.grid.ground_origin.y, s.grid.ground_origin.z};
    j["districts"] = nlohmann::json::array();
    for (const auto& d : s.districts)
        j["districts"].push_back({{"rect", {d.x0, d.y0, d.x1, d.y1}},
                                  {"pop_avg", d.pop_avg},
                                  {"veh_avg", d.veh_avg}});
    j["amenities"] = nlohmann::json::array();
    for (const auto& a : s.amenities)
        j["amenities"].push_back({{"x_m", a.x_m}, {"y_m", a.y_m}, {"r_km", a.influence_radius_km}});
    j["buildings"] = {{"encoding", "dense-rowmajor"}, {"heights", s.building_heights_m}};
    j["shelter"] = {{"s_c", s.shelter.sheltering_coefficient},
                    {"alpha_J", s.shelter.alpha_J},
                    {"beta_J", s.shelter.beta_J}};
    return j;
}

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number())
        throw ParseError("scenario: missing or non-numeric field " + field);
    return j[field].get<double>();
}

}  // namespace detail

inline UrbanScenario scenario_from_json(const nlohmann::json& j) {
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw ParseError("scenario: missing version");
    if (j["version"].get<int>() != kScenarioSchemaVersion)
        throw SchemaVersionMismatch("scenario: unsupported schema version " + j["version"].dump());
    UrbanScenario s;
    s.name = j.value("name", std::string{});
    if (!j.contains("grid")) throw ParseError("scenario: missing grid");
    const auto& g = j["grid"];
    s.grid.nx = static_cast<int>(detail::require_number(g, "nx"));
    s.grid.ny = static_cast<int>(detail::require_number(g, "ny"));
    s.grid.nz = static_cast<int>(detail::require_number(g, "nz"));
    if (!g.contains("unit_m") || !g["unit_m"].is_array() || g["unit_m"].size() != 3)
        throw ParseError("scenario: grid.unit_m must be an array of 3 numbers");
    s.grid.unit_x = g["unit_m"][0].get<double>();
    s.grid.unit_y = g["unit_m"][1].get<double>();
    s.grid.unit_z = g["unit_m"][2].get<double>();
    if (g.contains("origin_m")) {
        if (!g["origin_m"].is_array() || g["origin_m"].size() != 3)
            throw ParseError("scenario: grid.origin_m must be an array of 3 numbers");
        s.grid.ground_origin = {g["origin_m"][0].get<double>(), g["origin_m"][1].get<double>(),
                                g["origin_m"][2].get<double>()};
    }
    if (!j.contains("districts") || !j["districts"].is_array())
        throw ParseError("scenario: missing districts array");
    for (const auto& dj : j["districts"]) {
        District d;
        if (!dj.contains("rect") || !dj["rect"].is_array() || dj["rect"].size() != 4)
            throw ParseError("scenario: district rect must be an array of 4 integers");
        d.x0 = dj["rect"][0].get<int>();
        d.y0 = dj["rect"][1].get<int>();
        d.x1 = dj["rect"][2].get<int>();
        d.y1 = dj["rect"][3].get<int>();
        d.pop_avg = detail::require_number(dj, "pop_avg");
        d.veh_avg = detail::require_number(dj, "veh_avg");
        if (d.pop_avg < 0) throw ParseError("scenario: districts[].pop_avg is negative");
        if (d.veh_avg < 0) throw ParseError("scenario: districts[].veh_avg is negative");
        s.districts.push_back(d);
    }
    if (j.contains("amenities")) {
        if (!j["amenities"].is_array()) throw ParseError("scenario: amenities must be an array");
        for (const auto& aj : j["amenities"]) {
            Amenity a;
            a.x_m = detail::require_number(aj, "x_m");
            a.y_m = detail::require_number(aj, "y_m");
            a.influence_radius_km = aj.value("r_km", 1.0);
            s.amenities.push_back(a);
        }
    }
    if (!j.contains("buildings")) throw ParseError("scenario: missing buildings");
    const auto& b = j["buildings"];
    if (b.value("encoding", std::string{}) != "dense-rowmajor")
        throw ParseError("scenario: buildings.encoding must be \"dense-rowmajor\"");
    if (!b.contains("heights") || !b["heights"].is_array())
        throw ParseError("scenario: missing buildings.heights");
    s.building_heights_m = b["heights"].get<std::vector<double>>();
    if (j.contains("shelter")) {
        const auto& sh = j["shelter"];
        s.shelter.sheltering_coefficient = detail::require_number(sh, "s_c");
        s.shelter.alpha_J = sh.value("alpha_J", 1e6);
        s.shelter.beta_J = sh.value("beta_J", 100.0);
    }
    validate_scenario(s);
    return s;
}

inline std::string scenario_to_string(const UrbanScenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

inline void save_scenario(const UrbanScenario& s, const std::filesystem::path& path) {
    atomic_write_text(path, scenario_to_string(s));
}

inline UrbanScenario load_scenario(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("scenario: " + path.string() + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("scenario: " + path.string() + ": " + e.what());
    }
}

}  // namespace riskplan
