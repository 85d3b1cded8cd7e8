#pragma once

// Artifact serialization: path JSON, convergence trace CSV, benchmark
// CSV/JSON, mitigation and ablation outputs, plain-text tables. All JSON
// goes through nlohmann::json with sorted keys and shortest round-trip
// doubles, so identical inputs give identical bytes. Wall-time fields are
// the only run-dependent values; reproducibility comparisons drop them.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskplan/eda.hpp"
#include "riskplan/errors.hpp"
#include "riskplan/grid.hpp"
#include "riskplan/planner.hpp"
#include "riskplan/risk_map.hpp"
#include "riskplan/stats.hpp"
#include "riskplan/util.hpp"
#include "riskplan/version.hpp"

namespace riskplan {

namespace detail {

inline nlohmann::json cell_1based(const CellIndex& c) {
    return nlohmann::json::array({c.x + 1, c.y + 1, c.z + 1});
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

inline std::string percent2(double ratio) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f%%", ratio * 100.0);
    return buf;
}

inline nlohmann::json tool_json() {
    return {{"name", kToolName}, {"version", kVersion}};
}

}  // namespace detail

inline nlohmann::json ci_to_json(const CIResult& ci) {
    return {{"n1", ci.n1},
            {"n2", ci.n2},
            {"mean1", ci.mean1},
            {"mean2", ci.mean2},
            {"var1", ci.var1},
            {"var2", ci.var2},
            {"z_value", ci.z_value},
            {"interval_low", ci.interval_low},
            {"interval_high", ci.interval_high}};
}

// Path artifact. Vertices are 1-based like the CLI surface. seed and
// params_digest are included when non-empty (seeded planners only).
inline nlohmann::json path_to_json(const FlightPath& path, const std::string& algorithm,
                                   const CellIndex& origin, const CellIndex& destination,
                                   double wall_time_s, std::uint64_t seed = 0,
                                   const std::string& params_digest = {}) {
    nlohmann::json vertices = nlohmann::json::array();
    for (const auto& v : path.vertices) vertices.push_back(detail::cell_1based(v));
    nlohmann::json j{{"algorithm", algorithm},
                     {"origin", detail::cell_1based(origin)},
                     {"destination", detail::cell_1based(destination)},
                     {"vertices", vertices},
                     {"total_risk_cost", path.total_risk_cost},
                     {"distance_m", path.distance_m},
                     {"expanded_nodes", path.expanded_nodes},
                     {"wall_time_s", wall_time_s},
                     {"tool", detail::tool_json()}};
    if (!params_digest.empty()) {
        j["seed"] = seed;
        j["params_digest"] = params_digest;
    }
    return j;
}

// Per-step breakdown of a planned path on its map.
inline std::string path_steps_csv(const FlightPath& path, const RiskMap& map) {
    std::string out = "step,x,y,z,cell_total,cumulative_cost,cumulative_distance_m\n";
    double cum_cost = 0.0, cum_dist = 0.0;
    for (std::size_t i = 0; i < path.vertices.size(); ++i) {
        const CellIndex& v = path.vertices[i];
        if (!map.spec.in_bounds(v)) throw OutOfBounds("path_steps_csv: vertex outside the grid");
        const double cell = map.total[map.spec.flat(v)];
        if (i > 0) {
            cum_cost += cell;
            cum_dist += distance_m(map.spec.cell_center(path.vertices[i - 1]), map.spec.cell_center(v));
        }
        out += std::to_string(i) + "," + std::to_string(v.x + 1) + "," + std::to_string(v.y + 1) + "," +
               std::to_string(v.z + 1) + "," + format_double(i == 0 ? 0.0 : cell) + "," +
               format_double(cum_cost) + "," + format_double(cum_dist) + "\n";
    }
    return out;
}

inline std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::string out = "iteration,best_fitness,mean_fitness,open_fraction\n";
    for (const auto& row : trace)
        out += std::to_string(row.iteration) + "," + format_double(row.best_fitness) + "," +
               format_double(row.mean_fitness) + "," + format_double(row.open_fraction) + "\n";
    return out;
}

inline std::string benchmark_records_csv(const std::vector<BenchmarkRecord>& records) {
    std::string out =
        "scenario,algorithm,origin_x,origin_y,origin_z,dest_x,dest_y,dest_z,"
        "total_risk_cost,distance_m,wall_time_s,expanded_nodes,seed,params_digest,failed,error\n";
    for (const auto& r : records) {
        out += detail::csv_field(r.scenario) + "," + algorithm_name(r.algorithm) + "," +
               std::to_string(r.origin.x + 1) + "," + std::to_string(r.origin.y + 1) + "," +
               std::to_string(r.origin.z + 1) + "," + std::to_string(r.destination.x + 1) + "," +
               std::to_string(r.destination.y + 1) + "," + std::to_string(r.destination.z + 1) + "," +
               format_double(r.total_risk_cost) + "," + format_double(r.distance_m) + "," +
               format_double(r.wall_time_s) + "," + std::to_string(r.expanded_nodes) + "," +
               std::to_string(r.seed) + "," + r.params_digest + "," + (r.failed ? "true" : "false") + "," +
               detail::csv_field(r.error) + "\n";
    }
    return out;
}

inline nlohmann::json benchmark_summary_json(const BenchmarkResult& result, std::uint64_t seed,
                                             const std::string& params_digest) {
    nlohmann::json algos = nlohmann::json::array();
    for (const auto& s : result.summaries)
        algos.push_back({{"algorithm", algorithm_name(s.algorithm)},
                         {"runs", s.runs},
                         {"failures", s.failures},
                         {"mean_cost_ratio", s.mean_cost_ratio},
                         {"std_cost_ratio", s.std_cost_ratio},
                         {"mean_distance_ratio", s.mean_distance_ratio},
                         {"std_distance_ratio", s.std_distance_ratio},
                         {"mean_time_fraction", s.mean_time_fraction},
                         {"median_time_s", s.median_time_s}});
    return {{"tool", detail::tool_json()},
            {"seed", seed},
            {"params_digest", params_digest},
            {"records", result.records.size()},
            {"algorithms", algos}};
}

inline std::string mitigation_records_csv(const MitigationResult& result) {
    std::string out = "seed,mitigated,unmitigated\n";
    for (const auto& r : result.records)
        out += std::to_string(r.seed) + "," + format_double(r.mitigated) + "," +
               format_double(r.unmitigated) + "\n";
    return out;
}

inline nlohmann::json mitigation_json(const MitigationResult& result, std::uint64_t base_seed) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : result.records)
        records.push_back({{"seed", r.seed}, {"mitigated", r.mitigated}, {"unmitigated", r.unmitigated}});
    return {{"tool", detail::tool_json()},
            {"base_seed", base_seed},
            {"excluded", result.excluded},
            {"records", records},
            {"ci", ci_to_json(result.ci)}};
}

inline nlohmann::json ablation_json(const std::vector<AblationRow>& rows, std::uint64_t seed) {
    nlohmann::json paths = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json vertices = nlohmann::json::array();
        for (const auto& v : row.path.vertices) vertices.push_back(detail::cell_1based(v));
        paths.push_back({{"label", row.label},
                         {"weights", nlohmann::json::array({row.weights.fatality, row.weights.property,
                                                            row.weights.noise})},
                         {"full_map_cost", row.full_map_cost},
                         {"own_map_cost", row.path.total_risk_cost},
                         {"distance_m", row.path.distance_m},
                         {"expanded_nodes", row.path.expanded_nodes},
                         {"vertices", vertices}});
    }
    return {{"tool", detail::tool_json()}, {"seed", seed}, {"paths", paths}};
}

inline nlohmann::json heuristic_info_to_json(const HeuristicInfo& heur) {
    nlohmann::json track = nlohmann::json::array();
    for (const auto& p : heur.centroid_track) track.push_back(nlohmann::json::array({p.x, p.y, p.z}));
    return {{"heuristic_factor", heur.heuristic_factor},
            {"deviation_tolerance", heur.deviation_tolerance},
            {"prune_on_deviation", heur.prune_on_deviation},
            {"centroid_track", track}};
}

inline HeuristicInfo heuristic_info_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("heuristic info: not a JSON object");
    if (!j.contains("heuristic_factor") || !j["heuristic_factor"].is_number())
        throw ParseError("heuristic info: heuristic_factor missing or not a number");
    HeuristicInfo heur;
    heur.heuristic_factor = j["heuristic_factor"].get<double>();
    if (j.contains("deviation_tolerance")) {
        if (!j["deviation_tolerance"].is_number())
            throw ParseError("heuristic info: deviation_tolerance is not a number");
        heur.deviation_tolerance = j["deviation_tolerance"].get<double>();
    }
    if (j.contains("prune_on_deviation")) {
        if (!j["prune_on_deviation"].is_boolean())
            throw ParseError("heuristic info: prune_on_deviation is not a boolean");
        heur.prune_on_deviation = j["prune_on_deviation"].get<bool>();
    }
    if (j.contains("centroid_track")) {
        if (!j["centroid_track"].is_array()) throw ParseError("heuristic info: centroid_track is not an array");
        for (const auto& p : j["centroid_track"]) {
            if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
                throw ParseError("heuristic info: track points must be [x,y,z] meter triples");
            heur.centroid_track.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        }
    }
    return heur;
}

// Aligned plain-text table: header row, dash rule, one line per row.
inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
    if (header.empty()) throw InvalidConfig("render_table: empty header");
    for (const auto& row : rows)
        if (row.size() != header.size())
            throw DimensionMismatch("render_table: row width does not match the header");
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    const auto emit = [&](const std::vector<std::string>& row, std::string& out) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out += std::string(width[c] - row[c].size() + 2, ' ');
        }
        out += "\n";
    };
    std::string out;
    emit(header, out);
    std::string rule;
    for (std::size_t c = 0; c < header.size(); ++c) {
        rule += std::string(width[c], '-');
        if (c + 1 < header.size()) rule += "  ";
    }
    out += rule + "\n";
    for (const auto& row : rows) emit(row, out);
    return out;
}

// Per-algorithm summary: ratios as percentages of the Dijkstra baseline.
inline std::string benchmark_summary_table(const BenchmarkResult& result) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : result.summaries)
        rows.push_back({algorithm_name(s.algorithm), std::to_string(s.runs), std::to_string(s.failures),
                        detail::percent2(s.mean_cost_ratio), detail::percent2(s.std_cost_ratio),
                        detail::percent2(s.mean_distance_ratio), detail::percent2(s.std_distance_ratio),
                        detail::percent2(s.mean_time_fraction), format_double(s.median_time_s)});
    return render_table({"algorithm", "runs", "failures", "cost_ratio", "cost_std", "distance_ratio",
                         "distance_std", "time_fraction", "median_time_s"},
                        rows);
}

inline std::string ablation_table(const std::vector<AblationRow>& rows) {
    std::vector<std::vector<std::string>> body;
    int i = 0;
    for (const auto& row : rows) {
        ++i;
        body.push_back({"Path" + std::to_string(i), row.label,
                        format_double(row.weights.fatality) + "/" + format_double(row.weights.property) +
                            "/" + format_double(row.weights.noise),
                        format_double(row.full_map_cost), format_double(row.path.distance_m)});
    }
    return render_table({"path", "risk types", "weights", "full-map cost", "distance_m"}, body);
}

// Per-layer mean and max of the total cost over unoccupied cells.
inline nlohmann::json risk_map_summary_json(const RiskMap& map) {
    nlohmann::json layers = nlohmann::json::array();
    for (int z = 0; z < map.spec.nz; ++z) {
        double mx = 0.0, sum = 0.0;
        std::size_t n = 0, occupied = 0;
        for (int y = 0; y < map.spec.ny; ++y)
            for (int x = 0; x < map.spec.nx; ++x) {
                const std::size_t i = map.spec.flat({x, y, z});
                if (map.occupancy.occupied[i]) {
                    ++occupied;
                    continue;
                }
                sum += map.total[i];
                mx = std::max(mx, map.total[i]);
                ++n;
            }
        layers.push_back({{"z", z + 1},
                          {"altitude_m", layer_altitude(map.spec, z)},
                          {"mean_total", n ? sum / static_cast<double>(n) : 0.0},
                          {"max_total", mx},
                          {"unoccupied_cells", n},
                          {"occupied_cells", occupied}});
    }
    return {{"tool", detail::tool_json()}, {"layers", layers}};
}

inline std::string json_to_string(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace riskplan
