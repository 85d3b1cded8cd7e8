// riskplan: third-party risk maps and minimum-risk UAV paths over a
// discretized urban airspace. Subcommands cover the whole pipeline:
// scenario-gen -> riskmap -> plan, plus the bench / mitigate / ablate
// experiment harnesses. OD coordinates are 1-based on this surface and
// converted at the boundary. Exit codes: 0 success, 2 validation or
// parse, 3 no path, 4 internal.

#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "riskplan/eda.hpp"
#include "riskplan/errors.hpp"
#include "riskplan/grid.hpp"
#include "riskplan/io.hpp"
#include "riskplan/planner.hpp"
#include "riskplan/risk_map.hpp"
#include "riskplan/rng.hpp"
#include "riskplan/scenario.hpp"
#include "riskplan/stats.hpp"
#include "riskplan/util.hpp"
#include "riskplan/version.hpp"

namespace {

namespace rp = riskplan;
namespace fs = std::filesystem;

fs::path out_path(const std::string& flag_value, const std::string& default_name) {
    if (!flag_value.empty()) return flag_value;
    const char* dir = std::getenv("RISKPLAN_OUT_DIR");
    return fs::path(dir && *dir ? dir : ".") / default_name;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct GridFlags {
    std::vector<int> dims{60, 60, 4};
    std::vector<double> units{100.0, 100.0, 30.0};
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
    cmd->add_option("--grid", g.dims, "cell counts nx ny nz")->expected(3)->capture_default_str();
    cmd->add_option("--unit", g.units, "cell size in meters ux uy uz")->expected(3)->capture_default_str();
}

rp::GridSpec make_spec(const GridFlags& g) {
    if (g.dims[0] <= 0 || g.dims[1] <= 0 || g.dims[2] <= 0)
        throw rp::InvalidConfig("--grid counts must be positive");
    return rp::build_grid({g.dims[0] * g.units[0], g.dims[1] * g.units[1], g.dims[2] * g.units[2]},
                          {g.units[0], g.units[1], g.units[2]});
}

void add_uav_flags(CLI::App* cmd, rp::UavModel& uav) {
    cmd->add_option("--uav-mass", uav.mass_kg, "UAV mass in kg")->capture_default_str();
    cmd->add_option("--uav-crash-rate", uav.crash_rate_per_hour, "crash probability per flight hour")
        ->capture_default_str();
    cmd->add_option("--uav-impact-area", uav.impact_area_m2, "ground impact area in m^2")
        ->capture_default_str();
    cmd->add_option("--uav-drag", uav.drag_coefficient, "drag coefficient")->capture_default_str();
    cmd->add_option("--air-density", uav.air_density_kg_m3, "air density in kg/m^3")->capture_default_str();
    cmd->add_option("--gravity", uav.gravity_m_s2, "gravitational acceleration in m/s^2")
        ->capture_default_str();
}

void add_eda_flags(CLI::App* cmd, rp::EdaParams& eda) {
    cmd->add_option("--pop", eda.population_size, "EDA population size")->capture_default_str();
    cmd->add_option("--iters", eda.iterations, "EDA iterations")->capture_default_str();
    cmd->add_option("--lr", eda.learning_rate, "EDA learning rate")->capture_default_str();
    cmd->add_option("--dominant", eda.dominant_fraction, "dominant species fraction")->capture_default_str();
    cmd->add_option("--k", eda.k_clusters, "k-means cluster count (fast variant)")->capture_default_str();
    cmd->add_option("--init-p", eda.init_probability, "initial cell-open probability")->capture_default_str();
    cmd->add_option("--inner-factor", eda.inner_heuristic_factor,
                    "heuristic factor of the masked inner search (region-assisted variant)")
        ->capture_default_str();
    cmd->add_option("--conn-penalty", eda.connectivity_penalty,
                    "disconnected-region fitness penalty; <= 0 derives one from the map")
        ->capture_default_str();
}

struct GenFlags {
    rp::ScenarioGenConfig cfg;
    std::vector<int> pop_range{5000, 25000};
    std::vector<int> amenity_range{10, 30};
};

void add_gen_flags(CLI::App* cmd, GenFlags& g) {
    cmd->add_option("--districts", g.cfg.districts, "district strip count")->capture_default_str();
    cmd->add_option("--pop-range", g.pop_range, "population density range per km^2")
        ->expected(2)
        ->capture_default_str();
    cmd->add_option("--traffic", g.cfg.traffic_density, "vehicle density per km^2")->capture_default_str();
    cmd->add_option("--amenity-range", g.amenity_range, "amenity count range")
        ->expected(2)
        ->capture_default_str();
    cmd->add_option("--coverage", g.cfg.building_coverage, "building coverage fraction")
        ->capture_default_str();
    cmd->add_option("--height-mu", g.cfg.height_mu, "log-normal mu of building heights")
        ->capture_default_str();
    cmd->add_option("--height-sigma", g.cfg.height_sigma, "log-normal sigma of building heights")
        ->capture_default_str();
}

rp::ScenarioGenConfig finish_gen_flags(const GenFlags& g) {
    rp::ScenarioGenConfig cfg = g.cfg;
    cfg.pop_min = g.pop_range[0];
    cfg.pop_max = g.pop_range[1];
    cfg.amenity_min = g.amenity_range[0];
    cfg.amenity_max = g.amenity_range[1];
    return cfg;
}

std::pair<rp::CellIndex, rp::CellIndex> od_from_flags(const std::vector<int>& od, const rp::GridSpec& spec) {
    if (od.empty())  // corner-to-corner default
        return {{0, 0, 0}, {spec.nx - 1, spec.ny - 1, spec.nz - 1}};
    const rp::CellIndex o{od[0] - 1, od[1] - 1, od[2] - 1};
    const rp::CellIndex d{od[3] - 1, od[4] - 1, od[5] - 1};
    if (!spec.in_bounds(o) || !spec.in_bounds(d))
        throw rp::OutOfBounds("--od outside the grid (coordinates are 1-based)");
    return {o, d};
}

rp::RiskWeights weights_from_flags(const std::vector<double>& w) {
    return {w.at(0), w.at(1), w.at(2)};
}

std::string eda_digest(const std::string& algorithm, const rp::EdaParams& eda) {
    std::string s = algorithm + ";pop=" + std::to_string(eda.population_size) +
                    ";iters=" + std::to_string(eda.iterations) + ";lr=" + rp::format_double(eda.learning_rate) +
                    ";dom=" + rp::format_double(eda.dominant_fraction) + ";k=" + std::to_string(eda.k_clusters) +
                    ";p0=" + rp::format_double(eda.init_probability) +
                    ";ihf=" + rp::format_double(eda.inner_heuristic_factor) +
                    ";cp=" + rp::format_double(eda.connectivity_penalty) + ";seed=" + std::to_string(eda.rng_seed);
    return rp::fnv1a_hex(s);
}

// Confirmations go to stderr so json/csv stdout stays a clean document.
void write_artifact(const fs::path& path, const std::string& content) {
    rp::atomic_write_text(path, content);
    std::cerr << "wrote: " << path.string() << "\n";
}

int cmd_scenario_gen(const GenFlags& gen, const GridFlags& grid, std::uint64_t seed, const std::string& name,
                     const std::string& out) {
    rp::ScenarioGenConfig cfg = finish_gen_flags(gen);
    cfg.rng_seed = seed;
    cfg.name = name;
    const rp::GridSpec spec = make_spec(grid);
    const rp::UrbanScenario scenario = rp::generate_scenario(cfg, spec);
    std::cout << "seed: " << seed << "\n";
    std::cout << "scenario: " << scenario.name << " (" << spec.nx << "x" << spec.ny << "x" << spec.nz
              << ", " << scenario.districts.size() << " districts, " << scenario.amenities.size()
              << " amenities)\n";
    write_artifact(out_path(out, "scenario.json"), rp::scenario_to_string(scenario));
    return 0;
}

int cmd_riskmap(const std::string& scenario_path, const std::string& out, const std::vector<double>& weights,
                const rp::UavModel& uav, double accident_rate, bool no_layer_csv) {
    const rp::UrbanScenario scenario = rp::load_scenario(scenario_path);
    const rp::RiskWeights w = weights_from_flags(weights);
    const rp::RiskMap map = rp::build_risk_map(scenario, scenario.grid, uav, w, accident_rate);

    std::cout << "weights: " << rp::format_double(w.fatality) << "/" << rp::format_double(w.property) << "/"
              << rp::format_double(w.noise) << "\n";
    const char* component[3] = {"fatality", "property", "noise"};
    for (int c = 0; c < 3; ++c)
        if (map.omega[c] == 0.0) std::cout << "note: " << component[c] << " component is identically zero\n";

    const fs::path map_path = out_path(out, "riskmap.json");
    rp::atomic_write_text(map_path, rp::risk_map_to_json(map, scenario.name).dump(2) + "\n");
    std::cerr << "wrote: " << map_path.string() << "\n";

    const fs::path base = map_path.parent_path() / map_path.stem();
    if (!no_layer_csv)
        for (int z = 0; z < map.spec.nz; ++z) {
            const fs::path layer = base.string() + "_layer" + std::to_string(z + 1) + ".csv";
            write_artifact(layer, rp::risk_map_layer_csv(map, z));
        }
    write_artifact(base.string() + "_summary.json", rp::json_to_string(rp::risk_map_summary_json(map)));

    std::vector<std::vector<std::string>> rows;
    const nlohmann::json summary = rp::risk_map_summary_json(map);
    for (const auto& layer : summary["layers"])
        rows.push_back({layer["z"].dump(), rp::format_double(layer["altitude_m"].get<double>()),
                        rp::format_double(layer["mean_total"].get<double>()),
                        rp::format_double(layer["max_total"].get<double>()),
                        layer["occupied_cells"].dump()});
    std::cout << rp::render_table({"layer", "altitude_m", "mean_total", "max_total", "occupied"}, rows);
    return 0;
}

int cmd_plan(const std::string& map_path, const std::string& algo_name, const std::vector<int>& od,
             const std::string& out, const std::string& steps_csv, const std::string& trace_path,
             const CLI::Option* factor_opt, double factor, const std::string& heur_file,
             rp::EdaParams eda) {
    const rp::RiskMap map = rp::load_risk_map(map_path);
    const auto [origin, destination] = od_from_flags(od, map.spec);
    const rp::Algorithm algo = rp::algorithm_from_string(algo_name);

    const bool is_eda = algo == rp::Algorithm::EdaRa || algo == rp::Algorithm::EdaFra;
    if (!trace_path.empty() && !is_eda)
        throw rp::InvalidConfig("--trace requires an EDA algorithm (eda-ra or eda-fra)");
    const bool have_factor = factor_opt->count() > 0;
    if (algo == rp::Algorithm::RiskAStar && !have_factor && heur_file.empty())
        throw rp::InvalidConfig("riskastar needs --factor or --heuristic-info");
    if (algo != rp::Algorithm::RiskAStar && (have_factor || !heur_file.empty()))
        throw rp::InvalidConfig("--factor and --heuristic-info apply to riskastar only");

    rp::HeuristicInfo heur;
    if (algo == rp::Algorithm::RiskAStar) {
        if (!heur_file.empty()) {
            try {
                heur = rp::heuristic_info_from_json(nlohmann::json::parse(rp::read_text_file(heur_file)));
            } catch (const nlohmann::json::exception& e) {
                throw rp::ParseError("heuristic info: " + heur_file + ": " + e.what());
            }
        } else {
            heur.heuristic_factor = factor;
        }
    }

    rp::FlightPath path;
    std::vector<rp::TraceRow> trace;
    const auto t0 = std::chrono::steady_clock::now();
    switch (algo) {
        case rp::Algorithm::Dijkstra:
            path = rp::dijkstra_risk(map, origin, destination);
            break;
        case rp::Algorithm::RiskAStar:
            path = rp::risk_a_star(map, origin, destination, heur);
            break;
        case rp::Algorithm::EdaRa: {
            auto res = rp::eda_ra_star(map, origin, destination, eda);
            path = std::move(res.path);
            trace = std::move(res.trace);
            break;
        }
        case rp::Algorithm::EdaFra: {
            auto res = rp::eda_fra_star(map, origin, destination, eda);
            path = std::move(res.path);
            trace = std::move(res.trace);
            break;
        }
        case rp::Algorithm::Distance:
            path = rp::dijkstra_distance(map.spec, map.occupancy, origin, destination);
            path.total_risk_cost = rp::path_cost(path.vertices, map);
            break;
    }
    const double wall = seconds_since(t0);

    // Planner output is re-verified before it is written anywhere.
    if (const auto violation = rp::validate_path(path.vertices, map.spec, map.occupancy))
        throw std::runtime_error("planner produced an invalid path at vertex " +
                                 std::to_string(violation->index) + ": " + violation->detail);
    const double recomputed = rp::path_cost(path.vertices, map);
    if (std::abs(recomputed - path.total_risk_cost) > 1e-9 * std::max(1.0, std::abs(recomputed)))
        throw std::runtime_error("planner cost " + rp::format_double(path.total_risk_cost) +
                                 " does not match the recomputed path cost " + rp::format_double(recomputed));
    path.total_risk_cost = recomputed;

    std::cout << "algorithm: " << algo_name << "\n";
    std::cout << "cost: " << rp::format_double(path.total_risk_cost) << "\n";
    std::cout << "distance_m: " << rp::format_double(path.distance_m) << "\n";
    std::cout << "expanded: " << path.expanded_nodes << "\n";

    const std::uint64_t seed = is_eda ? eda.rng_seed : 0;
    const std::string digest = is_eda ? eda_digest(algo_name, eda) : std::string{};
    write_artifact(out_path(out, "path.json"),
                   rp::json_to_string(rp::path_to_json(path, algo_name, origin, destination, wall, seed, digest)));
    if (!steps_csv.empty()) write_artifact(steps_csv, rp::path_steps_csv(path, map));
    if (!trace_path.empty()) write_artifact(trace_path, rp::trace_csv(trace));
    return 0;
}

int cmd_bench(const std::vector<std::string>& scenario_paths, int generate, std::uint64_t gen_seed,
              const GenFlags& gen, const GridFlags& grid, const std::string& algos_csv,
              const std::vector<int>& ods, double factor, rp::EdaParams eda, std::uint64_t seed,
              const std::vector<double>& weights, const rp::UavModel& uav, const std::string& out_csv,
              const std::string& out_json, const std::string& format) {
    std::vector<rp::UrbanScenario> scenarios;
    if (generate > 0) {
        const rp::GridSpec spec = make_spec(grid);
        for (int i = 0; i < generate; ++i) {
            rp::ScenarioGenConfig cfg = finish_gen_flags(gen);
            cfg.rng_seed = gen_seed + static_cast<std::uint64_t>(i);
            scenarios.push_back(rp::generate_scenario(cfg, spec));
        }
    } else {
        for (const auto& p : scenario_paths) scenarios.push_back(rp::load_scenario(p));
    }
    if (scenarios.empty()) throw rp::InvalidConfig("bench: give --scenario files or --generate N");

    std::vector<rp::Algorithm> algorithms;
    {
        std::string token;
        for (const char ch : algos_csv + ",") {
            if (ch == ',') {
                if (!token.empty()) algorithms.push_back(rp::algorithm_from_string(token));
                token.clear();
            } else {
                token += ch;
            }
        }
    }

    if (ods.size() % 6 != 0) throw rp::InvalidConfig("--od takes 6 coordinates per pair");
    std::vector<std::pair<rp::CellIndex, rp::CellIndex>> od_pairs;
    for (std::size_t i = 0; i < ods.size(); i += 6)
        od_pairs.push_back(od_from_flags({ods.begin() + static_cast<std::ptrdiff_t>(i),
                                          ods.begin() + static_cast<std::ptrdiff_t>(i + 6)},
                                         scenarios.front().grid));
    if (od_pairs.empty()) od_pairs.push_back(od_from_flags({}, scenarios.front().grid));

    rp::BenchmarkParams params;
    params.riskastar_factor = factor;
    params.eda = eda;
    params.rng_seed = seed;
    const rp::BenchmarkResult result =
        rp::run_benchmark(scenarios, algorithms, od_pairs, params, uav, weights_from_flags(weights));

    write_artifact(out_path(out_csv, "bench_records.csv"), rp::benchmark_records_csv(result.records));
    const std::string digest = rp::detail::benchmark_params_digest(params);
    write_artifact(out_path(out_json, "bench_summary.json"),
                   rp::json_to_string(rp::benchmark_summary_json(result, seed, digest)));

    if (format == "json")
        std::cout << rp::json_to_string(rp::benchmark_summary_json(result, seed, digest));
    else if (format == "csv")
        std::cout << rp::benchmark_records_csv(result.records);
    else
        std::cout << rp::benchmark_summary_table(result);

    std::size_t failed = 0;
    for (const auto& r : result.records) failed += r.failed ? 1 : 0;
    if (failed == result.records.size() && !result.records.empty())
        throw std::runtime_error("benchmark: every record failed");
    if (failed > 0) std::cerr << "note: " << failed << " of " << result.records.size() << " records failed\n";
    return 0;
}

int cmd_mitigate(int n, std::uint64_t seed, const GenFlags& gen, const GridFlags& grid,
                 const std::vector<int>& od, const std::vector<double>& weights, const rp::UavModel& uav,
                 double z, const std::string& out_csv, const std::string& out_json,
                 const std::string& format) {
    const rp::GridSpec spec = make_spec(grid);
    const auto [origin, destination] = od_from_flags(od, spec);
    rp::ScenarioGenConfig cfg = finish_gen_flags(gen);
    cfg.rng_seed = seed;
    const rp::MitigationResult result =
        rp::mitigation_experiment(n, cfg, spec, origin, destination, uav, weights_from_flags(weights), z);

    write_artifact(out_path(out_csv, "mitigation.csv"), rp::mitigation_records_csv(result));
    write_artifact(out_path(out_json, "mitigation.json"), rp::json_to_string(rp::mitigation_json(result, seed)));

    if (format == "json") {
        std::cout << rp::json_to_string(rp::mitigation_json(result, seed));
    } else if (format == "csv") {
        std::cout << rp::mitigation_records_csv(result);
    } else {
        std::cout << "patterns: " << result.records.size() << " feasible, " << result.excluded << " excluded\n";
        std::cout << "mitigated fraction CI (z=" << rp::format_double(result.ci.z_value) << "): ["
                  << rp::format_double(result.ci.interval_low) << ", "
                  << rp::format_double(result.ci.interval_high) << "]\n";
    }
    return 0;
}

int cmd_ablate(const std::string& scenario_path, std::uint64_t gen_seed, const GenFlags& gen,
               const GridFlags& grid, const std::vector<int>& od, const rp::UavModel& uav,
               rp::EdaParams eda, const std::string& out) {
    rp::UrbanScenario scenario;
    if (!scenario_path.empty()) {
        scenario = rp::load_scenario(scenario_path);
    } else {
        rp::ScenarioGenConfig cfg = finish_gen_flags(gen);
        cfg.rng_seed = gen_seed;
        scenario = rp::generate_scenario(cfg, make_spec(grid));
    }
    const auto [origin, destination] = od_from_flags(od, scenario.grid);
    const std::vector<rp::AblationRow> rows =
        rp::risk_ablation(scenario, scenario.grid, uav, origin, destination, eda);
    write_artifact(out_path(out, "ablation.json"), rp::json_to_string(rp::ablation_json(rows, eda.rng_seed)));
    std::cout << rp::ablation_table(rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"third-party risk maps and minimum-risk UAV paths over a discretized urban airspace"};
    app.set_version_flag("--version", std::string(rp::kToolName) + " " + rp::kVersion);
    app.require_subcommand(1);

    // scenario-gen
    auto* gen_cmd = app.add_subcommand("scenario-gen", "generate a synthetic urban scenario");
    GenFlags gen_gen;
    GridFlags gen_grid;
    std::uint64_t gen_seed = 42;
    std::string gen_name, gen_out;
    add_gen_flags(gen_cmd, gen_gen);
    add_grid_flags(gen_cmd, gen_grid);
    gen_cmd->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen_cmd->add_option("--name", gen_name, "scenario name (defaults to synthetic-<seed>)");
    gen_cmd->add_option("--out", gen_out, "output scenario JSON path");

    // riskmap
    auto* map_cmd = app.add_subcommand("riskmap", "build the risk map of a scenario");
    std::string map_scenario, map_out;
    std::vector<double> map_weights{0.5, 0.25, 0.25};
    rp::UavModel map_uav;
    double map_accident_rate = 0.27;
    bool map_no_layer_csv = false;
    map_cmd->add_option("--scenario", map_scenario, "scenario JSON path")->required();
    map_cmd->add_option("--out", map_out, "output risk map JSON path");
    map_cmd->add_option("--weights", map_weights, "risk weights: fatality property noise")
        ->expected(3)
        ->capture_default_str();
    add_uav_flags(map_cmd, map_uav);
    map_cmd->add_option("--accident-rate", map_accident_rate, "vehicle accident fatality rate")
        ->capture_default_str();
    map_cmd->add_flag("--no-layer-csv", map_no_layer_csv, "skip per-layer CSV export");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "plan a path on a risk map");
    std::string plan_map, plan_algo, plan_out, plan_steps, plan_trace, plan_heur_file;
    std::vector<int> plan_od;
    double plan_factor = 0.0;
    rp::EdaParams plan_eda;
    plan_cmd->add_option("--map", plan_map, "risk map JSON path")->required();
    plan_cmd->add_option("--algo", plan_algo, "dijkstra|riskastar|eda-ra|eda-fra|distance")->required();
    plan_cmd->add_option("--od", plan_od, "1-based origin and destination: ox oy oz dx dy dz")
        ->expected(6);
    plan_cmd->add_option("--out", plan_out, "output path JSON");
    plan_cmd->add_option("--steps-csv", plan_steps, "per-step CSV path");
    plan_cmd->add_option("--trace", plan_trace, "EDA convergence trace CSV path");
    CLI::Option* plan_factor_opt =
        plan_cmd->add_option("--factor", plan_factor, "heuristic factor for riskastar");
    CLI::Option* plan_heur_opt =
        plan_cmd->add_option("--heuristic-info", plan_heur_file, "heuristic info JSON for riskastar");
    plan_factor_opt->excludes(plan_heur_opt);
    add_eda_flags(plan_cmd, plan_eda);
    plan_cmd->add_option("--seed", plan_eda.rng_seed, "EDA seed")->capture_default_str();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "benchmark algorithms over scenarios and OD pairs");
    std::vector<std::string> bench_scenarios;
    int bench_generate = 0;
    std::uint64_t bench_gen_seed = 1, bench_seed = 1;
    GenFlags bench_gen;
    GridFlags bench_grid;
    std::string bench_algos = "dijkstra,riskastar,eda-ra,eda-fra";
    std::vector<int> bench_ods;
    double bench_factor = 0.0;
    rp::EdaParams bench_eda;
    std::vector<double> bench_weights{0.5, 0.25, 0.25};
    rp::UavModel bench_uav;
    std::string bench_out_csv, bench_out_json, bench_format = "table";
    CLI::Option* bench_scen_opt =
        bench_cmd->add_option("--scenario", bench_scenarios, "scenario JSON path (repeatable)");
    CLI::Option* bench_gen_opt =
        bench_cmd->add_option("--generate", bench_generate, "generate N synthetic scenarios instead");
    bench_scen_opt->excludes(bench_gen_opt);
    bench_cmd->add_option("--gen-seed", bench_gen_seed, "first generator seed for --generate")
        ->capture_default_str();
    add_gen_flags(bench_cmd, bench_gen);
    add_grid_flags(bench_cmd, bench_grid);
    bench_cmd->add_option("--algos", bench_algos, "comma-separated algorithm list")->capture_default_str();
    bench_cmd->add_option("--od", bench_ods, "1-based OD pairs, 6 ints each (repeatable)")
        ->delimiter(',');
    bench_cmd->add_option("--factor", bench_factor, "riskastar heuristic factor")->capture_default_str();
    add_eda_flags(bench_cmd, bench_eda);
    bench_cmd->add_option("--seed", bench_seed, "master seed for EDA substreams")->capture_default_str();
    bench_cmd->add_option("--weights", bench_weights, "risk weights")->expected(3)->capture_default_str();
    add_uav_flags(bench_cmd, bench_uav);
    bench_cmd->add_option("--out-csv", bench_out_csv, "records CSV path");
    bench_cmd->add_option("--out-json", bench_out_json, "summary JSON path");
    bench_cmd->add_option("--format", bench_format, "stdout format: table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();

    // mitigate
    auto* mit_cmd = app.add_subcommand("mitigate", "risk mitigation experiment over generated patterns");
    int mit_n = 100;
    std::uint64_t mit_seed = 42;
    GenFlags mit_gen;
    GridFlags mit_grid;
    std::vector<int> mit_od;
    std::vector<double> mit_weights{0.5, 0.25, 0.25};
    rp::UavModel mit_uav;
    double mit_z = 1.96;
    std::string mit_out_csv, mit_out_json, mit_format = "table";
    mit_cmd->add_option("--n", mit_n, "number of generated patterns")->capture_default_str();
    mit_cmd->add_option("--seed", mit_seed, "first generator seed")->capture_default_str();
    add_gen_flags(mit_cmd, mit_gen);
    add_grid_flags(mit_cmd, mit_grid);
    mit_cmd->add_option("--od", mit_od, "1-based OD: ox oy oz dx dy dz")->expected(6);
    mit_cmd->add_option("--weights", mit_weights, "risk weights")->expected(3)->capture_default_str();
    add_uav_flags(mit_cmd, mit_uav);
    mit_cmd->add_option("--z", mit_z, "normal quantile for the confidence interval")->capture_default_str();
    mit_cmd->add_option("--out-csv", mit_out_csv, "records CSV path");
    mit_cmd->add_option("--out-json", mit_out_json, "result JSON path");
    mit_cmd->add_option("--format", mit_format, "stdout format: table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();

    // ablate
    auto* abl_cmd = app.add_subcommand("ablate", "four-map risk-type ablation on one scenario");
    std::string abl_scenario, abl_out;
    std::uint64_t abl_gen_seed = 42;
    GenFlags abl_gen;
    GridFlags abl_grid;
    std::vector<int> abl_od;
    rp::UavModel abl_uav;
    rp::EdaParams abl_eda;
    abl_cmd->add_option("--scenario", abl_scenario, "scenario JSON path (default: generated)");
    abl_cmd->add_option("--gen-seed", abl_gen_seed, "generator seed when no scenario file is given")
        ->capture_default_str();
    add_gen_flags(abl_cmd, abl_gen);
    add_grid_flags(abl_cmd, abl_grid);
    abl_cmd->add_option("--od", abl_od, "1-based OD: ox oy oz dx dy dz")->expected(6);
    add_uav_flags(abl_cmd, abl_uav);
    add_eda_flags(abl_cmd, abl_eda);
    abl_cmd->add_option("--seed", abl_eda.rng_seed, "EDA seed")->capture_default_str();
    abl_cmd->add_option("--out", abl_out, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) return cmd_scenario_gen(gen_gen, gen_grid, gen_seed, gen_name, gen_out);
        if (map_cmd->parsed())
            return cmd_riskmap(map_scenario, map_out, map_weights, map_uav, map_accident_rate,
                               map_no_layer_csv);
        if (plan_cmd->parsed())
            return cmd_plan(plan_map, plan_algo, plan_od, plan_out, plan_steps, plan_trace, plan_factor_opt,
                            plan_factor, plan_heur_file, plan_eda);
        if (bench_cmd->parsed())
            return cmd_bench(bench_scenarios, bench_generate, bench_gen_seed, bench_gen, bench_grid,
                             bench_algos, bench_ods, bench_factor, bench_eda, bench_seed, bench_weights,
                             bench_uav, bench_out_csv, bench_out_json, bench_format);
        if (mit_cmd->parsed())
            return cmd_mitigate(mit_n, mit_seed, mit_gen, mit_grid, mit_od, mit_weights, mit_uav, mit_z,
                                mit_out_csv, mit_out_json, mit_format);
        if (abl_cmd->parsed())
            return cmd_ablate(abl_scenario, abl_gen_seed, abl_gen, abl_grid, abl_od, abl_uav, abl_eda,
                              abl_out);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const rp::NoPath& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const rp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
