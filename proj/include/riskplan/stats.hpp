#pragma once

// Benchmark harness and statistics: algorithm comparison tables, the four
// risk-type ablation, the pattern mitigation experiment and the
// two-sample confidence interval behind it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskplan/eda.hpp"
#include "riskplan/errors.hpp"
#include "riskplan/grid.hpp"
#include "riskplan/planner.hpp"
#include "riskplan/risk_map.hpp"
#include "riskplan/scenario.hpp"
#include "riskplan/util.hpp"

namespace riskplan {

enum class Algorithm { Dijkstra, RiskAStar, EdaRa, EdaFra, Distance };

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Dijkstra: return "dijkstra";
        case Algorithm::RiskAStar: return "riskastar";
        case Algorithm::EdaRa: return "eda-ra";
        case Algorithm::EdaFra: return "eda-fra";
        case Algorithm::Distance: return "distance";
    }
    throw InvalidConfig("algorithm_name: unknown algorithm");
}

inline Algorithm algorithm_from_string(const std::string& s) {
    if (s == "dijkstra") return Algorithm::Dijkstra;
    if (s == "riskastar") return Algorithm::RiskAStar;
    if (s == "eda-ra") return Algorithm::EdaRa;
    if (s == "eda-fra") return Algorithm::EdaFra;
    if (s == "distance") return Algorithm::Distance;
    throw ParseError("unknown algorithm '" + s + "' (expected dijkstra|riskastar|eda-ra|eda-fra|distance)");
}

// Two-sample interval for (mean2 - mean1) / mean2. Sample variances use
// the n-1 denominator.
struct CIResult {
    std::size_t n1 = 0, n2 = 0;
    double mean1 = 0.0, mean2 = 0.0;
    double var1 = 0.0, var2 = 0.0;
    double z_value = 1.96;
    double interval_low = 0.0, interval_high = 0.0;
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (const double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    if (v.size() % 2 == 1) return v[mid];
    return 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace detail

inline CIResult confidence_interval(const std::vector<double>& group1, const std::vector<double>& group2,
                                    double z = 1.96) {
    if (group1.size() < 2 || group2.size() < 2)
        throw DegenerateGroup("confidence_interval: both groups need at least 2 samples");
    if (!(z >= 0.0) || !std::isfinite(z))
        throw InvalidConfig("confidence_interval: z must be finite and non-negative");
    CIResult r;
    r.n1 = group1.size();
    r.n2 = group2.size();
    r.mean1 = detail::mean_of(group1);
    r.mean2 = detail::mean_of(group2);
    r.var1 = detail::sample_variance(group1, r.mean1);
    r.var2 = detail::sample_variance(group2, r.mean2);
    r.z_value = z;
    if (r.mean2 == 0.0) throw DegenerateGroup("confidence_interval: mean of group 2 is zero");
    const double delta = r.mean2 - r.mean1;
    const double se = std::sqrt(r.var1 / static_cast<double>(r.n1) + r.var2 / static_cast<double>(r.n2));
    const double a = (delta - z * se) / r.mean2;
    const double b = (delta + z * se) / r.mean2;
    r.interval_low = std::min(a, b);
    r.interval_high = std::max(a, b);
    return r;
}

struct BenchmarkParams {
    double riskastar_factor = 0.0;  // 0 keeps the guided search identical to Dijkstra
    EdaParams eda{};
    std::uint64_t rng_seed = 1;  // master seed; EDA records use per-combination substreams

    void validate() const {
        if (!(riskastar_factor >= 0.0) || !std::isfinite(riskastar_factor))
            throw InvalidConfig("BenchmarkParams: riskastar_factor must be finite and non-negative");
        eda.validate();
    }
};

struct BenchmarkRecord {
    std::string scenario;
    Algorithm algorithm = Algorithm::Dijkstra;
    CellIndex origin{}, destination{};
    double total_risk_cost = 0.0;
    double distance_m = 0.0;
    double wall_time_s = 0.0;
    std::size_t expanded_nodes = 0;
    std::uint64_t seed = 0;
    std::string params_digest;
    bool failed = false;
    std::string error;
};

struct AlgorithmSummary {
    Algorithm algorithm = Algorithm::Dijkstra;
    std::size_t runs = 0;      // records that produced a path
    std::size_t failures = 0;  // records that did not
    double mean_cost_ratio = 0.0;  // vs the Dijkstra baseline of the same scenario and OD pair
    double std_cost_ratio = 0.0;
    double mean_distance_ratio = 0.0;
    double std_distance_ratio = 0.0;
    double mean_time_fraction = 0.0;
    double median_time_s = 0.0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRecord> records;
    std::vector<AlgorithmSummary> summaries;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Planner output is a hard invariant, not a benchmark outcome: a path
// that fails validation is a bug and aborts the run instead of becoming
// a failed record.
inline void require_valid_path(const FlightPath& path, const RiskMap& map, const std::string& who) {
    if (const auto violation = validate_path(path.vertices, map.spec, map.occupancy))
        throw std::runtime_error(who + " produced an invalid path at vertex " +
                                 std::to_string(violation->index) + ": " + violation->detail);
}

inline std::string benchmark_params_digest(const BenchmarkParams& p) {
    std::ostringstream os;
    os << "riskastar_factor=" << format_double(p.riskastar_factor)
       << ";pop=" << p.eda.population_size << ";iters=" << p.eda.iterations
       << ";lr=" << format_double(p.eda.learning_rate)
       << ";dom=" << format_double(p.eda.dominant_fraction) << ";k=" << p.eda.k_clusters
       << ";p0=" << format_double(p.eda.init_probability)
       << ";ihf=" << format_double(p.eda.inner_heuristic_factor)
       << ";cp=" << format_double(p.eda.connectivity_penalty) << ";seed=" << p.rng_seed;
    return fnv1a_hex(os.str());
}

}  // namespace detail

// Runs every (scenario, algorithm, OD) combination and summarizes each
// algorithm against a Dijkstra baseline computed once per scenario and OD
// pair (reused as the Dijkstra record itself, so its ratios are exactly
// 1). Planner errors mark the record failed and the run continues.
inline BenchmarkResult run_benchmark(const std::vector<UrbanScenario>& scenarios,
                                     const std::vector<Algorithm>& algorithms,
                                     const std::vector<std::pair<CellIndex, CellIndex>>& od_pairs,
                                     const BenchmarkParams& params, const UavModel& uav = {},
                                     const RiskWeights& weights = {}) {
    if (scenarios.empty()) throw InvalidConfig("run_benchmark: no scenarios");
    if (algorithms.empty()) throw InvalidConfig("run_benchmark: no algorithms");
    if (od_pairs.empty()) throw InvalidConfig("run_benchmark: no OD pairs");
    params.validate();

    std::vector<Algorithm> algos;  // deduplicated, first-appearance order
    for (const Algorithm a : algorithms)
        if (std::find(algos.begin(), algos.end(), a) == algos.end()) algos.push_back(a);

    const std::string digest = detail::benchmark_params_digest(params);

    struct Baseline {
        double cost = 0.0, distance_m = 0.0, time_s = 0.0;
        std::size_t expanded = 0;
    };

    BenchmarkResult result;
    std::vector<std::optional<Baseline>> baselines(scenarios.size() * od_pairs.size());

    for (std::size_t si = 0; si < scenarios.size(); ++si) {
        const RiskMap map = build_risk_map(scenarios[si], scenarios[si].grid, uav, weights);
        for (std::size_t oi = 0; oi < od_pairs.size(); ++oi) {
            const auto& [origin, destination] = od_pairs[oi];
            const std::size_t combo = si * od_pairs.size() + oi;
            std::optional<FlightPath> base_path;
            try {
                const auto t0 = std::chrono::steady_clock::now();
                base_path = dijkstra_risk(map, origin, destination);
                baselines[combo] = Baseline{base_path->total_risk_cost, base_path->distance_m,
                                            detail::seconds_since(t0), base_path->expanded_nodes};
                detail::require_valid_path(*base_path, map, "run_benchmark: dijkstra");
            } catch (const Error&) {
                // every algorithm fails on this combination; records carry their own errors
            }

            for (const Algorithm algo : algos) {
                BenchmarkRecord rec;
                rec.scenario = scenarios[si].name;
                rec.algorithm = algo;
                rec.origin = origin;
                rec.destination = destination;
                rec.params_digest = digest;
                const std::uint64_t sub = substream_seed(params.rng_seed, combo);
                try {
                    if (algo == Algorithm::Dijkstra && baselines[combo]) {
                        const Baseline& b = *baselines[combo];
                        rec.total_risk_cost = b.cost;
                        rec.distance_m = b.distance_m;
                        rec.wall_time_s = b.time_s;
                        rec.expanded_nodes = b.expanded;
                    } else {
                        const auto t0 = std::chrono::steady_clock::now();
                        FlightPath path;
                        switch (algo) {
                            case Algorithm::Dijkstra:
                                path = dijkstra_risk(map, origin, destination);
                                break;
                            case Algorithm::RiskAStar: {
                                HeuristicInfo heur;
                                heur.heuristic_factor = params.riskastar_factor;
                                path = risk_a_star(map, origin, destination, heur);
                                break;
                            }
                            case Algorithm::EdaRa: {
                                EdaParams eda = params.eda;
                                eda.rng_seed = sub;
                                rec.seed = sub;
                                path = eda_ra_star(map, origin, destination, eda).path;
                                break;
                            }
                            case Algorithm::EdaFra: {
                                EdaParams eda = params.eda;
                                eda.rng_seed = sub;
                                rec.seed = sub;
                                path = eda_fra_star(map, origin, destination, eda).path;
                                break;
                            }
                            case Algorithm::Distance:
                                path = dijkstra_distance(map.spec, map.occupancy, origin, destination);
                                path.total_risk_cost = path_cost(path.vertices, map);
                                break;
                        }
                        rec.wall_time_s = detail::seconds_since(t0);
                        detail::require_valid_path(path, map, "run_benchmark: " + algorithm_name(algo));
                        rec.total_risk_cost = path.total_risk_cost;
                        rec.distance_m = path.distance_m;
                        rec.expanded_nodes = path.expanded_nodes;
                    }
                } catch (const Error& e) {
                    rec.failed = true;
                    rec.error = e.what();
                }
                result.records.push_back(std::move(rec));
            }
        }
    }

    for (const Algorithm algo : algos) {
        AlgorithmSummary sum;
        sum.algorithm = algo;
        std::vector<double> cost_ratios, dist_ratios, time_fractions, times;
        std::size_t idx = 0;
        for (std::size_t si = 0; si < scenarios.size(); ++si)
            for (std::size_t oi = 0; oi < od_pairs.size(); ++oi) {
                const std::size_t combo = si * od_pairs.size() + oi;
                for (std::size_t ai = 0; ai < algos.size(); ++ai, ++idx) {
                    if (algos[ai] != algo) continue;
                    const BenchmarkRecord& rec = result.records[idx];
                    if (rec.failed) {
                        ++sum.failures;
                        continue;
                    }
                    ++sum.runs;
                    times.push_back(rec.wall_time_s);
                    if (!baselines[combo]) continue;
                    const Baseline& b = *baselines[combo];
                    cost_ratios.push_back(rec.total_risk_cost / b.cost);
                    dist_ratios.push_back(rec.distance_m / b.distance_m);
                    time_fractions.push_back(rec.wall_time_s / std::max(b.time_s, 1e-12));
                }
            }
        if (!cost_ratios.empty()) {
            sum.mean_cost_ratio = detail::mean_of(cost_ratios);
            sum.std_cost_ratio = std::sqrt(detail::sample_variance(cost_ratios, sum.mean_cost_ratio));
            sum.mean_distance_ratio = detail::mean_of(dist_ratios);
            sum.std_distance_ratio = std::sqrt(detail::sample_variance(dist_ratios, sum.mean_distance_ratio));
            sum.mean_time_fraction = detail::mean_of(time_fractions);
        }
        sum.median_time_s = detail::median_of(times);
        result.summaries.push_back(std::move(sum));
    }
    return result;
}

struct AblationRow {
    std::string label;
    RiskWeights weights{};  // zeros for the uniform-cost row
    FlightPath path;
    double full_map_cost = 0.0;  // evaluated on the all-components map
};

// Plans the same OD pair on four cost maps (uniform with obstacles,
// fatality only, fatality+property with the default ratio renormalized,
// all three components) and evaluates every path on the full map.
inline std::vector<AblationRow> risk_ablation(const UrbanScenario& scenario, const GridSpec& spec,
                                              const UavModel& uav, const CellIndex& origin,
                                              const CellIndex& destination, const EdaParams& eda) {
    const RiskWeights full_weights{0.5, 0.25, 0.25};
    const RiskMap full = build_risk_map(scenario, spec, uav, full_weights);

    struct Setup {
        std::string label;
        RiskWeights weights;
        bool uniform;
    };
    const Setup setups[] = {
        {"uniform", {0.0, 0.0, 0.0}, true},
        {"fatality", {1.0, 0.0, 0.0}, false},
        {"fatality+property", {2.0 / 3.0, 1.0 / 3.0, 0.0}, false},
        {"all", full_weights, false},
    };

    std::vector<AblationRow> rows;
    for (const Setup& s : setups) {
        const RiskMap map = s.uniform ? uniform_cost_map(spec, full.occupancy)
                                      : build_risk_map(scenario, spec, uav, s.weights);
        AblationRow row;
        row.label = s.label;
        row.weights = s.weights;
        row.path = eda_fra_star(map, origin, destination, eda).path;
        detail::require_valid_path(row.path, full, "risk_ablation: " + s.label);
        row.full_map_cost = path_cost(row.path.vertices, full);
        rows.push_back(std::move(row));
    }
    return rows;
}

struct MitigationRecord {
    std::uint64_t seed = 0;
    double mitigated = 0.0;    // risk cost of the minimum-risk path
    double unmitigated = 0.0;  // risk cost of the shortest metric path
};

struct MitigationResult {
    std::vector<MitigationRecord> records;  // feasible patterns only
    std::size_t excluded = 0;               // patterns with no feasible path or blocked endpoints
    CIResult ci;
};

// Generates n urban patterns (seeds gen_cfg.rng_seed, +1, +2, ...), plans
// the minimum-risk and the shortest path on each and reports the
// confidence interval of the mitigated risk fraction.
inline MitigationResult mitigation_experiment(int n_patterns, const ScenarioGenConfig& gen_cfg,
                                              const GridSpec& spec, const CellIndex& origin,
                                              const CellIndex& destination, const UavModel& uav = {},
                                              const RiskWeights& weights = {}, double z = 1.96) {
    if (n_patterns < 2) throw InvalidConfig("mitigation_experiment: need at least 2 patterns");
    MitigationResult result;
    std::vector<double> mitigated, unmitigated;
    for (int i = 0; i < n_patterns; ++i) {
        ScenarioGenConfig cfg = gen_cfg;
        cfg.rng_seed = gen_cfg.rng_seed + static_cast<std::uint64_t>(i);
        cfg.name.clear();  // per-seed default name
        const UrbanScenario scenario = generate_scenario(cfg, spec);
        const RiskMap map = build_risk_map(scenario, spec, uav, weights);
        MitigationRecord rec;
        rec.seed = cfg.rng_seed;
        try {
            const FlightPath safest = dijkstra_risk(map, origin, destination);
            const FlightPath shortest = dijkstra_distance(spec, map.occupancy, origin, destination);
            detail::require_valid_path(safest, map, "mitigation_experiment: dijkstra");
            detail::require_valid_path(shortest, map, "mitigation_experiment: distance");
            rec.mitigated = safest.total_risk_cost;
            rec.unmitigated = path_cost(shortest.vertices, map);
        } catch (const NoPath&) {
            ++result.excluded;
            continue;
        } catch (const OccupiedEndpoint&) {
            ++result.excluded;
            continue;
        }
        mitigated.push_back(rec.mitigated);
        unmitigated.push_back(rec.unmitigated);
        result.records.push_back(rec);
    }
    result.ci = confidence_interval(mitigated, unmitigated, z);
    return result;
}

}  // namespace riskplan
