#pragma once

// Estimation-of-distribution hybrids. A per-cell Bernoulli probability
// field is sampled into species (open-region masks), the best species
// steer the field via the standard EDA update, and the species either
// gate an exact masked search (the region-assisted variant) or only shape
// a k-means centroid track plus heuristic factor for one final guided
// search on the full map (the fast variant).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "riskplan/errors.hpp"
#include "riskplan/grid.hpp"
#include "riskplan/planner.hpp"
#include "riskplan/risk_map.hpp"
#include "riskplan/rng.hpp"

namespace riskplan {

struct EdaParams {
    int population_size = 50;
    int iterations = 100;
    double learning_rate = 0.1;
    double dominant_fraction = 0.3;    // dominant set size = ceil(fraction * population)
    int k_clusters = 5;                // centroid count of the fast variant
    double init_probability = 0.5;
    double inner_heuristic_factor = 0.0;  // > 0 switches the masked inner search to a guided one
    double connectivity_penalty = 0.0;    // <= 0 derives max-finite-cell-cost * cell-count
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (population_size < 1) throw InvalidConfig("EdaParams: population_size must be >= 1");
        if (iterations < 1) throw InvalidConfig("EdaParams: iterations must be >= 1");
        if (!(learning_rate >= 0.0) || !(learning_rate <= 1.0))
            throw InvalidConfig("EdaParams: learning_rate must be in [0,1]");
        if (!(dominant_fraction > 0.0) || !(dominant_fraction <= 1.0))
            throw InvalidConfig("EdaParams: dominant_fraction must be in (0,1]");
        if (k_clusters < 1) throw InvalidConfig("EdaParams: k_clusters must be >= 1");
        if (!(init_probability >= 0.0) || !(init_probability <= 1.0))
            throw InvalidConfig("EdaParams: init_probability must be in [0,1]");
        if (!(inner_heuristic_factor >= 0.0) || !std::isfinite(inner_heuristic_factor))
            throw InvalidConfig("EdaParams: inner_heuristic_factor must be finite and non-negative");
    }

    friend bool operator==(const EdaParams&, const EdaParams&) = default;
};

// Per-cell selection probabilities. Origin and destination are pinned to
// 1 and occupied cells to 0, so sampled species always contain the
// endpoints and never an occupied cell.
struct ProbabilityField {
    GridSpec spec;
    std::vector<double> p;
    CellIndex origin{};
    CellIndex destination{};
};

inline ProbabilityField make_probability_field(const RiskMap& map, const CellIndex& origin,
                                               const CellIndex& destination, double init_probability = 0.5) {
    if (!map.spec.in_bounds(origin) || !map.spec.in_bounds(destination))
        throw OutOfBounds("make_probability_field: endpoint outside the grid");
    if (map.is_occupied(map.spec.flat(origin)) || map.is_occupied(map.spec.flat(destination)))
        throw OccupiedEndpoint("make_probability_field: endpoint is occupied");
    if (!(init_probability >= 0.0) || !(init_probability <= 1.0))
        throw InvalidConfig("make_probability_field: init probability must be in [0,1]");
    ProbabilityField field;
    field.spec = map.spec;
    field.origin = origin;
    field.destination = destination;
    field.p.assign(map.spec.size(), init_probability);
    for (std::size_t i = 0; i < field.p.size(); ++i)
        if (map.occupancy.occupied[i]) field.p[i] = 0.0;
    field.p[map.spec.flat(origin)] = 1.0;
    field.p[map.spec.flat(destination)] = 1.0;
    return field;
}

// One individual: the mask of open (searchable) cells plus its fitness.
struct Species {
    std::vector<std::uint8_t> open;
    double fitness = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void sample_open_mask(const ProbabilityField& field, Rng& rng, std::vector<std::uint8_t>& open) {
    open.resize(field.p.size());
    for (std::size_t i = 0; i < field.p.size(); ++i) open[i] = rng.bernoulli(field.p[i]) ? 1 : 0;
    open[field.spec.flat(field.origin)] = 1;
    open[field.spec.flat(field.destination)] = 1;
}

}  // namespace detail

// Draws one species cell by cell (flat order, one draw per cell).
inline Species sample_species(const ProbabilityField& field, Rng& rng) {
    Species s;
    detail::sample_open_mask(field, rng, s.open);
    return s;
}

// Moves the field toward the dominant share: p' = (1-l)p + l * DS/DN,
// where DS counts the dominant species with the cell open. Endpoint pins
// are re-applied.
inline ProbabilityField update_probability(const ProbabilityField& field,
                                           const std::vector<const Species*>& dominant,
                                           double learning_rate) {
    if (dominant.empty()) throw EmptyDominantSet("update_probability: no dominant species");
    if (!(learning_rate >= 0.0) || !(learning_rate <= 1.0))
        throw InvalidConfig("update_probability: learning rate must be in [0,1]");
    for (const Species* s : dominant)
        if (s->open.size() != field.p.size())
            throw DimensionMismatch("update_probability: species size does not match the field");
    ProbabilityField out = field;
    const double dn = static_cast<double>(dominant.size());
    for (std::size_t i = 0; i < out.p.size(); ++i) {
        double ds = 0.0;
        for (const Species* s : dominant) ds += s->open[i];
        const double p = (1.0 - learning_rate) * field.p[i] + learning_rate * (ds / dn);
        out.p[i] = std::min(1.0, std::max(0.0, p));
    }
    out.p[out.spec.flat(out.origin)] = 1.0;
    out.p[out.spec.flat(out.destination)] = 1.0;
    return out;
}

inline ProbabilityField update_probability(const ProbabilityField& field, const std::vector<Species>& dominant,
                                           double learning_rate) {
    std::vector<const Species*> ptrs;
    ptrs.reserve(dominant.size());
    for (const auto& s : dominant) ptrs.push_back(&s);
    return update_probability(field, ptrs, learning_rate);
}

namespace detail {

inline bool mask_connects(const NeighborTable& table, const std::vector<std::uint8_t>& open, std::size_t o,
                          std::size_t d, std::vector<std::uint8_t>& visited, std::vector<std::uint32_t>& stack) {
    if (!open[o] || !open[d]) return false;
    if (o == d) return true;
    visited.assign(open.size(), 0);
    stack.clear();
    stack.push_back(static_cast<std::uint32_t>(o));
    visited[o] = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        const std::uint32_t end = table.begin[u + 1];
        for (std::uint32_t e = table.begin[u]; e < end; ++e) {
            const std::uint32_t t = table.target[e];
            if (!open[t] || visited[t]) continue;
            if (t == d) return true;
            visited[t] = 1;
            stack.push_back(t);
        }
    }
    return false;
}

inline double mean_open_cost(const std::vector<std::uint8_t>& open, const RiskMap& map) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < open.size(); ++i)
        if (open[i]) {
            sum += map.total[i];
            ++count;
        }
    if (count == 0) throw EmptyOpenSet("region fitness: species has no open cells");
    return sum / static_cast<double>(count);
}

inline double derive_connectivity_penalty(const RiskMap& map) {
    double mx = 0.0;
    for (std::size_t i = 0; i < map.total.size(); ++i)
        if (!map.occupancy.occupied[i] && std::isfinite(map.total[i])) mx = std::max(mx, map.total[i]);
    return mx * static_cast<double>(map.spec.size());
}

}  // namespace detail

// Region quality of the fast variant: mean total cost of the open cells,
// plus the penalty when the open region does not connect the endpoints.
inline double region_fitness(const Species& species, const RiskMap& map, const CellIndex& origin,
                             const CellIndex& destination, double connectivity_penalty) {
    if (species.open.size() != map.spec.size())
        throw DimensionMismatch("region_fitness: species size does not match the map");
    const detail::NeighborTable table(map.spec);
    std::vector<std::uint8_t> visited;
    std::vector<std::uint32_t> stack;
    const double mean = detail::mean_open_cost(species.open, map);
    const bool connected = detail::mask_connects(table, species.open, map.spec.flat(origin),
                                                 map.spec.flat(destination), visited, stack);
    return mean + (connected ? 0.0 : connectivity_penalty);
}

struct KmeansResult {
    std::vector<Vec3> centroids;
    std::vector<int> assignment;
    std::vector<double> wcss;  // within-cluster sum of squares after each assignment pass
};

// Plain Lloyd iterations with a k-means++ style seeded start. k collapses
// to the number of distinct points when larger. Ties in assignment go to
// the lowest centroid index; empty clusters keep their centroid.
inline KmeansResult kmeans_cluster(const std::vector<Vec3>& points, int k, Rng& rng,
                                   int max_iterations = 100) {
    if (points.empty()) throw EmptyOpenSet("kmeans_cluster: no points");
    if (k < 1) throw InvalidConfig("kmeans_cluster: k must be >= 1");
    {
        std::vector<Vec3> distinct = points;
        std::sort(distinct.begin(), distinct.end(), [](const Vec3& a, const Vec3& b) {
            if (a.x != b.x) return a.x < b.x;
            if (a.y != b.y) return a.y < b.y;
            return a.z < b.z;
        });
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        k = std::min<int>(k, static_cast<int>(distinct.size()));
    }

    const auto sqdist = [](const Vec3& a, const Vec3& b) {
        const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
        return dx * dx + dy * dy + dz * dz;
    };

    KmeansResult result;
    result.centroids.push_back(points[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(points.size()) - 1))]);
    std::vector<double> d2(points.size());
    while (static_cast<int>(result.centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = sqdist(points[i], result.centroids[0]);
            for (std::size_t c = 1; c < result.centroids.size(); ++c)
                best = std::min(best, sqdist(points[i], result.centroids[c]));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        double r = rng.uniform01() * total;
        for (std::size_t i = 0; i < points.size(); ++i) {
            r -= d2[i];
            if (r <= 0.0) {
                pick = i;
                break;
            }
        }
        result.centroids.push_back(points[pick]);
    }

    result.assignment.assign(points.size(), -1);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        double wcss = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            int best_c = 0;
            double best_d = sqdist(points[i], result.centroids[0]);
            for (int c = 1; c < static_cast<int>(result.centroids.size()); ++c) {
                const double d = sqdist(points[i], result.centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            wcss += best_d;
            if (result.assignment[i] != best_c) {
                result.assignment[i] = best_c;
                changed = true;
            }
        }
        result.wcss.push_back(wcss);
        if (!changed) break;
        for (int c = 0; c < static_cast<int>(result.centroids.size()); ++c) {
            Vec3 sum{};
            std::size_t count = 0;
            for (std::size_t i = 0; i < points.size(); ++i)
                if (result.assignment[i] == c) {
                    sum.x += points[i].x;
                    sum.y += points[i].y;
                    sum.z += points[i].z;
                    ++count;
                }
            if (count > 0)
                result.centroids[static_cast<std::size_t>(c)] = {sum.x / static_cast<double>(count),
                                                                 sum.y / static_cast<double>(count),
                                                                 sum.z / static_cast<double>(count)};
        }
    }
    return result;
}

// Clusters the open points (index coordinates), orders the centroids
// along the origin-to-destination direction into a world-space track and
// derives the heuristic factor as the smaller of the two mean costs: over
// the open points and over the cells nearest to the centroids.
inline HeuristicInfo kmeans_heuristic(const std::vector<CellIndex>& open_points, const RiskMap& map, int k,
                                      const CellIndex& origin, const CellIndex& destination, Rng& rng) {
    if (open_points.empty()) throw EmptyOpenSet("kmeans_heuristic: no open points");
    if (k < 1) throw InvalidConfig("kmeans_heuristic: k must be >= 1");
    for (const auto& c : open_points)
        if (!map.spec.in_bounds(c)) throw OutOfBounds("kmeans_heuristic: open point outside the grid");

    std::vector<Vec3> pts;
    pts.reserve(open_points.size());
    for (const auto& c : open_points)
        pts.push_back({static_cast<double>(c.x), static_cast<double>(c.y), static_cast<double>(c.z)});
    const KmeansResult km = kmeans_cluster(pts, k, rng);

    const GridSpec& spec = map.spec;
    const Vec3 o_center = spec.cell_center(origin);
    const Vec3 d_center = spec.cell_center(destination);
    const Vec3 axis{d_center.x - o_center.x, d_center.y - o_center.y, d_center.z - o_center.z};

    std::vector<Vec3> centroid_world;
    centroid_world.reserve(km.centroids.size());
    for (const auto& c : km.centroids)
        centroid_world.push_back({spec.ground_origin.x + (c.x + 0.5) * spec.unit_x,
                                  spec.ground_origin.y + (c.y + 0.5) * spec.unit_y,
                                  spec.ground_origin.z + (c.z + 0.5) * spec.unit_z});
    std::stable_sort(centroid_world.begin(), centroid_world.end(), [&](const Vec3& a, const Vec3& b) {
        const double pa = (a.x - o_center.x) * axis.x + (a.y - o_center.y) * axis.y + (a.z - o_center.z) * axis.z;
        const double pb = (b.x - o_center.x) * axis.x + (b.y - o_center.y) * axis.y + (b.z - o_center.z) * axis.z;
        return pa < pb;
    });

    double open_mean = 0.0;
    for (const auto& c : open_points) open_mean += map.total[spec.flat(c)];
    open_mean /= static_cast<double>(open_points.size());

    double centroid_mean = 0.0;
    for (const auto& c : km.centroids) {
        const CellIndex nearest{
            std::clamp(static_cast<int>(std::llround(c.x)), 0, spec.nx - 1),
            std::clamp(static_cast<int>(std::llround(c.y)), 0, spec.ny - 1),
            std::clamp(static_cast<int>(std::llround(c.z)), 0, spec.nz - 1)};
        centroid_mean += map.total[spec.flat(nearest)];
    }
    centroid_mean /= static_cast<double>(km.centroids.size());

    HeuristicInfo heur;
    heur.heuristic_factor = std::min(open_mean, centroid_mean);
    if (!std::isfinite(heur.heuristic_factor) || heur.heuristic_factor < 0)
        throw InvalidConfig("kmeans_heuristic: derived factor is not finite");
    heur.centroid_track.push_back(o_center);
    for (const auto& w : centroid_world) heur.centroid_track.push_back(w);
    heur.centroid_track.push_back(d_center);
    return heur;
}

struct TraceRow {
    int iteration = 0;
    double best_fitness = 0.0;  // best ever, non-increasing
    double mean_fitness = 0.0;  // population mean of this iteration
    double open_fraction = 0.0;
};

struct EdaResult {
    FlightPath path;
    std::vector<TraceRow> trace;
};

// Region-assisted variant: every species gates an exact masked search and
// fitness is the resulting path cost. Returns the best path ever found;
// if no species ever connects the endpoints, falls back to the
// unrestricted search before giving up.
inline EdaResult eda_ra_star(const RiskMap& map, const CellIndex& origin, const CellIndex& destination,
                             const EdaParams& params) {
    params.validate();
    ProbabilityField field = make_probability_field(map, origin, destination, params.init_probability);
    detail::GridSearch search(map.spec, &map.total, &map.occupancy.occupied);
    HeuristicInfo inner;
    inner.heuristic_factor = params.inner_heuristic_factor;
    const HeuristicInfo* inner_ptr = params.inner_heuristic_factor > 0.0 ? &inner : nullptr;

    const std::size_t pop = static_cast<std::size_t>(params.population_size);
    std::vector<Species> population(pop);
    std::vector<char> feasible(pop, 0);
    std::vector<std::size_t> order(pop);
    std::vector<Species> dominant;
    EdaResult result;
    double best_cost = std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (int iter = 0; iter < params.iterations; ++iter) {
        double max_feasible = 0.0;
        bool any_feasible = false;
        double open_cells = 0.0;
        for (std::size_t j = 0; j < pop; ++j) {
            Rng rng(substream_seed(params.rng_seed, 1 + static_cast<std::uint64_t>(iter), 1 + j));
            detail::sample_open_mask(field, rng, population[j].open);
            for (const auto v : population[j].open) open_cells += v;
            const auto res = search.run(origin, destination, inner_ptr, &population[j].open);
            feasible[j] = res.found ? 1 : 0;
            if (res.found) {
                population[j].fitness = res.cost;
                any_feasible = true;
                max_feasible = std::max(max_feasible, res.cost);
                if (res.cost < best_cost) {
                    best_cost = res.cost;
                    result.path = detail::to_flight_path(res);
                    have_best = true;
                }
            }
        }
        for (std::size_t j = 0; j < pop; ++j)
            if (!feasible[j])
                population[j].fitness =
                    any_feasible ? max_feasible : std::numeric_limits<double>::infinity();

        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return population[a].fitness < population[b].fitness;
        });
        const auto dominant_count = static_cast<std::size_t>(
            std::ceil(params.dominant_fraction * static_cast<double>(pop)));
        dominant.clear();
        for (std::size_t r = 0; r < dominant_count; ++r) dominant.push_back(std::move(population[order[r]]));
        field = update_probability(field, dominant, params.learning_rate);
        for (std::size_t r = 0; r < dominant_count; ++r) population[order[r]] = std::move(dominant[r]);

        double mean_fitness = 0.0;
        for (const auto& s : population) mean_fitness += s.fitness;
        mean_fitness /= static_cast<double>(pop);
        result.trace.push_back({iter, have_best ? best_cost : std::numeric_limits<double>::infinity(),
                                mean_fitness,
                                open_cells / (static_cast<double>(pop) * static_cast<double>(map.spec.size()))});
    }

    if (!have_best) {
        const auto res = search.run(origin, destination, nullptr, nullptr);
        if (!res.found) throw NoPath("eda_ra_star: destination unreachable");
        result.path = detail::to_flight_path(res);
    }
    return result;
}

// Fast variant: the EDA loop scores regions only (mean open cost plus a
// disconnection penalty), then the best region shapes one guided search
// on the full map via the k-means track heuristic.
inline EdaResult eda_fra_star(const RiskMap& map, const CellIndex& origin, const CellIndex& destination,
                              const EdaParams& params) {
    params.validate();
    ProbabilityField field = make_probability_field(map, origin, destination, params.init_probability);
    const detail::NeighborTable table(map.spec);
    const double penalty = params.connectivity_penalty > 0.0 ? params.connectivity_penalty
                                                             : detail::derive_connectivity_penalty(map);
    const std::size_t o = map.spec.flat(origin), d = map.spec.flat(destination);

    const std::size_t pop = static_cast<std::size_t>(params.population_size);
    std::vector<Species> population(pop);
    std::vector<std::size_t> order(pop);
    std::vector<Species> dominant;
    std::vector<std::uint8_t> visited;
    std::vector<std::uint32_t> stack;
    std::vector<std::uint8_t> best_mask;
    double best_fitness = std::numeric_limits<double>::infinity();
    EdaResult result;

    for (int iter = 0; iter < params.iterations; ++iter) {
        double open_cells = 0.0;
        for (std::size_t j = 0; j < pop; ++j) {
            Rng rng(substream_seed(params.rng_seed, 1 + static_cast<std::uint64_t>(iter), 1 + j));
            detail::sample_open_mask(field, rng, population[j].open);
            for (const auto v : population[j].open) open_cells += v;
            const double mean = detail::mean_open_cost(population[j].open, map);
            const bool connected = detail::mask_connects(table, population[j].open, o, d, visited, stack);
            population[j].fitness = mean + (connected ? 0.0 : penalty);
            if (population[j].fitness < best_fitness) {
                best_fitness = population[j].fitness;
                best_mask = population[j].open;
            }
        }

        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return population[a].fitness < population[b].fitness;
        });
        const auto dominant_count = static_cast<std::size_t>(
            std::ceil(params.dominant_fraction * static_cast<double>(pop)));
        dominant.clear();
        for (std::size_t r = 0; r < dominant_count; ++r) dominant.push_back(std::move(population[order[r]]));
        field = update_probability(field, dominant, params.learning_rate);
        for (std::size_t r = 0; r < dominant_count; ++r) population[order[r]] = std::move(dominant[r]);

        double mean_fitness = 0.0;
        for (const auto& s : population) mean_fitness += s.fitness;
        mean_fitness /= static_cast<double>(pop);
        result.trace.push_back({iter, best_fitness, mean_fitness,
                                open_cells / (static_cast<double>(pop) * static_cast<double>(map.spec.size()))});
    }

    std::vector<CellIndex> open_points;
    for (std::size_t i = 0; i < best_mask.size(); ++i)
        if (best_mask[i]) open_points.push_back(map.spec.unflat(i));
    Rng kmeans_rng(substream_seed(params.rng_seed, 0, 0));
    const HeuristicInfo heur = kmeans_heuristic(open_points, map, params.k_clusters, origin, destination,
                                                kmeans_rng);
    result.path = risk_a_star(map, origin, destination, heur);
    return result;
}

}  // namespace riskplan
