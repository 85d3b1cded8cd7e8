#pragma once

// Graph search over the risk map: exact Dijkstra baselines (risk cost and
// metric distance) and the heuristic variant with an optional centroid
// track. All planners share one search core, so the zero-heuristic
// configuration is execution-identical to Dijkstra. Path cost follows the
// sum-of-entered-cells convention: the origin cell is not counted, each
// move pays the total cost of the cell it enters, and diagonal moves pay
// the same as straight ones (distance is tracked separately).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "riskplan/errors.hpp"
#include "riskplan/grid.hpp"
#include "riskplan/risk_map.hpp"

namespace riskplan {

struct FlightPath {
    std::vector<CellIndex> vertices;  // origin first, destination last
    double total_risk_cost = 0.0;
    double distance_m = 0.0;
    std::size_t expanded_nodes = 0;
};

// Heuristic configuration for the guided search. The estimate for a node
// is factor * Euclidean-distance-to-destination in cell-step units
// (meters divided by the longest single-move length), so a factor of c
// reads "c cost units per remaining move" and factors at or below the
// minimum per-cell cost stay admissible. With a non-empty centroid track
// the remaining-track estimate replaces it for nodes that stray from the
// track by more than deviation_tolerance (relative). prune_on_deviation
// makes straying nodes last-resort (infinite priority) instead of softly
// penalized.
struct HeuristicInfo {
    double heuristic_factor = 0.0;
    std::vector<Vec3> centroid_track;  // world-space, origin center first, destination center last
    double deviation_tolerance = 0.2;
    bool prune_on_deviation = false;
};

// Risk cost of a given path on the map, origin cell excluded. Any counted
// occupied cell makes the cost infinite.
inline double path_cost(const std::vector<CellIndex>& vertices, const RiskMap& map) {
    if (vertices.empty()) throw InvalidConfig("path_cost: empty path");
    for (const auto& v : vertices)
        if (!map.spec.in_bounds(v)) throw OutOfBounds("path_cost: vertex outside the grid");
    double cost = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) cost += map.total[map.spec.flat(vertices[i])];
    return cost;
}

enum class ViolationKind { EmptyPath, OutOfBounds, Occupied, Hover, NotAdjacent };

struct PathViolation {
    ViolationKind kind{};
    std::size_t index = 0;  // vertex index (or the target vertex of a bad step)
    std::string detail;
};

// Checks bounds, occupancy, non-zero moves and 26-adjacency of every
// step; reports the first violation.
inline std::optional<PathViolation> validate_path(const std::vector<CellIndex>& vertices,
                                                  const GridSpec& spec, const OccupancyGrid& occupancy) {
    if (occupancy.spec != spec) throw DimensionMismatch("validate_path: occupancy grid mismatch");
    if (vertices.empty()) return PathViolation{ViolationKind::EmptyPath, 0, "path has no vertices"};
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!spec.in_bounds(vertices[i]))
            return PathViolation{ViolationKind::OutOfBounds, i, "vertex outside the grid"};
        if (occupancy.is_occupied(vertices[i]))
            return PathViolation{ViolationKind::Occupied, i, "vertex inside occupied airspace"};
    }
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        const int dx = vertices[i].x - vertices[i - 1].x;
        const int dy = vertices[i].y - vertices[i - 1].y;
        const int dz = vertices[i].z - vertices[i - 1].z;
        if (dx == 0 && dy == 0 && dz == 0)
            return PathViolation{ViolationKind::Hover, i, "zero move"};
        if (std::abs(dx) > 1 || std::abs(dy) > 1 || std::abs(dz) > 1)
            return PathViolation{ViolationKind::NotAdjacent, i, "step is not a 26-neighbor move"};
    }
    return std::nullopt;
}

namespace detail {

// Flattened adjacency of the 26-neighborhood in enumeration order (CSR),
// built once per grid and shared by searches and flood fills.
struct NeighborTable {
    std::vector<std::uint32_t> begin;   // size+1 offsets
    std::vector<std::uint32_t> target;  // neighbor flat index
    std::vector<std::uint8_t> slot;     // index into kNeighborOffsets

    explicit NeighborTable(const GridSpec& spec) {
        const std::size_t n = spec.size();
        begin.resize(n + 1);
        target.reserve(n * 26);
        slot.reserve(n * 26);
        for (std::size_t i = 0; i < n; ++i) {
            begin[i] = static_cast<std::uint32_t>(target.size());
            const CellIndex c = spec.unflat(i);
            for (std::size_t s = 0; s < kNeighborOffsets.size(); ++s) {
                const auto& o = kNeighborOffsets[s];
                const CellIndex t{c.x + o[0], c.y + o[1], c.z + o[2]};
                if (!spec.in_bounds(t)) continue;
                target.push_back(static_cast<std::uint32_t>(spec.flat(t)));
                slot.push_back(static_cast<std::uint8_t>(s));
            }
        }
        begin[n] = static_cast<std::uint32_t>(target.size());
    }
};

// Reusable single-source search over the grid. Edge weight is either the
// total cost of the entered cell (risk mode) or the metric step length
// (distance mode). Neighbor relaxation follows the fixed offset
// enumeration and the open list breaks f ties first-in-first-out, which
// pins down one deterministic result among equal-cost paths.
class GridSearch {
public:
    struct Result {
        bool found = false;
        double cost = 0.0;
        double distance_m = 0.0;
        std::size_t expanded = 0;
        std::vector<CellIndex> vertices;
    };

    GridSearch(const GridSpec& spec, const std::vector<double>* cell_cost,
               const std::vector<std::uint8_t>* occupied)
        : spec_(spec), cell_cost_(cell_cost), occupied_(occupied), table_(spec) {
        for (std::size_t s = 0; s < kNeighborOffsets.size(); ++s) {
            const auto& o = kNeighborOffsets[s];
            const double dx = o[0] * spec_.unit_x, dy = o[1] * spec_.unit_y, dz = o[2] * spec_.unit_z;
            step_len_[s] = std::sqrt(dx * dx + dy * dy + dz * dz);
            step_scale_ = std::max(step_scale_, step_len_[s]);
        }
        g_.resize(spec_.size());
        parent_.resize(spec_.size());
    }

    // mask: optional per-cell openness (0 = treat as blocked). heur:
    // optional heuristic; null or zero factor with an empty track is plain
    // Dijkstra.
    Result run(const CellIndex& origin, const CellIndex& destination, const HeuristicInfo* heur,
               const std::vector<std::uint8_t>* mask) {
        if (!spec_.in_bounds(origin) || !spec_.in_bounds(destination))
            throw OutOfBounds("search: origin or destination outside the grid");
        const std::size_t o = spec_.flat(origin), d = spec_.flat(destination);
        if (occupied_ && ((*occupied_)[o] || (*occupied_)[d]))
            throw OccupiedEndpoint("search: origin or destination is occupied");

        Result res;
        if (mask && (!(*mask)[o] || !(*mask)[d])) return res;  // endpoints outside the region
        if (o == d) {
            res.found = true;
            res.vertices = {origin};
            return res;
        }

        const bool use_heur = heur && heur->heuristic_factor > 0.0;
        if (use_heur) prepare_heuristic(*heur, destination);

        std::fill(g_.begin(), g_.end(), kInfiniteCost);
        std::fill(parent_.begin(), parent_.end(), -1);
        std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
        std::uint64_t seq = 0;

        g_[o] = 0.0;
        open.push(Entry{use_heur ? estimate(*heur, o) : 0.0, 0.0, seq++, static_cast<std::uint32_t>(o)});

        while (!open.empty()) {
            const Entry cur = open.top();
            open.pop();
            const std::size_t u = cur.node;
            if (cur.g > g_[u]) continue;  // stale entry
            ++res.expanded;
            if (u == d) break;
            const std::uint32_t end = table_.begin[u + 1];
            for (std::uint32_t e = table_.begin[u]; e < end; ++e) {
                const std::size_t t = table_.target[e];
                if (occupied_ && (*occupied_)[t]) continue;
                if (mask && !(*mask)[t]) continue;
                const double w = cell_cost_ ? (*cell_cost_)[t] : step_len_[table_.slot[e]];
                const double ng = g_[u] + w;
                if (ng < g_[t]) {
                    g_[t] = ng;
                    parent_[t] = static_cast<std::int64_t>(u);
                    open.push(Entry{use_heur ? ng + estimate(*heur, t) : ng, ng, seq++,
                                    static_cast<std::uint32_t>(t)});
                }
            }
        }

        if (parent_[d] < 0) return res;
        res.found = true;
        res.cost = g_[d];
        std::vector<std::size_t> chain;
        for (std::size_t v = d; v != o; v = static_cast<std::size_t>(parent_[v])) {
            chain.push_back(v);
            if (chain.size() > spec_.size()) throw Error("search: parent chain is corrupt");
        }
        chain.push_back(o);
        res.vertices.reserve(chain.size());
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) res.vertices.push_back(spec_.unflat(*it));
        for (std::size_t i = 1; i < res.vertices.size(); ++i)
            res.distance_m += distance_m(spec_.cell_center(res.vertices[i - 1]), spec_.cell_center(res.vertices[i]));
        return res;
    }

private:
    struct Entry {
        double f;
        double g;
        std::uint64_t seq;
        std::uint32_t node;
        friend bool operator>(const Entry& a, const Entry& b) {
            if (a.f != b.f) return a.f > b.f;
            return a.seq > b.seq;
        }
    };

    void prepare_heuristic(const HeuristicInfo& heur, const CellIndex& destination) {
        dest_center_ = spec_.cell_center(destination);
        factor_per_m_ = heur.heuristic_factor / step_scale_;
        track_suffix_len_.clear();
        const auto& track = heur.centroid_track;
        if (track.size() >= 2) {
            track_suffix_len_.assign(track.size(), 0.0);
            for (std::size_t i = track.size() - 1; i-- > 0;)
                track_suffix_len_[i] = track_suffix_len_[i + 1] + distance_m(track[i], track[i + 1]);
        }
    }

    // factor * straight-line distance in cell-step units, or the
    // remaining-track estimate for nodes whose track detour exceeds the
    // tolerance.
    double estimate(const HeuristicInfo& heur, std::size_t node) const {
        const Vec3 p = spec_.cell_center(spec_.unflat(node));
        const double h_dest = factor_per_m_ * distance_m(p, dest_center_);
        if (track_suffix_len_.empty()) return h_dest;
        const auto& track = heur.centroid_track;
        double best = kInfiniteCost;
        for (std::size_t i = 0; i < track.size(); ++i)
            best = std::min(best, distance_m(p, track[i]) + track_suffix_len_[i]);
        const double h_track = factor_per_m_ * best;
        const double deviation = (h_track - h_dest) / std::max(h_dest, 1e-9);
        if (deviation < heur.deviation_tolerance) return h_dest;
        return heur.prune_on_deviation ? kInfiniteCost : h_track;
    }

    GridSpec spec_;
    const std::vector<double>* cell_cost_;
    const std::vector<std::uint8_t>* occupied_;
    NeighborTable table_;
    double step_len_[26] = {};
    double step_scale_ = 0.0;  // longest single-move length, the cell-step unit
    std::vector<double> g_;
    std::vector<std::int64_t> parent_;
    Vec3 dest_center_{};
    double factor_per_m_ = 0.0;
    std::vector<double> track_suffix_len_;
};

inline FlightPath to_flight_path(const GridSearch::Result& res) {
    FlightPath p;
    p.vertices = res.vertices;
    p.total_risk_cost = res.cost;
    p.distance_m = res.distance_m;
    p.expanded_nodes = res.expanded;
    return p;
}

}  // namespace detail

inline void validate_heuristic_info(const HeuristicInfo& heur, const GridSpec& spec,
                                    const CellIndex& origin, const CellIndex& destination) {
    if (!(heur.heuristic_factor >= 0) || !std::isfinite(heur.heuristic_factor))
        throw InvalidConfig("HeuristicInfo: factor must be finite and non-negative");
    if (!(heur.deviation_tolerance >= 0))
        throw InvalidConfig("HeuristicInfo: deviation tolerance must be non-negative");
    if (heur.centroid_track.empty()) return;
    if (heur.centroid_track.size() < 2)
        throw InvalidConfig("HeuristicInfo: a track needs at least origin and destination points");
    for (const auto& p : heur.centroid_track)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw InvalidConfig("HeuristicInfo: track point is not finite");
    const Vec3 front = heur.centroid_track.front(), back = heur.centroid_track.back();
    if (distance_m(front, spec.cell_center(origin)) > 1e-6 ||
        distance_m(back, spec.cell_center(destination)) > 1e-6)
        throw InvalidConfig("HeuristicInfo: track must start at the origin center and end at the destination center");
}

// Exact minimum-risk-cost path. Deterministic for identical inputs.
inline FlightPath dijkstra_risk(const RiskMap& map, const CellIndex& origin, const CellIndex& destination) {
    detail::GridSearch search(map.spec, &map.total, &map.occupancy.occupied);
    const auto res = search.run(origin, destination, nullptr, nullptr);
    if (!res.found) throw NoPath("dijkstra_risk: destination unreachable");
    return detail::to_flight_path(res);
}

// Exact minimum-metric-distance path among obstacle-free 26-neighbor
// moves. total_risk_cost is left NaN; evaluate the result on a map with
// path_cost when a risk comparison is needed.
inline FlightPath dijkstra_distance(const GridSpec& spec, const OccupancyGrid& occupancy,
                                    const CellIndex& origin, const CellIndex& destination) {
    if (occupancy.spec != spec) throw DimensionMismatch("dijkstra_distance: occupancy grid mismatch");
    detail::GridSearch search(spec, nullptr, &occupancy.occupied);
    const auto res = search.run(origin, destination, nullptr, nullptr);
    if (!res.found) throw NoPath("dijkstra_distance: destination unreachable");
    FlightPath p = detail::to_flight_path(res);
    p.total_risk_cost = std::numeric_limits<double>::quiet_NaN();
    return p;
}

// Heuristic risk search. With factor 0 and no track it runs the exact
// same expansions as dijkstra_risk; with an admissible factor it stays
// optimal; stronger factors trade cost for speed.
inline FlightPath risk_a_star(const RiskMap& map, const CellIndex& origin, const CellIndex& destination,
                              const HeuristicInfo& heur) {
    validate_heuristic_info(heur, map.spec, origin, destination);
    detail::GridSearch search(map.spec, &map.total, &map.occupancy.occupied);
    const auto res = search.run(origin, destination, &heur, nullptr);
    if (!res.found) throw NoPath("risk_a_star: destination unreachable");
    return detail::to_flight_path(res);
}

}  // namespace riskplan
