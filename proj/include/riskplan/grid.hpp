#pragma once

// Discretized 3D airspace over an urban area. Cells are axis-aligned
// boxes, indexed 0-based with x fastest in flat arrays; the neighborhood
// is the full 26-connected Moore shell. Occupancy is derived from
// building heights: a cell is blocked as soon as the building pokes into
// it, i.e. height > z * unit_z.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "riskplan/errors.hpp"

namespace riskplan {

struct CellIndex {
    int x = 0;
    int y = 0;
    int z = 0;
    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance_m(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct GridSpec {
    int nx = 0, ny = 0, nz = 0;                   // cell counts per axis
    double unit_x = 0.0, unit_y = 0.0, unit_z = 0.0;  // cell size in meters
    Vec3 ground_origin{};                         // world corner of cell (0,0,0)

    std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }

    std::size_t footprint_size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }

    bool in_bounds(const CellIndex& c) const {
        return c.x >= 0 && c.x < nx && c.y >= 0 && c.y < ny && c.z >= 0 && c.z < nz;
    }

    // Flat index, x fastest, then y, then z.
    std::size_t flat(const CellIndex& c) const {
        return static_cast<std::size_t>(c.x) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(c.y) + static_cast<std::size_t>(ny) * static_cast<std::size_t>(c.z));
    }

    CellIndex unflat(std::size_t i) const {
        const auto x = static_cast<int>(i % static_cast<std::size_t>(nx));
        i /= static_cast<std::size_t>(nx);
        const auto y = static_cast<int>(i % static_cast<std::size_t>(ny));
        const auto z = static_cast<int>(i / static_cast<std::size_t>(ny));
        return {x, y, z};
    }

    Vec3 cell_center(const CellIndex& c) const {
        return {ground_origin.x + (c.x + 0.5) * unit_x,
                ground_origin.y + (c.y + 0.5) * unit_y,
                ground_origin.z + (c.z + 0.5) * unit_z};
    }

    // Center of a cell's ground footprint, at ground level.
    Vec3 ground_center(int x, int y) const {
        return {ground_origin.x + (x + 0.5) * unit_x, ground_origin.y + (y + 0.5) * unit_y,
                ground_origin.z};
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Builds a grid covering extent_m with cells of unit_m. Extents must be
// integer multiples of the unit (1e-9 relative tolerance on the quotient).
inline GridSpec build_grid(const Vec3& extent_m, const Vec3& unit_m, const Vec3& ground_origin = {}) {
    const double extents[3] = {extent_m.x, extent_m.y, extent_m.z};
    const double units[3] = {unit_m.x, unit_m.y, unit_m.z};
    int counts[3] = {0, 0, 0};
    for (int a = 0; a < 3; ++a) {
        if (!(extents[a] > 0.0) || !(units[a] > 0.0))
            throw NonPositiveDimension("build_grid: extents and units must be positive");
        const double q = extents[a] / units[a];
        const double r = std::round(q);
        if (r < 1.0 || std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q)))
            throw NonDivisibleExtent("build_grid: extent is not an integer multiple of the unit");
        counts[a] = static_cast<int>(r);
    }
    GridSpec spec;
    spec.nx = counts[0];
    spec.ny = counts[1];
    spec.nz = counts[2];
    spec.unit_x = units[0];
    spec.unit_y = units[1];
    spec.unit_z = units[2];
    spec.ground_origin = ground_origin;
    return spec;
}

// The 26 neighbor offsets in a fixed order (dx outermost, each offset
// ascending). Planners rely on this order for deterministic tie-breaking.
inline constexpr std::array<std::array<int, 3>, 26> kNeighborOffsets = [] {
    std::array<std::array<int, 3>, 26> out{};
    int n = 0;
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                out[static_cast<std::size_t>(n++)] = {dx, dy, dz};
            }
    return out;
}();

// In-bounds Moore neighbors of c, in enumeration order.
inline std::vector<CellIndex> neighbors(const GridSpec& spec, const CellIndex& c) {
    if (!spec.in_bounds(c)) throw OutOfBounds("neighbors: cell outside the grid");
    std::vector<CellIndex> out;
    out.reserve(26);
    for (const auto& o : kNeighborOffsets) {
        const CellIndex n{c.x + o[0], c.y + o[1], c.z + o[2]};
        if (spec.in_bounds(n)) out.push_back(n);
    }
    return out;
}

// Representative altitude of a layer: the top of the cell, so layer 0
// (the lowest flight layer) sits at unit_z meters above ground.
inline double layer_altitude(const GridSpec& spec, int z) {
    if (z < 0 || z >= spec.nz) throw OutOfBounds("layer_altitude: layer index outside the grid");
    return spec.ground_origin.z + (z + 1) * spec.unit_z;
}

struct OccupancyGrid {
    GridSpec spec;
    std::vector<std::uint8_t> occupied;  // flat, x fastest

    bool is_occupied(const CellIndex& c) const { return occupied[spec.flat(c)] != 0; }

    std::size_t count_occupied() const {
        std::size_t n = 0;
        for (const auto v : occupied) n += (v != 0);
        return n;
    }

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;
};

// Derives occupancy from per-footprint building heights (meters, x fastest,
// size nx*ny). Cell (x,y,z) is occupied iff height(x,y) > z * unit_z, so any
// positive height blocks the lowest layer.
inline OccupancyGrid mark_obstacles(const GridSpec& spec, const std::vector<double>& building_heights_m) {
    if (building_heights_m.size() != spec.footprint_size())
        throw DimensionMismatch("mark_obstacles: height field size does not match the grid footprint");
    OccupancyGrid grid;
    grid.spec = spec;
    grid.occupied.assign(spec.size(), 0);
    for (int z = 0; z < spec.nz; ++z) {
        const double floor_alt = z * spec.unit_z;
        for (int y = 0; y < spec.ny; ++y)
            for (int x = 0; x < spec.nx; ++x) {
                const double h = building_heights_m[static_cast<std::size_t>(x) +
                                                    static_cast<std::size_t>(spec.nx) * static_cast<std::size_t>(y)];
                if (h > floor_alt) grid.occupied[spec.flat({x, y, z})] = 1;
            }
    }
    return grid;
}

}  // namespace riskplan
