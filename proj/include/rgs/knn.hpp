#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "rgs/types.hpp"

namespace rgs {

// Uniform spatial hash grid over 3D points. k_nearest performs exact k-NN by
// ring expansion: rings of cells are scanned outward until the current k-th
// best distance proves no closer point can remain unvisited. Ties are broken
// by point index, so results are deterministic.
class SpatialHashGrid {
public:
    SpatialHashGrid(std::span<const Vec3> points, float cell_size);

    // The k nearest points to points[query], excluding the query itself,
    // ordered by (distance, index). Returns min(k, n - 1) ids.
    void k_nearest(std::uint32_t query, int k, std::vector<std::uint32_t>& out) const;

    float cell_size() const { return cell_; }

private:
    struct CellKey {
        std::int32_t x, y, z;
        bool operator==(const CellKey&) const = default;
    };
    struct CellHash {
        std::size_t operator()(const CellKey& c) const {
            return static_cast<std::size_t>(c.x) * 73856093u ^
                   static_cast<std::size_t>(c.y) * 19349663u ^
                   static_cast<std::size_t>(c.z) * 83492791u;
        }
    };

    CellKey cell_of(const Vec3& p) const;

    std::span<const Vec3> points_;
    float cell_ = 1.0f;
    std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
    CellKey min_cell_{0, 0, 0}, max_cell_{0, 0, 0};
};

} // namespace rgs
