#include "rgs/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rgs/error.hpp"

namespace rgs {

SpatialHashGrid::SpatialHashGrid(std::span<const Vec3> points, float cell_size)
    : points_(points), cell_(cell_size) {
    if (!(cell_ > 0.0f) || !std::isfinite(cell_))
        throw ValueError("spatial hash grid needs a positive finite cell size");
    bool first = true;
    for (std::uint32_t i = 0; i < points_.size(); ++i) {
        const CellKey key = cell_of(points_[i]);
        cells_[key].push_back(i);
        if (first) {
            min_cell_ = max_cell_ = key;
            first = false;
        } else {
            min_cell_ = {std::min(min_cell_.x, key.x), std::min(min_cell_.y, key.y),
                         std::min(min_cell_.z, key.z)};
            max_cell_ = {std::max(max_cell_.x, key.x), std::max(max_cell_.y, key.y),
                         std::max(max_cell_.z, key.z)};
        }
    }
}

SpatialHashGrid::CellKey SpatialHashGrid::cell_of(const Vec3& p) const {
    return {static_cast<std::int32_t>(std::floor(p[0] / cell_)),
            static_cast<std::int32_t>(std::floor(p[1] / cell_)),
            static_cast<std::int32_t>(std::floor(p[2] / cell_))};
}

void SpatialHashGrid::k_nearest(std::uint32_t query, int k, std::vector<std::uint32_t>& out) const {
    out.clear();
    const std::size_t n = points_.size();
    if (n <= 1 || k <= 0)
        return;
    const int want = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), n - 1));

    const Vec3 q = points_[query];
    const CellKey center = cell_of(q);

    using Entry = std::pair<float, std::uint32_t>; // (squared distance, index)
    std::vector<Entry> best; // max-heap on (d2, index)
    best.reserve(static_cast<std::size_t>(want) + 1);
    auto cmp = [](const Entry& a, const Entry& b) { return a < b; };

    auto consider = [&](std::uint32_t idx) {
        if (idx == query)
            return;
        const float d2 = (points_[idx] - q).squaredNorm();
        const Entry e{d2, idx};
        if (static_cast<int>(best.size()) < want) {
            best.push_back(e);
            std::push_heap(best.begin(), best.end(), cmp);
        } else if (e < best.front()) {
            std::pop_heap(best.begin(), best.end(), cmp);
            best.back() = e;
            std::push_heap(best.begin(), best.end(), cmp);
        }
    };

    auto scan_cell = [&](std::int32_t x, std::int32_t y, std::int32_t z) {
        const auto it = cells_.find(CellKey{x, y, z});
        if (it == cells_.end())
            return;
        for (std::uint32_t idx : it->second)
            consider(idx);
    };

    const int max_ring =
        std::max({center.x - min_cell_.x, max_cell_.x - center.x, center.y - min_cell_.y,
                  max_cell_.y - center.y, center.z - min_cell_.z, max_cell_.z - center.z});

    for (int ring = 0; ring <= max_ring; ++ring) {
        if (ring == 0) {
            scan_cell(center.x, center.y, center.z);
        } else {
            // shell of cells at Chebyshev distance `ring`
            for (std::int32_t dz = -ring; dz <= ring; ++dz) {
                for (std::int32_t dy = -ring; dy <= ring; ++dy) {
                    if (std::abs(dz) == ring || std::abs(dy) == ring) {
                        for (std::int32_t dx = -ring; dx <= ring; ++dx)
                            scan_cell(center.x + dx, center.y + dy, center.z + dz);
                    } else {
                        scan_cell(center.x - ring, center.y + dy, center.z + dz);
                        scan_cell(center.x + ring, center.y + dy, center.z + dz);
                    }
                }
            }
        }
        // Any point in ring r+1 lies at least r * cell away from the query.
        if (static_cast<int>(best.size()) == want) {
            const float safe = static_cast<float>(ring) * cell_;
            if (best.front().first <= safe * safe)
                break;
        }
    }

    std::sort(best.begin(), best.end());
    out.resize(best.size());
    for (std::size_t i = 0; i < best.size(); ++i)
        out[i] = best[i].second;
}

} // namespace rgs
