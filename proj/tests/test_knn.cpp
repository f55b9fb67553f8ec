#include <doctest.h>

#include <random>

#include "rgs/knn.hpp"
#include "test_util.hpp"

using namespace rgs;

namespace {

// straightforward exact k-NN with the same (distance, index) tie rule
std::vector<std::uint32_t> brute_force_knn(const std::vector<Vec3>& pts, std::uint32_t query,
                                           int k) {
    std::vector<std::pair<float, std::uint32_t>> all;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        if (i == query)
            continue;
        all.emplace_back((pts[i] - pts[query]).squaredNorm(), i);
    }
    std::sort(all.begin(), all.end());
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < all.size() && static_cast<int>(i) < k; ++i)
        out.push_back(all[i].second);
    return out;
}

} // namespace

TEST_CASE("knn: exact against brute force over random point sets") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<float> unit(-3.0f, 3.0f);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 150);
        std::vector<Vec3> pts(n);
        for (auto& p : pts)
            p = Vec3(unit(rng), unit(rng), unit(rng));
        // duplicated points exercise tie-breaking
        if (n > 4) {
            pts[1] = pts[0];
            pts[3] = pts[2];
        }
        for (float cell : {0.05f, 0.4f, 2.0f, 50.0f}) {
            const SpatialHashGrid grid(pts, cell);
            std::vector<std::uint32_t> got;
            for (std::uint32_t q = 0; q < n; ++q) {
                const int k = 1 + static_cast<int>(rng() % 40);
                grid.k_nearest(q, k, got);
                CHECK(got == brute_force_knn(pts, q, k));
            }
        }
    }
}

TEST_CASE("knn: k clamped to population minus one") {
    std::vector<Vec3> pts{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
    const SpatialHashGrid grid(pts, 1.0f);
    std::vector<std::uint32_t> got;
    grid.k_nearest(0, 30, got);
    CHECK(got == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("knn: single point yields no neighbors") {
    std::vector<Vec3> pts{Vec3(1, 2, 3)};
    const SpatialHashGrid grid(pts, 1.0f);
    std::vector<std::uint32_t> got;
    grid.k_nearest(0, 5, got);
    CHECK(got.empty());
}
