#include "rgs/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rgs/error.hpp"
#include "rgs/knn.hpp"
#include "rgs/parallel.hpp"

namespace rgs {

namespace {

constexpr float kAlwaysCullOpacity = 1.0f / 255.0f;

// Cell size for the candidate grid. The median footprint is the natural scale
// but is clamped around the mean point spacing so queries stay fast on rigs
// whose footprints are far from the point density. The k-NN result itself is
// exact for any cell size.
float candidate_cell_size(const Scene& scene, const FootprintTable& fp) {
    std::vector<float> mins;
    mins.reserve(fp.a_min.size());
    for (std::size_t i = 0; i < fp.a_min.size(); ++i)
        if (fp.visible_view_count[i] > 0)
            mins.push_back(fp.a_min[i]);

    Vec3 lo = Vec3::Constant(std::numeric_limits<float>::max());
    Vec3 hi = Vec3::Constant(std::numeric_limits<float>::lowest());
    for (const auto& g : scene.primitives) {
        lo = lo.cwiseMin(g.position);
        hi = hi.cwiseMax(g.position);
    }
    const Vec3 extent = (hi - lo).cwiseMax(1e-6f);
    const float spacing = std::cbrt(extent[0] * extent[1] * extent[2] /
                                    static_cast<float>(std::max<std::size_t>(scene.primitives.size(), 1)));

    if (mins.empty())
        return std::max(spacing, 1e-6f);
    std::nth_element(mins.begin(), mins.begin() + static_cast<std::ptrdiff_t>(mins.size() / 2),
                     mins.end());
    const float median = mins[mins.size() / 2];
    return std::clamp(median, 0.25f * spacing, 4.0f * spacing);
}

// Approximate sphere-ellipsoid intersection: the candidate ellipsoid axes are
// grown by the sphere radius and the region center is tested against it.
bool region_test(const Vec3& region_center, float region_radius, const Vec3& candidate_center,
                 const Mat3& candidate_rot, const Vec3& candidate_scale) {
    const Vec3 local = candidate_rot.transpose() * (region_center - candidate_center);
    float sum = 0.0f;
    for (int d = 0; d < 3; ++d) {
        const float axis = candidate_scale[d] + region_radius;
        const float r = local[d] / axis;
        sum += r * r;
    }
    return sum <= 1.0f;
}

std::vector<std::uint32_t> sorted_unique(std::vector<std::uint32_t> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace

FootprintTable compute_footprints(const Scene& scene, float near_plane) {
    if (scene.views.empty())
        throw ValueError("footprints need at least one view");
    const std::size_t n = scene.primitives.size();
    FootprintTable table;
    table.a_min.assign(n, 0.0f);
    table.visible_view_count.assign(n, 0);

    parallel_for(n, [&](std::size_t i) {
        const Vec3 p = scene.primitives[i].position;
        float best = std::numeric_limits<float>::max();
        std::uint32_t count = 0;
        for (const CameraView& view : scene.views) {
            const Vec3 t = view.rotation * p + view.translation;
            if (t[2] <= near_plane)
                continue;
            const float px = view.focal_x * t[0] / t[2] + view.principal_x;
            const float py = view.focal_y * t[1] / t[2] + view.principal_y;
            if (px < 0 || px > static_cast<float>(view.width) || py < 0 ||
                py > static_cast<float>(view.height))
                continue;
            const float side = t[2] * std::max(1.0f / view.focal_x, 1.0f / view.focal_y);
            best = std::min(best, side);
            ++count;
        }
        if (count > 0)
            table.a_min[i] = best;
        table.visible_view_count[i] = count;
    });
    return table;
}

float sphere_radius(float a_min, bool a_min_is_area) {
    if (!(a_min > 0.0f))
        throw ValueError("sphere_radius needs a positive footprint");
    const float side = a_min_is_area ? std::sqrt(a_min) : a_min;
    return side * std::sqrt(3.0f) * 0.5f;
}

RedundancyReport redundancy_scores(const Scene& scene, const FootprintTable& footprints,
                                   const RedundancyConfig& config) {
    const std::size_t n = scene.primitives.size();
    RedundancyReport report;
    report.region_count.assign(n, 0);
    report.final_score.assign(n, 0);
    report.visible.assign(n, 0);
    report.candidate.assign(n, 0);
    report.culled.assign(n, 0);
    if (n == 0)
        return report;

    for (std::size_t i = 0; i < n; ++i)
        report.visible[i] = footprints.visible_view_count[i] > 0 ? 1 : 0;

    std::vector<Vec3> centers(n);
    std::vector<Mat3> rotations(n);
    for (std::size_t i = 0; i < n; ++i) {
        centers[i] = scene.primitives[i].position;
        rotations[i] = quaternion_to_matrix(scene.primitives[i].rotation);
    }

    const SpatialHashGrid grid(centers, candidate_cell_size(scene, footprints));

    // pass lists: for each region i, the candidate ids that intersect it
    std::vector<std::vector<std::uint32_t>> passed(n);
    parallel_for(n, [&](std::size_t i) {
        if (!report.visible[i])
            return;
        const float radius = sphere_radius(footprints.a_min[i], config.a_min_is_area);

        std::vector<std::uint32_t> neighbors;
        grid.k_nearest(static_cast<std::uint32_t>(i), config.neighbor_count, neighbors);

        auto& pass = passed[i];
        pass.push_back(static_cast<std::uint32_t>(i)); // the region's own primitive
        for (std::uint32_t j : neighbors) {
            if (region_test(centers[i], radius, centers[j], rotations[j],
                            scene.primitives[j].scale))
                pass.push_back(j);
        }
        report.region_count[i] = static_cast<std::uint32_t>(pass.size());
    });

    std::vector<std::uint32_t> score(n, std::numeric_limits<std::uint32_t>::max());
    for (std::size_t i = 0; i < n; ++i) {
        if (!report.visible[i])
            continue;
        for (std::uint32_t j : passed[i])
            score[j] = std::min(score[j], report.region_count[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
        report.final_score[i] = score[i] == std::numeric_limits<std::uint32_t>::max() ? 0 : score[i];
    return report;
}

std::vector<std::uint32_t> redundancy_cull(const Scene& scene, RedundancyReport& report,
                                           const RedundancyConfig& config) {
    const std::size_t n = scene.primitives.size();
    report.candidate.assign(n, 0);
    report.culled.assign(n, 0);

    double sum = 0.0, sum_sq = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (report.final_score[i] == 0)
            continue;
        const double s = report.final_score[i];
        sum += s;
        sum_sq += s * s;
        ++valid;
    }
    if (valid == 0) {
        report.mean = report.stddev = 0;
        report.tau_p = config.score_floor;
        return {};
    }
    report.mean = sum / static_cast<double>(valid);
    const double var = std::max(0.0, sum_sq / static_cast<double>(valid) - report.mean * report.mean);
    report.stddev = std::sqrt(var);
    report.tau_p = std::max(report.mean + config.lambda_r * report.stddev,
                            static_cast<double>(config.score_floor));

    std::vector<std::uint32_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        if (report.visible[i] && report.final_score[i] > 0 &&
            static_cast<double>(report.final_score[i]) > report.tau_p) {
            report.candidate[i] = 1;
            candidates.push_back(static_cast<std::uint32_t>(i));
        }
    }

    std::sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
        const float oa = scene.primitives[a].opacity, ob = scene.primitives[b].opacity;
        return oa != ob ? oa < ob : a < b;
    });
    const std::size_t cull_count =
        static_cast<std::size_t>(static_cast<double>(candidates.size()) * config.cull_fraction);
    std::vector<std::uint32_t> culled(candidates.begin(),
                                      candidates.begin() + static_cast<std::ptrdiff_t>(cull_count));
    for (std::uint32_t id : culled)
        report.culled[id] = 1;
    std::sort(culled.begin(), culled.end());
    return culled;
}

std::vector<std::uint32_t> opacity_cull(const Scene& scene, float fraction, float cap) {
    const std::size_t n = scene.primitives.size();
    std::vector<std::uint32_t> ids;

    std::vector<std::uint32_t> eligible;
    for (std::size_t i = 0; i < n; ++i) {
        const float op = scene.primitives[i].opacity;
        if (op < kAlwaysCullOpacity)
            ids.push_back(static_cast<std::uint32_t>(i));
        if (op <= cap)
            eligible.push_back(static_cast<std::uint32_t>(i));
    }
    std::sort(eligible.begin(), eligible.end(), [&](std::uint32_t a, std::uint32_t b) {
        const float oa = scene.primitives[a].opacity, ob = scene.primitives[b].opacity;
        return oa != ob ? oa < ob : a < b;
    });
    const std::size_t budget =
        std::min(eligible.size(), static_cast<std::size_t>(static_cast<double>(n) * fraction));
    ids.insert(ids.end(), eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(budget));
    return sorted_unique(std::move(ids));
}

std::pair<Scene, PruneSummary> prune_pass(const Scene& scene, const PruneConfig& config) {
    PruneSummary summary;
    summary.input_count = static_cast<std::uint32_t>(scene.primitives.size());

    std::vector<std::uint32_t> by_opacity;
    if (config.enable_opacity)
        by_opacity = opacity_cull(scene, config.opacity_fraction, config.opacity_cap);

    std::vector<std::uint32_t> by_redundancy;
    if (config.enable_redundancy && !scene.primitives.empty() && !scene.views.empty()) {
        const FootprintTable fp = compute_footprints(scene, config.redundancy.near_plane);
        RedundancyReport report = redundancy_scores(scene, fp, config.redundancy);
        by_redundancy = redundancy_cull(scene, report, config.redundancy);

        summary.mean = report.mean;
        summary.stddev = report.stddev;
        summary.tau_p = report.tau_p;
        for (std::uint8_t c : report.candidate)
            summary.candidates += c;
        constexpr std::size_t kHistBins = 65;
        summary.score_histogram.assign(kHistBins, 0);
        for (std::uint32_t s : report.final_score)
            ++summary.score_histogram[std::min<std::size_t>(s, kHistBins - 1)];
    }

    summary.removed_opacity = static_cast<std::uint32_t>(by_opacity.size());
    summary.removed_redundancy = static_cast<std::uint32_t>(by_redundancy.size());

    std::vector<std::uint32_t> unionized = by_opacity;
    unionized.insert(unionized.end(), by_redundancy.begin(), by_redundancy.end());
    unionized = sorted_unique(std::move(unionized));
    summary.removed_total = static_cast<std::uint32_t>(unionized.size());
    summary.overlap = summary.removed_opacity + summary.removed_redundancy - summary.removed_total;

    Scene out;
    out.views = scene.views;
    out.primitives.reserve(scene.primitives.size() - unionized.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        if (next < unionized.size() && unionized[next] == i) {
            ++next;
            continue;
        }
        out.primitives.push_back(scene.primitives[i]);
    }
    return {std::move(out), std::move(summary)};
}

} // namespace rgs
