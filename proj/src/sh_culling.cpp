#include "rgs/sh_culling.hpp"

#include <cmath>
#include <sstream>

#include "rgs/error.hpp"
#include "rgs/parallel.hpp"
#include "rgs/sh.hpp"

namespace rgs {

namespace {

void check_stats(const Scene& scene, const std::vector<CameraView>& views,
                 const TransmittanceStats& stats) {
    if (stats.primitive_count() != scene.primitives.size() || stats.view_count() != views.size())
        throw ValueError("transmittance statistics do not match the scene");
}

Vec3 view_direction(const GaussianPrimitive& prim, const CameraView& view) {
    const Vec3 d = prim.position - view.camera_center();
    const float n = d.norm();
    return n > 0 ? Vec3(d / n) : Vec3(0, 0, 1);
}

} // namespace

const char* band_rule_name(BandRule rule) {
    switch (rule) {
    case BandRule::Variance: return "variance";
    case BandRule::Distance: return "distance";
    case BandRule::Keep: return "keep";
    case BandRule::Unobserved: return "unobserved";
    }
    return "?";
}

ColorStatsResult color_statistics(const Scene& scene, const std::vector<CameraView>& views,
                                  const TransmittanceStats& stats, bool sigma_as_variance) {
    check_stats(scene, views, stats);
    const std::size_t n = scene.primitives.size();
    ColorStatsResult result;
    result.mean.assign(n, Vec3::Zero());
    result.sigma.assign(n, Vec3::Zero());
    result.observed.assign(n, 0);

    parallel_for(n, [&](std::size_t i) {
        const GaussianPrimitive& prim = scene.primitives[i];
        Eigen::Vector3d weighted_sum = Eigen::Vector3d::Zero();
        Eigen::Vector3d plain_sum = Eigen::Vector3d::Zero();
        double weight_sum = 0.0;

        std::vector<Vec3> colors(views.size());
        for (std::size_t v = 0; v < views.size(); ++v) {
            colors[v] = eval_sh_color(prim, view_direction(prim, views[v]), prim.band_count);
            plain_sum += colors[v].cast<double>();
            if (stats.pixel_count(v, i) == 0)
                continue;
            const double w = stats.mean_transmittance(v, i);
            weighted_sum += w * colors[v].cast<double>();
            weight_sum += w;
        }

        if (weight_sum <= 0.0) {
            // no coverage: unweighted mean, zero deviation, flagged
            result.mean[i] = views.empty()
                                 ? Vec3(Vec3::Constant(0.5f) + kShC0 * prim.base_color)
                                 : Vec3((plain_sum / static_cast<double>(views.size())).cast<float>());
            return;
        }

        const Eigen::Vector3d mu = weighted_sum / weight_sum;
        Eigen::Vector3d var = Eigen::Vector3d::Zero();
        for (std::size_t v = 0; v < views.size(); ++v) {
            if (stats.pixel_count(v, i) == 0)
                continue;
            const double w = stats.mean_transmittance(v, i);
            const Eigen::Vector3d d = colors[v].cast<double>() - mu;
            var += w * d.cwiseProduct(d);
        }
        var /= weight_sum;

        result.mean[i] = mu.cast<float>();
        result.sigma[i] =
            sigma_as_variance ? Vec3(var.cast<float>()) : Vec3(var.cwiseSqrt().cast<float>());
        result.observed[i] = 1;
    });
    return result;
}

std::vector<std::array<float, 3>> band_distances(const Scene& scene,
                                                 const std::vector<CameraView>& views,
                                                 const TransmittanceStats& stats) {
    check_stats(scene, views, stats);
    const std::size_t n = scene.primitives.size();
    std::vector<std::array<float, 3>> result(n, {0.0f, 0.0f, 0.0f});

    parallel_for(n, [&](std::size_t i) {
        const GaussianPrimitive& prim = scene.primitives[i];
        double dist_sum[3] = {0, 0, 0};
        double weight_sum = 0.0;
        for (std::size_t v = 0; v < views.size(); ++v) {
            if (stats.pixel_count(v, i) == 0)
                continue;
            const double w = stats.mean_transmittance(v, i);
            const auto colors = eval_sh_color_progressive(prim, view_direction(prim, views[v]));
            for (int q = 0; q < 3; ++q)
                dist_sum[q] += w * (colors[3] - colors[static_cast<std::size_t>(q)]).norm();
            weight_sum += w;
        }
        if (weight_sum > 0.0)
            for (int q = 0; q < 3; ++q)
                result[i][static_cast<std::size_t>(q)] = static_cast<float>(dist_sum[q] / weight_sum);
    });
    return result;
}

BandAssignment assign_bands(const ColorStatsResult& stats,
                            const std::vector<std::array<float, 3>>& distances,
                            const ShThresholds& thresholds) {
    if (stats.mean.size() != distances.size())
        throw ValueError("statistics and distances disagree on the primitive count");
    BandAssignment assignment;
    assignment.entries.resize(stats.mean.size());

    for (std::size_t i = 0; i < stats.mean.size(); ++i) {
        auto& e = assignment.entries[i];
        e.mean_color = stats.mean[i];
        e.sigma_color = stats.sigma[i];
        e.distance = distances[i];
        e.observed = stats.observed[i];

        if (!stats.observed[i]) {
            e.band = 0;
            e.rule = BandRule::Unobserved;
            continue;
        }
        if (stats.sigma[i].maxCoeff() < thresholds.eps_sigma) {
            e.band = 0;
            e.rule = BandRule::Variance;
            continue;
        }
        e.band = 3;
        e.rule = BandRule::Keep;
        for (int q = 0; q < 3; ++q) {
            if (distances[i][static_cast<std::size_t>(q)] < thresholds.eps_cdist) {
                e.band = static_cast<std::uint8_t>(q);
                e.rule = BandRule::Distance;
                break;
            }
        }
    }
    return assignment;
}

namespace {

std::pair<BandAssignment, ShCullSummary> apply_assignment(Scene& scene,
                                                          BandAssignment assignment) {
    ShCullSummary summary;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        GaussianPrimitive& prim = scene.primitives[i];
        const auto& e = assignment.entries[i];
        summary.sh_floats_before += 3 + static_cast<std::uint64_t>(sh_rest_size(prim.band_count));

        const int target = std::min<int>(e.band, prim.band_count);
        if ((e.rule == BandRule::Variance || e.rule == BandRule::Unobserved)) {
            // replace the DC term so the constant evaluation equals mu_c
            prim.base_color = (e.mean_color - Vec3::Constant(0.5f)) / kShC0;
        }
        prim.sh_rest.resize(static_cast<std::size_t>(sh_rest_size(target)));
        prim.band_count = target;

        summary.sh_floats_after += 3 + static_cast<std::uint64_t>(sh_rest_size(target));
        ++summary.band_histogram[static_cast<std::size_t>(target)];
    }
    return {std::move(assignment), summary};
}

} // namespace

std::pair<BandAssignment, ShCullSummary> cull_sh(Scene& scene, const TransmittanceStats& stats,
                                                 const ShThresholds& thresholds) {
    const auto colors = color_statistics(scene, scene.views, stats, thresholds.sigma_as_variance);
    const auto distances = band_distances(scene, scene.views, stats);
    return apply_assignment(scene, assign_bands(colors, distances, thresholds));
}

std::pair<BandAssignment, ShCullSummary> cull_sh(Scene& scene, const ShThresholds& thresholds,
                                                 const TransmittanceStatsOptions& stats_options) {
    const TransmittanceStats stats = transmittance_stats(scene, scene.views, stats_options);
    return cull_sh(scene, stats, thresholds);
}

std::string BandAssignment::to_csv() const {
    std::ostringstream out;
    out << "id,band,rule,sigma_r,sigma_g,sigma_b,d0,d1,d2,mu_r,mu_g,mu_b,observed\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Entry& e = entries[i];
        out << i << ',' << int(e.band) << ',' << band_rule_name(e.rule) << ',' << e.sigma_color[0]
            << ',' << e.sigma_color[1] << ',' << e.sigma_color[2] << ',' << e.distance[0] << ','
            << e.distance[1] << ',' << e.distance[2] << ',' << e.mean_color[0] << ','
            << e.mean_color[1] << ',' << e.mean_color[2] << ',' << int(e.observed) << '\n';
    }
    return out.str();
}

} // namespace rgs
