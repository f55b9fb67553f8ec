#include "rgs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rgs/error.hpp"
#include "rgs/sh.hpp"

namespace rgs {

namespace {

// Grid cell side in world units. Together with the camera distance and focal
// length below this keeps isolated splats' redundancy scores at or below the
// conservative floor while cluster members score well above it.
constexpr float kCellSide = 0.45f;
constexpr float kFocalPerPixel = 1.25f; // fx = 1.25 * width

CameraView ring_camera(float angle, float height, float radius, std::uint32_t width,
                       std::uint32_t height_px) {
    const Vec3 pos(radius * std::cos(angle), radius * std::sin(angle), height);
    const Vec3 forward = (-pos).normalized(); // toward the origin
    const Vec3 up_world(0, 0, 1);
    const Vec3 right = forward.cross(up_world).normalized();
    const Vec3 down = forward.cross(right).normalized();

    CameraView view;
    view.rotation.row(0) = right;
    view.rotation.row(1) = down;
    view.rotation.row(2) = forward;
    view.translation = -(view.rotation * pos);
    view.width = static_cast<int>(width);
    view.height = static_cast<int>(height_px);
    view.focal_x = view.focal_y = kFocalPerPixel * static_cast<float>(width);
    view.principal_x = 0.5f * static_cast<float>(width);
    view.principal_y = 0.5f * static_cast<float>(height_px);
    return view;
}

float site_a_min(const Vec3& p, const std::vector<CameraView>& views) {
    float best = std::numeric_limits<float>::max();
    for (const auto& v : views) {
        const Vec3 t = v.rotation * p + v.translation;
        if (t[2] <= 0.2f)
            continue;
        const float px = v.focal_x * t[0] / t[2] + v.principal_x;
        const float py = v.focal_y * t[1] / t[2] + v.principal_y;
        if (px < 0 || px > static_cast<float>(v.width) || py < 0 || py > static_cast<float>(v.height))
            continue;
        best = std::min(best, t[2] / v.focal_x);
    }
    return best == std::numeric_limits<float>::max() ? 0.2f : best;
}

} // namespace

SyntheticScene generate_synthetic(const SynthSpec& spec) {
    if (spec.primitive_count == 0)
        throw ValueError("synthetic scene needs at least one primitive");
    if (spec.camera_count == 0)
        throw ValueError("synthetic scene needs at least one camera");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);

    const std::uint32_t total = spec.primitive_count;
    const int members = std::max(2, static_cast<int>(std::lround(spec.redundancy_factor)));
    std::uint32_t cluster_sites = 0;
    if (spec.redundancy_factor > 1.0f) {
        const auto budget = static_cast<std::uint32_t>(
            std::lround(static_cast<double>(total) * spec.redundant_fraction));
        cluster_sites = budget / static_cast<std::uint32_t>(members);
    }
    const std::uint32_t singles = total - cluster_sites * static_cast<std::uint32_t>(members);
    const std::uint64_t site_count = static_cast<std::uint64_t>(singles) + cluster_sites;

    // jittered grid of sites over a cube centred at the origin
    const auto cells_per_axis = static_cast<std::uint32_t>(
        std::ceil(std::cbrt(static_cast<double>(std::max<std::uint64_t>(site_count, 1)))));
    const float extent = kCellSide * static_cast<float>(cells_per_axis);

    std::vector<std::uint32_t> cell_ids(static_cast<std::size_t>(cells_per_axis) * cells_per_axis *
                                        cells_per_axis);
    std::iota(cell_ids.begin(), cell_ids.end(), 0u);
    std::shuffle(cell_ids.begin(), cell_ids.end(), rng);

    auto cell_center = [&](std::uint32_t id) {
        const std::uint32_t x = id % cells_per_axis;
        const std::uint32_t y = (id / cells_per_axis) % cells_per_axis;
        const std::uint32_t z = id / (cells_per_axis * cells_per_axis);
        return Vec3((static_cast<float>(x) + 0.5f) * kCellSide - 0.5f * extent,
                    (static_cast<float>(y) + 0.5f) * kCellSide - 0.5f * extent,
                    (static_cast<float>(z) + 0.5f) * kCellSide - 0.5f * extent);
    };

    Scene scene;
    const float camera_height_span = 0.25f * spec.camera_radius;
    for (std::uint32_t c = 0; c < spec.camera_count; ++c) {
        const float angle = 2.0f * static_cast<float>(M_PI) * static_cast<float>(c) /
                            static_cast<float>(spec.camera_count);
        const float height = camera_height_span * std::sin(2.399963f * static_cast<float>(c));
        scene.views.push_back(
            ring_camera(angle, height, spec.camera_radius, spec.image_width, spec.image_height));
    }

    auto random_unit_quat = [&] {
        // Shoemake's uniform quaternion sampling
        const float u1 = unit(rng), u2 = unit(rng), u3 = unit(rng);
        const float a = std::sqrt(1.0f - u1), b = std::sqrt(u1);
        const float t2 = 2.0f * static_cast<float>(M_PI) * u2;
        const float t3 = 2.0f * static_cast<float>(M_PI) * u3;
        return Vec4(a * std::sin(t2), a * std::cos(t2), b * std::sin(t3), b * std::cos(t3));
    };

    auto make_solid = [&](const Vec3& pos) {
        GaussianPrimitive g;
        g.position = pos;
        g.scale = Vec3(0.08f + 0.12f * unit(rng), 0.08f + 0.12f * unit(rng),
                       0.08f + 0.12f * unit(rng));
        g.rotation = normalized_quaternion(random_unit_quat());
        g.opacity = 0.55f + 0.4f * unit(rng);
        const Vec3 color(0.15f + 0.7f * unit(rng), 0.15f + 0.7f * unit(rng),
                         0.15f + 0.7f * unit(rng));
        g.base_color = (color - Vec3::Constant(0.5f)) / kShC0;
        g.band_count = kMaxBands;
        g.sh_rest.assign(static_cast<std::size_t>(sh_rest_size(kMaxBands)), 0.0f);
        return g;
    };

    SyntheticScene out;
    auto& prims = scene.primitives;
    prims.reserve(total);
    auto& labels = out.labels;
    labels.redundant_extra.reserve(total);
    labels.view_dependent.reserve(total);

    std::size_t next_cell = 0;
    auto next_site = [&] {
        const Vec3 center = cell_center(cell_ids[next_cell++]);
        const float j = 0.3f * kCellSide;
        return Vec3(center[0] + j * (2 * unit(rng) - 1), center[1] + j * (2 * unit(rng) - 1),
                    center[2] + j * (2 * unit(rng) - 1));
    };

    for (std::uint32_t s = 0; s < singles; ++s) {
        prims.push_back(make_solid(next_site()));
        labels.redundant_extra.push_back(0);
        labels.view_dependent.push_back(0);
    }

    for (std::uint32_t c = 0; c < cluster_sites; ++c) {
        const Vec3 site = next_site();
        GaussianPrimitive primary = make_solid(site);
        const float spread = 0.3f * std::sqrt(3.0f) * 0.5f * site_a_min(site, scene.views);
        prims.push_back(primary);
        labels.redundant_extra.push_back(0);
        labels.view_dependent.push_back(0);
        for (int m = 1; m < members; ++m) {
            GaussianPrimitive extra = primary;
            extra.position =
                site + Vec3(spread * (2 * unit(rng) - 1), spread * (2 * unit(rng) - 1),
                            spread * (2 * unit(rng) - 1));
            extra.scale = 0.5f * primary.scale;
            extra.rotation = normalized_quaternion(random_unit_quat());
            extra.opacity = 0.005f + 0.03f * unit(rng);
            prims.push_back(extra);
            labels.redundant_extra.push_back(1);
            labels.view_dependent.push_back(0);
        }
    }

    // promote a deterministic subset of the solids to view-dependent
    std::vector<std::uint32_t> solid_ids;
    for (std::uint32_t i = 0; i < prims.size(); ++i)
        if (!labels.redundant_extra[i])
            solid_ids.push_back(i);
    std::shuffle(solid_ids.begin(), solid_ids.end(), rng);
    const auto vd_count = static_cast<std::size_t>(
        std::lround(static_cast<double>(solid_ids.size()) * spec.view_dependent_fraction));
    for (std::size_t v = 0; v < vd_count && v < solid_ids.size(); ++v) {
        GaussianPrimitive& g = prims[solid_ids[v]];
        labels.view_dependent[solid_ids[v]] = 1;
        for (int grp = 0; grp < sh_group_count(kMaxBands); ++grp) {
            const float decay = band_of_group(grp) == 1 ? 1.0f : (band_of_group(grp) == 2 ? 0.7f : 0.5f);
            for (int ch = 0; ch < 3; ++ch) {
                const float sign = unit(rng) < 0.5f ? -1.0f : 1.0f;
                g.sh_rest[static_cast<std::size_t>(3 * grp + ch)] =
                    sign * decay * (0.05f + 0.25f * unit(rng));
            }
        }
    }

    out.scene = std::move(scene);
    return out;
}

} // namespace rgs
