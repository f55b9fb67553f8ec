#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rgs/rasterizer.hpp"
#include "rgs/sh.hpp"
#include "test_util.hpp"

using namespace rgs;

namespace {

// Camera at the world origin looking along +z, principal point on an exact
// pixel center.
CameraView axis_camera(int size, float focal) {
    CameraView view;
    view.width = view.height = size;
    view.focal_x = view.focal_y = focal;
    view.principal_x = view.principal_y = 0.5f * static_cast<float>(size) + 0.5f;
    return view;
}

GaussianPrimitive diffuse_splat(const Vec3& pos, float scale, float opacity, const Vec3& color) {
    GaussianPrimitive g;
    g.position = pos;
    g.scale = Vec3::Constant(scale);
    g.opacity = opacity;
    g.base_color = (color - Vec3::Constant(0.5f)) / kShC0;
    g.band_count = 0;
    return g;
}

} // namespace

TEST_CASE("render: empty scene is black") {
    Scene scene;
    const CameraView view = axis_camera(32, 40.0f);
    const RenderedImage img = render(scene, view);
    for (float v : img.rgb)
        CHECK(v == 0.0f);
}

TEST_CASE("render: centered isotropic gaussian blends alpha times white") {
    const CameraView view = axis_camera(64, 60.0f);
    for (float opacity : {0.25f, 0.6f, 0.9f}) {
        Scene scene;
        scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 5), 0.1f, opacity, Vec3(1, 1, 1)));
        const RenderedImage img = render(scene, view);
        const int cx = 32, cy = 32; // principal point lands on this pixel center
        for (int ch = 0; ch < 3; ++ch)
            CHECK(img.at(cx, cy, ch) == doctest::Approx(opacity).epsilon(0).scale(1).epsilon(1e-3));
    }
}

TEST_CASE("render: two co-located half-opacity gaussians composite to 0.75") {
    const CameraView view = axis_camera(64, 60.0f);
    Scene scene;
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 5), 0.1f, 0.5f, Vec3(1, 1, 1)));
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 5), 0.1f, 0.5f, Vec3(1, 1, 1)));
    const RenderedImage img = render(scene, view);
    CHECK(img.at(32, 32, 0) == doctest::Approx(0.75).epsilon(1e-3));
}

TEST_CASE("render: depth order front-to-back compositing") {
    const CameraView view = axis_camera(64, 60.0f);
    Scene scene;
    // back first in the list; sorting must reorder by depth
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 8), 0.15f, 0.8f, Vec3(0, 0, 1)));
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 5), 0.1f, 0.6f, Vec3(1, 0, 0)));
    const RenderedImage img = render(scene, view);
    CHECK(img.at(32, 32, 0) == doctest::Approx(0.6).epsilon(2e-3));
    CHECK(img.at(32, 32, 2) == doctest::Approx(0.8 * 0.4).epsilon(2e-3));
}

TEST_CASE("render: compositing conservation when blending runs to completion") {
    std::mt19937_64 rng(21);
    RenderOptions options;
    options.transmittance_floor = 0.0f; // run every pixel to completion
    const CameraView view = axis_camera(48, 50.0f);
    for (int trial = 0; trial < 5; ++trial) {
        Scene scene;
        for (int i = 0; i < 40; ++i) {
            GaussianPrimitive g = testutil::random_primitive(rng, 0, 1.2f);
            g.position[2] = 4.0f + 4.0f * std::abs(g.position[2]);
            scene.primitives.push_back(g);
        }
        RenderAux aux;
        (void)render(scene, view, options, nullptr, &aux);
        for (std::size_t i = 0; i < aux.final_transmittance.size(); ++i)
            CHECK(aux.final_transmittance[i] + aux.alpha_weight_sum[i] ==
                  doctest::Approx(1.0).epsilon(0).scale(1).epsilon(1e-5));
    }
}

TEST_CASE("render: equal-depth primitives with disjoint support commute") {
    const CameraView view = axis_camera(64, 60.0f);
    Scene a;
    a.primitives.push_back(diffuse_splat(Vec3(-1.5f, 0, 6), 0.08f, 0.7f, Vec3(1, 0, 0)));
    a.primitives.push_back(diffuse_splat(Vec3(1.5f, 0, 6), 0.08f, 0.7f, Vec3(0, 1, 0)));
    Scene b;
    b.primitives.push_back(a.primitives[1]);
    b.primitives.push_back(a.primitives[0]);
    const RenderedImage img_a = render(a, view);
    const RenderedImage img_b = render(b, view);
    for (std::size_t i = 0; i < img_a.rgb.size(); ++i)
        CHECK(img_a.rgb[i] == img_b.rgb[i]);
}

TEST_CASE("render: behind-camera primitives are frustum culled") {
    const CameraView view = axis_camera(32, 40.0f);
    Scene scene;
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, -5), 0.1f, 0.9f, Vec3(1, 1, 1)));
    RenderDiagnostics diag;
    const RenderedImage img = render(scene, view, {}, &diag);
    CHECK(diag.frustum_culled == 1);
    for (float v : img.rgb)
        CHECK(v == 0.0f);
}

TEST_CASE("render: non-finite covariance counts as degenerate") {
    const CameraView view = axis_camera(32, 40.0f);
    Scene scene;
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 5), 1e25f, 0.9f, Vec3(1, 1, 1)));
    RenderDiagnostics diag;
    (void)render(scene, view, {}, &diag);
    CHECK(diag.degenerate_covariances == 1);
}

TEST_CASE("stats: single visible primitive has unit transmittance") {
    const CameraView view = axis_camera(64, 60.0f);
    Scene scene;
    scene.views.push_back(view);
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 5), 0.12f, 0.8f, Vec3(1, 1, 1)));
    TransmittanceStatsOptions options;
    options.max_dim = 0;
    const TransmittanceStats stats = transmittance_stats(scene, scene.views, options);
    REQUIRE(stats.pixel_count(0, 0) > 0);
    CHECK(stats.mean_transmittance(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("stats: fully occluded primitive reports near-zero transmittance") {
    const CameraView view = axis_camera(64, 60.0f);
    Scene scene;
    scene.views.push_back(view);
    // huge flat opaque occluder in front
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 4), 40.0f, 1.0f, Vec3(1, 1, 1)));
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 6), 0.1f, 0.9f, Vec3(1, 0, 0)));
    TransmittanceStatsOptions options;
    options.max_dim = 0;
    const TransmittanceStats stats = transmittance_stats(scene, scene.views, options);
    REQUIRE(stats.pixel_count(0, 1) > 0);
    CHECK(stats.mean_transmittance(0, 1) <= 1e-3f);

    // removing it barely changes the render
    Scene without = scene;
    without.primitives.pop_back();
    const RenderedImage img_with = render(scene, view);
    const RenderedImage img_without = render(without, view);
    float max_diff = 0.0f;
    for (std::size_t i = 0; i < img_with.rgb.size(); ++i)
        max_diff = std::max(max_diff, std::abs(img_with.rgb[i] - img_without.rgb[i]));
    CHECK(max_diff <= 1.0f / 255.0f);
}

TEST_CASE("stats: three stacked half-opacity primitives give 0.25 for the last") {
    const CameraView view = axis_camera(64, 60.0f);
    Scene scene;
    scene.views.push_back(view);
    // two near-constant-alpha occluders and a small probe behind them
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 4.0f), 60.0f, 0.5f, Vec3(1, 1, 1)));
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 4.5f), 60.0f, 0.5f, Vec3(1, 1, 1)));
    scene.primitives.push_back(diffuse_splat(Vec3(0, 0, 6.0f), 0.08f, 0.9f, Vec3(1, 0, 0)));
    TransmittanceStatsOptions options;
    options.max_dim = 0;
    const TransmittanceStats stats = transmittance_stats(scene, scene.views, options);
    REQUIRE(stats.pixel_count(0, 2) > 0);
    CHECK(stats.mean_transmittance(0, 2) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("stats: matches a per-pixel brute-force recomputation") {
    // identity-rotation isotropic splats allow an analytic projection oracle
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    const int size = 48;
    const float focal = 55.0f;
    const CameraView view = axis_camera(size, focal);

    Scene scene;
    scene.views.push_back(view);
    const int n = 50;
    for (int i = 0; i < n; ++i) {
        const float z = 4.0f + 4.0f * unit(rng);
        const float lateral = 0.3f * z / focal * static_cast<float>(size); // stay inside the frustum
        GaussianPrimitive g =
            diffuse_splat(Vec3(lateral * (2 * unit(rng) - 1), lateral * (2 * unit(rng) - 1), z),
                          0.02f + 0.2f * unit(rng), 0.02f + 0.28f * unit(rng),
                          Vec3(unit(rng), unit(rng), unit(rng)));
        scene.primitives.push_back(g);
    }

    TransmittanceStatsOptions options;
    options.max_dim = 0;
    const TransmittanceStats stats = transmittance_stats(scene, scene.views, options);

    // oracle: analytic 2D covariance for identity rotation + isotropic scale
    // (cov2d = s^2 J J^T + 0.3 I with J = [[f/z, 0, -f x/z^2], [0, f/z, -f y/z^2]]),
    // full-depth per-pixel prefix products
    std::vector<double> sum_t(n, 0.0);
    std::vector<std::uint32_t> count(n, 0);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scene.primitives[a].position[2] < scene.primitives[b].position[2];
    });

    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double t = 1.0;
            for (int idx : order) {
                const GaussianPrimitive& g = scene.primitives[idx];
                const float z = g.position[2];
                const float s = g.scale[0];
                const float fx_z = focal / z;
                const float jx = -focal * g.position[0] / (z * z);
                const float jy = -focal * g.position[1] / (z * z);
                const double c00 = s * s * (fx_z * fx_z + jx * jx) + 0.3;
                const double c11 = s * s * (fx_z * fx_z + jy * jy) + 0.3;
                const double c01 = s * s * (jx * jy);
                const double det = c00 * c11 - c01 * c01;
                const double dx = (x + 0.5) - (fx_z * g.position[0] + view.principal_x);
                const double dy = (y + 0.5) - (fx_z * g.position[1] + view.principal_y);
                const double power =
                    -0.5 * (c11 * dx * dx + c00 * dy * dy - 2.0 * c01 * dx * dy) / det;
                const double alpha = g.opacity * std::exp(power);
                if (alpha < 1.0 / 255.0)
                    continue;
                sum_t[static_cast<std::size_t>(idx)] += t;
                ++count[static_cast<std::size_t>(idx)];
                t *= 1.0 - alpha;
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        CHECK(stats.pixel_count(0, static_cast<std::size_t>(i)) == count[static_cast<std::size_t>(i)]);
        const double expected =
            count[static_cast<std::size_t>(i)]
                ? sum_t[static_cast<std::size_t>(i)] / count[static_cast<std::size_t>(i)]
                : 0.0;
        CHECK(stats.mean_transmittance(0, static_cast<std::size_t>(i)) ==
              doctest::Approx(expected).epsilon(0).scale(1).epsilon(5e-4));
    }
}
