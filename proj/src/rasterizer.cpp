#include "rgs/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rgs/parallel.hpp"
#include "rgs/sh.hpp"

namespace rgs {

namespace {

constexpr int kTileSize = 16;

struct Splat {
    float mean_x, mean_y;     // pixel coordinates
    float depth;              // camera-space z
    float conic_a, conic_b, conic_c; // inverse 2D covariance (a, b; b, c)
    float opacity;
    Vec3 color;
    int min_x, min_y, max_x, max_y; // inclusive pixel bounds
    std::uint32_t index;
};

Mat3 covariance_3d(const GaussianPrimitive& g) {
    const Mat3 r = quaternion_to_matrix(g.rotation);
    const Vec3 s2 = g.scale.cwiseProduct(g.scale);
    return r * s2.asDiagonal() * r.transpose();
}

// Projects every primitive, evaluates its view-conditioned color, and returns
// the surviving splats sorted front to back (depth, then index).
std::vector<Splat> project_splats(const Scene& scene, const CameraView& view,
                                  const RenderOptions& opt, RenderDiagnostics* diag) {
    const Vec3 cam_center = view.camera_center();
    const float tan_fov_x = 0.5f * static_cast<float>(view.width) / view.focal_x;
    const float tan_fov_y = 0.5f * static_cast<float>(view.height) / view.focal_y;

    std::vector<Splat> splats;
    splats.reserve(scene.primitives.size());
    RenderDiagnostics local;

    for (std::uint32_t i = 0; i < scene.primitives.size(); ++i) {
        const GaussianPrimitive& g = scene.primitives[i];
        const Vec3 t = view.rotation * g.position + view.translation;
        if (t[2] <= opt.near_plane) {
            ++local.frustum_culled;
            continue;
        }

        const float z = t[2];
        const float px = view.focal_x * t[0] / z + view.principal_x;
        const float py = view.focal_y * t[1] / z + view.principal_y;

        // clamped camera-plane coordinates stabilize the Jacobian off-screen
        const float lim_x = 1.3f * tan_fov_x;
        const float lim_y = 1.3f * tan_fov_y;
        const float tx = std::clamp(t[0] / z, -lim_x, lim_x) * z;
        const float ty = std::clamp(t[1] / z, -lim_y, lim_y) * z;

        Eigen::Matrix<float, 2, 3> jac;
        jac << view.focal_x / z, 0, -view.focal_x * tx / (z * z),
            0, view.focal_y / z, -view.focal_y * ty / (z * z);

        const Eigen::Matrix<float, 2, 3> tw = jac * view.rotation;
        Eigen::Matrix2f cov2 = tw * covariance_3d(g) * tw.transpose();
        cov2(0, 0) += opt.covariance_dilation;
        cov2(1, 1) += opt.covariance_dilation;

        const float det = cov2(0, 0) * cov2(1, 1) - cov2(0, 1) * cov2(1, 0);
        if (!(det > 0.0f) || !std::isfinite(det)) {
            ++local.degenerate_covariances;
            continue;
        }

        const float inv_det = 1.0f / det;
        const float mid = 0.5f * (cov2(0, 0) + cov2(1, 1));
        const float lambda_max = mid + std::sqrt(std::max(mid * mid - det, 0.1f));
        const float radius = std::ceil(3.0f * std::sqrt(lambda_max));

        Splat s;
        s.min_x = static_cast<int>(std::floor(px - radius));
        s.max_x = static_cast<int>(std::ceil(px + radius));
        s.min_y = static_cast<int>(std::floor(py - radius));
        s.max_y = static_cast<int>(std::ceil(py + radius));
        if (s.max_x < 0 || s.max_y < 0 || s.min_x >= view.width || s.min_y >= view.height) {
            ++local.frustum_culled;
            continue;
        }
        s.min_x = std::max(s.min_x, 0);
        s.min_y = std::max(s.min_y, 0);
        s.max_x = std::min(s.max_x, view.width - 1);
        s.max_y = std::min(s.max_y, view.height - 1);

        s.mean_x = px;
        s.mean_y = py;
        s.depth = z;
        s.conic_a = cov2(1, 1) * inv_det;
        s.conic_b = -cov2(0, 1) * inv_det;
        s.conic_c = cov2(0, 0) * inv_det;
        s.opacity = g.opacity;
        const Vec3 dir = (g.position - cam_center).normalized();
        s.color = eval_sh_color(g, dir, std::min(g.band_count, opt.max_band), /*clamp=*/true);
        s.index = i;
        splats.push_back(s);
    }

    std::sort(splats.begin(), splats.end(), [](const Splat& a, const Splat& b) {
        return a.depth != b.depth ? a.depth < b.depth : a.index < b.index;
    });

    if (diag) {
        diag->degenerate_covariances += local.degenerate_covariances;
        diag->frustum_culled += local.frustum_culled;
    }
    return splats;
}

struct TileGrid {
    int tiles_x = 0, tiles_y = 0;
    std::vector<std::vector<std::uint32_t>> lists; // splat ids per tile, front-to-back
};

TileGrid bin_tiles(const std::vector<Splat>& splats, int width, int height) {
    TileGrid grid;
    grid.tiles_x = (width + kTileSize - 1) / kTileSize;
    grid.tiles_y = (height + kTileSize - 1) / kTileSize;
    grid.lists.resize(static_cast<std::size_t>(grid.tiles_x) * grid.tiles_y);
    for (std::uint32_t s = 0; s < splats.size(); ++s) {
        const Splat& sp = splats[s];
        const int tx0 = sp.min_x / kTileSize, tx1 = sp.max_x / kTileSize;
        const int ty0 = sp.min_y / kTileSize, ty1 = sp.max_y / kTileSize;
        for (int ty = ty0; ty <= ty1; ++ty)
            for (int tx = tx0; tx <= tx1; ++tx)
                grid.lists[static_cast<std::size_t>(ty) * grid.tiles_x + tx].push_back(s);
    }
    return grid;
}

inline float splat_alpha(const Splat& s, float px, float py) {
    const float dx = px - s.mean_x;
    const float dy = py - s.mean_y;
    const float power =
        -0.5f * (s.conic_a * dx * dx + s.conic_c * dy * dy) - s.conic_b * dx * dy;
    if (power > 0.0f)
        return 0.0f;
    return s.opacity * std::exp(power);
}

} // namespace

RenderedImage render(const Scene& scene, const CameraView& view, const RenderOptions& options,
                     RenderDiagnostics* diagnostics, RenderAux* aux) {
    RenderedImage image(view.width, view.height);
    const std::size_t pixels = static_cast<std::size_t>(view.width) * view.height;
    if (aux) {
        aux->final_transmittance.assign(pixels, 1.0f);
        aux->alpha_weight_sum.assign(pixels, 0.0f);
    }
    const auto splats = project_splats(scene, view, options, diagnostics);
    if (splats.empty())
        return image;
    const TileGrid grid = bin_tiles(splats, view.width, view.height);

    parallel_for(grid.lists.size(), [&](std::size_t tile) {
        const auto& list = grid.lists[tile];
        if (list.empty())
            return;
        const int tx = static_cast<int>(tile) % grid.tiles_x;
        const int ty = static_cast<int>(tile) / grid.tiles_x;
        const int x0 = tx * kTileSize, x1 = std::min(x0 + kTileSize, view.width);
        const int y0 = ty * kTileSize, y1 = std::min(y0 + kTileSize, view.height);

        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const float px = static_cast<float>(x) + 0.5f;
                const float py = static_cast<float>(y) + 0.5f;
                float t = 1.0f;
                float alpha_sum = 0.0f;
                Vec3 c = Vec3::Zero();
                for (std::uint32_t id : list) {
                    const Splat& s = splats[id];
                    if (x < s.min_x || x > s.max_x || y < s.min_y || y > s.max_y)
                        continue;
                    const float alpha = splat_alpha(s, px, py);
                    if (alpha < options.alpha_cutoff)
                        continue;
                    c += s.color * (alpha * t);
                    alpha_sum += alpha * t;
                    t *= 1.0f - alpha;
                    if (t < options.transmittance_floor)
                        break;
                }
                for (int ch = 0; ch < 3; ++ch)
                    image.at(x, y, ch) = std::clamp(c[ch], 0.0f, 1.0f);
                if (aux) {
                    const std::size_t px_idx = static_cast<std::size_t>(y) * view.width + x;
                    aux->final_transmittance[px_idx] = t;
                    aux->alpha_weight_sum[px_idx] = alpha_sum;
                }
            }
        }
    });
    return image;
}

TransmittanceStats transmittance_stats(const Scene& scene, const std::vector<CameraView>& views,
                                       const TransmittanceStatsOptions& options) {
    const std::size_t n = scene.primitives.size();
    TransmittanceStats stats(views.size(), n);

    std::vector<double> sum_t(n);
    for (std::size_t v = 0; v < views.size(); ++v) {
        const CameraView view =
            options.max_dim > 0 ? views[v].scaled_to_max_dim(options.max_dim) : views[v];
        const auto splats = project_splats(scene, view, options.render, nullptr);
        std::fill(sum_t.begin(), sum_t.end(), 0.0);
        std::uint32_t* counts = stats.count_row(v);
        const TileGrid grid = bin_tiles(splats, view.width, view.height);

        for (std::size_t tile = 0; tile < grid.lists.size(); ++tile) {
            const auto& list = grid.lists[tile];
            if (list.empty())
                continue;
            const int tx = static_cast<int>(tile) % grid.tiles_x;
            const int ty = static_cast<int>(tile) / grid.tiles_x;
            const int x0 = tx * kTileSize, x1 = std::min(x0 + kTileSize, view.width);
            const int y0 = ty * kTileSize, y1 = std::min(y0 + kTileSize, view.height);

            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    const float px = static_cast<float>(x) + 0.5f;
                    const float py = static_cast<float>(y) + 0.5f;
                    float t = 1.0f;
                    for (std::uint32_t id : list) {
                        const Splat& s = splats[id];
                        if (x < s.min_x || x > s.max_x || y < s.min_y || y > s.max_y)
                            continue;
                        const float alpha = splat_alpha(s, px, py);
                        if (alpha < options.render.alpha_cutoff) {
                            if (options.count_any_overlap) {
                                sum_t[s.index] += t;
                                ++counts[s.index];
                            }
                            continue;
                        }
                        sum_t[s.index] += t;
                        ++counts[s.index];
                        t *= 1.0f - alpha;
                    }
                }
            }
        }

        float* means = stats.mean_t_row(v);
        for (std::size_t i = 0; i < n; ++i)
            means[i] = counts[i] ? static_cast<float>(sum_t[i] / counts[i]) : 0.0f;
    }
    return stats;
}

} // namespace rgs
