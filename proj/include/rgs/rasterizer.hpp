#pragma once

#include <cstdint>
#include <vector>

#include "rgs/image.hpp"
#include "rgs/types.hpp"

namespace rgs {

struct RenderOptions {
    int max_band = kMaxBands;         // cap on SH bands (each primitive also respects its own)
    float near_plane = 0.2f;
    float alpha_cutoff = 1.0f / 255.0f;
    float transmittance_floor = 1e-4f; // blending stops once T falls below this
    float covariance_dilation = 0.3f;  // added to the 2D covariance diagonal
};

struct RenderDiagnostics {
    std::uint32_t degenerate_covariances = 0; // skipped: non-positive 2D determinant
    std::uint32_t frustum_culled = 0;
};

// Optional per-pixel blending traces (row-major, width * height).
struct RenderAux {
    std::vector<float> final_transmittance; // T left after blending
    std::vector<float> alpha_weight_sum;    // sum of alpha'_i * T_i(prefix)
};

// Forward EWA splatting with global front-to-back depth ordering (ties by
// primitive index) and per-pixel alpha blending over a black background.
RenderedImage render(const Scene& scene, const CameraView& view, const RenderOptions& options = {},
                     RenderDiagnostics* diagnostics = nullptr, RenderAux* aux = nullptr);

// Per (view, primitive) average transmittance and splatted pixel count.
// mean_transmittance is sum_k T_ik / P over the P pixels the primitive was
// splatted to in that view.
class TransmittanceStats {
public:
    TransmittanceStats() = default;
    TransmittanceStats(std::size_t views, std::size_t prims)
        : views_(views), prims_(prims), mean_t_(views * prims, 0.0f), count_(views * prims, 0) {}

    std::size_t view_count() const { return views_; }
    std::size_t primitive_count() const { return prims_; }
    float mean_transmittance(std::size_t view, std::size_t prim) const {
        return mean_t_[view * prims_ + prim];
    }
    std::uint32_t pixel_count(std::size_t view, std::size_t prim) const {
        return count_[view * prims_ + prim];
    }

    float* mean_t_row(std::size_t view) { return mean_t_.data() + view * prims_; }
    std::uint32_t* count_row(std::size_t view) { return count_.data() + view * prims_; }

private:
    std::size_t views_ = 0, prims_ = 0;
    std::vector<float> mean_t_;
    std::vector<std::uint32_t> count_;
};

struct TransmittanceStatsOptions {
    RenderOptions render;
    int max_dim = 256;              // statistics views are downscaled to this; 0 keeps native size
    bool count_any_overlap = false; // also count pixels where alpha' fell below the cutoff
};

// Accumulates T_ik over every pixel a primitive is splatted to (alpha' above
// the cutoff). Unlike render(), accumulation runs the full depth order at each
// pixel so that fully occluded primitives report their true (near-zero)
// transmittance instead of being cut off by the early-out.
TransmittanceStats transmittance_stats(const Scene& scene, const std::vector<CameraView>& views,
                                       const TransmittanceStatsOptions& options = {});

} // namespace rgs
