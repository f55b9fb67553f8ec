#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "rgs/rasterizer.hpp"
#include "rgs/types.hpp"

namespace rgs {

struct ShThresholds {
    float eps_sigma = 0.04f;  // variance-rule threshold (on the std by default)
    float eps_cdist = 0.04f;  // band-distance threshold
    // Thresholds sigma^2 instead of sigma, the literal printed form of the
    // statistic. Off by default: 0.04 is plausible on a [0,1] color scale as a
    // standard deviation.
    bool sigma_as_variance = false;
};

inline ShThresholds sh_thresholds_default() { return {0.04f, 0.04f, false}; }
inline ShThresholds sh_thresholds_low() { return {0.01f, 0.0068f, false}; }
inline ShThresholds sh_thresholds_high() { return {0.06f, 0.054f, false}; }

enum class BandRule : std::uint8_t { Variance, Distance, Keep, Unobserved };

const char* band_rule_name(BandRule rule);

// Transmittance-weighted per-primitive color statistics. Colors are the full
// (band 3) unclamped evaluation toward each view's camera center; views with
// zero splatted pixels do not participate. Primitives with no coverage are
// flagged unobserved and get an unweighted mean instead.
struct ColorStatsResult {
    std::vector<Vec3> mean;  // mu_c
    std::vector<Vec3> sigma; // per-channel weighted std (or variance, by config)
    std::vector<std::uint8_t> observed;
};
ColorStatsResult color_statistics(const Scene& scene, const std::vector<CameraView>& views,
                                  const TransmittanceStats& stats, bool sigma_as_variance = false);

// Transmittance-weighted mean Euclidean distance between the full color c_3
// and each truncation c_q, q = 0..2. Unobserved primitives report zeros.
std::vector<std::array<float, 3>> band_distances(const Scene& scene,
                                                 const std::vector<CameraView>& views,
                                                 const TransmittanceStats& stats);

struct BandAssignment {
    struct Entry {
        std::uint8_t band = 3;
        BandRule rule = BandRule::Keep;
        Vec3 mean_color = Vec3::Zero();
        Vec3 sigma_color = Vec3::Zero();
        std::array<float, 3> distance{}; // d_0..d_2; d_3 is identically 0
        std::uint8_t observed = 1;
    };
    std::vector<Entry> entries;

    std::string to_csv() const;
};

// Variance rule first (max channel sigma below eps_sigma => band 0 with the
// mean color substituted), then the lowest band whose distance falls below
// eps_cdist; d_3 = 0 keeps the result <= 3 whenever eps_cdist > 0.
BandAssignment assign_bands(const ColorStatsResult& stats,
                            const std::vector<std::array<float, 3>>& distances,
                            const ShThresholds& thresholds);

struct ShCullSummary {
    std::uint64_t sh_floats_before = 0;
    std::uint64_t sh_floats_after = 0;
    std::array<std::uint32_t, 4> band_histogram{};
};

// Full single-shot pass: transmittance statistics, color statistics, band
// assignment, coefficient removal. Mutates the scene's primitives.
std::pair<BandAssignment, ShCullSummary> cull_sh(Scene& scene, const ShThresholds& thresholds = {},
                                                 const TransmittanceStatsOptions& stats_options = {});

// Variant reusing precomputed transmittance statistics (they must match the
// scene's primitive count and view list).
std::pair<BandAssignment, ShCullSummary> cull_sh(Scene& scene, const TransmittanceStats& stats,
                                                 const ShThresholds& thresholds = {});

} // namespace rgs
