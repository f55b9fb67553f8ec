#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rgs/types.hpp"

namespace rgs {

// Per-primitive smallest observing pixel footprint. a_min is only meaningful
// where visible_view_count > 0; invisible primitives are never culled by the
// redundancy policy.
struct FootprintTable {
    std::vector<float> a_min;
    std::vector<std::uint32_t> visible_view_count;
};

// For each view whose frustum contains the primitive center, the footprint
// side is z * max(1/fx, 1/fy); a_min is the minimum over those views.
FootprintTable compute_footprints(const Scene& scene, float near_plane = 0.2f);

// Radius of the intersection sphere: half the diagonal of a cube of side
// a_min. With `a_min_is_area` the value is treated as a face area instead
// (side = sqrt(a_min)).
float sphere_radius(float a_min, bool a_min_is_area = false);

struct RedundancyConfig {
    int neighbor_count = 30; // k-NN candidates per region
    float lambda_r = 1.0f;
    int score_floor = 3;        // tau_p = max(mu + lambda_r * sigma, floor)
    float cull_fraction = 0.5f; // fraction of the candidate set removed, lowest opacity first
    bool a_min_is_area = false;
    float near_plane = 0.2f;
};

struct RedundancyReport {
    // number of candidates intersecting the primitive's sphere, itself
    // included; 0 when the primitive has no region (invisible)
    std::vector<std::uint32_t> region_count;
    // minimum region_count over all regions whose test the primitive passed;
    // 0 when it passed none
    std::vector<std::uint32_t> final_score;
    std::vector<std::uint8_t> visible;
    std::vector<std::uint8_t> candidate;
    std::vector<std::uint8_t> culled;
    double mean = 0, stddev = 0, tau_p = 0;
};

// Region sampling and min-propagation of the redundancy score field.
// Candidates come from k-NN over primitive centers; the sphere-ellipsoid
// intersection is approximated by growing the candidate ellipsoid axes by the
// sphere radius and testing the region center against it.
RedundancyReport redundancy_scores(const Scene& scene, const FootprintTable& footprints,
                                   const RedundancyConfig& config = {});

// Adaptive-threshold culling: candidates have final_score > tau_p, and the
// lowest-opacity cull_fraction of them (ties by index) is removed. Fills the
// candidate/culled/tau fields of the report and returns the culled ids sorted.
std::vector<std::uint32_t> redundancy_cull(const Scene& scene, RedundancyReport& report,
                                           const RedundancyConfig& config = {});

// Lowest-opacity floor(fraction * n) primitives with opacity <= cap, plus
// every primitive below 1/255 regardless of the budget.
std::vector<std::uint32_t> opacity_cull(const Scene& scene, float fraction = 0.03f,
                                        float cap = 0.05f);

struct PruneConfig {
    RedundancyConfig redundancy;
    float opacity_fraction = 0.03f;
    float opacity_cap = 0.05f;
    bool enable_redundancy = true;
    bool enable_opacity = true;
};

struct PruneSummary {
    std::uint32_t input_count = 0;
    std::uint32_t removed_total = 0;
    std::uint32_t removed_opacity = 0;    // ids selected by the opacity policy
    std::uint32_t removed_redundancy = 0; // ids selected by the redundancy policy
    std::uint32_t overlap = 0;            // selected by both
    std::uint32_t candidates = 0;
    double mean = 0, stddev = 0, tau_p = 0;
    std::vector<std::uint32_t> score_histogram; // index = score, last bin overflows
};

// One culling pass: both policies are evaluated on the input scene and the
// union of their id sets is removed once.
std::pair<Scene, PruneSummary> prune_pass(const Scene& scene, const PruneConfig& config = {});

} // namespace rgs
