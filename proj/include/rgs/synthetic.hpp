#pragma once

#include <cstdint>
#include <vector>

#include "rgs/types.hpp"

namespace rgs {

// Deterministic desk-scale test scene: a jittered-grid field of well-spaced
// solid splats plus a configurable share of redundant clusters (one solid
// primary stacked with low-opacity duplicates), observed from a camera ring.
struct SynthSpec {
    std::uint32_t primitive_count = 100000;
    // Members per redundant cluster site; 1 disables clusters entirely.
    float redundancy_factor = 4.0f;
    // Fraction of the primitive budget spent on cluster sites (when factor > 1).
    float redundant_fraction = 0.35f;
    // Fraction of the solid primitives carrying nonzero band 1..3 coefficients.
    float view_dependent_fraction = 0.1f;
    std::uint32_t camera_count = 24;
    float camera_radius = 30.0f;
    std::uint32_t image_width = 128;
    std::uint32_t image_height = 128;
    std::uint64_t seed = 1234;
};

struct SynthLabels {
    std::vector<std::uint8_t> redundant_extra; // low-opacity duplicate at a cluster site
    std::vector<std::uint8_t> view_dependent;  // carries nonzero high-band coefficients
};

struct SyntheticScene {
    Scene scene;
    SynthLabels labels;
};

SyntheticScene generate_synthetic(const SynthSpec& spec);

} // namespace rgs
