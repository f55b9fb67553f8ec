#pragma once

#include <cstdint>
#include <vector>

#include "rgs/compact.hpp"
#include "rgs/kmeans.hpp"
#include "rgs/types.hpp"

namespace rgs {

struct QuantizeConfig {
    KMeansConfig kmeans;
    // When set, codebooks are the distinct half-rounded pool values (an error
    // if a pool exceeds 256 distinct values). Gives bit-exact reconstruction
    // of half-rounded inputs; used by the identity pipeline configuration.
    bool skip_kmeans = false;
};

// Builds the 20 attribute codebooks. Vector attributes pool their scalar
// components into one shared training set; quaternions are sign-canonicalized
// (real part >= 0) before pooling. K-means runs in full precision, centroids
// are rounded to binary16 at the end. A group with no values (e.g. no band-3
// primitives) gets a single {0} entry flagged unused.
CodebookSet build_codebooks(const std::vector<GaussianPrimitive>& primitives,
                            const QuantizeConfig& config = {});

// Per-primitive attribute indices in record order (opacity, scale x3,
// rot-real, rot-imag x3, color x3, 3 per SH group present).
struct QuantizedAttributes {
    std::vector<std::uint8_t> indices;
    std::vector<std::size_t> offsets; // per primitive; size n + 1
};
QuantizedAttributes assign_indices(const std::vector<GaussianPrimitive>& primitives,
                                   const CodebookSet& codebooks);

// Lowers band_count to the smallest band covering all nonzero SH groups.
// Rendering-neutral; makes band partitioning from zero-padded inputs agree
// with in-memory pipeline chaining.
void infer_minimal_bands(std::vector<GaussianPrimitive>& primitives);

// Codebooks + indices + half-float positions packed into a CompactScene.
// Positions falling outside the binary16 range trigger a whole-scene
// power-of-two rescale recorded in position_scale (undone at decode).
CompactScene quantize_scene(const Scene& scene, const QuantizeConfig& config = {});

} // namespace rgs
