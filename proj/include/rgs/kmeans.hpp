#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace rgs {

struct KMeansConfig {
    int max_iterations = 50;
};

// 1-D Lloyd clustering over scalars. Centroids are initialized from k evenly
// spaced quantiles of the distinct sample values; empty clusters are reseeded
// to the value farthest from its current centroid. Iteration stops when the
// assignment no longer changes or after max_iterations. When the input has at
// most k distinct values the result is exactly those values (zero error).
// Returns centroids sorted ascending. `label` names the attribute in errors.
std::vector<float> kmeans_1d(std::span<const float> values, int k, const KMeansConfig& config = {},
                             std::string_view label = "values");

} // namespace rgs
