#include "rgs/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgs/error.hpp"

namespace rgs {

std::vector<float> kmeans_1d(std::span<const float> values, int k, const KMeansConfig& config,
                             std::string_view label) {
    if (values.empty())
        throw ValueError("k-means on empty value list for " + std::string(label));
    if (k < 1)
        throw ValueError("k-means needs k >= 1");
    for (float v : values) {
        if (!std::isfinite(v))
            throw ValueError("non-finite value in " + std::string(label));
    }

    std::vector<float> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<float> distinct;
    distinct.reserve(sorted.size());
    for (float v : sorted)
        if (distinct.empty() || distinct.back() != v)
            distinct.push_back(v);
    if (static_cast<int>(distinct.size()) <= k)
        return distinct;

    const std::size_t n = sorted.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + sorted[i];

    // quantile init over the distinct values
    std::vector<double> centroids(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const std::size_t idx =
            static_cast<std::size_t>(static_cast<double>(j) * (distinct.size() - 1) / (k - 1));
        centroids[static_cast<std::size_t>(j)] = distinct[idx];
    }

    // cluster j holds sorted[bounds[j] .. bounds[j+1])
    std::vector<std::size_t> bounds(static_cast<std::size_t>(k) + 1, 0);
    std::vector<std::size_t> prev_bounds;

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        std::sort(centroids.begin(), centroids.end());

        // assignment: boundary between cluster j and j+1 is the midpoint;
        // a value exactly on it joins the lower cluster
        bounds[0] = 0;
        bounds[static_cast<std::size_t>(k)] = n;
        for (int j = 0; j + 1 < k; ++j) {
            const double mid = 0.5 * (centroids[static_cast<std::size_t>(j)] +
                                      centroids[static_cast<std::size_t>(j) + 1]);
            const auto it = std::upper_bound(sorted.begin(), sorted.end(), static_cast<float>(mid),
                                             [](float a, float b) { return a < b; });
            bounds[static_cast<std::size_t>(j) + 1] =
                std::max(bounds[static_cast<std::size_t>(j)],
                         static_cast<std::size_t>(it - sorted.begin()));
        }

        if (bounds == prev_bounds)
            break;
        prev_bounds = bounds;

        // update step + empty-cluster reseeding
        std::vector<int> empties;
        for (int j = 0; j < k; ++j) {
            const std::size_t b = bounds[static_cast<std::size_t>(j)];
            const std::size_t e = bounds[static_cast<std::size_t>(j) + 1];
            if (e > b)
                centroids[static_cast<std::size_t>(j)] =
                    (prefix[e] - prefix[b]) / static_cast<double>(e - b);
            else
                empties.push_back(j);
        }
        for (int j : empties) {
            // move to the value farthest from its centroid
            double worst = -1.0;
            float pick = sorted[0];
            for (int c = 0; c < k; ++c) {
                const std::size_t b = bounds[static_cast<std::size_t>(c)];
                const std::size_t e = bounds[static_cast<std::size_t>(c) + 1];
                if (e <= b)
                    continue;
                // extreme members of a sorted cluster are the farthest ones
                for (std::size_t cand : {b, e - 1}) {
                    const double d = std::abs(sorted[cand] - centroids[static_cast<std::size_t>(c)]);
                    if (d > worst) {
                        worst = d;
                        pick = sorted[cand];
                    }
                }
            }
            centroids[static_cast<std::size_t>(j)] = pick;
        }
    }

    std::sort(centroids.begin(), centroids.end());
    std::vector<float> out;
    out.reserve(centroids.size());
    for (double c : centroids) {
        const float f = static_cast<float>(c);
        if (out.empty() || out.back() != f)
            out.push_back(f);
    }
    return out;
}

} // namespace rgs
