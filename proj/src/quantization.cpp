#include "rgs/quantization.hpp"

#include <algorithm>
#include <cmath>

#include "rgs/error.hpp"
#include "rgs/half.hpp"
#include "rgs/parallel.hpp"

namespace rgs {

namespace {

constexpr float kHalfMax = 65504.0f;
constexpr float kHalfMinPositive = 5.9604645e-8f; // smallest positive subnormal

Codebook finalize_codebook(const std::vector<float>& centroids, bool clamp_positive) {
    Codebook book;
    std::vector<float> rounded;
    rounded.reserve(centroids.size());
    for (float c : centroids) {
        float v = std::clamp(c, -kHalfMax, kHalfMax);
        if (clamp_positive)
            v = std::max(v, kHalfMinPositive);
        rounded.push_back(half_round(v));
    }
    std::sort(rounded.begin(), rounded.end());
    rounded.erase(std::unique(rounded.begin(), rounded.end()), rounded.end());
    book.values = rounded;
    book.entries.resize(rounded.size());
    for (std::size_t i = 0; i < rounded.size(); ++i)
        book.entries[i] = float_to_half(rounded[i]);
    return book;
}

Codebook build_one(const std::vector<float>& pool, const QuantizeConfig& config,
                   const std::string& label, bool clamp_positive) {
    if (pool.empty()) {
        Codebook book = finalize_codebook({0.0f}, false);
        book.used = false;
        return book;
    }
    std::vector<float> centroids;
    if (config.skip_kmeans) {
        std::vector<float> rounded(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!std::isfinite(pool[i]))
                throw ValueError("non-finite value in " + label);
            rounded[i] = half_round(pool[i]);
        }
        std::sort(rounded.begin(), rounded.end());
        rounded.erase(std::unique(rounded.begin(), rounded.end()), rounded.end());
        if (rounded.size() > kCodebookMaxEntries)
            throw ValueError("attribute '" + label + "' has " + std::to_string(rounded.size()) +
                             " distinct half values; exact codebooks need at most 256");
        centroids = std::move(rounded);
    } else {
        centroids = kmeans_1d(pool, kCodebookMaxEntries, config.kmeans, label);
    }
    Codebook book = finalize_codebook(centroids, clamp_positive);

    double sse = 0.0;
    for (float v : pool) {
        const double d = static_cast<double>(v) - book.values[nearest_index(book, v)];
        sse += d * d;
    }
    book.sse = sse;
    return book;
}

} // namespace

CodebookSet build_codebooks(const std::vector<GaussianPrimitive>& primitives,
                            const QuantizeConfig& config) {
    if (primitives.empty())
        throw ValueError("cannot build codebooks for an empty scene");
    const std::size_t n = primitives.size();

    std::vector<float> opacity, scale, rot_real, rot_imag, color;
    opacity.reserve(n);
    scale.reserve(3 * n);
    rot_real.reserve(n);
    rot_imag.reserve(3 * n);
    color.reserve(3 * n);
    std::array<std::vector<float>, 15> sh_pools;

    for (const auto& g : primitives) {
        opacity.push_back(g.opacity);
        for (int d = 0; d < 3; ++d)
            scale.push_back(g.scale[d]);
        const Vec4 q = canonical_rotation(g.rotation);
        rot_real.push_back(q[0]);
        for (int d = 0; d < 3; ++d)
            rot_imag.push_back(q[1 + d]);
        for (int d = 0; d < 3; ++d)
            color.push_back(g.base_color[d]);
        const int groups = sh_group_count(g.band_count);
        for (int grp = 0; grp < groups; ++grp)
            for (int d = 0; d < 3; ++d)
                sh_pools[static_cast<std::size_t>(grp)].push_back(g.sh(grp, d));
    }

    CodebookSet set;
    set.books[kCbOpacity] = build_one(opacity, config, "opacity", false);
    set.books[kCbScale] = build_one(scale, config, "scale", true);
    set.books[kCbRotationReal] = build_one(rot_real, config, "rotation_real", false);
    set.books[kCbRotationImag] = build_one(rot_imag, config, "rotation_imag", false);
    set.books[kCbBaseColor] = build_one(color, config, "base_color", false);
    for (int grp = 0; grp < 15; ++grp)
        set.books[static_cast<std::size_t>(kCbShGroup0 + grp)] =
            build_one(sh_pools[static_cast<std::size_t>(grp)], config, codebook_name(kCbShGroup0 + grp),
                      false);
    return set;
}

QuantizedAttributes assign_indices(const std::vector<GaussianPrimitive>& primitives,
                                   const CodebookSet& codebooks) {
    QuantizedAttributes out;
    out.offsets.resize(primitives.size() + 1);
    std::size_t total = 0;
    for (std::size_t i = 0; i < primitives.size(); ++i) {
        out.offsets[i] = total;
        total += static_cast<std::size_t>(record_index_bytes(primitives[i].band_count));
    }
    out.offsets[primitives.size()] = total;
    out.indices.resize(total);

    const auto& books = codebooks.books;
    parallel_for(primitives.size(), [&](std::size_t i) {
        const GaussianPrimitive& g = primitives[i];
        std::uint8_t* rec = out.indices.data() + out.offsets[i];
        rec[0] = nearest_index(books[kCbOpacity], g.opacity);
        for (int d = 0; d < 3; ++d)
            rec[1 + d] = nearest_index(books[kCbScale], g.scale[d]);
        const Vec4 q = canonical_rotation(g.rotation);
        rec[4] = nearest_index(books[kCbRotationReal], q[0]);
        for (int d = 0; d < 3; ++d)
            rec[5 + d] = nearest_index(books[kCbRotationImag], q[1 + d]);
        for (int d = 0; d < 3; ++d)
            rec[8 + d] = nearest_index(books[kCbBaseColor], g.base_color[d]);
        const int groups = sh_group_count(g.band_count);
        for (int grp = 0; grp < groups; ++grp)
            for (int d = 0; d < 3; ++d)
                rec[11 + 3 * grp + d] =
                    nearest_index(books[static_cast<std::size_t>(kCbShGroup0 + grp)], g.sh(grp, d));
    });
    return out;
}

void infer_minimal_bands(std::vector<GaussianPrimitive>& primitives) {
    for (auto& g : primitives) {
        int band = 0;
        for (int grp = 0; grp < sh_group_count(g.band_count); ++grp) {
            for (int d = 0; d < 3; ++d) {
                if (g.sh(grp, d) != 0.0f) {
                    band = std::max(band, band_of_group(grp));
                    break;
                }
            }
        }
        if (band < g.band_count) {
            g.sh_rest.resize(static_cast<std::size_t>(sh_rest_size(band)));
            g.band_count = band;
        }
    }
}

CompactScene quantize_scene(const Scene& scene, const QuantizeConfig& config) {
    std::vector<GaussianPrimitive> prims = scene.primitives;
    infer_minimal_bands(prims);

    CompactScene compact;
    compact.codebooks = build_codebooks(prims, config);
    const QuantizedAttributes attrs = assign_indices(prims, compact.codebooks);

    Vec3 lo = Vec3::Constant(std::numeric_limits<float>::max());
    Vec3 hi = Vec3::Constant(std::numeric_limits<float>::lowest());
    for (const auto& g : prims) {
        lo = lo.cwiseMin(g.position);
        hi = hi.cwiseMax(g.position);
    }
    // out-of-range scenes are recentred, then scaled by a power of two; both
    // are undone at decode, so only binary16 rounding of the local coordinates
    // remains
    Vec3 offset = Vec3::Zero();
    if (std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()) >= kHalfMax)
        offset = 0.5f * (lo + hi);
    float max_abs = 0.0f;
    for (const auto& g : prims)
        max_abs = std::max(max_abs, (g.position - offset).cwiseAbs().maxCoeff());
    float scale = 1.0f;
    while (max_abs / scale >= kHalfMax)
        scale *= 2.0f;
    compact.position_scale = scale;
    compact.position_offset = offset;

    for (std::size_t i = 0; i < prims.size(); ++i) {
        const GaussianPrimitive& g = prims[i];
        CompactSet& set = compact.sets[static_cast<std::size_t>(g.band_count)];
        std::array<std::uint16_t, 3> pos;
        for (int d = 0; d < 3; ++d)
            pos[static_cast<std::size_t>(d)] = float_to_half((g.position[d] - offset[d]) / scale);
        set.positions.push_back(pos);
        const std::uint8_t* rec = attrs.indices.data() + attrs.offsets[i];
        set.indices.insert(set.indices.end(), rec,
                           rec + record_index_bytes(g.band_count));
    }
    return compact;
}

} // namespace rgs
