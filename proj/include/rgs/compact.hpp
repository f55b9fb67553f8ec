#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rgs/codebook.hpp"
#include "rgs/types.hpp"

namespace rgs {

inline constexpr std::array<char, 4> kCompactMagic{'R', 'G', 'S', '1'};
inline constexpr std::uint32_t kCompactVersion = 1;

// Attribute-index bytes per primitive record: opacity, scale x3, rotation
// real, rotation imaginary x3, base color x3, then 3 per SH group present.
constexpr int record_index_bytes(int band_count) { return 11 + 3 * sh_group_count(band_count); }
constexpr int record_stride(int band_count) { return 6 + record_index_bytes(band_count); }

// One band partition: positions as packed binary16 triples plus flat
// attribute-index records (record_index_bytes(band) per primitive).
struct CompactSet {
    std::vector<std::array<std::uint16_t, 3>> positions;
    std::vector<std::uint8_t> indices;

    std::size_t count() const { return positions.size(); }
};

// Quantized scene: four band partitions, 20 codebooks, half-float positions.
// Decoded position = widen(half) * position_scale + position_offset; scenes
// whose raw positions exceed the binary16 range are recentred and rescaled
// (power-of-two scale) at encode time, a similarity transform undone here.
struct CompactScene {
    std::array<CompactSet, 4> sets; // ordered by band count ascending
    CodebookSet codebooks;
    float position_scale = 1.0f;
    Vec3 position_offset = Vec3::Zero();

    std::size_t primitive_count() const {
        return sets[0].count() + sets[1].count() + sets[2].count() + sets[3].count();
    }
};

// Full byte-level layout in docs/rgs_format.md. Little-endian throughout.
std::vector<std::uint8_t> encode_compact(const CompactScene& scene);
CompactScene parse_compact(std::span<const std::uint8_t> bytes);

// Codebook lookups widened back to primitives. band_count comes from the set
// each record belongs to; rotations are returned as raw codebook values
// (consumers normalize).
std::vector<GaussianPrimitive> expand_compact(const CompactScene& scene);
std::vector<GaussianPrimitive> decode_compact(std::span<const std::uint8_t> bytes);

void write_compact_file(const CompactScene& scene, const std::filesystem::path& path);
CompactScene read_compact_file(const std::filesystem::path& path);

} // namespace rgs
