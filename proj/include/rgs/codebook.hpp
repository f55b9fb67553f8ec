#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rgs {

inline constexpr int kCodebookCount = 20;
inline constexpr int kCodebookMaxEntries = 256;

// Codebook ids: opacity, shared scale components, quaternion real part,
// shared quaternion imaginary components, shared base-color channels, then
// one per 3-channel SH coefficient group.
enum CodebookId : int {
    kCbOpacity = 0,
    kCbScale = 1,
    kCbRotationReal = 2,
    kCbRotationImag = 3,
    kCbBaseColor = 4,
    kCbShGroup0 = 5, // group g lives at kCbShGroup0 + g
};

std::string codebook_name(int id);

// Scalar codebook. Entries are binary16 (stored bits plus their widened float
// values) sorted ascending by value.
struct Codebook {
    std::vector<std::uint16_t> entries; // half bits
    std::vector<float> values;          // widened, same order
    bool used = true;                   // false for the 1-entry placeholder of an empty pool
    double sse = 0.0;                   // within-cluster SSE recorded at build time

    std::size_t size() const { return entries.size(); }
};

struct CodebookSet {
    std::array<Codebook, kCodebookCount> books;

    std::size_t total_entries() const;
};

// Index of the entry nearest to `value` (absolute distance, ties to the lower
// centroid).
std::uint8_t nearest_index(const Codebook& book, float value);

} // namespace rgs
