#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgs/compact.hpp"
#include "rgs/types.hpp"

namespace rgs {

// Byte accounting. The baseline is a 59-float-per-primitive scene of
// `baseline_count` primitives (the pre-pruning count).
struct MemoryBreakdown {
    struct Row {
        std::string label;
        std::uint64_t bytes = 0;
    };
    std::vector<Row> rows;
    std::uint64_t total_bytes = 0;
    std::uint64_t baseline_bytes = 0;

    double gain() const {
        return total_bytes ? static_cast<double>(baseline_bytes) / static_cast<double>(total_bytes)
                           : 0.0;
    }
};

MemoryBreakdown memory_report(const std::vector<GaussianPrimitive>& primitives,
                              std::uint64_t baseline_count);
// Counts-only variant: primitives per band 0..3.
MemoryBreakdown memory_report(const std::array<std::uint64_t, 4>& band_counts,
                              std::uint64_t baseline_count);
MemoryBreakdown memory_report(const CompactScene& compact, std::uint64_t baseline_count);

std::string format_table(const MemoryBreakdown& breakdown);
std::string format_csv(const MemoryBreakdown& breakdown);

} // namespace rgs
