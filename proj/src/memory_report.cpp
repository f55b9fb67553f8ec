#include "rgs/memory_report.hpp"

#include <iomanip>
#include <sstream>

namespace rgs {

namespace {

constexpr std::uint64_t kBaselineFloats = 59; // band-3 primitive

std::uint64_t header_bytes() {
    // magic + version + 4 counts + position scale + position offset
    return 4 + 4 + 16 + 4 + 12;
}

} // namespace

MemoryBreakdown memory_report(const std::vector<GaussianPrimitive>& primitives,
                              std::uint64_t baseline_count) {
    std::array<std::uint64_t, 4> band_counts{};
    for (const auto& g : primitives)
        ++band_counts[static_cast<std::size_t>(g.band_count)];
    return memory_report(band_counts, baseline_count);
}

MemoryBreakdown memory_report(const std::array<std::uint64_t, 4>& band_counts,
                              std::uint64_t baseline_count) {
    std::uint64_t n = 0;
    std::uint64_t sh_rest_floats = 0;
    for (int band = 0; band < 4; ++band) {
        n += band_counts[static_cast<std::size_t>(band)];
        sh_rest_floats += band_counts[static_cast<std::size_t>(band)] *
                          static_cast<std::uint64_t>(sh_rest_size(band));
    }

    MemoryBreakdown b;
    b.rows = {
        {"positions", n * 3 * 4},
        {"rotations", n * 4 * 4},
        {"scales", n * 3 * 4},
        {"opacities", n * 4},
        {"base colors", n * 3 * 4},
        {"sh rest", sh_rest_floats * 4},
    };
    for (const auto& row : b.rows)
        b.total_bytes += row.bytes;
    b.baseline_bytes = baseline_count * kBaselineFloats * 4;
    return b;
}

MemoryBreakdown memory_report(const CompactScene& compact, std::uint64_t baseline_count) {
    std::uint64_t codebook_bytes = 0;
    for (const auto& book : compact.codebooks.books)
        codebook_bytes += 2 + 2 * book.entries.size(); // u16 count + binary16 entries

    std::uint64_t positions = 0;
    std::uint64_t opacity_idx = 0, scale_idx = 0, rot_idx = 0, color_idx = 0, sh_idx = 0;
    for (int band = 0; band < 4; ++band) {
        const std::uint64_t count = compact.sets[static_cast<std::size_t>(band)].count();
        positions += count * 6;
        opacity_idx += count;
        scale_idx += count * 3;
        rot_idx += count * 4;
        color_idx += count * 3;
        sh_idx += count * 3 * static_cast<std::uint64_t>(sh_group_count(band));
    }

    MemoryBreakdown b;
    b.rows = {
        {"header", header_bytes()},
        {"codebooks", codebook_bytes},
        {"positions (f16)", positions},
        {"opacity indices", opacity_idx},
        {"scale indices", scale_idx},
        {"rotation indices", rot_idx},
        {"base color indices", color_idx},
        {"sh indices", sh_idx},
    };
    for (const auto& row : b.rows)
        b.total_bytes += row.bytes;
    b.baseline_bytes = baseline_count * kBaselineFloats * 4;
    return b;
}

std::string format_table(const MemoryBreakdown& b) {
    std::ostringstream out;
    out << std::fixed;
    for (const auto& row : b.rows) {
        out << "  " << std::left << std::setw(20) << row.label << std::right << std::setw(14)
            << row.bytes << " B  (" << std::setprecision(2)
            << static_cast<double>(row.bytes) / 1e6 << " MB)\n";
    }
    out << "  " << std::left << std::setw(20) << "total" << std::right << std::setw(14)
        << b.total_bytes << " B  (" << std::setprecision(2)
        << static_cast<double>(b.total_bytes) / 1e6 << " MB)\n";
    out << "  " << std::left << std::setw(20) << "baseline" << std::right << std::setw(14)
        << b.baseline_bytes << " B  (gain x" << std::setprecision(1) << b.gain() << ")\n";
    return out.str();
}

std::string format_csv(const MemoryBreakdown& b) {
    std::ostringstream out;
    out << "label,bytes\n";
    for (const auto& row : b.rows)
        out << row.label << ',' << row.bytes << '\n';
    out << "total," << b.total_bytes << '\n';
    out << "baseline," << b.baseline_bytes << '\n';
    return out.str();
}

} // namespace rgs
