#include "rgs/codebook.hpp"

#include <algorithm>

#include "rgs/error.hpp"

namespace rgs {

std::string codebook_name(int id) {
    switch (id) {
    case kCbOpacity: return "opacity";
    case kCbScale: return "scale";
    case kCbRotationReal: return "rotation_real";
    case kCbRotationImag: return "rotation_imag";
    case kCbBaseColor: return "base_color";
    default: break;
    }
    if (id >= kCbShGroup0 && id < kCodebookCount)
        return "sh_group_" + std::to_string(id - kCbShGroup0);
    return "codebook_" + std::to_string(id);
}

std::size_t CodebookSet::total_entries() const {
    std::size_t total = 0;
    for (const auto& b : books)
        total += b.entries.size();
    return total;
}

std::uint8_t nearest_index(const Codebook& book, float value) {
    const auto& vals = book.values;
    if (vals.empty())
        throw ValueError("nearest_index on empty codebook");
    const auto it = std::lower_bound(vals.begin(), vals.end(), value);
    if (it == vals.begin())
        return 0;
    if (it == vals.end())
        return static_cast<std::uint8_t>(vals.size() - 1);
    const std::size_t hi = static_cast<std::size_t>(it - vals.begin());
    const std::size_t lo = hi - 1;
    // ties go to the lower centroid
    return value - vals[lo] <= vals[hi] - value ? static_cast<std::uint8_t>(lo)
                                                : static_cast<std::uint8_t>(hi);
}

} // namespace rgs
