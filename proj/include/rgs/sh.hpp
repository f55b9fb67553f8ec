#pragma once

#include <array>

#include "rgs/types.hpp"

namespace rgs {

inline constexpr float kShC0 = 0.28209479177387814f;

// View-conditioned color in the 3DGS convention: 0.5 + C0 * dc + higher bands.
// `q` limits evaluation to the first q bands (q <= primitive band count).
// Display paths clamp the result at zero; statistics use the raw value.
Vec3 eval_sh_color(const GaussianPrimitive& prim, const Vec3& unit_dir, int q,
                   bool clamp_negative = false);

// Colors for all truncation levels q = 0..3 in one sweep. Entries above the
// primitive's band count repeat the highest available truncation.
std::array<Vec3, 4> eval_sh_color_progressive(const GaussianPrimitive& prim, const Vec3& unit_dir);

} // namespace rgs
