#include "rgs/sh.hpp"

namespace rgs {

namespace {

constexpr float kC1 = 0.4886025119029199f;
constexpr float kC2[5] = {1.0925484305920792f, -1.0925484305920792f, 0.31539156525252005f,
                          -1.0925484305920792f, 0.5462742152960396f};
constexpr float kC3[7] = {-0.5900435899266435f, 2.890611442640554f,  -0.4570457994644658f,
                          0.3731763325901154f,  -0.4570457994644658f, 1.445305721320277f,
                          -0.5900435899266435f};

inline Vec3 group(const GaussianPrimitive& p, int g) {
    return Vec3(p.sh_rest[3 * g], p.sh_rest[3 * g + 1], p.sh_rest[3 * g + 2]);
}

} // namespace

std::array<Vec3, 4> eval_sh_color_progressive(const GaussianPrimitive& prim, const Vec3& dir) {
    std::array<Vec3, 4> out;
    Vec3 c = Vec3::Constant(0.5f) + kShC0 * prim.base_color;
    out[0] = c;

    const float x = dir[0], y = dir[1], z = dir[2];
    if (prim.band_count >= 1) {
        c += -kC1 * y * group(prim, 0) + kC1 * z * group(prim, 1) - kC1 * x * group(prim, 2);
    }
    out[1] = c;

    if (prim.band_count >= 2) {
        const float xx = x * x, yy = y * y, zz = z * z;
        const float xy = x * y, yz = y * z, xz = x * z;
        c += kC2[0] * xy * group(prim, 3) + kC2[1] * yz * group(prim, 4) +
             kC2[2] * (2.0f * zz - xx - yy) * group(prim, 5) + kC2[3] * xz * group(prim, 6) +
             kC2[4] * (xx - yy) * group(prim, 7);
    }
    out[2] = c;

    if (prim.band_count >= 3) {
        const float xx = x * x, yy = y * y, zz = z * z;
        const float xy = x * y;
        c += kC3[0] * y * (3.0f * xx - yy) * group(prim, 8) + kC3[1] * xy * z * group(prim, 9) +
             kC3[2] * y * (4.0f * zz - xx - yy) * group(prim, 10) +
             kC3[3] * z * (2.0f * zz - 3.0f * xx - 3.0f * yy) * group(prim, 11) +
             kC3[4] * x * (4.0f * zz - xx - yy) * group(prim, 12) +
             kC3[5] * z * (xx - yy) * group(prim, 13) +
             kC3[6] * x * (xx - 3.0f * yy) * group(prim, 14);
    }
    out[3] = c;
    return out;
}

Vec3 eval_sh_color(const GaussianPrimitive& prim, const Vec3& unit_dir, int q, bool clamp_negative) {
    const auto colors = eval_sh_color_progressive(prim, unit_dir);
    Vec3 c = colors[static_cast<std::size_t>(std::min(std::max(q, 0), kMaxBands))];
    if (clamp_negative)
        c = c.cwiseMax(0.0f);
    return c;
}

} // namespace rgs
