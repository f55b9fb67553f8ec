#include "rgs/types.hpp"

#include <cmath>

#include "rgs/error.hpp"

namespace rgs {

Vec4 normalized_quaternion(const Vec4& q) {
    const double n = std::sqrt(static_cast<double>(q[0]) * q[0] + static_cast<double>(q[1]) * q[1] +
                               static_cast<double>(q[2]) * q[2] + static_cast<double>(q[3]) * q[3]);
    if (!(n > 0.0) || !std::isfinite(n))
        throw ValueError("cannot normalize quaternion with zero or non-finite norm");
    return Vec4(static_cast<float>(q[0] / n), static_cast<float>(q[1] / n),
                static_cast<float>(q[2] / n), static_cast<float>(q[3] / n));
}

Mat3 quaternion_to_matrix(const Vec4& q) {
    const Vec4 u = normalized_quaternion(q);
    const float w = u[0], x = u[1], y = u[2], z = u[3];
    Mat3 r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
}

Vec4 canonical_rotation(const Vec4& q) {
    return q[0] < 0.0f ? Vec4(-q[0], -q[1], -q[2], -q[3]) : q;
}

CameraView CameraView::scaled_to_max_dim(int max_dim) const {
    CameraView out = *this;
    const int dim = std::max(width, height);
    if (max_dim <= 0 || dim <= max_dim)
        return out;
    const float s = static_cast<float>(max_dim) / static_cast<float>(dim);
    out.width = std::max(1, static_cast<int>(std::lround(width * s)));
    out.height = std::max(1, static_cast<int>(std::lround(height * s)));
    out.focal_x = focal_x * s;
    out.focal_y = focal_y * s;
    out.principal_x = principal_x * s;
    out.principal_y = principal_y * s;
    return out;
}

void validate_view(const CameraView& view) {
    if (view.width <= 0 || view.height <= 0)
        throw ValueError("camera has non-positive image dimensions");
    if (!(view.focal_x > 0) || !(view.focal_y > 0))
        throw ValueError("camera has non-positive focal length");
    const Mat3 err = view.rotation * view.rotation.transpose() - Mat3::Identity();
    if (err.cwiseAbs().maxCoeff() > 2e-6f)
        throw ValueError("camera rotation is not orthonormal");
    if (!view.translation.allFinite() || !view.rotation.allFinite())
        throw ValueError("camera pose has non-finite values");
}

} // namespace rgs
