#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace rgs {

using Vec3 = Eigen::Vector3f;
using Vec4 = Eigen::Vector4f;
using Mat3 = Eigen::Matrix3f;

inline constexpr int kMaxBands = 3;

// SH coefficient triples above the DC term: 0, 3, 8, 15 for bands 0..3.
constexpr int sh_group_count(int band_count) { return band_count * (band_count + 2); }
constexpr int sh_rest_size(int band_count) { return 3 * sh_group_count(band_count); }
constexpr int band_of_group(int group) { return group < 3 ? 1 : (group < 8 ? 2 : 3); }

// Stored floats per primitive: 14 + 3 * sum_{i=1..N} (2i+1) = 14, 23, 38, 59.
constexpr int float_count(int band_count) { return 14 + sh_rest_size(band_count); }

struct GaussianPrimitive {
    Vec3 position = Vec3::Zero();
    Vec3 scale = Vec3::Ones();        // world-space extents, > 0 (activated)
    Vec4 rotation = Vec4(1, 0, 0, 0); // unit quaternion (w, x, y, z)
    float opacity = 1.0f;             // [0, 1] (activated)
    Vec3 base_color = Vec3::Zero();   // SH band-0 (DC) coefficients
    std::vector<float> sh_rest;       // groups above DC, [group][channel], 3 * {0,3,8,15}
    int band_count = 0;

    int float_count() const { return rgs::float_count(band_count); }
    float sh(int group, int channel) const { return sh_rest[3 * group + channel]; }
};

struct CameraView {
    Mat3 rotation = Mat3::Identity(); // world-to-camera
    Vec3 translation = Vec3::Zero();  // x_cam = rotation * x_world + translation
    float focal_x = 0, focal_y = 0;   // pixels
    float principal_x = 0, principal_y = 0;
    int width = 0, height = 0;

    Vec3 camera_center() const { return -(rotation.transpose() * translation); }

    // Uniformly rescaled copy so that max(width, height) <= max_dim.
    CameraView scaled_to_max_dim(int max_dim) const;
};

struct Scene {
    std::vector<GaussianPrimitive> primitives;
    std::vector<CameraView> views;
};

Vec4 normalized_quaternion(const Vec4& q);
Mat3 quaternion_to_matrix(const Vec4& q); // normalizes first
Vec4 canonical_rotation(const Vec4& q);   // flips sign so the real part is >= 0

// Throws ValueError when the view violates its invariants (non-orthonormal
// rotation, non-positive focal lengths or dimensions).
void validate_view(const CameraView& view);

} // namespace rgs
