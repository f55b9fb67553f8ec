#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "rgs/types.hpp"

namespace testutil {

// Camera at `position` looking at `target`, z-up world.
inline rgs::CameraView look_at(const rgs::Vec3& position, const rgs::Vec3& target, int width,
                               int height, float focal) {
    const rgs::Vec3 forward = (target - position).normalized();
    rgs::Vec3 up(0, 0, 1);
    if (std::abs(forward.dot(up)) > 0.99f)
        up = rgs::Vec3(0, 1, 0);
    const rgs::Vec3 right = forward.cross(up).normalized();
    const rgs::Vec3 down = forward.cross(right).normalized();

    rgs::CameraView view;
    view.rotation.row(0) = right;
    view.rotation.row(1) = down;
    view.rotation.row(2) = forward;
    view.translation = -(view.rotation * position);
    view.width = width;
    view.height = height;
    view.focal_x = view.focal_y = focal;
    view.principal_x = 0.5f * static_cast<float>(width);
    view.principal_y = 0.5f * static_cast<float>(height);
    return view;
}

inline rgs::Vec4 random_quaternion(std::mt19937_64& rng) {
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    const float u1 = unit(rng), u2 = unit(rng), u3 = unit(rng);
    const float a = std::sqrt(1.0f - u1), b = std::sqrt(u1);
    return rgs::normalized_quaternion(
        rgs::Vec4(a * std::sin(2 * static_cast<float>(M_PI) * u2),
                  a * std::cos(2 * static_cast<float>(M_PI) * u2),
                  b * std::sin(2 * static_cast<float>(M_PI) * u3),
                  b * std::cos(2 * static_cast<float>(M_PI) * u3)));
}

inline rgs::GaussianPrimitive random_primitive(std::mt19937_64& rng, int band_count = 3,
                                               float extent = 2.0f) {
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    rgs::GaussianPrimitive g;
    g.position = rgs::Vec3(extent * (2 * unit(rng) - 1), extent * (2 * unit(rng) - 1),
                           extent * (2 * unit(rng) - 1));
    g.scale = rgs::Vec3(0.05f + 0.3f * unit(rng), 0.05f + 0.3f * unit(rng),
                        0.05f + 0.3f * unit(rng));
    g.rotation = random_quaternion(rng);
    g.opacity = 0.02f + 0.96f * unit(rng);
    g.base_color = rgs::Vec3(2 * unit(rng) - 1, 2 * unit(rng) - 1, 2 * unit(rng) - 1);
    g.band_count = band_count;
    g.sh_rest.resize(static_cast<std::size_t>(rgs::sh_rest_size(band_count)));
    for (auto& v : g.sh_rest)
        v = 0.6f * (2 * unit(rng) - 1);
    return g;
}

// Unique scratch directory under the system temp path, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("rgs_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace testutil
