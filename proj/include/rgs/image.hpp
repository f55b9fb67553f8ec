#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace rgs {

// Row-major 3-channel image with values in [0, 1].
struct RenderedImage {
    int width = 0;
    int height = 0;
    std::vector<float> rgb; // 3 * width * height

    RenderedImage() = default;
    RenderedImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(3) * w * h, 0.0f) {}

    float& at(int x, int y, int c) { return rgb[3 * (static_cast<std::size_t>(y) * width + x) + c]; }
    float at(int x, int y, int c) const {
        return rgb[3 * (static_cast<std::size_t>(y) * width + x) + c];
    }
};

// 8-bit RGB PNG. By default values map straight to bytes (3DGS colors are
// display-referred); `srgb_encode` applies the sRGB transfer function for
// callers holding genuinely linear data. See docs/rendering.md.
void write_png(const RenderedImage& image, const std::filesystem::path& path,
               bool srgb_encode = false);

// PSNR in dB on [0, 1] images; +infinity when the images are identical.
double psnr(const RenderedImage& a, const RenderedImage& b);

// Mean SSIM: 11x11 Gaussian window, sigma 1.5, K1 = 0.01, K2 = 0.03,
// averaged over the three channels.
double ssim(const RenderedImage& a, const RenderedImage& b);

} // namespace rgs
