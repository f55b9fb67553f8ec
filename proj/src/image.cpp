#include "rgs/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <png.h>

#include "rgs/error.hpp"

namespace rgs {

namespace {

std::uint8_t to_byte(float v, bool srgb_encode) {
    float x = std::clamp(v, 0.0f, 1.0f);
    if (srgb_encode)
        x = x <= 0.0031308f ? 12.92f * x : 1.055f * std::pow(x, 1.0f / 2.4f) - 0.055f;
    return static_cast<std::uint8_t>(std::lround(x * 255.0f));
}

void check_dims(const RenderedImage& a, const RenderedImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw ValueError("image dimensions differ");
    if (a.width <= 0 || a.height <= 0)
        throw ValueError("empty image");
}

} // namespace

void write_png(const RenderedImage& image, const std::filesystem::path& path, bool srgb_encode) {
    if (image.width <= 0 || image.height <= 0)
        throw ValueError("cannot write empty image");
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp)
        throw FormatError("cannot create '" + path.string() + "'");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png)
            png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw FormatError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw FormatError("libpng write failure for '" + path.string() + "'");
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(3) * image.width);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < 3; ++c)
                row[static_cast<std::size_t>(3 * x + c)] = to_byte(image.at(x, y, c), srgb_encode);
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

double psnr(const RenderedImage& a, const RenderedImage& b) {
    check_dims(a, b);
    double se = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = static_cast<double>(a.rgb[i]) - b.rgb[i];
        se += d * d;
    }
    const double mse = se / static_cast<double>(a.rgb.size());
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const RenderedImage& a, const RenderedImage& b) {
    check_dims(a, b);
    constexpr double kC1 = 0.01 * 0.01;
    constexpr double kC2 = 0.03 * 0.03;

    int window = std::min({11, a.width, a.height});
    if (window % 2 == 0)
        --window;
    const int half = window / 2;

    // Gaussian weights, sigma 1.5, normalized over the window.
    std::vector<double> weights(static_cast<std::size_t>(window) * window);
    double wsum = 0.0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
            const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
            weights[static_cast<std::size_t>((dy + half) * window + dx + half)] = w;
            wsum += w;
        }
    }
    for (double& w : weights)
        w /= wsum;

    double total = 0.0;
    std::size_t samples = 0;
    for (int c = 0; c < 3; ++c) {
        for (int y = half; y < a.height - half; ++y) {
            for (int x = half; x < a.width - half; ++x) {
                double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
                for (int dy = -half; dy <= half; ++dy) {
                    for (int dx = -half; dx <= half; ++dx) {
                        const double w =
                            weights[static_cast<std::size_t>((dy + half) * window + dx + half)];
                        const double va = a.at(x + dx, y + dy, c);
                        const double vb = b.at(x + dx, y + dy, c);
                        mu_a += w * va;
                        mu_b += w * vb;
                        aa += w * va * va;
                        bb += w * vb * vb;
                        ab += w * va * vb;
                    }
                }
                const double var_a = aa - mu_a * mu_a;
                const double var_b = bb - mu_b * mu_b;
                const double cov = ab - mu_a * mu_b;
                const double s = ((2 * mu_a * mu_b + kC1) * (2 * cov + kC2)) /
                                 ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
                total += s;
                ++samples;
            }
        }
    }
    return samples ? total / static_cast<double>(samples) : 1.0;
}

} // namespace rgs
