#include <doctest.h>

#include <cmath>

#include "rgs/image.hpp"

using namespace rgs;

namespace {

RenderedImage constant_image(int w, int h, float value) {
    RenderedImage img(w, h);
    for (auto& v : img.rgb)
        v = value;
    return img;
}

} // namespace

TEST_CASE("metrics: identical images give SSIM 1 and infinite PSNR") {
    const RenderedImage img = constant_image(32, 32, 0.3f);
    CHECK(std::isinf(psnr(img, img)));
    CHECK(ssim(img, img) == doctest::Approx(1.0));
}

TEST_CASE("metrics: 0.5 vs 0.75 constant images give PSNR ~12.04 dB") {
    const RenderedImage a = constant_image(16, 16, 0.5f);
    const RenderedImage b = constant_image(16, 16, 0.75f);
    // MSE = 0.0625 -> 10*log10(1/0.0625)
    CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(1.0 / 0.0625)).epsilon(1e-6));
    CHECK(psnr(a, b) == doctest::Approx(12.0412).epsilon(1e-4));
}

TEST_CASE("metrics: constant-image SSIM matches the zero-variance closed form") {
    const double mu_a = 0.25, mu_b = 0.6;
    const RenderedImage a = constant_image(24, 24, static_cast<float>(mu_a));
    const RenderedImage b = constant_image(24, 24, static_cast<float>(mu_b));
    const double c1 = 0.01 * 0.01;
    const double expected = (2 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
    CHECK(ssim(a, b) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("metrics: SSIM is symmetric and bounded") {
    RenderedImage a(20, 20), b(20, 20);
    for (int y = 0; y < 20; ++y) {
        for (int x = 0; x < 20; ++x) {
            for (int c = 0; c < 3; ++c) {
                a.at(x, y, c) = 0.5f + 0.5f * std::sin(0.3f * x + c);
                b.at(x, y, c) = 0.5f + 0.4f * std::cos(0.2f * y - c);
            }
        }
    }
    const double s1 = ssim(a, b), s2 = ssim(b, a);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
    CHECK(s1 <= 1.0);
    CHECK(s1 >= -1.0);
}

TEST_CASE("metrics: dimension mismatch throws") {
    const RenderedImage a = constant_image(8, 8, 0.1f);
    const RenderedImage b = constant_image(8, 9, 0.1f);
    CHECK_THROWS(psnr(a, b));
    CHECK_THROWS(ssim(a, b));
}
