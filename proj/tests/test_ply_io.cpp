#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "rgs/error.hpp"
#include "rgs/ply_io.hpp"
#include "test_util.hpp"

using namespace rgs;

namespace {

int float_ulp_distance(float a, float b) {
    if (a == b)
        return 0;
    std::int32_t ia, ib;
    std::memcpy(&ia, &a, 4);
    std::memcpy(&ib, &b, 4);
    if (ia < 0)
        ia = std::numeric_limits<std::int32_t>::min() - ia;
    if (ib < 0)
        ib = std::numeric_limits<std::int32_t>::min() - ib;
    const std::int64_t d = static_cast<std::int64_t>(ia) - ib;
    return static_cast<int>(d < 0 ? -d : d);
}

std::string write_to_string(const std::vector<GaussianPrimitive>& prims) {
    std::ostringstream out(std::ios::binary);
    write_3dgs_ply(prims, out);
    return out.str();
}

std::vector<GaussianPrimitive> read_from_string(const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return read_3dgs_ply(in);
}

} // namespace

TEST_CASE("ply: stored activations") {
    GaussianPrimitive g;
    g.opacity = 0.5f;           // logit(0.5) = 0
    g.scale = Vec3(1, 1, 1);     // log(1) = 0
    g.band_count = 3;
    g.sh_rest.assign(45, 0.25f);

    const std::string bytes = write_to_string({g});
    // stored opacity and scale fields are zero
    const auto prims = read_from_string(bytes);
    REQUIRE(prims.size() == 1);
    CHECK(prims[0].opacity == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(prims[0].scale[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(prims[0].float_count() == 59);
}

TEST_CASE("ply: two-primitive file reports 59 floats per primitive") {
    std::mt19937_64 rng(3);
    std::vector<GaussianPrimitive> prims{testutil::random_primitive(rng),
                                         testutil::random_primitive(rng)};
    const auto back = read_from_string(write_to_string(prims));
    REQUIRE(back.size() == 2);
    for (const auto& g : back)
        CHECK(g.float_count() == 59);
}

TEST_CASE("ply: round trip is identity within one ULP per field") {
    std::mt19937_64 rng(4);
    std::vector<GaussianPrimitive> prims;
    for (int i = 0; i < 200; ++i)
        prims.push_back(testutil::random_primitive(rng));
    // include activation extremes
    prims[0].opacity = 1e-5f;
    prims[1].opacity = 0.99999f;
    prims[2].scale = Vec3(1e-4f, 12.0f, 0.3f);

    auto canonical = prims;
    canonicalize_like_storage(canonical);
    const auto back = read_from_string(write_to_string(canonical));
    REQUIRE(back.size() == canonical.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        for (int d = 0; d < 3; ++d) {
            CHECK(float_ulp_distance(back[i].position[d], canonical[i].position[d]) <= 1);
            CHECK(float_ulp_distance(back[i].scale[d], canonical[i].scale[d]) <= 1);
            CHECK(float_ulp_distance(back[i].base_color[d], canonical[i].base_color[d]) <= 1);
        }
        CHECK(float_ulp_distance(back[i].opacity, canonical[i].opacity) <= 1);
        for (int d = 0; d < 4; ++d)
            CHECK(float_ulp_distance(back[i].rotation[d], canonical[i].rotation[d]) <= 1);
        for (std::size_t j = 0; j < 45; ++j)
            CHECK(back[i].sh_rest[j] == canonical[i].sh_rest[j]);
    }
}

TEST_CASE("ply: band-0 primitive writes 45 zero f_rest values") {
    GaussianPrimitive g;
    g.band_count = 0;
    g.base_color = Vec3(0.3f, 0.2f, 0.1f);
    const auto back = read_from_string(write_to_string({g}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].band_count == 3); // reader always sees the full layout
    for (float v : back[0].sh_rest)
        CHECK(v == 0.0f);
}

TEST_CASE("ply: opacity 0 and 1 are clamped with a warning count") {
    GaussianPrimitive a, b;
    a.opacity = 0.0f;
    b.opacity = 1.0f;
    std::ostringstream out(std::ios::binary);
    const PlyWriteStats stats = write_3dgs_ply({a, b}, out);
    CHECK(stats.clamped_opacities == 2);
    const auto back = read_from_string(out.str());
    CHECK(back[0].opacity > 0.0f);
    CHECK(back[1].opacity < 1.0f);
}

TEST_CASE("ply: missing field errors name the field") {
    std::ostringstream out(std::ios::binary);
    out << "ply\nformat binary_little_endian 1.0\nelement vertex 0\n";
    out << "property float x\nproperty float y\nproperty float z\nend_header\n";
    CHECK_THROWS_WITH_AS(read_from_string(out.str()),
                         doctest::Contains("missing required field 'nx'"), FormatError);
}

TEST_CASE("ply: non-float property errors name the field") {
    std::mt19937_64 rng(5);
    std::string good = write_to_string({testutil::random_primitive(rng)});
    const std::string needle = "property float opacity";
    const auto pos = good.find(needle);
    REQUIRE(pos != std::string::npos);
    good.replace(pos, needle.size(), "property uchar opacity");
    CHECK_THROWS_WITH_AS(read_from_string(good), doctest::Contains("'opacity'"), FormatError);
}

TEST_CASE("ply: wrong element count reports truncation") {
    std::mt19937_64 rng(6);
    std::string good = write_to_string({testutil::random_primitive(rng)});
    const std::string needle = "element vertex 1";
    good.replace(good.find(needle), needle.size(), "element vertex 9");
    CHECK_THROWS_AS(read_from_string(good), FormatError);
}

TEST_CASE("ply: arbitrary byte inputs never crash") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> len(0, 400);
    const std::string valid = write_to_string({testutil::random_primitive(rng)});

    for (int trial = 0; trial < 300; ++trial) {
        std::string bytes;
        if (trial % 3 == 0) {
            // mutated valid file
            bytes = valid;
            const std::size_t flips = 1 + static_cast<std::size_t>(byte(rng)) % 16;
            for (std::size_t f = 0; f < flips; ++f)
                bytes[static_cast<std::size_t>(rng() % bytes.size())] =
                    static_cast<char>(byte(rng));
        } else if (trial % 3 == 1) {
            bytes = valid.substr(0, static_cast<std::size_t>(rng() % (valid.size() + 1)));
        } else {
            const int count = len(rng);
            for (int i = 0; i < count; ++i)
                bytes.push_back(static_cast<char>(byte(rng)));
        }
        try {
            (void)read_from_string(bytes);
        } catch (const FormatError&) {
        } catch (const ValueError&) {
        }
    }
}
