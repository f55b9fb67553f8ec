#include <doctest.h>

#include <Eigen/Geometry>
#include <fstream>

#include "rgs/cameras.hpp"
#include "rgs/error.hpp"
#include "test_util.hpp"

using namespace rgs;

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("cameras: COLMAP text pair with identity pose") {
    testutil::TempDir dir("colmap_identity");
    write_file(dir.path() / "cameras.txt",
               "# comment\n1 PINHOLE 640 480 500 510 320 240\n");
    write_file(dir.path() / "images.txt",
               "# two lines per image\n1 1 0 0 0 0 0 0 1 img.png\n\n");
    const auto views = read_cameras(dir.path());
    REQUIRE(views.size() == 1);
    CHECK((views[0].rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6f);
    CHECK(views[0].translation.norm() == 0.0f);
    CHECK(views[0].focal_x == 500.0f);
    CHECK(views[0].focal_y == 510.0f);
    CHECK(views[0].width == 640);
}

TEST_CASE("cameras: SIMPLE_PINHOLE maps f to both focals") {
    testutil::TempDir dir("colmap_simple");
    write_file(dir.path() / "cameras.txt", "1 SIMPLE_PINHOLE 100 80 100 50 40\n");
    write_file(dir.path() / "images.txt", "1 1 0 0 0 0.5 -1 2 1 a.png\n\n");
    const auto views = read_cameras(dir.path());
    REQUIRE(views.size() == 1);
    CHECK(views[0].focal_x == 100.0f);
    CHECK(views[0].focal_y == 100.0f);
    CHECK(views[0].translation[0] == doctest::Approx(0.5));
}

TEST_CASE("cameras: quaternion (0.7071,0,0.7071,0) is a 90 degree rotation about +y") {
    testutil::TempDir dir("colmap_rot");
    write_file(dir.path() / "cameras.txt", "1 SIMPLE_PINHOLE 64 64 50 32 32\n");
    write_file(dir.path() / "images.txt", "1 0.7071068 0 0.7071068 0 0 0 0 1 a.png\n\n");
    const auto views = read_cameras(dir.path());
    REQUIRE(views.size() == 1);
    const Eigen::Matrix3f expected =
        Eigen::AngleAxisf(static_cast<float>(M_PI) / 2.0f, Eigen::Vector3f::UnitY())
            .toRotationMatrix();
    CHECK((views[0].rotation - expected).cwiseAbs().maxCoeff() < 1e-4f);
}

TEST_CASE("cameras: unknown model rejected") {
    testutil::TempDir dir("colmap_badmodel");
    write_file(dir.path() / "cameras.txt", "1 OPENCV 640 480 500 500 320 240 0 0 0 0\n");
    write_file(dir.path() / "images.txt", "1 1 0 0 0 0 0 0 1 a.png\n\n");
    CHECK_THROWS_WITH_AS(read_cameras(dir.path()), doctest::Contains("OPENCV"), FormatError);
}

TEST_CASE("cameras: off-unit quaternion rejected") {
    testutil::TempDir dir("colmap_badquat");
    write_file(dir.path() / "cameras.txt", "1 SIMPLE_PINHOLE 64 64 50 32 32\n");
    write_file(dir.path() / "images.txt", "1 1.01 0 0 0 0 0 0 1 a.png\n\n");
    CHECK_THROWS_AS(read_cameras(dir.path()), FormatError);
}

TEST_CASE("cameras: image entries come back ordered by id") {
    testutil::TempDir dir("colmap_order");
    write_file(dir.path() / "cameras.txt", "1 SIMPLE_PINHOLE 64 64 50 32 32\n");
    write_file(dir.path() / "images.txt",
               "7 1 0 0 0 7 0 0 1 g.png\n\n2 1 0 0 0 2 0 0 1 b.png\n\n");
    const auto views = read_cameras(dir.path());
    REQUIRE(views.size() == 2);
    CHECK(views[0].translation[0] == 2.0f);
    CHECK(views[1].translation[0] == 7.0f);
}

TEST_CASE("cameras: JSON rig with quaternion and defaults") {
    testutil::TempDir dir("json_rig");
    write_file(dir.path() / "rig.json", R"({
      "cameras": [
        {"width": 320, "height": 240, "f": 200,
         "quaternion": [1, 0, 0, 0], "translation": [0, 0, 4]}
      ]
    })");
    const auto views = read_cameras(dir.path() / "rig.json");
    REQUIRE(views.size() == 1);
    CHECK(views[0].principal_x == 160.0f);
    CHECK(views[0].translation[2] == 4.0f);
}

TEST_CASE("cameras: JSON rig rejects malformed rotation") {
    testutil::TempDir dir("json_bad");
    write_file(dir.path() / "rig.json", R"({
      "cameras": [
        {"width": 320, "height": 240, "fx": 200, "fy": 200,
         "rotation": [1, 0, 0, 0, 1, 0, 0, 0], "translation": [0, 0, 0]}
      ]
    })");
    CHECK_THROWS_AS(read_cameras(dir.path() / "rig.json"), FormatError);
}

TEST_CASE("cameras: COLMAP writer round trip") {
    testutil::TempDir dir("colmap_roundtrip");
    std::vector<CameraView> views;
    views.push_back(testutil::look_at(Vec3(5, 2, 3), Vec3(0, 0, 0), 128, 96, 140.0f));
    views.push_back(testutil::look_at(Vec3(-4, 1, -2), Vec3(0.5f, 0, 0), 128, 96, 140.0f));
    write_colmap_rig(views, dir.path());
    const auto back = read_cameras(dir.path());
    REQUIRE(back.size() == views.size());
    for (std::size_t i = 0; i < views.size(); ++i) {
        CHECK((back[i].rotation - views[i].rotation).cwiseAbs().maxCoeff() < 1e-5f);
        CHECK((back[i].translation - views[i].translation).norm() < 1e-5f);
        CHECK(back[i].focal_x == views[i].focal_x);
    }
}
