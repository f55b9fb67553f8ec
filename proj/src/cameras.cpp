#include "rgs/cameras.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rgs/error.hpp"

namespace rgs {

namespace {

struct Intrinsics {
    float fx = 0, fy = 0, cx = 0, cy = 0;
    int width = 0, height = 0;
};

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#')
            return true;
        if (!std::isspace(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

std::map<int, Intrinsics> read_colmap_cameras(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw FormatError("cannot open '" + file.string() + "'");
    std::map<int, Intrinsics> cams;
    std::string line;
    while (std::getline(in, line)) {
        if (is_comment_or_blank(line))
            continue;
        std::istringstream ls(line);
        int cam_id = 0, width = 0, height = 0;
        std::string model;
        if (!(ls >> cam_id >> model >> width >> height))
            throw FormatError("malformed camera line '" + line + "' in " + file.string());
        Intrinsics cam;
        cam.width = width;
        cam.height = height;
        if (model == "PINHOLE") {
            if (!(ls >> cam.fx >> cam.fy >> cam.cx >> cam.cy))
                throw FormatError("PINHOLE camera " + std::to_string(cam_id) + " needs 4 parameters");
        } else if (model == "SIMPLE_PINHOLE") {
            float f = 0;
            if (!(ls >> f >> cam.cx >> cam.cy))
                throw FormatError("SIMPLE_PINHOLE camera " + std::to_string(cam_id) +
                                  " needs 3 parameters");
            cam.fx = cam.fy = f;
        } else {
            throw FormatError("unknown camera model '" + model +
                              "' (only PINHOLE and SIMPLE_PINHOLE accepted)");
        }
        cams[cam_id] = cam;
    }
    if (cams.empty())
        throw FormatError("no cameras found in " + file.string());
    return cams;
}

CameraView make_view(const Vec4& q, const Vec3& t, const Intrinsics& cam) {
    const double norm = std::sqrt(static_cast<double>(q[0]) * q[0] + static_cast<double>(q[1]) * q[1] +
                                  static_cast<double>(q[2]) * q[2] + static_cast<double>(q[3]) * q[3]);
    if (std::abs(norm - 1.0) > 1e-3)
        throw FormatError("image quaternion norm deviates from 1 by more than 1e-3");
    CameraView view;
    view.rotation = quaternion_to_matrix(q);
    view.translation = t;
    view.focal_x = cam.fx;
    view.focal_y = cam.fy;
    view.principal_x = cam.cx;
    view.principal_y = cam.cy;
    view.width = cam.width;
    view.height = cam.height;
    validate_view(view);
    return view;
}

std::vector<CameraView> read_colmap_rig(const std::filesystem::path& cameras_file,
                                        const std::filesystem::path& images_file) {
    const auto cams = read_colmap_cameras(cameras_file);

    std::ifstream in(images_file);
    if (!in)
        throw FormatError("cannot open '" + images_file.string() + "'");

    std::map<int, CameraView> views; // ordered by image id
    std::string line;
    while (std::getline(in, line)) {
        if (is_comment_or_blank(line))
            continue;
        std::istringstream ls(line);
        int image_id = 0, cam_id = 0;
        double qw, qx, qy, qz, tx, ty, tz;
        std::string name;
        if (!(ls >> image_id >> qw >> qx >> qy >> qz >> tx >> ty >> tz >> cam_id))
            throw FormatError("malformed image line '" + line + "' in " + images_file.string());
        ls >> name; // optional trailing file name
        auto it = cams.find(cam_id);
        if (it == cams.end())
            throw FormatError("image " + std::to_string(image_id) + " references unknown camera " +
                              std::to_string(cam_id));
        views[image_id] = make_view(
            Vec4(static_cast<float>(qw), static_cast<float>(qx), static_cast<float>(qy),
                 static_cast<float>(qz)),
            Vec3(static_cast<float>(tx), static_cast<float>(ty), static_cast<float>(tz)), it->second);
        // the second line per image holds 2D point observations; skip it
        std::getline(in, line);
    }
    if (views.empty())
        throw FormatError("no images found in " + images_file.string());

    std::vector<CameraView> out;
    out.reserve(views.size());
    for (auto& [id, v] : views)
        out.push_back(v);
    return out;
}

std::vector<CameraView> read_json_rig(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw FormatError("cannot open '" + file.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid JSON rig: ") + e.what());
    }
    if (!doc.contains("cameras") || !doc["cameras"].is_array())
        throw FormatError("JSON rig must contain a 'cameras' array");

    std::vector<CameraView> views;
    for (const auto& c : doc["cameras"]) {
        try {
            Intrinsics cam;
            cam.width = c.at("width").get<int>();
            cam.height = c.at("height").get<int>();
            if (c.contains("f")) {
                cam.fx = cam.fy = c.at("f").get<float>();
            } else {
                cam.fx = c.at("fx").get<float>();
                cam.fy = c.at("fy").get<float>();
            }
            cam.cx = c.contains("cx") ? c.at("cx").get<float>() : 0.5f * static_cast<float>(cam.width);
            cam.cy = c.contains("cy") ? c.at("cy").get<float>() : 0.5f * static_cast<float>(cam.height);

            const auto t = c.at("translation");
            const Vec3 translation(t.at(0).get<float>(), t.at(1).get<float>(), t.at(2).get<float>());

            if (c.contains("quaternion")) {
                const auto& q = c.at("quaternion");
                views.push_back(make_view(Vec4(q.at(0).get<float>(), q.at(1).get<float>(),
                                               q.at(2).get<float>(), q.at(3).get<float>()),
                                          translation, cam));
            } else {
                const auto& r = c.at("rotation");
                if (!r.is_array() || r.size() != 9)
                    throw FormatError("'rotation' must hold 9 row-major values");
                CameraView view;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        view.rotation(i, j) = r.at(static_cast<std::size_t>(3 * i + j)).get<float>();
                view.translation = translation;
                view.focal_x = cam.fx;
                view.focal_y = cam.fy;
                view.principal_x = cam.cx;
                view.principal_y = cam.cy;
                view.width = cam.width;
                view.height = cam.height;
                validate_view(view);
                views.push_back(view);
            }
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("invalid JSON camera entry: ") + e.what());
        }
    }
    if (views.empty())
        throw FormatError("JSON rig holds no cameras");
    return views;
}

} // namespace

std::vector<CameraView> read_cameras(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (fs::is_directory(path)) {
        const fs::path cams = path / "cameras.txt";
        const fs::path imgs = path / "images.txt";
        if (!fs::exists(cams) || !fs::exists(imgs))
            throw FormatError("directory '" + path.string() +
                              "' does not hold cameras.txt and images.txt");
        return read_colmap_rig(cams, imgs);
    }
    if (path.extension() == ".json")
        return read_json_rig(path);
    const std::string name = path.filename().string();
    if (name == "cameras.txt" || name == "images.txt") {
        const fs::path dir = path.parent_path();
        return read_colmap_rig(dir / "cameras.txt", dir / "images.txt");
    }
    throw FormatError("unrecognized camera rig path '" + path.string() +
                      "' (expected a COLMAP text directory or a .json rig)");
}

void write_colmap_rig(const std::vector<CameraView>& views, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    std::ofstream cams(dir / "cameras.txt");
    std::ofstream imgs(dir / "images.txt");
    if (!cams || !imgs)
        throw FormatError("cannot create COLMAP rig files in '" + dir.string() + "'");

    cams << "# Camera list with one line of data per camera:\n";
    cams << "#   CAMERA_ID, MODEL, WIDTH, HEIGHT, PARAMS[]\n";
    imgs << "# Image list with two lines of data per image:\n";
    imgs << "#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n";
    imgs << "#   POINTS2D[] as (X, Y, POINT3D_ID)\n";

    cams.precision(10);
    imgs.precision(10);
    for (std::size_t i = 0; i < views.size(); ++i) {
        const CameraView& v = views[i];
        const int id = static_cast<int>(i) + 1;
        cams << id << " PINHOLE " << v.width << " " << v.height << " " << v.focal_x << " "
             << v.focal_y << " " << v.principal_x << " " << v.principal_y << "\n";

        // rotation matrix back to (w, x, y, z); the trace is positive for the
        // rigs we emit, but handle the general branches anyway
        const Mat3& r = v.rotation;
        double w, x, y, z;
        const double tr = r(0, 0) + r(1, 1) + r(2, 2);
        if (tr > 0) {
            double s = std::sqrt(tr + 1.0) * 2.0;
            w = 0.25 * s;
            x = (r(2, 1) - r(1, 2)) / s;
            y = (r(0, 2) - r(2, 0)) / s;
            z = (r(1, 0) - r(0, 1)) / s;
        } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
            double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
            w = (r(2, 1) - r(1, 2)) / s;
            x = 0.25 * s;
            y = (r(0, 1) + r(1, 0)) / s;
            z = (r(0, 2) + r(2, 0)) / s;
        } else if (r(1, 1) > r(2, 2)) {
            double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
            w = (r(0, 2) - r(2, 0)) / s;
            x = (r(0, 1) + r(1, 0)) / s;
            y = 0.25 * s;
            z = (r(1, 2) + r(2, 1)) / s;
        } else {
            double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
            w = (r(1, 0) - r(0, 1)) / s;
            x = (r(0, 2) + r(2, 0)) / s;
            y = (r(1, 2) + r(2, 1)) / s;
            z = 0.25 * s;
        }
        const double n = std::sqrt(w * w + x * x + y * y + z * z);
        imgs << id << " " << w / n << " " << x / n << " " << y / n << " " << z / n << " "
             << v.translation[0] << " " << v.translation[1] << " " << v.translation[2] << " " << id
             << " view_" << id << ".png\n";
        imgs << "\n"; // empty 2D-point line
    }
}

} // namespace rgs
