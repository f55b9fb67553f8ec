#include "rgs/ply_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "rgs/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "the 3DGS PLY codec assumes a little-endian host");

namespace rgs {

namespace {

constexpr int kFieldCount = 62; // 3 pos + 3 normal + 3 dc + 45 rest + 1 opacity + 3 scale + 4 rot
constexpr double kOpacityEps = 1e-6;

std::array<std::string, kFieldCount> field_names() {
    std::array<std::string, kFieldCount> names;
    int i = 0;
    for (const char* n : {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"})
        names[i++] = n;
    for (int r = 0; r < 45; ++r)
        names[i++] = "f_rest_" + std::to_string(r);
    names[i++] = "opacity";
    for (int s = 0; s < 3; ++s)
        names[i++] = "scale_" + std::to_string(s);
    for (int r = 0; r < 4; ++r)
        names[i++] = "rot_" + std::to_string(r);
    return names;
}

int property_size(const std::string& type) {
    if (type == "char" || type == "uchar" || type == "int8" || type == "uint8")
        return 1;
    if (type == "short" || type == "ushort" || type == "int16" || type == "uint16")
        return 2;
    if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
        type == "float" || type == "float32")
        return 4;
    if (type == "double" || type == "float64")
        return 8;
    return -1;
}

bool is_float32(const std::string& type) { return type == "float" || type == "float32"; }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

float activate_opacity(float stored) { return static_cast<float>(sigmoid(stored)); }

float store_opacity(float activated, int* clamped) {
    double a = activated;
    if (a < kOpacityEps || a > 1.0 - kOpacityEps) {
        a = std::min(std::max(a, kOpacityEps), 1.0 - kOpacityEps);
        if (clamped)
            ++*clamped;
    }
    return static_cast<float>(std::log(a / (1.0 - a)));
}

float activate_scale(float stored) { return static_cast<float>(std::exp(static_cast<double>(stored))); }

float store_scale(float activated) {
    if (!(activated > 0.0f))
        throw ValueError("cannot write non-positive scale component");
    return static_cast<float>(std::log(static_cast<double>(activated)));
}

struct HeaderInfo {
    std::size_t vertex_count = 0;
    std::size_t stride = 0;
    std::array<std::size_t, kFieldCount> offsets{}; // byte offset of each required field
    std::int64_t header_bytes = 0;
};

HeaderInfo parse_header(std::istream& in) {
    HeaderInfo info;
    std::string line;
    std::int64_t consumed = 0;

    auto next_line = [&](std::string& out) {
        if (!std::getline(in, out))
            throw FormatError("unexpected end of PLY header", consumed);
        consumed += static_cast<std::int64_t>(out.size()) + 1;
        if (!out.empty() && out.back() == '\r')
            out.pop_back();
    };

    next_line(line);
    if (line != "ply")
        throw FormatError("not a PLY file (missing 'ply' magic)", 0);
    next_line(line);
    if (line != "format binary_little_endian 1.0")
        throw FormatError("unsupported PLY format '" + line + "' (binary_little_endian 1.0 required)",
                          consumed);

    const auto names = field_names();
    std::map<std::string, int> required;
    for (int i = 0; i < kFieldCount; ++i)
        required[names[i]] = i;

    bool in_vertex_element = false;
    bool saw_vertex_element = false;
    std::size_t offset = 0;
    std::array<bool, kFieldCount> seen{};

    while (true) {
        next_line(line);
        if (line == "end_header")
            break;
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        if (keyword == "comment" || keyword == "obj_info" || keyword.empty())
            continue;
        if (keyword == "element") {
            std::string name;
            std::size_t count = 0;
            if (!(ls >> name >> count))
                throw FormatError("malformed element declaration '" + line + "'", consumed);
            if (name == "vertex") {
                if (saw_vertex_element)
                    throw FormatError("duplicate vertex element", consumed);
                saw_vertex_element = true;
                in_vertex_element = true;
                info.vertex_count = count;
            } else {
                if (saw_vertex_element && count > 0)
                    throw FormatError("unsupported trailing element '" + name + "'", consumed);
                in_vertex_element = false;
            }
            continue;
        }
        if (keyword == "property") {
            if (!in_vertex_element)
                continue;
            std::string type;
            ls >> type;
            if (type == "list")
                throw FormatError("list properties are not supported in 3DGS PLY", consumed);
            std::string name;
            ls >> name;
            if (name.empty())
                throw FormatError("property without a name", consumed);
            const int size = property_size(type);
            if (size < 0)
                throw FormatError("unknown property type '" + type + "'", consumed);
            auto it = required.find(name);
            if (it != required.end()) {
                if (!is_float32(type))
                    throw FormatError("property '" + name + "' has non-float type '" + type + "'",
                                      consumed);
                if (seen[static_cast<std::size_t>(it->second)])
                    throw FormatError("duplicate property '" + name + "'", consumed);
                seen[static_cast<std::size_t>(it->second)] = true;
                info.offsets[static_cast<std::size_t>(it->second)] = offset;
            }
            offset += static_cast<std::size_t>(size);
            continue;
        }
        throw FormatError("unrecognized header line '" + line + "'", consumed);
    }

    if (!saw_vertex_element)
        throw FormatError("missing vertex element", consumed);
    for (int i = 0; i < kFieldCount; ++i) {
        if (!seen[static_cast<std::size_t>(i)])
            throw FormatError("missing required field '" + names[static_cast<std::size_t>(i)] + "'",
                              consumed);
    }
    info.stride = offset;
    info.header_bytes = consumed;
    return info;
}

} // namespace

std::vector<GaussianPrimitive> read_3dgs_ply(std::istream& in) {
    const HeaderInfo info = parse_header(in);
    const auto names = field_names();

    std::vector<char> row(info.stride);
    std::vector<GaussianPrimitive> prims;
    // do not trust the declared count for up-front allocation
    prims.reserve(std::min<std::size_t>(info.vertex_count, 1u << 20));

    auto field = [&](int idx) {
        float v;
        std::memcpy(&v, row.data() + info.offsets[static_cast<std::size_t>(idx)], sizeof(float));
        return v;
    };

    for (std::size_t p = 0; p < info.vertex_count; ++p) {
        in.read(row.data(), static_cast<std::streamsize>(info.stride));
        if (static_cast<std::size_t>(in.gcount()) != info.stride)
            throw FormatError("vertex payload truncated (expected " +
                                  std::to_string(info.vertex_count) + " vertices, got " +
                                  std::to_string(p) + ")",
                              info.header_bytes + static_cast<std::int64_t>(p * info.stride + static_cast<std::size_t>(in.gcount())));

        for (int i = 0; i < kFieldCount; ++i) {
            if (!std::isfinite(field(i)))
                throw FormatError("non-finite value in field '" + names[static_cast<std::size_t>(i)] +
                                      "' of vertex " + std::to_string(p),
                                  info.header_bytes + static_cast<std::int64_t>(p * info.stride));
        }

        GaussianPrimitive g;
        g.position = Vec3(field(0), field(1), field(2));
        // normals (fields 3..5) are unused by 3DGS and discarded
        g.base_color = Vec3(field(6), field(7), field(8));
        g.sh_rest.resize(45);
        for (int ch = 0; ch < 3; ++ch)
            for (int grp = 0; grp < 15; ++grp)
                g.sh_rest[static_cast<std::size_t>(3 * grp + ch)] = field(9 + ch * 15 + grp);
        g.opacity = activate_opacity(field(54));
        g.scale = Vec3(activate_scale(field(55)), activate_scale(field(56)), activate_scale(field(57)));
        const Vec4 q(field(58), field(59), field(60), field(61));
        if (q.squaredNorm() < 1e-24f)
            throw FormatError("zero-norm rotation quaternion in vertex " + std::to_string(p),
                              info.header_bytes + static_cast<std::int64_t>(p * info.stride));
        g.rotation = normalized_quaternion(q);
        g.band_count = kMaxBands;
        prims.push_back(std::move(g));
    }
    return prims;
}

std::vector<GaussianPrimitive> read_3dgs_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path.string() + "'");
    return read_3dgs_ply(in);
}

PlyWriteStats write_3dgs_ply(const std::vector<GaussianPrimitive>& primitives, std::ostream& out) {
    const auto names = field_names();
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << primitives.size() << "\n";
    for (const auto& n : names)
        out << "property float " << n << "\n";
    out << "end_header\n";

    PlyWriteStats stats;
    std::array<float, kFieldCount> row;
    for (const auto& g : primitives) {
        row.fill(0.0f);
        row[0] = g.position[0];
        row[1] = g.position[1];
        row[2] = g.position[2];
        row[6] = g.base_color[0];
        row[7] = g.base_color[1];
        row[8] = g.base_color[2];
        const int groups = sh_group_count(g.band_count);
        for (int grp = 0; grp < groups; ++grp)
            for (int ch = 0; ch < 3; ++ch)
                row[static_cast<std::size_t>(9 + ch * 15 + grp)] =
                    g.sh_rest[static_cast<std::size_t>(3 * grp + ch)];
        row[54] = store_opacity(g.opacity, &stats.clamped_opacities);
        for (int s = 0; s < 3; ++s)
            row[static_cast<std::size_t>(55 + s)] = store_scale(g.scale[s]);
        const Vec4 q = normalized_quaternion(g.rotation);
        for (int r = 0; r < 4; ++r)
            row[static_cast<std::size_t>(58 + r)] = q[r];
        out.write(reinterpret_cast<const char*>(row.data()), sizeof(row));
    }
    if (!out)
        throw FormatError("write failure while emitting PLY payload");
    return stats;
}

PlyWriteStats write_3dgs_ply(const std::vector<GaussianPrimitive>& primitives,
                             const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot create '" + path.string() + "'");
    return write_3dgs_ply(primitives, out);
}

void canonicalize_like_storage(std::vector<GaussianPrimitive>& primitives) {
    int clamped = 0;
    for (auto& g : primitives) {
        g.opacity = activate_opacity(store_opacity(g.opacity, &clamped));
        for (int s = 0; s < 3; ++s)
            g.scale[s] = activate_scale(store_scale(g.scale[s]));
        // the writer normalizes and the reader normalizes again
        g.rotation = normalized_quaternion(normalized_quaternion(g.rotation));
    }
}

} // namespace rgs
