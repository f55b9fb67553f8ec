#include "rgs/compact.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "rgs/error.hpp"
#include "rgs/half.hpp"

namespace rgs {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    void need(std::size_t count, const char* what) const {
        if (pos_ + count > bytes_.size())
            throw FormatError(std::string("truncated compact payload while reading ") + what,
                              static_cast<std::int64_t>(pos_));
    }

    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }
    std::uint16_t u16(const char* what) {
        need(2, what);
        const std::uint16_t v =
            static_cast<std::uint16_t>(bytes_[pos_] | (static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32(const char* what) {
        const std::uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> encode_compact(const CompactScene& scene) {
    for (int b = 0; b < kCodebookCount; ++b) {
        const Codebook& book = scene.codebooks.books[static_cast<std::size_t>(b)];
        if (book.entries.empty() || book.entries.size() > kCodebookMaxEntries)
            throw ValueError("codebook '" + codebook_name(b) + "' must hold 1..256 entries, has " +
                             std::to_string(book.entries.size()));
    }
    for (int band = 0; band < 4; ++band) {
        const CompactSet& set = scene.sets[static_cast<std::size_t>(band)];
        const std::size_t stride = static_cast<std::size_t>(record_index_bytes(band));
        if (set.indices.size() != set.count() * stride)
            throw ValueError("band-" + std::to_string(band) + " set has inconsistent index payload");
    }

    std::vector<std::uint8_t> out;
    out.reserve(64 + scene.primitive_count() * 64);
    for (char c : kCompactMagic)
        out.push_back(static_cast<std::uint8_t>(c));
    put_u32(out, kCompactVersion);
    for (int band = 0; band < 4; ++band)
        put_u32(out, static_cast<std::uint32_t>(scene.sets[static_cast<std::size_t>(band)].count()));
    put_f32(out, scene.position_scale);
    for (int d = 0; d < 3; ++d)
        put_f32(out, scene.position_offset[d]);

    for (int b = 0; b < kCodebookCount; ++b) {
        const Codebook& book = scene.codebooks.books[static_cast<std::size_t>(b)];
        put_u16(out, static_cast<std::uint16_t>(book.entries.size()));
        for (std::uint16_t e : book.entries)
            put_u16(out, e);
    }

    for (int band = 0; band < 4; ++band) {
        const CompactSet& set = scene.sets[static_cast<std::size_t>(band)];
        const std::size_t stride = static_cast<std::size_t>(record_index_bytes(band));
        for (std::size_t i = 0; i < set.count(); ++i) {
            for (int d = 0; d < 3; ++d)
                put_u16(out, set.positions[i][static_cast<std::size_t>(d)]);
            const std::uint8_t* rec = set.indices.data() + i * stride;
            out.insert(out.end(), rec, rec + stride);
        }
    }
    return out;
}

CompactScene parse_compact(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);

    r.need(4, "magic");
    for (std::size_t i = 0; i < 4; ++i) {
        if (bytes[i] != static_cast<std::uint8_t>(kCompactMagic[i]))
            throw FormatError("bad magic (not an RGS1 file)", static_cast<std::int64_t>(i));
    }
    for (int i = 0; i < 4; ++i)
        r.u8("magic");

    const std::uint32_t version = r.u32("version");
    if (version != kCompactVersion)
        throw FormatError("unsupported compact version " + std::to_string(version), 4);

    CompactScene scene;
    std::array<std::uint32_t, 4> counts{};
    for (int band = 0; band < 4; ++band)
        counts[static_cast<std::size_t>(band)] = r.u32("set count");
    scene.position_scale = r.f32("position scale");
    if (!(scene.position_scale > 0.0f) || !std::isfinite(scene.position_scale))
        throw FormatError("invalid position scale", static_cast<std::int64_t>(r.offset()) - 4);
    for (int d = 0; d < 3; ++d) {
        scene.position_offset[d] = r.f32("position offset");
        if (!std::isfinite(scene.position_offset[d]))
            throw FormatError("invalid position offset", static_cast<std::int64_t>(r.offset()) - 4);
    }

    for (int b = 0; b < kCodebookCount; ++b) {
        Codebook& book = scene.codebooks.books[static_cast<std::size_t>(b)];
        const std::uint16_t count = r.u16("codebook entry count");
        if (count == 0 || count > kCodebookMaxEntries)
            throw FormatError("codebook '" + codebook_name(b) + "' declares " +
                                  std::to_string(count) + " entries (1..256 required)",
                              static_cast<std::int64_t>(r.offset()) - 2);
        book.entries.resize(count);
        book.values.resize(count);
        for (std::uint16_t i = 0; i < count; ++i) {
            book.entries[i] = r.u16("codebook entry");
            book.values[i] = half_to_float(book.entries[i]);
            if (!std::isfinite(book.values[i]))
                throw FormatError("non-finite entry in codebook '" + codebook_name(b) + "'",
                                  static_cast<std::int64_t>(r.offset()) - 2);
            if (i > 0 && !(book.values[i] >= book.values[i - 1]))
                throw FormatError("codebook '" + codebook_name(b) + "' entries not sorted",
                                  static_cast<std::int64_t>(r.offset()) - 2);
        }
    }

    for (int band = 0; band < 4; ++band) {
        CompactSet& set = scene.sets[static_cast<std::size_t>(band)];
        const std::uint32_t count = counts[static_cast<std::size_t>(band)];
        const std::size_t stride = static_cast<std::size_t>(record_index_bytes(band));
        set.positions.resize(count);
        set.indices.resize(static_cast<std::size_t>(count) * stride);
        for (std::uint32_t i = 0; i < count; ++i) {
            for (int d = 0; d < 3; ++d)
                set.positions[i][static_cast<std::size_t>(d)] = r.u16("position");
            r.need(stride, "attribute indices");
            std::uint8_t* rec = set.indices.data() + static_cast<std::size_t>(i) * stride;
            for (std::size_t j = 0; j < stride; ++j)
                rec[j] = r.u8("attribute index");
        }
    }

    if (!r.exhausted())
        throw FormatError("trailing bytes after compact payload",
                          static_cast<std::int64_t>(r.offset()));

    // validate every index against its codebook
    for (int band = 0; band < 4; ++band) {
        const CompactSet& set = scene.sets[static_cast<std::size_t>(band)];
        const std::size_t stride = static_cast<std::size_t>(record_index_bytes(band));
        const int groups = sh_group_count(band);
        for (std::size_t i = 0; i < set.count(); ++i) {
            const std::uint8_t* rec = set.indices.data() + i * stride;
            auto check = [&](std::size_t slot, int book) {
                if (rec[slot] >= scene.codebooks.books[static_cast<std::size_t>(book)].size())
                    throw FormatError("attribute index " + std::to_string(rec[slot]) +
                                      " exceeds codebook '" + codebook_name(book) + "'");
            };
            check(0, kCbOpacity);
            for (std::size_t d = 0; d < 3; ++d)
                check(1 + d, kCbScale);
            check(4, kCbRotationReal);
            for (std::size_t d = 0; d < 3; ++d)
                check(5 + d, kCbRotationImag);
            for (std::size_t d = 0; d < 3; ++d)
                check(8 + d, kCbBaseColor);
            for (int g = 0; g < groups; ++g)
                for (std::size_t d = 0; d < 3; ++d)
                    check(11 + static_cast<std::size_t>(3 * g) + d, kCbShGroup0 + g);
        }
    }
    return scene;
}

std::vector<GaussianPrimitive> expand_compact(const CompactScene& scene) {
    std::vector<GaussianPrimitive> prims;
    prims.reserve(scene.primitive_count());
    const auto& books = scene.codebooks.books;

    for (int band = 0; band < 4; ++band) {
        const CompactSet& set = scene.sets[static_cast<std::size_t>(band)];
        const std::size_t stride = static_cast<std::size_t>(record_index_bytes(band));
        const int groups = sh_group_count(band);
        for (std::size_t i = 0; i < set.count(); ++i) {
            const std::uint8_t* rec = set.indices.data() + i * stride;
            GaussianPrimitive g;
            for (int d = 0; d < 3; ++d)
                g.position[d] =
                    half_to_float(set.positions[i][static_cast<std::size_t>(d)]) * scene.position_scale +
                    scene.position_offset[d];
            g.opacity = books[kCbOpacity].values[rec[0]];
            for (int d = 0; d < 3; ++d)
                g.scale[d] = books[kCbScale].values[rec[1 + static_cast<std::size_t>(d)]];
            g.rotation[0] = books[kCbRotationReal].values[rec[4]];
            for (int d = 0; d < 3; ++d)
                g.rotation[1 + d] = books[kCbRotationImag].values[rec[5 + static_cast<std::size_t>(d)]];
            for (int d = 0; d < 3; ++d)
                g.base_color[d] = books[kCbBaseColor].values[rec[8 + static_cast<std::size_t>(d)]];
            g.band_count = band;
            g.sh_rest.resize(static_cast<std::size_t>(3 * groups));
            for (int grp = 0; grp < groups; ++grp)
                for (int d = 0; d < 3; ++d)
                    g.sh_rest[static_cast<std::size_t>(3 * grp + d)] =
                        books[static_cast<std::size_t>(kCbShGroup0 + grp)]
                            .values[rec[11 + static_cast<std::size_t>(3 * grp + d)]];
            prims.push_back(std::move(g));
        }
    }
    return prims;
}

std::vector<GaussianPrimitive> decode_compact(std::span<const std::uint8_t> bytes) {
    return expand_compact(parse_compact(bytes));
}

void write_compact_file(const CompactScene& scene, const std::filesystem::path& path) {
    const auto bytes = encode_compact(scene);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot create '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError("write failure for '" + path.string() + "'");
}

CompactScene read_compact_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in)
        throw FormatError("cannot open '" + path.string() + "'");
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in)
        throw FormatError("read failure for '" + path.string() + "'");
    return parse_compact(bytes);
}

} // namespace rgs
