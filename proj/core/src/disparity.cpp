#include "dispvo/disparity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

static_assert(std::numeric_limits<float>::is_iec559 && sizeof(float) == 4);

void put_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated disparity header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void check_dims(std::uint64_t w, std::uint64_t h) {
    if (w == 0 || h == 0) throw FormatError("disparity map has zero width or height");
    if (w > (1u << 16) || h > (1u << 16)) throw FormatError("disparity map dimensions are implausibly large");
}

std::string pgm_token(std::istream& in) {
    std::string tok;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(c);
    }
    if (tok.empty()) throw FormatError("truncated PGM header");
    return tok;
}

std::uint64_t pgm_number(std::istream& in) {
    const std::string tok = pgm_token(in);
    if (!std::all_of(tok.begin(), tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) || tok.size() > 9) {
        throw FormatError("bad PGM header field '" + tok + "'");
    }
    return std::stoull(tok);
}

}  // namespace

DisparityMap DisparityMap::filled(int width, int height, float value, int frame_index) {
    DisparityMap m;
    m.width = width;
    m.height = height;
    m.values.assign(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), value);
    m.frame_index = frame_index;
    m.validate();
    return m;
}

void DisparityMap::validate() const {
    if (width <= 0 || height <= 0) throw ValidationError("disparity map must have positive width and height");
    if (values.size() != static_cast<std::size_t>(width) * height) {
        throw ValidationError("disparity value count does not match width*height");
    }
    for (float v : values) {
        if (!(v >= 0.0f && v <= 1.0f)) throw ValidationError("disparity values must lie in [0, 1]");
    }
}

void write_disparity(std::ostream& out, const DisparityMap& map) {
    map.validate();
    out.write(kDisparityMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(map.width));
    put_u32(out, static_cast<std::uint32_t>(map.height));
    for (float v : map.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
    if (!out) throw FormatError("failed writing disparity map");
}

DisparityMap read_disparity(std::istream& in, int frame_index) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kDisparityMagic, 4) != 0) {
        throw FormatError("unknown disparity magic");
    }
    const std::uint32_t w = get_u32(in);
    const std::uint32_t h = get_u32(in);
    check_dims(w, h);
    DisparityMap m;
    m.width = static_cast<int>(w);
    m.height = static_cast<int>(h);
    m.frame_index = frame_index;
    m.values.resize(static_cast<std::size_t>(w) * h);
    for (float& v : m.values) {
        unsigned char b[4];
        if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("disparity payload shorter than width*height");
        v = std::bit_cast<float>(static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                                 (static_cast<std::uint32_t>(b[2]) << 16) |
                                 (static_cast<std::uint32_t>(b[3]) << 24));
        if (std::isnan(v)) throw FormatError("disparity payload contains NaN");
        v = std::clamp(v, 0.0f, 1.0f);
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after disparity payload");
    return m;
}

DisparityMap read_pgm(std::istream& in, int frame_index) {
    char magic[2];
    if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') throw FormatError("not a binary PGM (P5) image");
    const std::uint64_t w = pgm_number(in);
    const std::uint64_t h = pgm_number(in);
    const std::uint64_t maxval = pgm_number(in);
    check_dims(w, h);
    if (maxval == 0 || maxval > 65535) throw FormatError("PGM maxval must be in [1, 65535]");
    const bool wide = maxval > 255;

    DisparityMap m;
    m.width = static_cast<int>(w);
    m.height = static_cast<int>(h);
    m.frame_index = frame_index;
    m.values.resize(static_cast<std::size_t>(w) * h);
    const double scale = 1.0 / static_cast<double>(maxval);
    for (float& v : m.values) {
        unsigned char b[2] = {0, 0};
        if (!in.read(reinterpret_cast<char*>(b), wide ? 2 : 1)) throw FormatError("PGM payload shorter than width*height");
        const unsigned raw = wide ? (static_cast<unsigned>(b[0]) << 8) | b[1] : b[0];  // PGM is big-endian
        v = static_cast<float>(std::min(1.0, raw * scale));
    }
    return m;
}

void save_disparity(const DisparityMap& map, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot open " + file.string() + " for writing");
    write_disparity(out, map);
}

DisparityMap load_disparity(const std::filesystem::path& file, int frame_index) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot open " + file.string());
    char head[2] = {0, 0};
    in.read(head, 2);
    in.clear();
    in.seekg(0);
    if (head[0] == 'P' && head[1] == '5') return read_pgm(in, frame_index);
    return read_disparity(in, frame_index);
}

}  // namespace dispvo
