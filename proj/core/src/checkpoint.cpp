#include "dispvo/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "dispvo/errors.hpp"

namespace dispvo {

namespace {

constexpr char kMagic[8] = {'D', 'V', 'O', 'C', 'K', 'P', 'T', '\0'};

template <typename U>
void put(std::ostream& out, U v) {
    unsigned char b[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), sizeof(U));
}

template <typename U>
U get(std::istream& in) {
    unsigned char b[sizeof(U)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof(U))) throw FormatError("truncated checkpoint");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
    return v;
}

void put_list(std::ostream& out, const std::vector<int>& v) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
    for (int x : v) put<std::uint32_t>(out, static_cast<std::uint32_t>(x));
}

std::vector<int> get_list(std::istream& in) {
    const auto n = get<std::uint32_t>(in);
    if (n > 64) throw FormatError("checkpoint layer list is implausibly long");
    std::vector<int> v(n);
    for (auto& x : v) x = static_cast<int>(get<std::uint32_t>(in));
    return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Network& net) {
    const ArchConfig& a = net.arch();
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(a.height));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(a.width));
    put_list(out, a.feature_channels);
    put_list(out, a.attention_channels);
    put_list(out, a.head_conv_channels);
    put_list(out, a.translation_hidden);
    put_list(out, a.rotation_hidden);
    put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(a.attention_bias_init));
    put<std::uint8_t>(out, a.zero_output_layers ? 1 : 0);
    const auto params = net.parameters();
    put<std::uint64_t>(out, params.size());
    for (double p : params) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p));
    if (!out) throw FormatError("failed writing checkpoint");
}

Network read_checkpoint(std::istream& in) {
    char magic[sizeof(kMagic)];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError("not a checkpoint file");
    }
    const auto version = get<std::uint32_t>(in);
    if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
    ArchConfig a;
    a.height = static_cast<int>(get<std::uint32_t>(in));
    a.width = static_cast<int>(get<std::uint32_t>(in));
    a.feature_channels = get_list(in);
    a.attention_channels = get_list(in);
    a.head_conv_channels = get_list(in);
    a.translation_hidden = get_list(in);
    a.rotation_hidden = get_list(in);
    a.attention_bias_init = std::bit_cast<double>(get<std::uint64_t>(in));
    a.zero_output_layers = get<std::uint8_t>(in) != 0;
    try {
        a.validate();
    } catch (const ConfigError& e) {
        throw FormatError(std::string("checkpoint architecture is invalid: ") + e.what());
    }
    const auto count = get<std::uint64_t>(in);
    if (count > (std::uint64_t{1} << 32)) throw FormatError("checkpoint parameter count is implausibly large");
    std::vector<double> params(count);
    for (double& p : params) p = std::bit_cast<double>(get<std::uint64_t>(in));
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after checkpoint payload");
    try {
        return Network(std::move(a), std::move(params));
    } catch (const InputError& e) {
        throw FormatError(std::string("checkpoint does not match its architecture: ") + e.what());
    }
}

void save_checkpoint(const Network& net, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot open " + file.string() + " for writing");
    write_checkpoint(out, net);
}

Network load_checkpoint(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot open checkpoint " + file.string());
    return read_checkpoint(in);
}

}  // namespace dispvo
