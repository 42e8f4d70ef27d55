#pragma once

#include <filesystem>
#include <iosfwd>

#include "dispvo/network.hpp"

namespace dispvo {

/// Binary layout (little-endian): "DVOCKPT\0", u32 version, architecture
/// (height, width, four channel lists as u32 count + i32 values, f64
/// attention bias init, u8 zero-output flag), u64 parameter count, f64 params.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Network& net);
Network read_checkpoint(std::istream& in);

void save_checkpoint(const Network& net, const std::filesystem::path& file);
Network load_checkpoint(const std::filesystem::path& file);

}  // namespace dispvo
