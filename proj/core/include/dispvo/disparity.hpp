#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace dispvo {

/// Normalized disparity image, row-major, every value in [0, 1].
struct DisparityMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;
    int frame_index = 0;

    static DisparityMap filled(int width, int height, float value, int frame_index = 0);

    float at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
    float& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }

    /// Throws ValidationError on empty dimensions, size mismatch or out-of-range values.
    void validate() const;

    bool operator==(const DisparityMap&) const = default;
};

/// Native container: "DSP1", u32 width, u32 height, width*height float32, all little-endian.
inline constexpr char kDisparityMagic[4] = {'D', 'S', 'P', '1'};

void write_disparity(std::ostream& out, const DisparityMap& map);
DisparityMap read_disparity(std::istream& in, int frame_index = 0);

/// Binary PGM (P5), 8- or 16-bit. Values are divided by the header's maxval.
DisparityMap read_pgm(std::istream& in, int frame_index = 0);

void save_disparity(const DisparityMap& map, const std::filesystem::path& file);

/// Dispatches on the leading magic: native container or P5 grayscale.
DisparityMap load_disparity(const std::filesystem::path& file, int frame_index = 0);

}  // namespace dispvo
