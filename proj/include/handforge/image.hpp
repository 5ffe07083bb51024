#pragma once

#include <cstdint>
#include <vector>

namespace handforge {

// Row-major raster, 1 (gray) or 3 (RGB) interleaved channels.
struct ImageU8 {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    ImageU8() = default;
    ImageU8(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool same_shape(const ImageU8& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct ImageU16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> data;

    ImageU16() = default;
    ImageU16(int w, int h, std::uint16_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint16_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

struct ImageF32 {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    ImageF32() = default;
    ImageF32(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Binary mask helper: pixels are 0 or 255.
using Mask = ImageU8;

inline std::size_t mask_area(const Mask& m) {
    std::size_t n = 0;
    for (std::uint8_t v : m.data) n += v != 0;
    return n;
}

}  // namespace handforge
