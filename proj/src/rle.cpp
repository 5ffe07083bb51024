#include "handforge/rle.hpp"

#include <stdexcept>

namespace handforge {

Rle rle_encode(const Mask& mask) {
    if (mask.channels != 1) throw std::invalid_argument("rle: mask must be single-channel");
    Rle rle;
    rle.height = mask.height;
    rle.width = mask.width;

    std::uint8_t current = 0;  // runs start with the zero run
    std::uint32_t run = 0;
    for (std::uint8_t v : mask.data) {
        bool on = v != 0;
        if (on == (current != 0)) {
            ++run;
        } else {
            rle.counts.push_back(run);
            current = on ? 1 : 0;
            run = 1;
        }
    }
    rle.counts.push_back(run);
    return rle;
}

Mask rle_decode(const Rle& rle) {
    Mask mask(rle.width, rle.height, 1, 0);
    std::size_t total = static_cast<std::size_t>(rle.width) * rle.height;
    std::size_t pos = 0;
    std::uint8_t value = 0;
    for (std::uint32_t run : rle.counts) {
        if (pos + run > total) throw std::invalid_argument("rle: counts exceed mask size");
        if (value) std::fill(mask.data.begin() + pos, mask.data.begin() + pos + run, 255);
        pos += run;
        value = value ? 0 : 255;
    }
    if (pos != total) throw std::invalid_argument("rle: counts do not cover mask size");
    return mask;
}

}  // namespace handforge
