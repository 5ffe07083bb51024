#pragma once

#include <cstdint>
#include <vector>

#include "handforge/image.hpp"

namespace handforge {

// Run-length encoding of a binary mask over row-major pixel order. Counts
// alternate zero-run / one-run starting with the zero-run (which may be 0),
// matching the COCO uncompressed-counts convention apart from the pixel
// order, which is row-major here and recorded in the dataset metadata.
struct Rle {
    int height = 0;
    int width = 0;
    std::vector<std::uint32_t> counts;
};

Rle rle_encode(const Mask& mask);

// Exact inverse of rle_encode. Throws std::invalid_argument when counts do
// not sum to height*width.
Mask rle_decode(const Rle& rle);

}  // namespace handforge
