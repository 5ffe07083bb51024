#pragma once

#include <string>

#include "handforge/image.hpp"

namespace handforge {

// Lossless PNG, fixed encoder settings so identical pixels give identical
// bytes. Gray8 and RGB8 for generated data; Gray16 for metric depth in the
// normalized adapter layout. All throw std::runtime_error on I/O failure.
void write_png(const std::string& path, const ImageU8& image);
void write_png16(const std::string& path, const ImageU16& image);

// Reads 8-bit gray or RGB; palette/alpha/16-bit inputs are normalized to
// 8-bit gray or RGB.
ImageU8 read_png(const std::string& path);

// Reads a 16-bit single-channel PNG (8-bit input is widened).
ImageU16 read_png16(const std::string& path);

}  // namespace handforge
