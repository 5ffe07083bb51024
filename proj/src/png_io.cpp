#include "handforge/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace handforge {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& what, const std::string& path) {
    throw std::runtime_error(what + ": " + path);
}

void write_rows(const std::string& path, int width, int height, int color_type, int bit_depth,
                const std::vector<png_bytep>& rows) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("png: cannot open for writing", path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail("png: create_write_struct failed", path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail("png: create_info_struct failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("png: write error", path);
    }
    png_init_io(png, fp.get());
    // Fixed settings keep output bytes reproducible across runs.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_SUB);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);  // buffers are host (little) endian
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::string& path, const ImageU8& image) {
    if (image.width <= 0 || image.height <= 0 || (image.channels != 1 && image.channels != 3)) {
        throw std::invalid_argument("png: image must be non-empty gray or RGB");
    }
    std::vector<png_bytep> rows(image.height);
    for (int y = 0; y < image.height; ++y) {
        rows[y] = const_cast<png_bytep>(&image.data[static_cast<std::size_t>(y) * image.width * image.channels]);
    }
    write_rows(path, image.width, image.height,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, 8, rows);
}

void write_png16(const std::string& path, const ImageU16& image) {
    if (image.width <= 0 || image.height <= 0) {
        throw std::invalid_argument("png: empty 16-bit image");
    }
    std::vector<png_bytep> rows(image.height);
    for (int y = 0; y < image.height; ++y) {
        rows[y] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(&image.data[static_cast<std::size_t>(y) * image.width]));
    }
    write_rows(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

namespace {

struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;
    int bit_depth = 0;
    std::vector<std::uint8_t> bytes;  // row-major, 16-bit values host endian
};

Decoded decode(const std::string& path, bool want16) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail("png: cannot open", path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail("png: create_read_struct failed", path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail("png: create_info_struct failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("png: read error", path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (want16) {
        png_set_swap(png);  // network order -> host
    } else {
        png_set_strip_16(png);
    }
    png_read_update_info(png, info);

    Decoded out;
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = png_get_bit_depth(png, info);
    out.channels = png_get_channels(png, info);

    std::size_t rowbytes = png_get_rowbytes(png, info);
    out.bytes.resize(rowbytes * out.height);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = &out.bytes[rowbytes * y];
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

}  // namespace

ImageU8 read_png(const std::string& path) {
    Decoded d = decode(path, /*want16=*/false);
    if (d.channels != 1 && d.channels != 3) fail("png: unsupported channel layout", path);
    ImageU8 img(d.width, d.height, d.channels);
    img.data = std::move(d.bytes);
    return img;
}

ImageU16 read_png16(const std::string& path) {
    Decoded d = decode(path, /*want16=*/true);
    if (d.channels != 1) fail("png: expected single-channel depth", path);
    ImageU16 img(d.width, d.height);
    if (d.bit_depth == 16) {
        const std::uint16_t* src = reinterpret_cast<const std::uint16_t*>(d.bytes.data());
        img.data.assign(src, src + static_cast<std::size_t>(d.width) * d.height);
    } else {
        for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = d.bytes[i];
    }
    return img;
}

}  // namespace handforge
