#pragma once

#include <cstdint>
#include <vector>

#include "handforge/assets.hpp"
#include "handforge/image.hpp"
#include "handforge/scene.hpp"

namespace handforge {

// Aligned raster outputs of one frame. instance_id is 0 for background and
// distractors, k >= 1 for hand instance k; nonzero ids imply depth > 0.
struct FrameBuffers {
    ImageU8 color;        // RGB
    ImageF32 depth_m;     // camera-axis depth, 0 = no hit
    ImageU16 instance_id;
};

// Deterministic CPU rasterization: z-buffer at pixel centers, flat-shaded
// triangles, procedural textures, no anti-aliasing, back-face culling
// disabled. Output bytes are identical for any thread count (rows are
// partitioned into disjoint bands).
FrameBuffers rasterize(const SceneSpec& spec, const MeshLibrary& assets, int threads = 1);

// Scales [near, far] meters into the 8-bit range, rounding half away from
// zero; missing depth (0) encodes as 255, matching far-plane truncation.
ImageU8 encode_depth(const ImageF32& depth_m, double near = 0.2, double far = 1.0);

std::uint8_t encode_depth_value(double depth_m, double near = 0.2, double far = 1.0);

// Inverse of the encoder's quantization (center-of-bin reconstruction).
double decode_depth_value(std::uint8_t v, double near = 0.2, double far = 1.0);

// One {0,255} mask per distinct nonzero id, in ascending id order; ids in
// [1, expected_count] with zero pixels are appended to `occluded` instead.
std::vector<Mask> extract_masks(const ImageU16& instance_id, int expected_count = 0,
                                std::vector<int>* occluded = nullptr);

// Rendered sample ready for encoding to PNG.
struct RenderedSample {
    FrameBuffers buffers;
    ImageU8 depth_png;       // 8-bit encoded depth
    std::vector<Mask> masks; // visible hand instances, ascending id
    std::vector<int> occluded_ids;
};

RenderedSample render_sample(const SceneSpec& spec, const MeshLibrary& assets, int threads = 1);

}  // namespace handforge
