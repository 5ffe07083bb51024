#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "handforge/image.hpp"
#include "handforge/rle.hpp"

namespace handforge {

// Tight pixel bbox [x, y, w, h] of a mask; throws std::invalid_argument
// ("empty mask") when no pixel is set.
std::array<int, 4> mask_to_bbox(const Mask& mask);

struct CocoImage {
    int id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
};

struct CocoAnnotation {
    int id = 0;
    int image_id = 0;
    int category_id = 1;
    Rle segmentation;
    std::array<int, 4> bbox{0, 0, 0, 0};
    std::int64_t area = 0;  // nonzero pixel count
    int iscrowd = 0;
};

struct CocoCategory {
    int id = 1;
    std::string name = "hand";
};

struct CocoAnnotationSet {
    std::vector<CocoImage> images;
    std::vector<CocoAnnotation> annotations;
    std::vector<CocoCategory> categories{{1, "hand"}};

    const CocoImage* find_image(int id) const;
};

// Scans a dataset directory laid out as {frame:06d}_rgb.png /
// {frame:06d}_depth.png / {frame:06d}_mask{k}.png and builds one image
// record per frame and one annotation per non-empty mask. Throws
// std::runtime_error naming the offending file on mismatched image sizes.
CocoAnnotationSet build_coco_annotations(const std::string& dataset_dir);

// UTF-8 JSON with a stable key order; pixel quantities are integers.
void write_coco_json(const std::string& path, const CocoAnnotationSet& set);
CocoAnnotationSet read_coco_json(const std::string& path);

}  // namespace handforge
