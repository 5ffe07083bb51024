#include "handforge/coco.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "handforge/png_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace handforge {

std::array<int, 4> mask_to_bbox(const Mask& mask) {
    int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y) == 0) continue;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0) throw std::invalid_argument("empty mask");
    return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

const CocoImage* CocoAnnotationSet::find_image(int id) const {
    for (const auto& img : images) {
        if (img.id == id) return &img;
    }
    return nullptr;
}

CocoAnnotationSet build_coco_annotations(const std::string& dataset_dir) {
    // frame index -> mask paths keyed by mask number
    std::map<int, std::map<int, fs::path>> frame_masks;
    std::map<int, fs::path> frame_rgb;
    for (const auto& entry : fs::directory_iterator(dataset_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name.size() < 10 || entry.path().extension() != ".png") continue;
        int frame = 0;
        try {
            frame = std::stoi(name.substr(0, 6));
        } catch (const std::exception&) {
            continue;
        }
        if (name.find("_rgb.png") != std::string::npos) {
            frame_rgb[frame] = entry.path();
        } else if (auto pos = name.find("_mask"); pos != std::string::npos) {
            int k = std::stoi(name.substr(pos + 5, name.size() - pos - 5 - 4));
            frame_masks[frame][k] = entry.path();
        } else if (name.find("_depth.png") != std::string::npos) {
            frame_rgb.try_emplace(frame, entry.path());  // depth-only datasets
        }
    }

    CocoAnnotationSet set;
    int ann_id = 1;
    int expected_w = -1, expected_h = -1;
    for (const auto& [frame, rgb_path] : frame_rgb) {
        ImageU8 rgb = read_png(rgb_path.string());
        if (expected_w < 0) {
            expected_w = rgb.width;
            expected_h = rgb.height;
        } else if (rgb.width != expected_w || rgb.height != expected_h) {
            throw std::runtime_error("coco: mismatched image size in " + rgb_path.string());
        }
        CocoImage img;
        img.id = frame;
        img.file_name = rgb_path.filename().string();
        img.width = rgb.width;
        img.height = rgb.height;
        set.images.push_back(img);

        auto it = frame_masks.find(frame);
        if (it == frame_masks.end()) continue;
        for (const auto& [k, mask_path] : it->second) {
            Mask mask = read_png(mask_path.string());
            if (mask.width != expected_w || mask.height != expected_h) {
                throw std::runtime_error("coco: mismatched image size in " + mask_path.string());
            }
            std::size_t area = mask_area(mask);
            if (area == 0) continue;
            CocoAnnotation ann;
            ann.id = ann_id++;
            ann.image_id = frame;
            ann.category_id = 1;
            ann.segmentation = rle_encode(mask);
            ann.bbox = mask_to_bbox(mask);
            ann.area = static_cast<std::int64_t>(area);
            ann.iscrowd = 0;
            set.annotations.push_back(ann);
        }
    }
    return set;
}

void write_coco_json(const std::string& path, const CocoAnnotationSet& set) {
    json root;
    root["images"] = json::array();
    for (const auto& img : set.images) {
        root["images"].push_back({{"id", img.id},
                                  {"file_name", img.file_name},
                                  {"width", img.width},
                                  {"height", img.height}});
    }
    root["annotations"] = json::array();
    for (const auto& ann : set.annotations) {
        json seg;
        seg["size"] = {ann.segmentation.height, ann.segmentation.width};
        seg["counts"] = ann.segmentation.counts;
        root["annotations"].push_back({{"id", ann.id},
                                       {"image_id", ann.image_id},
                                       {"category_id", ann.category_id},
                                       {"segmentation", seg},
                                       {"bbox", ann.bbox},
                                       {"area", ann.area},
                                       {"iscrowd", ann.iscrowd}});
    }
    root["categories"] = json::array();
    for (const auto& cat : set.categories) {
        root["categories"].push_back({{"id", cat.id}, {"name", cat.name}});
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("coco: cannot write " + path);
    out << root.dump(1) << "\n";
}

CocoAnnotationSet read_coco_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("coco: cannot open " + path);
    json root = json::parse(in);

    CocoAnnotationSet set;
    set.categories.clear();
    for (const auto& j : root.at("images")) {
        CocoImage img;
        img.id = j.at("id").get<int>();
        img.file_name = j.value("file_name", "");
        img.width = j.at("width").get<int>();
        img.height = j.at("height").get<int>();
        set.images.push_back(img);
    }
    for (const auto& j : root.at("annotations")) {
        CocoAnnotation ann;
        ann.id = j.at("id").get<int>();
        ann.image_id = j.at("image_id").get<int>();
        ann.category_id = j.value("category_id", 1);
        const auto& seg = j.at("segmentation");
        ann.segmentation.height = seg.at("size")[0].get<int>();
        ann.segmentation.width = seg.at("size")[1].get<int>();
        ann.segmentation.counts = seg.at("counts").get<std::vector<std::uint32_t>>();
        if (j.contains("bbox")) {
            for (int i = 0; i < 4; ++i) ann.bbox[i] = static_cast<int>(std::lround(j["bbox"][i].get<double>()));
        }
        ann.area = j.value("area", std::int64_t{0});
        ann.iscrowd = j.value("iscrowd", 0);
        set.annotations.push_back(ann);
    }
    if (root.contains("categories")) {
        for (const auto& j : root["categories"]) {
            set.categories.push_back({j.at("id").get<int>(), j.value("name", "")});
        }
    }
    return set;
}

}  // namespace handforge
