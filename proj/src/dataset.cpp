#include "handforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "handforge/png_io.hpp"
#include "handforge/renderer.hpp"

namespace fs = std::filesystem;

namespace handforge {

namespace {

std::string frame_prefix(std::uint64_t frame_index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06llu", static_cast<unsigned long long>(frame_index));
    return buf;
}

}  // namespace

std::vector<std::string> write_sample(const RenderedSample& sample, std::uint64_t frame_index,
                                      const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::string prefix = (fs::path(out_dir) / frame_prefix(frame_index)).string();

    std::vector<std::string> paths;
    std::string rgb_path = prefix + "_rgb.png";
    write_png(rgb_path, sample.buffers.color);
    paths.push_back(rgb_path);

    std::string depth_path = prefix + "_depth.png";
    write_png(depth_path, sample.depth_png);
    paths.push_back(depth_path);

    for (std::size_t k = 0; k < sample.masks.size(); ++k) {
        std::string mask_path = prefix + "_mask" + std::to_string(k + 1) + ".png";
        write_png(mask_path, sample.masks[k]);
        paths.push_back(mask_path);
    }
    return paths;
}

DatasetStats compute_dataset_stats(const CocoAnnotationSet& set, int area_bins) {
    DatasetStats stats;
    stats.centroid_heatmap.assign(static_cast<std::size_t>(stats.heatmap_cols) * stats.heatmap_rows, 0);
    stats.total_images = static_cast<std::int64_t>(set.images.size());
    stats.total_annotations = static_cast<std::int64_t>(set.annotations.size());

    std::map<int, int> per_image;
    for (const auto& img : set.images) per_image[img.id] = 0;
    for (const auto& ann : set.annotations) per_image[ann.image_id] += 1;
    for (const auto& [id, count] : per_image) {
        stats.instance_count_histogram[std::min(count, 2)] += 1;
    }

    std::vector<double> areas;
    for (const auto& ann : set.annotations) {
        const CocoImage* img = set.find_image(ann.image_id);
        if (!img) continue;
        Mask mask = rle_decode(ann.segmentation);
        double sx = 0.0, sy = 0.0;
        std::int64_t n = 0;
        for (int y = 0; y < mask.height; ++y) {
            for (int x = 0; x < mask.width; ++x) {
                if (mask.at(x, y) == 0) continue;
                sx += x;
                sy += y;
                ++n;
            }
        }
        if (n == 0) continue;
        double cx = sx / static_cast<double>(n);
        double cy = sy / static_cast<double>(n);
        int bx = std::min(stats.heatmap_cols - 1,
                          static_cast<int>(cx / img->width * stats.heatmap_cols));
        int by = std::min(stats.heatmap_rows - 1,
                          static_cast<int>(cy / img->height * stats.heatmap_rows));
        stats.centroid_heatmap[static_cast<std::size_t>(by) * stats.heatmap_cols + bx] += 1;
        areas.push_back(static_cast<double>(ann.area));
    }

    if (!areas.empty() && area_bins > 0) {
        double lo = *std::min_element(areas.begin(), areas.end());
        double hi = *std::max_element(areas.begin(), areas.end());
        if (hi <= lo) hi = lo + 1.0;
        stats.area_histogram.assign(area_bins, 0);
        for (int b = 0; b <= area_bins; ++b) {
            stats.area_bin_edges.push_back(lo + (hi - lo) * b / area_bins);
        }
        for (double a : areas) {
            int b = std::min(area_bins - 1, static_cast<int>((a - lo) / (hi - lo) * area_bins));
            stats.area_histogram[b] += 1;
        }
    }
    return stats;
}

void write_stats_csv(const std::string& path, const DatasetStats& stats) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("stats: cannot write " + path);
    out << "section,key,value\n";
    out << "summary,images," << stats.total_images << "\n";
    out << "summary,annotations," << stats.total_annotations << "\n";
    for (int i = 0; i < 3; ++i) {
        out << "instances," << i << "," << stats.instance_count_histogram[i] << "\n";
    }
    for (std::size_t b = 0; b < stats.area_histogram.size(); ++b) {
        out << "area_bin," << stats.area_bin_edges[b] << "," << stats.area_histogram[b] << "\n";
    }
    for (int r = 0; r < stats.heatmap_rows; ++r) {
        for (int c = 0; c < stats.heatmap_cols; ++c) {
            std::int64_t v = stats.centroid_heatmap[static_cast<std::size_t>(r) * stats.heatmap_cols + c];
            if (v != 0) out << "centroid_bin," << c << ":" << r << "," << v << "\n";
        }
    }
}

void write_heatmap_png(const std::string& path, const DatasetStats& stats) {
    std::int64_t peak = 1;
    for (auto v : stats.centroid_heatmap) peak = std::max(peak, v);
    ImageU8 img(stats.heatmap_cols, stats.heatmap_rows, 1, 0);
    for (int r = 0; r < stats.heatmap_rows; ++r) {
        for (int c = 0; c < stats.heatmap_cols; ++c) {
            std::int64_t v = stats.centroid_heatmap[static_cast<std::size_t>(r) * stats.heatmap_cols + c];
            img.at(c, r) = static_cast<std::uint8_t>(255 * v / peak);
        }
    }
    write_png(path, img);
}

void AdapterSpec::validate() const {
    if (!(depth_near_m < depth_far_m)) {
        throw std::invalid_argument("adapter.depth_rule: require near < far");
    }
    if (mask_rule == MaskRule::KeepCategories && keep_categories.empty()) {
        throw std::invalid_argument("adapter.mask_rule: keep_categories requires at least one id");
    }
}

namespace {

// Label sources for one frame in the normalized layout.
struct FrameInputs {
    std::optional<fs::path> rgb;
    std::optional<fs::path> depth16;   // metric, millimeters
    std::optional<fs::path> depth8;    // already encoded
    std::vector<fs::path> label_maps;  // raw label maps
    std::vector<fs::path> masks;       // already binary per-instance masks
};

std::map<int, FrameInputs> scan_normalized_dir(const std::string& dir) {
    std::map<int, FrameInputs> frames;
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") entries.push_back(e.path());
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& p : entries) {
        std::string name = p.filename().string();
        if (name.size() < 7) continue;
        int frame = 0;
        try {
            frame = std::stoi(name.substr(0, 6));
        } catch (const std::exception&) {
            continue;
        }
        FrameInputs& fi = frames[frame];
        if (name.find("_rgb.png") != std::string::npos) {
            fi.rgb = p;
        } else if (name.find("_depth16.png") != std::string::npos) {
            fi.depth16 = p;
        } else if (name.find("_depth.png") != std::string::npos) {
            fi.depth8 = p;
        } else if (name.find("_labels") != std::string::npos) {
            fi.label_maps.push_back(p);
        } else if (name.find("_mask") != std::string::npos) {
            fi.masks.push_back(p);
        }
    }
    return frames;
}

std::vector<Mask> masks_from_label_map(const ImageU16& labels, const AdapterSpec& spec,
                                       std::uint64_t frame, AdaptReport& report) {
    std::vector<Mask> out;
    auto make_mask = [&](auto&& keep) {
        Mask m(labels.width, labels.height, 1, 0);
        std::size_t n = 0;
        for (int y = 0; y < labels.height; ++y) {
            for (int x = 0; x < labels.width; ++x) {
                if (keep(labels.at(x, y))) {
                    m.at(x, y) = 255;
                    ++n;
                }
            }
        }
        if (n > 0) out.push_back(std::move(m));
    };

    switch (spec.mask_rule) {
        case MaskRule::Binarize: {
            int t = spec.binarize_threshold;
            make_mask([t](std::uint16_t v) { return v > t; });
            break;
        }
        case MaskRule::KeepCategories: {
            std::set<int> keep(spec.keep_categories.begin(), spec.keep_categories.end());
            std::set<int> present;
            for (auto v : labels.data) {
                if (v != 0) present.insert(v);
            }
            for (int v : present) {
                if (keep.count(v)) {
                    make_mask([v](std::uint16_t x) { return x == v; });
                } else {
                    report.unknown_label_warnings += 1;
                    report.warnings.push_back("frame " + std::to_string(frame) + ": unknown label id " +
                                              std::to_string(v) + " skipped");
                }
            }
            break;
        }
        case MaskRule::Identity: {
            std::set<int> present;
            for (auto v : labels.data) {
                if (v != 0) present.insert(v);
            }
            for (int v : present) {
                make_mask([v](std::uint16_t x) { return x == v; });
            }
            break;
        }
    }
    return out;
}

}  // namespace

AdaptReport adapt_external_dataset(const std::string& input_dir, const AdapterSpec& spec,
                                   const std::string& out_dir, CocoAnnotationSet* annotations) {
    spec.validate();
    fs::create_directories(out_dir);

    AdaptReport report;
    auto frames = scan_normalized_dir(input_dir);
    for (const auto& [frame, fi] : frames) {
        std::string prefix = (fs::path(out_dir) / frame_prefix(frame)).string();
        report.frames += 1;

        if (fi.rgb) {
            write_png(prefix + "_rgb.png", read_png(fi.rgb->string()));
        }

        if (fi.depth16) {
            ImageU16 depth_mm = read_png16(fi.depth16->string());
            ImageU8 encoded(depth_mm.width, depth_mm.height, 1);
            for (std::size_t i = 0; i < depth_mm.data.size(); ++i) {
                double d = depth_mm.data[i] / 1000.0;
                if (spec.truncate_beyond_far && d > spec.depth_far_m) d = spec.depth_far_m;
                encoded.data[i] = encode_depth_value(d, spec.depth_near_m, spec.depth_far_m);
            }
            write_png(prefix + "_depth.png", encoded);
        } else if (fi.depth8) {
            // Already in the encoded byte range; pass through.
            write_png(prefix + "_depth.png", read_png(fi.depth8->string()));
        }

        std::vector<Mask> masks;
        for (const auto& label_path : fi.label_maps) {
            ImageU16 labels = read_png16(label_path.string());
            auto extracted = masks_from_label_map(labels, spec, frame, report);
            for (auto& m : extracted) masks.push_back(std::move(m));
        }
        // Binary per-instance masks from an already-adapted dataset are
        // kept as-is (re-binarizing {0,255} is the identity).
        for (const auto& mask_path : fi.masks) {
            Mask m = read_png(mask_path.string());
            for (auto& v : m.data) v = v != 0 ? 255 : 0;
            if (mask_area(m) > 0) masks.push_back(std::move(m));
        }

        for (std::size_t k = 0; k < masks.size(); ++k) {
            write_png(prefix + "_mask" + std::to_string(k + 1) + ".png", masks[k]);
            report.masks_written += 1;
        }
    }

    CocoAnnotationSet set = build_coco_annotations(out_dir);
    if (spec.instance_merge) {
        for (auto& ann : set.annotations) ann.category_id = 1;
    }
    write_coco_json((fs::path(out_dir) / "annotations.json").string(), set);
    if (annotations) *annotations = std::move(set);
    return report;
}

ImageU8 preprocess_depth(const ImageU8& depth, const ImageU8& static_background) {
    if (depth.width != static_background.width || depth.height != static_background.height ||
        depth.channels != 1 || static_background.channels != 1) {
        throw std::invalid_argument("preprocess_depth: dimension mismatch");
    }

    ImageU8 out = depth;
    // Stage 1: restore obstacle-free holes from the static scene capture.
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        if (out.data[i] == 0) out.data[i] = static_background.data[i];
    }

    // Stage 2: remaining holes take the Chebyshev-nearest valid value.
    // Sources are fixed to the stage-1 result so fill order cannot leak.
    const ImageU8 source = out;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            if (source.at(x, y) != 0) continue;
            bool filled = false;
            int max_r = std::max(out.width, out.height);
            for (int r = 1; r <= max_r && !filled; ++r) {
                // Ring cells in scan order: rows top to bottom, x left to
                // right inside each row.
                for (int yy = y - r; yy <= y + r && !filled; ++yy) {
                    if (yy < 0 || yy >= out.height) continue;
                    bool edge_row = (yy == y - r || yy == y + r);
                    int step = edge_row ? 1 : 2 * r;
                    for (int xx = x - r; xx <= x + r; xx += step) {
                        if (xx < 0 || xx >= out.width) continue;
                        if (source.at(xx, yy) != 0) {
                            out.at(x, y) = source.at(xx, yy);
                            filled = true;
                            break;
                        }
                    }
                }
            }
            // A fully hollow image stays hollow.
        }
    }
    return out;
}

void write_metadata_json(const std::string& path, const std::string& metadata_json_text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("metadata: cannot write " + path);
    out << metadata_json_text;
    if (!metadata_json_text.empty() && metadata_json_text.back() != '\n') out << "\n";
}

}  // namespace handforge
