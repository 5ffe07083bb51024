#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "handforge/coco.hpp"
#include "handforge/image.hpp"
#include "handforge/renderer.hpp"

namespace handforge {

// Writes {frame:06d}_rgb.png, _depth.png and _mask{k}.png (k starting at
// 1); byte-identical on identical inputs. Returns the written paths.
std::vector<std::string> write_sample(const RenderedSample& sample, std::uint64_t frame_index,
                                      const std::string& out_dir);

struct DatasetStats {
    std::array<std::int64_t, 3> instance_count_histogram{0, 0, 0};  // 0/1/2 instances
    int heatmap_cols = 32;
    int heatmap_rows = 26;
    std::vector<std::int64_t> centroid_heatmap;  // rows x cols, row-major
    std::vector<double> area_bin_edges;
    std::vector<std::int64_t> area_histogram;

    std::int64_t total_images = 0;
    std::int64_t total_annotations = 0;
};

// Instance histogram over images, mask-centroid heatmap on a 32x26 bin
// grid, and area histogram (bin count configurable).
DatasetStats compute_dataset_stats(const CocoAnnotationSet& set, int area_bins = 20);

void write_stats_csv(const std::string& path, const DatasetStats& stats);
void write_heatmap_png(const std::string& path, const DatasetStats& stats);

enum class MaskRule { Binarize, KeepCategories, Identity };

struct AdapterSpec {
    MaskRule mask_rule = MaskRule::Binarize;
    int binarize_threshold = 0;            // mask pixels strictly above it
    std::vector<int> keep_categories;
    bool instance_merge = true;            // unify labels into category 1
    double depth_near_m = 0.2;
    double depth_far_m = 1.0;
    bool truncate_beyond_far = true;

    void validate() const;
};

struct AdaptReport {
    int frames = 0;
    int masks_written = 0;
    int unknown_label_warnings = 0;
    std::vector<std::string> warnings;
};

// Converts a dataset in the documented normalized layout (per-frame
// {frame:06d}_rgb.png optional, {frame:06d}_labels{k}.png raw label maps,
// {frame:06d}_depth16.png metric depth in millimeters) into the generated-
// dataset schema: binary masks, 8-bit encoded depth, COCO annotations.
// Already-adapted directories (binary _mask{k}.png + 8-bit _depth.png)
// pass through unchanged, which makes adaptation idempotent.
AdaptReport adapt_external_dataset(const std::string& input_dir, const AdapterSpec& spec,
                                   const std::string& out_dir, CocoAnnotationSet* annotations = nullptr);

// Fills hole pixels (value 0 when zero_means_invalid) from the static
// background image, then any remaining holes from the Chebyshev-nearest
// valid pixel (ties broken by scan order). Dimension mismatch throws.
ImageU8 preprocess_depth(const ImageU8& depth, const ImageU8& static_background);

// Dataset metadata echo (policy, seed, generator version, encoding flags).
void write_metadata_json(const std::string& path, const std::string& metadata_json_text);

}  // namespace handforge
