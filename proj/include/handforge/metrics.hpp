#pragma once

#include <array>
#include <optional>
#include <vector>

#include "handforge/coco.hpp"
#include "handforge/image.hpp"

namespace handforge {

struct BoxD {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
};

// Predicted instance; either geometry may be present, box mode derives
// boxes from masks via mask_to_bbox.
struct Detection {
    int image_id = 0;
    double score = 0.0;
    std::optional<BoxD> box;
    std::optional<Rle> segmentation;
    int category_id = 1;
};

struct GroundTruthInstance {
    int image_id = 0;
    Rle segmentation;
    std::array<int, 4> box{0, 0, 0, 0};
    std::int64_t area = 0;
};

double iou_box(const BoxD& a, const BoxD& b);
double iou_mask(const Mask& a, const Mask& b);  // throws on dimension mismatch

// Greedy COCO matching on one image: detections in descending score
// (ties by insertion order), each takes the unmatched ground truth with
// the highest IoU >= threshold.
struct MatchResult {
    std::vector<int> det_to_gt;   // index into gts, -1 = FP
    std::vector<bool> gt_matched;
};

MatchResult match_detections(const std::vector<double>& det_scores,
                             const std::vector<std::vector<double>>& iou,  // [det][gt]
                             double iou_threshold);

struct ApConfig {
    std::vector<double> iou_thresholds;  // default 0.50:0.05:0.95
    double score_min = 0.0;
    int max_dets = 100;
    std::optional<std::pair<double, double>> area_range;  // [lo, hi)

    static ApConfig coco_default();
};

struct ApResult {
    std::optional<double> ap;  // nullopt = undefined (no ground truth in range)
    std::optional<double> ar;
};

enum class EvalGeometry { MaskIoU, BoxIoU };

// COCO protocol: per-threshold greedy matching, global score-sorted PR
// points, precision envelope, 101-point recall interpolation; AP is the
// mean over thresholds, AR the mean of maximum recall.
ApResult average_precision(const std::vector<Detection>& dets,
                           const std::vector<GroundTruthInstance>& gts, const ApConfig& config,
                           EvalGeometry geometry);

// Percentile (33.3 / 66.7, linear interpolation) area thresholds so the
// small/medium/large categories hold equally many instances. Throws when
// fewer than 3 areas are given; emits *degenerate=true when all areas are
// equal.
std::pair<double, double> adaptive_area_thresholds(std::vector<double> gt_areas,
                                                   bool* degenerate = nullptr);

struct ApReport {
    std::optional<double> ap_5095;
    std::optional<double> ap_50;
    std::optional<double> ap_small;
    std::optional<double> ap_medium;
    std::optional<double> ap_large;
    std::optional<double> ar_5095;
    std::pair<double, double> area_thresholds{0.0, 0.0};
};

// Full report with adaptive area categories derived from the ground truth.
ApReport evaluate_ap(const std::vector<Detection>& dets, const std::vector<GroundTruthInstance>& gts,
                     double score_min, EvalGeometry geometry);

}  // namespace handforge
