#include "handforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace handforge {

double iou_box(const BoxD& a, const BoxD& b) {
    if (a.w <= 0.0 || a.h <= 0.0 || b.w <= 0.0 || b.h <= 0.0) {
        throw std::invalid_argument("iou_box: boxes must have positive extent");
    }
    double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    double inter = ix * iy;
    double uni = a.w * a.h + b.w * b.h - inter;
    return inter / uni;
}

double iou_mask(const Mask& a, const Mask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("iou_mask: dimension mismatch");
    }
    std::int64_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        bool pa = a.data[i] != 0, pb = b.data[i] != 0;
        inter += pa && pb;
        uni += pa || pb;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

MatchResult match_detections(const std::vector<double>& det_scores,
                             const std::vector<std::vector<double>>& iou, double iou_threshold) {
    std::size_t nd = det_scores.size();
    std::size_t ng = iou.empty() ? (nd ? 0 : 0) : iou[0].size();
    if (!iou.empty()) ng = iou[0].size();

    std::vector<std::size_t> order(nd);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return det_scores[a] > det_scores[b]; });

    MatchResult result;
    result.det_to_gt.assign(nd, -1);
    result.gt_matched.assign(ng, false);
    for (std::size_t oi : order) {
        double best = iou_threshold;
        int best_gt = -1;
        for (std::size_t g = 0; g < ng; ++g) {
            if (result.gt_matched[g]) continue;
            if (iou[oi][g] >= best) {
                best = iou[oi][g];
                best_gt = static_cast<int>(g);
            }
        }
        if (best_gt >= 0) {
            result.det_to_gt[oi] = best_gt;
            result.gt_matched[best_gt] = true;
        }
    }
    return result;
}

ApConfig ApConfig::coco_default() {
    ApConfig c;
    for (int i = 0; i < 10; ++i) c.iou_thresholds.push_back(0.50 + 0.05 * i);
    return c;
}

namespace {

struct ImageEval {
    std::vector<double> scores;               // filtered + truncated, score-desc
    std::vector<std::vector<double>> iou;     // [det][gt]
    std::vector<bool> gt_ignored;             // outside area range
    int gt_count_in_range = 0;
};

Mask decode_or_fail(const Rle& rle) { return rle_decode(rle); }

BoxD det_box(const Detection& d) {
    if (d.box) return *d.box;
    if (d.segmentation) {
        auto b = mask_to_bbox(decode_or_fail(*d.segmentation));
        return {static_cast<double>(b[0]), static_cast<double>(b[1]), static_cast<double>(b[2]),
                static_cast<double>(b[3])};
    }
    throw std::invalid_argument("detection: no geometry");
}

// Per-image IoU matrix + area-range flags, shared across IoU thresholds.
std::vector<ImageEval> prepare_images(const std::vector<Detection>& dets,
                                      const std::vector<GroundTruthInstance>& gts,
                                      const ApConfig& config, EvalGeometry geometry) {
    std::map<int, std::vector<std::size_t>> dets_by_image, gts_by_image;
    for (std::size_t i = 0; i < dets.size(); ++i) dets_by_image[dets[i].image_id].push_back(i);
    for (std::size_t i = 0; i < gts.size(); ++i) gts_by_image[gts[i].image_id].push_back(i);

    std::vector<int> image_ids;
    for (const auto& [id, v] : gts_by_image) image_ids.push_back(id);
    for (const auto& [id, v] : dets_by_image) {
        if (!gts_by_image.count(id)) image_ids.push_back(id);
    }
    std::sort(image_ids.begin(), image_ids.end());

    std::vector<ImageEval> images;
    for (int image_id : image_ids) {
        ImageEval ev;

        std::vector<std::size_t> dlist;
        if (auto it = dets_by_image.find(image_id); it != dets_by_image.end()) {
            for (std::size_t i : it->second) {
                if (dets[i].score >= config.score_min) dlist.push_back(i);
            }
        }
        std::stable_sort(dlist.begin(), dlist.end(),
                         [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
        if (static_cast<int>(dlist.size()) > config.max_dets) dlist.resize(config.max_dets);

        std::vector<std::size_t> glist;
        if (auto it = gts_by_image.find(image_id); it != gts_by_image.end()) glist = it->second;

        for (std::size_t g : glist) {
            bool in_range = true;
            if (config.area_range) {
                double a = static_cast<double>(gts[g].area);
                in_range = a >= config.area_range->first && a < config.area_range->second;
            }
            ev.gt_ignored.push_back(!in_range);
            ev.gt_count_in_range += in_range;
        }

        std::vector<Mask> det_masks, gt_masks;
        if (geometry == EvalGeometry::MaskIoU) {
            for (std::size_t g : glist) gt_masks.push_back(decode_or_fail(gts[g].segmentation));
            for (std::size_t d : dlist) {
                if (!dets[d].segmentation) throw std::invalid_argument("detection: mask IoU requires segmentation");
                det_masks.push_back(decode_or_fail(*dets[d].segmentation));
            }
        }

        for (std::size_t di = 0; di < dlist.size(); ++di) {
            ev.scores.push_back(dets[dlist[di]].score);
            std::vector<double> row;
            for (std::size_t gi = 0; gi < glist.size(); ++gi) {
                if (geometry == EvalGeometry::MaskIoU) {
                    row.push_back(iou_mask(det_masks[di], gt_masks[gi]));
                } else {
                    const auto& b = gts[glist[gi]].box;
                    BoxD gt_box{static_cast<double>(b[0]), static_cast<double>(b[1]),
                                static_cast<double>(b[2]), static_cast<double>(b[3])};
                    row.push_back(iou_box(det_box(dets[dlist[di]]), gt_box));
                }
            }
            ev.iou.push_back(std::move(row));
        }
        images.push_back(std::move(ev));
    }
    return images;
}

// Greedy matching with ignore semantics: a detection prefers the best
// non-ignored ground truth at or above the threshold; failing that it may
// absorb an ignored one (and is then excluded from the PR points).
void match_one_image(const ImageEval& ev, double threshold, std::vector<int>& det_flags) {
    std::size_t nd = ev.scores.size();
    std::size_t ng = ev.gt_ignored.size();
    std::vector<bool> taken(ng, false);
    det_flags.assign(nd, 0);  // 0 = FP, 1 = TP, 2 = ignored

    for (std::size_t d = 0; d < nd; ++d) {  // already score-sorted
        double best = threshold;
        int best_gt = -1;
        bool best_ignored = false;
        for (std::size_t g = 0; g < ng; ++g) {
            if (taken[g]) continue;
            // Once matched to a real ground truth, never trade it for an
            // ignored one.
            if (best_gt >= 0 && !best_ignored && ev.gt_ignored[g]) continue;
            if (ev.iou[d][g] < best) continue;
            // Prefer any non-ignored candidate over an ignored best.
            if (best_gt >= 0 && best_ignored && !ev.gt_ignored[g]) {
                best = ev.iou[d][g];
                best_gt = static_cast<int>(g);
                best_ignored = false;
                continue;
            }
            if (ev.iou[d][g] >= best && (best_gt < 0 || ev.gt_ignored[g] == best_ignored)) {
                best = ev.iou[d][g];
                best_gt = static_cast<int>(g);
                best_ignored = ev.gt_ignored[g];
            }
        }
        if (best_gt >= 0) {
            taken[best_gt] = true;
            det_flags[d] = ev.gt_ignored[best_gt] ? 2 : 1;
        }
    }
}

struct PrPoint {
    double score;
    int flag;  // 1 TP, 0 FP (ignored dets excluded)
};

double interpolated_ap(std::vector<PrPoint>& points, int gt_total) {
    std::stable_sort(points.begin(), points.end(),
                     [](const PrPoint& a, const PrPoint& b) { return a.score > b.score; });
    std::vector<double> precision, recall;
    int tp = 0, fp = 0;
    for (const auto& p : points) {
        if (p.flag == 1) ++tp;
        else ++fp;
        precision.push_back(static_cast<double>(tp) / (tp + fp));
        recall.push_back(static_cast<double>(tp) / gt_total);
    }
    // Precision envelope.
    for (int i = static_cast<int>(precision.size()) - 2; i >= 0; --i) {
        precision[i] = std::max(precision[i], precision[i + 1]);
    }
    // 101-point interpolation over recall {0, 0.01, ..., 1}.
    double sum = 0.0;
    for (int k = 0; k <= 100; ++k) {
        double r = k / 100.0;
        auto it = std::lower_bound(recall.begin(), recall.end(), r);
        if (it != recall.end()) sum += precision[it - recall.begin()];
    }
    return sum / 101.0;
}

}  // namespace

ApResult average_precision(const std::vector<Detection>& dets,
                           const std::vector<GroundTruthInstance>& gts, const ApConfig& config,
                           EvalGeometry geometry) {
    std::vector<ImageEval> images = prepare_images(dets, gts, config, geometry);

    int gt_total = 0;
    for (const auto& ev : images) gt_total += ev.gt_count_in_range;
    if (gt_total == 0) return {std::nullopt, std::nullopt};

    std::vector<double> thresholds =
        config.iou_thresholds.empty() ? ApConfig::coco_default().iou_thresholds : config.iou_thresholds;

    double ap_sum = 0.0, ar_sum = 0.0;
    for (double t : thresholds) {
        std::vector<PrPoint> points;
        int matched = 0;
        for (const auto& ev : images) {
            std::vector<int> flags;
            match_one_image(ev, t, flags);
            for (std::size_t d = 0; d < flags.size(); ++d) {
                if (flags[d] == 2) continue;
                points.push_back({ev.scores[d], flags[d]});
                matched += flags[d] == 1;
            }
        }
        ap_sum += interpolated_ap(points, gt_total);
        ar_sum += static_cast<double>(matched) / gt_total;
    }
    return {ap_sum / thresholds.size(), ar_sum / thresholds.size()};
}

std::pair<double, double> adaptive_area_thresholds(std::vector<double> areas, bool* degenerate) {
    if (areas.size() < 3) throw std::invalid_argument("adaptive_area_thresholds: need at least 3 areas");
    std::sort(areas.begin(), areas.end());

    auto percentile = [&](double p) {
        double pos = p * static_cast<double>(areas.size() - 1);
        std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        std::size_t hi = std::min(lo + 1, areas.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return areas[lo] + (areas[hi] - areas[lo]) * frac;
    };

    double t1 = percentile(1.0 / 3.0);
    double t2 = percentile(2.0 / 3.0);
    if (degenerate) *degenerate = areas.front() == areas.back();
    return {t1, t2};
}

ApReport evaluate_ap(const std::vector<Detection>& dets, const std::vector<GroundTruthInstance>& gts,
                     double score_min, EvalGeometry geometry) {
    ApReport report;

    std::vector<double> areas;
    for (const auto& g : gts) areas.push_back(static_cast<double>(g.area));

    ApConfig base = ApConfig::coco_default();
    base.score_min = score_min;
    auto full = average_precision(dets, gts, base, geometry);
    report.ap_5095 = full.ap;
    report.ar_5095 = full.ar;

    ApConfig at50 = base;
    at50.iou_thresholds = {0.50};
    report.ap_50 = average_precision(dets, gts, at50, geometry).ap;

    if (areas.size() >= 3) {
        auto [t1, t2] = adaptive_area_thresholds(areas);
        report.area_thresholds = {t1, t2};
        const double inf = std::numeric_limits<double>::infinity();
        ApConfig small = base, medium = base, large = base;
        small.area_range = {{-inf, t1}};
        medium.area_range = {{t1, t2}};
        large.area_range = {{t2, inf}};
        report.ap_small = average_precision(dets, gts, small, geometry).ap;
        report.ap_medium = average_precision(dets, gts, medium, geometry).ap;
        report.ap_large = average_precision(dets, gts, large, geometry).ap;
    }
    return report;
}

}  // namespace handforge
