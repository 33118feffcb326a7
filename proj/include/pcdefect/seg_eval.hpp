#pragma once

#include "pcdefect/kdtree.hpp"
#include "pcdefect/types.hpp"

#include <cstdint>

namespace pcdefect {

/// Damaged is the positive class.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

struct SegScores {
    double accuracy = 0.0;
    double iou_damaged = 0.0;
    double iou_undamaged = 0.0;
    double miou = 0.0;
};

ConfusionCounts count_confusion(const LabelField& predictions,
                                const LabelField& ground_truth);

/// Accuracy, per-class IoU, and their mean from confusion counts. A class
/// absent from both prediction and truth scores IoU 1. Throws input_error
/// on zero total.
SegScores scores_from(const ConfusionCounts& counts);

struct ScoreResult {
    ConfusionCounts counts;
    SegScores scores;
};

/// Throws input_error on empty or length-mismatched inputs.
ScoreResult score(const LabelField& predictions, const LabelField& ground_truth);

/// Labels a point damaged iff its relative angle exceeds tau. Throws
/// input_error unless tau is in [0, pi/2].
LabelField threshold_segment(const RelativeAngleField& angles, double tau);

/// Replaces each label by the majority among the point's k nearest
/// neighbors (the point itself included); an exact tie keeps the original
/// label. All replacements read the input labels.
LabelField majority_smooth(const LabelField& labels, const PointCloud& cloud,
                           const KdTree& tree, int k);

struct SweepResult {
    double tau = 0.0;
    SegScores scores;
};

/// Evaluates steps+1 evenly spaced thresholds over [0, pi/2] and returns
/// the one with the highest mIoU (ties go to the smaller tau).
SweepResult sweep_threshold(const RelativeAngleField& angles,
                            const LabelField& ground_truth, int steps = 64);

}  // namespace pcdefect
