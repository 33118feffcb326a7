#include "pcdefect/seg_eval.hpp"

#include <algorithm>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace pcdefect {

ConfusionCounts count_confusion(const LabelField& predictions,
                                const LabelField& ground_truth) {
    if (predictions.size() != ground_truth.size())
        throw input_error("prediction/ground-truth length mismatch: " +
                          std::to_string(predictions.size()) + " vs " +
                          std::to_string(ground_truth.size()));
    if (predictions.empty()) throw input_error("cannot score empty label fields");

    ConfusionCounts c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool pred = predictions[i] == kDamaged;
        const bool truth = ground_truth[i] == kDamaged;
        if (pred && truth)
            ++c.tp;
        else if (!pred && !truth)
            ++c.tn;
        else if (pred)
            ++c.fp;
        else
            ++c.fn;
    }
    return c;
}

namespace {

double class_iou(std::int64_t inter, std::int64_t uni) {
    if (uni == 0) return 1.0;  // class absent everywhere: perfect agreement
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

SegScores scores_from(const ConfusionCounts& counts) {
    const std::int64_t total = counts.total();
    if (total <= 0) throw input_error("cannot score zero points");

    SegScores s;
    s.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(total);
    s.iou_damaged = class_iou(counts.tp, counts.tp + counts.fp + counts.fn);
    s.iou_undamaged = class_iou(counts.tn, counts.tn + counts.fn + counts.fp);
    s.miou = 0.5 * (s.iou_damaged + s.iou_undamaged);
    return s;
}

ScoreResult score(const LabelField& predictions, const LabelField& ground_truth) {
    ScoreResult r;
    r.counts = count_confusion(predictions, ground_truth);
    r.scores = scores_from(r.counts);
    return r;
}

LabelField threshold_segment(const RelativeAngleField& angles, double tau) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (!(tau >= 0.0 && tau <= half_pi))
        throw input_error("threshold " + std::to_string(tau) +
                          " outside [0, pi/2]");
    if (angles.angles.empty()) throw input_error("cannot segment empty angle field");

    LabelField out(angles.angles.size(), kUndamaged);
    for (std::size_t i = 0; i < angles.angles.size(); ++i)
        if (angles.angles[i] > tau) out[i] = kDamaged;
    return out;
}

LabelField majority_smooth(const LabelField& labels, const PointCloud& cloud,
                           const KdTree& tree, int k) {
    if (labels.size() != cloud.size())
        throw input_error("label/cloud length mismatch: " +
                          std::to_string(labels.size()) + " vs " +
                          std::to_string(cloud.size()));
    if (labels.empty()) throw input_error("cannot smooth empty label field");
    if (k < 1 || static_cast<std::size_t>(k) > cloud.size())
        throw input_error("smoothing neighborhood " + std::to_string(k) +
                          " outside [1, " + std::to_string(cloud.size()) + "]");

    LabelField out(labels.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const std::vector<int> nb = tree.knn(cloud.points[i], k);
        int damaged = 0;
        for (int j : nb)
            if (labels[static_cast<std::size_t>(j)] == kDamaged) ++damaged;
        const int undamaged = k - damaged;
        if (damaged > undamaged)
            out[i] = kDamaged;
        else if (damaged < undamaged)
            out[i] = kUndamaged;
        else
            out[i] = labels[i];
    }
    return out;
}

SweepResult sweep_threshold(const RelativeAngleField& angles,
                            const LabelField& ground_truth, int steps) {
    if (steps < 1) throw input_error("sweep needs at least one step");
    constexpr double half_pi = std::numbers::pi / 2.0;

    SweepResult best;
    bool have = false;
    for (int i = 0; i <= steps; ++i) {
        const double tau = half_pi * static_cast<double>(i) / static_cast<double>(steps);
        const LabelField pred = threshold_segment(angles, std::min(tau, half_pi));
        const SegScores s = score(pred, ground_truth).scores;
        if (!have || s.miou > best.scores.miou) {
            best.tau = tau;
            best.scores = s;
            have = true;
        }
    }
    return best;
}

}  // namespace pcdefect
