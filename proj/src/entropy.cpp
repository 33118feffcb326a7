#include "pcdefect/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <tuple>

namespace pcdefect {

const char* to_string(Feature f) {
    switch (f) {
        case Feature::position: return "position";
        case Feature::normal: return "normal";
        case Feature::relative_angle: return "relative_angle";
    }
    return "?";
}

const char* to_string(Section s) {
    switch (s) {
        case Section::overall: return "overall";
        case Section::undamaged: return "undamaged";
        case Section::damaged: return "damaged";
    }
    return "?";
}

Histogram::Histogram(int bins_, double lo_, double hi_)
    : bins(bins_), lo(lo_), hi(hi_) {
    if (bins < 1) throw input_error("Histogram: need at least one bin");
    if (!(lo < hi)) throw input_error("Histogram: domain must satisfy lo < hi");
    counts.assign(static_cast<std::size_t>(bins), 0);
}

void Histogram::add(double value) {
    if (!std::isfinite(value))
        throw input_error("Histogram: non-finite value");
    if (value < lo - kDomainTol || value > hi + kDomainTol)
        throw input_error("Histogram: value " + std::to_string(value) +
                          " outside domain [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    const double t = (value - lo) / (hi - lo);
    auto bin = static_cast<int>(t * bins);
    bin = std::clamp(bin, 0, bins - 1);
    ++counts[static_cast<std::size_t>(bin)];
    ++total;
}

void Histogram::merge(const Histogram& other) {
    if (other.bins != bins || other.lo != lo || other.hi != hi)
        throw input_error("Histogram: merging incompatible histograms");
    for (int b = 0; b < bins; ++b) counts[b] += other.counts[b];
    total += other.total;
}

double entropy_bits(const Histogram& hist) {
    if (hist.total <= 0) throw input_error("entropy: empty histogram");
    double h = 0.0;
    for (const std::int64_t c : hist.counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(hist.total);
        h -= p * std::log2(p);
    }
    return h;
}

double entropy(std::span<const double> values, int bins, double lo, double hi) {
    if (values.empty()) throw input_error("entropy: empty input");
    Histogram hist(bins, lo, hi);
    for (const double v : values) hist.add(v);
    return entropy_bits(hist);
}

namespace {

struct FeatureDomain {
    double lo;
    double hi;
};

FeatureDomain domain_of(Feature f) {
    switch (f) {
        case Feature::position: return {-0.5, 0.5};
        case Feature::normal: return {-1.0, 1.0};
        case Feature::relative_angle: return {0.0, std::numbers::pi / 2.0};
    }
    return {0.0, 1.0};
}

bool in_section(Section s, Label label) {
    switch (s) {
        case Section::overall: return true;
        case Section::undamaged: return label == kUndamaged;
        case Section::damaged: return label != kUndamaged;
    }
    return false;
}

}  // namespace

std::vector<EntropyRow> evaluate_subset(const PointCloud& cloud,
                                        const LabelField& labels,
                                        const NormalField& normals,
                                        const RelativeAngleField& angles,
                                        NormKind kind,
                                        const SubsetEntropyOptions& options) {
    const std::size_t n = cloud.size();
    if (labels.size() != n || normals.size() != n || angles.size() != n)
        throw input_error("evaluate_subset: fields not index-aligned");

    std::vector<EntropyRow> rows;
    for (const Section section :
         {Section::overall, Section::undamaged, Section::damaged}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (in_section(section, labels[i])) members.push_back(i);
        if (static_cast<std::int64_t>(members.size()) <
            options.min_section_points)
            continue;

        for (const Feature feature :
             {Feature::position, Feature::normal, Feature::relative_angle}) {
            const FeatureDomain dom = domain_of(feature);
            const int components = feature == Feature::relative_angle ? 1 : 3;
            EntropyRow row;
            row.normalization = kind;
            row.feature = feature;
            row.section = section;
            row.point_count = static_cast<std::int64_t>(members.size());
            double sum = 0.0;
            for (int c = 0; c < components; ++c) {
                Histogram hist(options.bins, dom.lo, dom.hi);
                for (const std::size_t i : members) {
                    switch (feature) {
                        case Feature::position:
                            hist.add(cloud.points[i][c]);
                            break;
                        case Feature::normal:
                            hist.add(normals.normals[i][c]);
                            break;
                        case Feature::relative_angle:
                            hist.add(angles.angles[i]);
                            break;
                    }
                }
                const double h = entropy_bits(hist);
                row.component_entropy.push_back(h);
                sum += h;
            }
            row.mean_entropy = sum / components;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

EntropyReport aggregate(const std::vector<std::vector<EntropyRow>>& per_subset) {
    using Key = std::tuple<int, int, int>;
    std::map<Key, EntropyRow> grouped;
    std::size_t total_rows = 0;
    for (const auto& subset_rows : per_subset) {
        for (const EntropyRow& row : subset_rows) {
            ++total_rows;
            const Key key{static_cast<int>(row.normalization),
                          static_cast<int>(row.feature),
                          static_cast<int>(row.section)};
            auto it = grouped.find(key);
            if (it == grouped.end()) {
                EntropyRow acc = row;
                acc.subsets = 1;
                grouped.emplace(key, std::move(acc));
            } else {
                EntropyRow& acc = it->second;
                if (acc.component_entropy.size() != row.component_entropy.size())
                    throw input_error("aggregate: inconsistent component counts");
                for (std::size_t c = 0; c < row.component_entropy.size(); ++c)
                    acc.component_entropy[c] += row.component_entropy[c];
                acc.mean_entropy += row.mean_entropy;
                acc.point_count += row.point_count;
                acc.subsets += 1;
            }
        }
    }
    if (total_rows == 0) throw input_error("aggregate: no rows to aggregate");

    EntropyReport report;
    for (auto& [key, acc] : grouped) {
        const auto divisor = static_cast<double>(acc.subsets);
        for (double& h : acc.component_entropy) h /= divisor;
        acc.mean_entropy /= divisor;
        report.rows.push_back(std::move(acc));
    }
    return report;
}

}  // namespace pcdefect
