#pragma once

#include "pcdefect/normalization.hpp"
#include "pcdefect/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pcdefect {

/// Equal-width histogram over a fixed domain. Values at hi land in the last
/// bin; values outside the domain by more than kDomainTol throw.
struct Histogram {
    int bins = 10;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;

    Histogram(int bins, double lo, double hi);
    void add(double value);
    void merge(const Histogram& other);
};

inline constexpr double kDomainTol = 1e-9;

/// Binned Shannon entropy in bits: -sum p_i log2 p_i over nonempty bins.
double entropy_bits(const Histogram& hist);

/// Histograms `values` over [lo, hi] with `bins` bins and returns the
/// entropy in bits. Throws input_error on empty input, lo >= hi, or a value
/// outside the domain beyond kDomainTol.
double entropy(std::span<const double> values, int bins, double lo, double hi);

enum class Feature { position, normal, relative_angle };
enum class Section { overall, undamaged, damaged };

const char* to_string(Feature f);
const char* to_string(Section s);

/// One (normalization, feature, section) cell: per-component entropies (3
/// for position and normal, 1 for the relative angle) plus their mean.
struct EntropyRow {
    NormKind normalization = NormKind::global;
    Feature feature = Feature::position;
    Section section = Section::overall;
    std::vector<double> component_entropy;
    double mean_entropy = 0.0;
    std::int64_t point_count = 0;
    int subsets = 1;  // how many subset rows an aggregate row averages
};

struct SubsetEntropyOptions {
    int bins = 10;
    /// Sections smaller than this produce no row.
    std::int64_t min_section_points = 50;
};

/// Entropy rows for one evaluated subset. Feature domains are the
/// theoretical ranges: normalized coordinates over [-0.5, 0.5] per axis,
/// normal components over [-1, 1], relative angle over [0, pi/2]. `kind`
/// labels which normalization produced the inputs; the cloud is expected to
/// be normalized already. Throws input_error on misaligned fields.
std::vector<EntropyRow> evaluate_subset(const PointCloud& cloud,
                                        const LabelField& labels,
                                        const NormalField& normals,
                                        const RelativeAngleField& angles,
                                        NormKind kind,
                                        const SubsetEntropyOptions& options = {});

struct EntropyReport {
    std::vector<EntropyRow> rows;
};

/// Arithmetic mean across subsets for every (normalization, feature,
/// section) key, in canonical row order. Throws input_error when no rows
/// are given.
EntropyReport aggregate(const std::vector<std::vector<EntropyRow>>& per_subset);

}  // namespace pcdefect
