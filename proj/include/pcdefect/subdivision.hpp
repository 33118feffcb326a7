#pragma once

#include "pcdefect/kdtree.hpp"
#include "pcdefect/types.hpp"

#include <cstdint>
#include <vector>

namespace pcdefect {

/// Division of a full reconstruction into fixed-size subsets gathered
/// around farthest-point-sampled references. Subsets may overlap; together
/// they hold num_subsets * n_input indices.
struct SubsetPlan {
    int n_input = 0;
    int num_subsets = 0;
    std::vector<int> reference_indices;
    std::vector<std::vector<int>> subsets;
};

/// ceil(n_all / n_input). Throws input_error on non-positive arguments.
int subset_count(std::int64_t n_all, std::int64_t n_input);

/// Greedy farthest point sampling: the first index is the point farthest
/// from the centroid; each following index maximizes the minimum distance
/// to everything selected so far. Ties go to the lower index, so the
/// selection is deterministic and prefix-stable. Throws input_error unless
/// 1 <= m <= N.
std::vector<int> farthest_point_sample(const PointCloud& cloud, int m);

struct SubsetOptions {
    int n_input = 4096;
    /// Gather by breadth-first traversal of the mutual k-neighbor graph
    /// instead of plain nearest neighbors, topping up from the reference's
    /// nearest non-members when the connected component runs short.
    bool connectivity = false;
    int graph_k = 8;
    int threads = 1;
};

/// Computes the subset count, picks references by FPS, and gathers each
/// subset as the reference point plus its n_input - 1 nearest neighbors
/// (or by connected growth when options.connectivity is set). Throws
/// input_error when N < n_input.
SubsetPlan extract_subsets(const PointCloud& cloud, const KdTree& tree,
                           const SubsetOptions& options);

}  // namespace pcdefect
