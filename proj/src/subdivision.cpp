#include "pcdefect/subdivision.hpp"

#include "pcdefect/parallel.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace pcdefect {

int subset_count(std::int64_t n_all, std::int64_t n_input) {
    if (n_all <= 0 || n_input <= 0)
        throw input_error("subset_count: arguments must be positive");
    return static_cast<int>((n_all + n_input - 1) / n_input);
}

std::vector<int> farthest_point_sample(const PointCloud& cloud, int m) {
    const auto n = static_cast<int>(cloud.size());
    if (m < 1) throw input_error("farthest_point_sample: m must be positive");
    if (m > n)
        throw input_error("farthest_point_sample: m exceeds cloud size");

    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : cloud.points) centroid += p;
    centroid /= static_cast<double>(n);

    // Strict > with an ascending scan keeps the lowest index on ties.
    int current = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double d = dist2(cloud.points[i], centroid);
        if (d > best) {
            best = d;
            current = i;
        }
    }

    std::vector<int> selected;
    selected.reserve(m);
    selected.push_back(current);
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    taken[static_cast<std::size_t>(current)] = 1;
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    while (static_cast<int>(selected.size()) < m) {
        int next = -1;
        double far = -1.0;
        for (int i = 0; i < n; ++i) {
            min_d2[i] =
                std::min(min_d2[i], dist2(cloud.points[i], cloud.points[current]));
            // selected points must stay ineligible even when every remaining
            // candidate is at distance zero (coincident points)
            if (taken[i]) continue;
            if (min_d2[i] > far) {
                far = min_d2[i];
                next = i;
            }
        }
        current = next;
        taken[static_cast<std::size_t>(next)] = 1;
        selected.push_back(current);
    }
    return selected;
}

namespace {

// Mutual k-neighbor adjacency: i and j are connected when each lists the
// other among its graph_k nearest. Neighbor order follows knn order.
std::vector<std::vector<int>> mutual_knn_graph(const PointCloud& cloud,
                                               const KdTree& tree, int graph_k,
                                               int threads) {
    const std::size_t n = cloud.size();
    const int k = std::min<int>(graph_k + 1, static_cast<int>(n));
    std::vector<std::vector<int>> lists(n);
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<int> nb = tree.knn(cloud.points[i], k);
        std::erase(nb, static_cast<int>(i));
        lists[i] = std::move(nb);
    });
    std::vector<std::vector<int>> adjacency(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int j : lists[i]) {
            const auto& back = lists[static_cast<std::size_t>(j)];
            if (std::find(back.begin(), back.end(), static_cast<int>(i)) !=
                back.end())
                adjacency[i].push_back(j);
        }
    }
    return adjacency;
}

std::vector<int> grow_connected(const PointCloud& cloud, const KdTree& tree,
                                const std::vector<std::vector<int>>& adjacency,
                                int reference, int n_input) {
    std::vector<char> visited(cloud.size(), 0);
    std::vector<int> subset;
    subset.reserve(n_input);
    std::deque<int> queue{reference};
    visited[reference] = 1;
    while (!queue.empty() && static_cast<int>(subset.size()) < n_input) {
        const int v = queue.front();
        queue.pop_front();
        subset.push_back(v);
        for (int w : adjacency[v]) {
            if (!visited[w]) {
                visited[w] = 1;
                queue.push_back(w);
            }
        }
    }
    if (static_cast<int>(subset.size()) < n_input) {
        // Component ran short: top up with the reference's nearest points
        // not already collected.
        const int want = std::min<int>(
            static_cast<int>(cloud.size()),
            n_input + static_cast<int>(subset.size()));
        std::vector<char> member(cloud.size(), 0);
        for (int v : subset) member[v] = 1;
        for (int idx : tree.knn(cloud.points[reference], want)) {
            if (static_cast<int>(subset.size()) >= n_input) break;
            if (!member[idx]) {
                member[idx] = 1;
                subset.push_back(idx);
            }
        }
    }
    return subset;
}

}  // namespace

SubsetPlan extract_subsets(const PointCloud& cloud, const KdTree& tree,
                           const SubsetOptions& options) {
    if (options.n_input < 1)
        throw input_error("extract_subsets: n_input must be positive");
    if (cloud.size() < static_cast<std::size_t>(options.n_input))
        throw input_error("extract_subsets: cloud smaller than n_input");
    if (tree.size() != cloud.size())
        throw input_error("extract_subsets: tree does not index this cloud");

    SubsetPlan plan;
    plan.n_input = options.n_input;
    plan.num_subsets = subset_count(static_cast<std::int64_t>(cloud.size()),
                                    options.n_input);
    plan.reference_indices = farthest_point_sample(cloud, plan.num_subsets);

    std::vector<std::vector<int>> adjacency;
    if (options.connectivity)
        adjacency = mutual_knn_graph(cloud, tree, options.graph_k,
                                     options.threads);

    plan.subsets.resize(plan.reference_indices.size());
    parallel_for(plan.reference_indices.size(), options.threads,
                 [&](std::size_t s) {
                     const int ref = plan.reference_indices[s];
                     plan.subsets[s] =
                         options.connectivity
                             ? grow_connected(cloud, tree, adjacency, ref,
                                              options.n_input)
                             : tree.knn(cloud.points[ref], options.n_input);
                 });
    return plan;
}

}  // namespace pcdefect
