#include "pcdefect/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcdefect {

KdTree::KdTree(const PointCloud& cloud, int leaf_capacity)
    : cloud_(&cloud), leaf_capacity_(std::max(1, leaf_capacity)) {
    if (cloud.empty()) throw input_error("KdTree: cannot index an empty cloud");
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!cloud.points[i].allFinite())
            throw input_error("KdTree: non-finite coordinate at point " +
                              std::to_string(i));
    }
    order_.resize(cloud.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * cloud.size());
    root_ = build(0, static_cast<int>(cloud.size()), 0, 0);
}

int KdTree::build(int begin, int end, int axis, int level) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= leaf_capacity_) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        depth_ = std::max(depth_, level);
        return id;
    }
    const auto& pts = cloud_->points;
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int a, int b) {
                         const double ca = pts[a][axis];
                         const double cb = pts[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    const double split = pts[order_[mid]][axis];
    const int next_axis = (axis + 1) % 3;
    const int left = build(begin, mid, next_axis, level + 1);
    const int right = build(mid, end, next_axis, level + 1);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

std::vector<int> KdTree::knn(const Vec3& query, int k) const {
    if (k < 1) throw input_error("knn: k must be positive");
    if (static_cast<std::size_t>(k) > size())
        throw input_error("knn: k = " + std::to_string(k) +
                          " exceeds cloud size " + std::to_string(size()));
    std::vector<Neighbor> heap;
    heap.reserve(static_cast<std::size_t>(k) + 1);
    search(root_, query, k, heap);
    std::sort(heap.begin(), heap.end());
    std::vector<int> result(heap.size());
    for (std::size_t i = 0; i < heap.size(); ++i) result[i] = heap[i].index;
    return result;
}

void KdTree::search(int node, const Vec3& query, int k,
                    std::vector<Neighbor>& heap) const {
    const Node& n = nodes_[node];
    if (n.axis < 0) {
        const auto& pts = cloud_->points;
        for (int i = n.begin; i < n.end; ++i) {
            const int idx = order_[i];
            const Neighbor cand{dist2(query, pts[idx]), idx};
            if (heap.size() < static_cast<std::size_t>(k)) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        return;
    }
    const double delta = query[n.axis] - n.split;
    const int near = delta <= 0.0 ? n.left : n.right;
    const int far = delta <= 0.0 ? n.right : n.left;
    search(near, query, k, heap);
    // <= keeps equidistant candidates reachable so the index tie-break stays
    // exact.
    if (heap.size() < static_cast<std::size_t>(k) ||
        delta * delta <= heap.front().d2) {
        search(far, query, k, heap);
    }
}

}  // namespace pcdefect
