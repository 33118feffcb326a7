#pragma once

#include "pcdefect/types.hpp"

namespace pcdefect {

/// Static KD-tree over a point cloud for exact k-nearest-neighbor queries.
///
/// Splits cycle x -> y -> z and place the median element on the right side,
/// with coordinate ties broken by lower original index, so two builds over
/// the same cloud are structurally identical and answer identically. The
/// tree keeps a pointer to the cloud; the cloud must outlive the tree.
class KdTree {
public:
    /// Builds the tree. Throws input_error on an empty cloud or non-finite
    /// coordinates.
    explicit KdTree(const PointCloud& cloud, int leaf_capacity = 1);

    /// Indices of the k nearest points to `query`, sorted by ascending
    /// (squared distance, index). A query coinciding with an indexed point
    /// returns that point at distance zero. Throws input_error unless
    /// 1 <= k <= size().
    std::vector<int> knn(const Vec3& query, int k) const;

    std::size_t size() const { return order_.size(); }

    /// Number of split levels above the deepest leaf (a single leaf is 0).
    int depth() const { return depth_; }

private:
    struct Node {
        int axis = -1;  // -1 marks a leaf
        double split = 0.0;
        int left = -1;
        int right = -1;
        int begin = 0;  // leaf range into order_
        int end = 0;
    };

    int build(int begin, int end, int axis, int level);

    struct Neighbor {
        double d2;
        int index;
        bool operator<(const Neighbor& o) const {
            return d2 < o.d2 || (d2 == o.d2 && index < o.index);
        }
    };
    void search(int node, const Vec3& query, int k,
                std::vector<Neighbor>& heap) const;

    const PointCloud* cloud_ = nullptr;
    int leaf_capacity_ = 1;
    int depth_ = 0;
    std::vector<int> order_;  // permutation of point indices, leaf-contiguous
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace pcdefect
