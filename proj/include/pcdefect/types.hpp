#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pcdefect {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Raised for malformed inputs and violated preconditions. The CLI maps this
/// to exit code 1; any other exception is an internal error (exit code 2).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered list of 3D points. Downstream operations require at least one
/// point and finite coordinates.
struct PointCloud {
    std::vector<Vec3> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Per-point damage annotation, index-aligned with its parent cloud.
/// 0 = undamaged, 1 = damaged.
using Label = std::uint8_t;
using LabelField = std::vector<Label>;

inline constexpr Label kUndamaged = 0;
inline constexpr Label kDamaged = 1;

/// Per-point unit normals, index-aligned with the cloud they were estimated
/// from. `neighborhood_k` records the neighborhood size used.
struct NormalField {
    std::vector<Vec3> normals;
    int neighborhood_k = 0;

    std::size_t size() const { return normals.size(); }
};

/// Per-point relative angles in [0, pi/2], index-aligned with the cloud.
/// `average_normal` is the unit vector the angles were measured against;
/// it is absent for fields loaded from disk.
struct RelativeAngleField {
    std::vector<double> angles;
    std::optional<Vec3> average_normal;

    std::size_t size() const { return angles.size(); }
};

/// Squared Euclidean distance, written out so the tree, the subdivision
/// gather, and the test oracles evaluate bit-identical expressions.
inline double dist2(const Vec3& a, const Vec3& b) {
    const double dx = a.x() - b.x();
    const double dy = a.y() - b.y();
    const double dz = a.z() - b.z();
    return dx * dx + dy * dy + dz * dz;
}

}  // namespace pcdefect
