#pragma once

#include "pcdefect/kdtree.hpp"
#include "pcdefect/types.hpp"

#include <span>

namespace pcdefect {

/// Centroid, covariance, and eigen-decomposition of one point neighborhood.
/// Eigenvalues are ascending; eigenvector columns match them.
struct LocalCovariance {
    Vec3 centroid = Vec3::Zero();
    Mat3 covariance = Mat3::Zero();
    Vec3 eigenvalues = Vec3::Zero();
    Mat3 eigenvectors = Mat3::Identity();
};

/// Mean position and (1/k)-weighted scatter of the given points, with its
/// eigen-decomposition. Throws input_error on an empty span.
LocalCovariance local_covariance(std::span<const Vec3> points);

/// Ascending eigenvalues and matching eigenvector columns of a symmetric
/// 3x3 matrix. Deterministic for a given input.
void eigen_symmetric(const Mat3& m, Vec3& eigenvalues, Mat3& eigenvectors);

/// Orientation reference for a cloud's normals: the smallest-eigenvalue
/// eigenvector of the whole cloud's covariance (the dominant plane normal),
/// sign fixed toward +z, then +y, then +x when a component vanishes.
Vec3 reference_direction(const PointCloud& cloud);

/// Per-point normals from the eigenvector of the smallest eigenvalue of each
/// point's k-neighborhood covariance (the point itself plus its k-1 nearest
/// neighbors). Every normal is unit length and oriented so its dot product
/// with reference_direction(cloud) is non-negative. Throws input_error
/// unless 3 <= k <= N.
NormalField estimate_normals(const PointCloud& cloud, const KdTree& tree,
                             int k, int threads = 1);

inline constexpr int kDefaultNeighborhood = 30;

/// Arithmetic mean of the normals, renormalized to unit length. Throws
/// input_error when the field is empty or the mean norm is below 1e-9
/// (opposing normals cancel and the direction is undefined).
Vec3 average_normal(const NormalField& field);

/// theta_i = arccos(|n_i . n_avg|), clamped into [0, pi/2]. All inputs must
/// be unit length within 1e-6.
RelativeAngleField relative_angles(const NormalField& field,
                                   const Vec3& average);

}  // namespace pcdefect
