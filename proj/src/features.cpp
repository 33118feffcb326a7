#include "pcdefect/features.hpp"

#include "pcdefect/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace pcdefect {

void eigen_symmetric(const Mat3& m, Vec3& eigenvalues, Mat3& eigenvectors) {
    Eigen::SelfAdjointEigenSolver<Mat3> solver(m);
    eigenvalues = solver.eigenvalues();
    eigenvectors = solver.eigenvectors();
}

LocalCovariance local_covariance(std::span<const Vec3> points) {
    if (points.empty())
        throw input_error("local_covariance: empty neighborhood");
    LocalCovariance lc;
    for (const Vec3& p : points) lc.centroid += p;
    lc.centroid /= static_cast<double>(points.size());
    for (const Vec3& p : points) {
        const Vec3 d = p - lc.centroid;
        lc.covariance += d * d.transpose();
    }
    lc.covariance /= static_cast<double>(points.size());
    eigen_symmetric(lc.covariance, lc.eigenvalues, lc.eigenvectors);
    return lc;
}

namespace {

// Sign convention for an eigenvector whose direction is arbitrary: positive
// z, falling back to y then x when earlier components vanish.
Vec3 canonical_sign(const Vec3& v) {
    constexpr double tiny = 1e-12;
    for (int a = 2; a >= 0; --a) {
        if (std::abs(v[a]) > tiny) return v[a] > 0 ? v : Vec3(-v);
    }
    return v;
}

}  // namespace

Vec3 reference_direction(const PointCloud& cloud) {
    if (cloud.empty())
        throw input_error("reference_direction: empty cloud");
    const LocalCovariance lc =
        local_covariance(std::span<const Vec3>(cloud.points));
    return canonical_sign(lc.eigenvectors.col(0).normalized());
}

NormalField estimate_normals(const PointCloud& cloud, const KdTree& tree,
                             int k, int threads) {
    if (k < 3)
        throw input_error("estimate_normals: k must be at least 3");
    if (static_cast<std::size_t>(k) > cloud.size())
        throw input_error("estimate_normals: k exceeds cloud size");
    if (tree.size() != cloud.size())
        throw input_error("estimate_normals: tree does not index this cloud");

    const Vec3 reference = reference_direction(cloud);

    NormalField field;
    field.neighborhood_k = k;
    field.normals.resize(cloud.size());
    parallel_for(cloud.size(), threads, [&](std::size_t i) {
        const std::vector<int> idx = tree.knn(cloud.points[i], k);
        std::vector<Vec3> neighborhood;
        neighborhood.reserve(idx.size());
        for (int j : idx) neighborhood.push_back(cloud.points[j]);
        const LocalCovariance lc =
            local_covariance(std::span<const Vec3>(neighborhood));
        Vec3 n = lc.eigenvectors.col(0).normalized();
        if (n.dot(reference) < 0) n = -n;
        field.normals[i] = n;
    });
    return field;
}

Vec3 average_normal(const NormalField& field) {
    if (field.normals.empty())
        throw input_error("average_normal: empty normal field");
    Vec3 sum = Vec3::Zero();
    for (const Vec3& n : field.normals) sum += n;
    const Vec3 mean = sum / static_cast<double>(field.normals.size());
    if (mean.norm() <= 1e-9)
        throw input_error(
            "average_normal: normals cancel, average direction undefined");
    return mean.normalized();
}

RelativeAngleField relative_angles(const NormalField& field,
                                   const Vec3& average) {
    constexpr double unit_tol = 1e-6;
    if (std::abs(average.norm() - 1.0) > unit_tol)
        throw input_error("relative_angles: average normal is not unit length");
    RelativeAngleField result;
    result.average_normal = average;
    result.angles.reserve(field.normals.size());
    for (std::size_t i = 0; i < field.normals.size(); ++i) {
        const Vec3& n = field.normals[i];
        if (std::abs(n.norm() - 1.0) > unit_tol)
            throw input_error("relative_angles: normal " + std::to_string(i) +
                              " is not unit length");
        const double c = std::clamp(std::abs(n.dot(average)), 0.0, 1.0);
        result.angles.push_back(std::acos(c));
    }
    return result;
}

}  // namespace pcdefect
