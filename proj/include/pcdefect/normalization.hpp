#pragma once

#include "pcdefect/types.hpp"

#include <cstdint>

namespace pcdefect {

enum class NormKind { global, axis_specific };

const char* to_string(NormKind kind);

/// Scale factors and bounds recorded by normalize(). For global
/// normalization all three scale components hold k_g, the maximum axis
/// range; for axis-specific each component holds its own axis range, with
/// degenerate ranges replaced by 1.
struct NormalizationParams {
    NormKind kind = NormKind::global;
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();
    Vec3 scale = Vec3::Ones();
    Vec3 offset = Vec3::Zero();  // midpoint of the scaled box, subtracted last
};

struct NormalizeResult {
    PointCloud cloud;
    NormalizationParams params;
};

/// Centers and scales the cloud so its coordinates lie in [-0.5, 0.5]:
/// global scaling divides every axis by the maximum axis range, axis-specific
/// divides each axis by its own range. After scaling, the midpoint of the
/// resulting bounding box is subtracted so the cloud is symmetric about the
/// origin. Throws input_error when N < 2 or every axis range is degenerate.
NormalizeResult normalize(const PointCloud& cloud, NormKind kind);

/// An axis range below 1e-12 (absolutely, or relative to the largest range)
/// counts as degenerate; its scale factor is replaced by 1 so the axis
/// collapses to 0 after centering.
inline constexpr double kDegenerateRangeTol = 1e-12;

struct RotationResult {
    PointCloud cloud;
    Mat3 rotation;
    std::uint64_t seed = 0;
};

/// Proper rotation (det +1) drawn uniformly from SO(3), deterministic per
/// seed.
Mat3 random_rotation(std::uint64_t seed);

/// R = Rz(rz) * Ry(ry) * Rx(rx); all angles zero gives the identity.
Mat3 rotation_from_euler(double rx, double ry, double rz);

PointCloud rotate(const PointCloud& cloud, const Mat3& rotation);

/// Applies random_rotation(seed) about the origin.
RotationResult rotate(const PointCloud& cloud, std::uint64_t seed);

}  // namespace pcdefect
