#include "pcdefect/normalization.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace pcdefect {

const char* to_string(NormKind kind) {
    return kind == NormKind::global ? "global" : "axis-specific";
}

namespace {

void bounding_box(const PointCloud& cloud, Vec3& lo, Vec3& hi) {
    lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
    for (const Vec3& p : cloud.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
}

}  // namespace

NormalizeResult normalize(const PointCloud& cloud, NormKind kind) {
    if (cloud.size() < 2)
        throw input_error("normalize: need at least 2 points");
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!cloud.points[i].allFinite())
            throw input_error("normalize: non-finite coordinate at point " +
                              std::to_string(i));
    }

    NormalizationParams params;
    params.kind = kind;
    bounding_box(cloud, params.min, params.max);
    const Vec3 range = params.max - params.min;
    const double largest = range.maxCoeff();
    if (largest < kDegenerateRangeTol)
        throw input_error("normalize: all axis ranges are degenerate");

    const auto degenerate = [&](double r) {
        return r < kDegenerateRangeTol || r < kDegenerateRangeTol * largest;
    };
    if (kind == NormKind::global) {
        params.scale = Vec3::Constant(largest);
    } else {
        for (int a = 0; a < 3; ++a)
            params.scale[a] = degenerate(range[a]) ? 1.0 : range[a];
    }

    NormalizeResult result;
    result.cloud.points.reserve(cloud.size());
    for (const Vec3& p : cloud.points)
        result.cloud.points.push_back(
            (p - params.min).cwiseQuotient(params.scale));

    // Midpoint of the scaled box, so nondegenerate axes span [-0.5, 0.5]
    // exactly.
    Vec3 lo, hi;
    bounding_box(result.cloud, lo, hi);
    params.offset = 0.5 * (lo + hi);
    for (Vec3& p : result.cloud.points) p -= params.offset;

    result.params = params;
    return result;
}

Mat3 random_rotation(std::uint64_t seed) {
    // Shoemake's subgroup method: a uniform unit quaternion from three
    // uniform variates.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u1 = unit(rng);
    const double u2 = unit(rng);
    const double u3 = unit(rng);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double a = std::sqrt(1.0 - u1);
    const double b = std::sqrt(u1);
    const double x = a * std::sin(two_pi * u2);
    const double y = a * std::cos(two_pi * u2);
    const double z = b * std::sin(two_pi * u3);
    const double w = b * std::cos(two_pi * u3);

    Mat3 r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
        2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
        2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y);
    return r;
}

Mat3 rotation_from_euler(double rx, double ry, double rz) {
    Mat3 mx, my, mz;
    mx << 1, 0, 0, 0, std::cos(rx), -std::sin(rx), 0, std::sin(rx),
        std::cos(rx);
    my << std::cos(ry), 0, std::sin(ry), 0, 1, 0, -std::sin(ry), 0,
        std::cos(ry);
    mz << std::cos(rz), -std::sin(rz), 0, std::sin(rz), std::cos(rz), 0, 0, 0,
        1;
    return mz * my * mx;
}

PointCloud rotate(const PointCloud& cloud, const Mat3& rotation) {
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const Vec3& p : cloud.points) out.points.push_back(rotation * p);
    return out;
}

RotationResult rotate(const PointCloud& cloud, std::uint64_t seed) {
    RotationResult result;
    result.rotation = random_rotation(seed);
    result.seed = seed;
    result.cloud = rotate(cloud, result.rotation);
    return result;
}

}  // namespace pcdefect
