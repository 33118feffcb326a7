#pragma once

#include "pcdefect/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace pcdefect {

using Vec2 = Eigen::Vector2d;

/// Groove following a polyline, depressed below the base plane with rough
/// walls. A point is damaged when its distance to the path is at most
/// width/2.
struct CrackSpec {
    std::vector<Vec2> path;
    double width = 0.05;
    double depth = 0.04;
    double wall_roughness = 0.015;
};

/// Crater-shaped depression; a point is damaged when it lies inside the
/// disk.
struct SpallSpec {
    Vec2 center = Vec2::Zero();
    double radius = 0.1;
    double depth = 0.03;
    double roughness = 0.012;
};

/// Parameters for a synthetic defect surface: a near-flat rough plane with
/// crack grooves and spall craters carved in. The seed drives both the grid
/// jitter and every noise term; clouds are bit-identical per seed.
struct SurfaceSpec {
    double width = 1.0;
    double height = 1.0;
    double density = 40960.0;          // points per unit area
    double base_roughness = 0.002;     // max |z| of undamaged points
    double base_feature_scale = 0.05;  // lateral wavelength of base noise
    double damage_feature_scale = 0.018;
    std::vector<CrackSpec> cracks;
    std::vector<SpallSpec> spalls;
    std::uint64_t seed = 0;

    /// Default damage layout covering roughly 28% of the surface.
    static SurfaceSpec defaults(std::uint64_t seed);
};

struct SyntheticSurface {
    PointCloud cloud;
    LabelField labels;
};

/// Samples the surface on a jittered grid of about density * width * height
/// points. Labels mark membership in any crack or spall region, independent
/// of depth. Throws input_error on an empty extent or non-positive density,
/// or when a damage region leaves the extent.
SyntheticSurface generate(const SurfaceSpec& spec);

/// Distance from a 2D point to a polyline (closest segment).
double polyline_distance(const Vec2& p, const std::vector<Vec2>& path);

}  // namespace pcdefect
