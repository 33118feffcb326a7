#include "pcdefect/synth_surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pcdefect {

namespace {

// splitmix64; position hashes below feed lattice noise and grid jitter, so
// every sample is a pure function of (cell, seed).
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_cell(std::int64_t ix, std::int64_t iy, std::uint64_t tag) {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(ix) + tag);
    h = mix64(h ^ static_cast<std::uint64_t>(iy));
    return h;
}

// Uniform in [0, 1).
double unit_double(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Lattice value in [-1, 1].
double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t tag) {
    return 2.0 * unit_double(hash_cell(ix, iy, tag)) - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinear value noise in [-1, 1] with smoothstep weights.
double value_noise(double x, double y, std::uint64_t tag) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const double tx = smoothstep(x - fx);
    const double ty = smoothstep(y - fy);
    const double v00 = lattice(ix, iy, tag);
    const double v10 = lattice(ix + 1, iy, tag);
    const double v01 = lattice(ix, iy + 1, tag);
    const double v11 = lattice(ix + 1, iy + 1, tag);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

// Two octaves with amplitudes summing to 1 keep the result in [-1, 1].
double rough_noise(double x, double y, std::uint64_t tag) {
    return 0.7 * value_noise(x, y, tag) +
           0.3 * value_noise(2.0 * x + 17.0, 2.0 * y - 5.0, tag ^ 0x517cc1b7ULL);
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

void validate(const SurfaceSpec& spec) {
    if (spec.width <= 0.0 || spec.height <= 0.0)
        throw input_error("generate: surface extent must be positive");
    if (spec.density <= 0.0)
        throw input_error("generate: density must be positive");
    if (spec.base_roughness < 0.0)
        throw input_error("generate: base roughness must be non-negative");
    for (const CrackSpec& c : spec.cracks) {
        if (c.path.size() < 2)
            throw input_error("generate: crack path needs at least 2 vertices");
        if (c.width <= 0.0 || c.depth <= 0.0)
            throw input_error("generate: crack width and depth must be positive");
        for (const Vec2& v : c.path) {
            if (v.x() < 0.0 || v.x() > spec.width || v.y() < 0.0 ||
                v.y() > spec.height)
                throw input_error("generate: crack path leaves the extent");
        }
    }
    for (const SpallSpec& s : spec.spalls) {
        if (s.radius <= 0.0 || s.depth <= 0.0)
            throw input_error("generate: spall radius and depth must be positive");
        if (s.center.x() - s.radius < 0.0 ||
            s.center.x() + s.radius > spec.width ||
            s.center.y() - s.radius < 0.0 ||
            s.center.y() + s.radius > spec.height)
            throw input_error("generate: spall disk leaves the extent");
    }
}

}  // namespace

double polyline_distance(const Vec2& p, const std::vector<Vec2>& path) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        best = std::min(best, segment_distance(p, path[i], path[i + 1]));
    return best;
}

SurfaceSpec SurfaceSpec::defaults(std::uint64_t seed) {
    SurfaceSpec spec;
    spec.seed = seed;
    spec.cracks.push_back(
        {{{0.05, 0.15}, {0.45, 0.35}, {0.92, 0.22}}, 0.09, 0.05, 0.02});
    spec.cracks.push_back(
        {{{0.18, 0.95}, {0.50, 0.60}, {0.86, 0.78}}, 0.08, 0.04, 0.018});
    spec.spalls.push_back({{0.62, 0.44}, 0.22, 0.04, 0.015});
    return spec;
}

SyntheticSurface generate(const SurfaceSpec& spec) {
    validate(spec);

    const double cells_per_unit = std::sqrt(spec.density);
    const auto nx = static_cast<std::int64_t>(
        std::max(1.0, std::round(spec.width * cells_per_unit)));
    const auto ny = static_cast<std::int64_t>(
        std::max(1.0, std::round(spec.height * cells_per_unit)));
    const double dx = spec.width / static_cast<double>(nx);
    const double dy = spec.height / static_cast<double>(ny);

    const std::uint64_t seed = mix64(spec.seed ^ 0x706364656665ULL);
    const std::uint64_t jitter_tag = seed ^ 0x01;
    const std::uint64_t base_tag = seed ^ 0x02;

    SyntheticSurface out;
    out.cloud.points.reserve(static_cast<std::size_t>(nx * ny));
    out.labels.reserve(static_cast<std::size_t>(nx * ny));

    for (std::int64_t j = 0; j < ny; ++j) {
        for (std::int64_t i = 0; i < nx; ++i) {
            const std::uint64_t h = hash_cell(i, j, jitter_tag);
            const double ux = unit_double(h);
            const double uy = unit_double(mix64(h));
            const double x = (static_cast<double>(i) + ux) * dx;
            const double y = (static_cast<double>(j) + uy) * dy;

            double z = spec.base_roughness *
                       rough_noise(x / spec.base_feature_scale,
                                   y / spec.base_feature_scale, base_tag);
            bool damaged = false;
            double carve = 0.0;  // deepest damage contribution wins

            std::uint64_t region_tag = seed ^ 0x100;
            for (const CrackSpec& c : spec.cracks) {
                ++region_tag;
                const double d = polyline_distance({x, y}, c.path);
                const double half = 0.5 * c.width;
                if (d > half) continue;
                damaged = true;
                const double t = d / half;
                const double local =
                    -c.depth * (1.0 - t * t) +
                    c.wall_roughness * rough_noise(x / spec.damage_feature_scale,
                                                   y / spec.damage_feature_scale,
                                                   region_tag);
                carve = std::min(carve, local);
            }
            for (const SpallSpec& s : spec.spalls) {
                ++region_tag;
                const double d = (Vec2(x, y) - s.center).norm();
                if (d > s.radius) continue;
                damaged = true;
                const double t = d / s.radius;
                const double local =
                    -s.depth * (1.0 - t * t) +
                    s.roughness * rough_noise(x / spec.damage_feature_scale,
                                              y / spec.damage_feature_scale,
                                              region_tag);
                carve = std::min(carve, local);
            }

            if (damaged) z += carve;
            out.cloud.points.emplace_back(x, y, z);
            out.labels.push_back(damaged ? kDamaged : kUndamaged);
        }
    }
    return out;
}

}  // namespace pcdefect
