// Acceptance harness for the defect-feature pipeline. Each criterion prints
// one PASS/FAIL line with its measured values; the process exit code is the
// number of failed criteria. argv[1] names the CLI binary driven by the
// end-to-end determinism check.

#include "pcdefect/cloud_io.hpp"
#include "pcdefect/entropy.hpp"
#include "pcdefect/features.hpp"
#include "pcdefect/kdtree.hpp"
#include "pcdefect/normalization.hpp"
#include "pcdefect/parallel.hpp"
#include "pcdefect/seg_eval.hpp"
#include "pcdefect/subdivision.hpp"
#include "pcdefect/synth_surface.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace pcdefect;
namespace fs = std::filesystem;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

fs::path g_scratch;
std::string g_cli;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

std::pair<PointCloud, LabelField> take_subset(const PointCloud& cloud,
                                              const LabelField& labels,
                                              const std::vector<int>& indices) {
    PointCloud part;
    LabelField part_labels;
    part.points.reserve(indices.size());
    part_labels.reserve(indices.size());
    for (int idx : indices) {
        part.points.push_back(cloud.points[static_cast<std::size_t>(idx)]);
        part_labels.push_back(labels[static_cast<std::size_t>(idx)]);
    }
    return {std::move(part), std::move(part_labels)};
}

RelativeAngleField angles_of(const PointCloud& cloud, int k, int threads) {
    const KdTree tree(cloud);
    const NormalField normals = estimate_normals(cloud, tree, k, threads);
    return relative_angles(normals, average_normal(normals));
}

/// Feature files for one labeled, feature-complete 4096-point subset of the
/// default synthetic surface; shared by the two storage criteria.
StorageReport subset_storage_report(const fs::path& dir) {
    const SyntheticSurface surf = generate(SurfaceSpec::defaults(1));
    const NormalizeResult norm = normalize(surf.cloud, NormKind::global);
    const KdTree tree(norm.cloud);
    SubsetOptions opts;
    opts.n_input = 4096;
    opts.threads = default_thread_count();
    const SubsetPlan plan = extract_subsets(norm.cloud, tree, opts);
    auto [part, part_labels] = take_subset(norm.cloud, surf.labels, plan.subsets[0]);

    const KdTree part_tree(part);
    const NormalField normals =
        estimate_normals(part, part_tree, kDefaultNeighborhood,
                         default_thread_count());
    const RelativeAngleField angles =
        relative_angles(normals, average_normal(normals));
    return storage_report(part, part_labels, normals, angles, dir);
}

Outcome criterion_storage_ratio() {
    const auto t0 = std::chrono::steady_clock::now();
    const StorageReport report = subset_storage_report(g_scratch / "storage");
    const double elapsed = seconds_since(t0);

    const double angle_ratio = report.rows[2].size_ratio;
    const double full_ratio = report.rows[3].size_ratio;
    const bool pass = angle_ratio >= 0.69 && angle_ratio <= 0.76 &&
                      full_ratio >= 1.10 && full_ratio <= 1.18 && elapsed < 1.0;
    return {pass, fmt("angle/normal %.4f (want 0.69..0.76), all/normal %.4f "
                      "(want 1.10..1.18), %.2f s",
                      angle_ratio, full_ratio, elapsed)};
}

Outcome criterion_channel_accounting() {
    const StorageReport report = subset_storage_report(g_scratch / "channels");
    const int expected[6] = {3, 6, 4, 7, 1, 3};
    bool channels_ok = report.rows.size() == 6;
    std::string got = "{";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        channels_ok = channels_ok &&
                      report.rows[i].input_channels == expected[i];
        got += (i ? "," : "") + std::to_string(report.rows[i].input_channels);
    }
    got += "}";
    const double ratio5 = report.rows[4].channel_ratio;
    const bool ratio_ok = std::abs(ratio5 - 1.0 / 6.0) < 5e-4;
    return {channels_ok && ratio_ok,
            fmt("channels %s (want {3,6,4,7,1,3}), single-channel ratio %.1f%%",
                got.c_str(), 100.0 * ratio5)};
}

Outcome criterion_entropy_fixtures() {
    std::vector<double> uniform;
    for (int i = 0; i < 10; ++i) uniform.push_back(0.05 + 0.1 * i);
    const double h_uniform = entropy(uniform, 10, 0.0, 1.0);
    const double err_uniform = std::abs(h_uniform - std::log2(10.0));

    const std::vector<double> single(7, 0.42);
    const double h_single = entropy(single, 10, 0.0, 1.0);

    std::vector<double> split(8, 0.15);
    split.insert(split.end(), 2, 0.85);
    const double h_split = entropy(split, 10, 0.0, 1.0);
    const double err_split = std::abs(h_split - 0.7219);

    const bool pass = err_uniform <= 1e-9 && h_single == 0.0 && err_split <= 1e-4;
    return {pass, fmt("uniform %.10f (err %.1e), single-bin %.1f, 0.8/0.2 split "
                      "%.5f (err %.1e)",
                      h_uniform, err_uniform, h_single, h_split, err_split)};
}

Outcome criterion_entropy_separation() {
    const auto t0 = std::chrono::steady_clock::now();
    const int threads = default_thread_count();

    std::map<NormKind, std::vector<std::vector<EntropyRow>>> per_kind;
    int subsets = 0;
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const SyntheticSurface surf = generate(SurfaceSpec::defaults(seed));
        for (NormKind kind : {NormKind::global, NormKind::axis_specific}) {
            const NormalizeResult norm = normalize(surf.cloud, kind);
            const KdTree tree(norm.cloud);
            SubsetOptions opts;
            opts.n_input = 4096;
            opts.threads = threads;
            const SubsetPlan plan = extract_subsets(norm.cloud, tree, opts);
            for (const std::vector<int>& subset : plan.subsets) {
                auto [part, part_labels] =
                    take_subset(norm.cloud, surf.labels, subset);
                const KdTree part_tree(part);
                const NormalField normals = estimate_normals(
                    part, part_tree, kDefaultNeighborhood, threads);
                const RelativeAngleField angles =
                    relative_angles(normals, average_normal(normals));
                per_kind[kind].push_back(
                    evaluate_subset(part, part_labels, normals, angles, kind));
                if (kind == NormKind::global) ++subsets;
            }
        }
    }

    auto gap_of = [](const EntropyReport& report) {
        double damaged = -1.0, undamaged = -1.0;
        for (const EntropyRow& row : report.rows) {
            if (row.feature != Feature::relative_angle) continue;
            if (row.section == Section::damaged) damaged = row.mean_entropy;
            if (row.section == Section::undamaged) undamaged = row.mean_entropy;
        }
        return damaged - undamaged;
    };
    const double gap_global = gap_of(aggregate(per_kind[NormKind::global]));
    const double gap_axis = gap_of(aggregate(per_kind[NormKind::axis_specific]));
    const double elapsed = seconds_since(t0);

    const bool pass = subsets >= 20 && gap_global >= 0.5 &&
                      gap_global > gap_axis && elapsed < 60.0;
    return {pass, fmt("%d subsets per normalization, damaged-undamaged gap "
                      "global %.3f bits vs per-axis %.3f bits, %.1f s",
                      subsets, gap_global, gap_axis, elapsed)};
}

Outcome criterion_normal_estimation() {
    // dense plane: every normal must align with +z
    PointCloud plane;
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 30; ++j)
            plane.points.emplace_back(0.05 * i, 0.05 * j, 0.0);
    const KdTree plane_tree(plane);
    const NormalField plane_normals =
        estimate_normals(plane, plane_tree, kDefaultNeighborhood, 1);
    double plane_err = 0.0;
    for (const Vec3& n : plane_normals.normals)
        plane_err = std::max(
            plane_err, std::acos(std::min(1.0, std::abs(n.z()))));

    // unit-sphere patch: normals must be radial within 0.05 rad. A
    // golden-angle spiral keeps the sampling isotropic out to the boundary.
    PointCloud patch;
    const int patch_n = 4000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double z_hi = std::cos(0.05), z_lo = std::cos(0.55);
    for (int i = 0; i < patch_n; ++i) {
        const double z = z_hi - (z_hi - z_lo) * (i + 0.5) / patch_n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double azimuth = golden * i;
        patch.points.emplace_back(r * std::cos(azimuth), r * std::sin(azimuth),
                                  z);
    }
    const KdTree patch_tree(patch);
    const NormalField patch_normals =
        estimate_normals(patch, patch_tree, kDefaultNeighborhood, 1);
    double sphere_err = 0.0;
    for (std::size_t i = 0; i < patch.size(); ++i) {
        const Vec3 radial = patch.points[i].normalized();
        const double dot =
            std::min(1.0, std::abs(patch_normals.normals[i].dot(radial)));
        sphere_err = std::max(sphere_err, std::acos(dot));
    }

    // eigen-solver vs characteristic-polynomial oracle
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    double eig_err = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        Mat3 b;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) b(r, c) = entry(rng);
        const Mat3 a = b.transpose() * b;
        Vec3 values;
        Mat3 vectors;
        eigen_symmetric(a, values, vectors);
        const Vec3 expected = oracles::charpoly_eigenvalues(a);
        eig_err = std::max(eig_err, (values - expected).cwiseAbs().maxCoeff());
    }

    const bool pass = plane_err <= 1e-6 && patch.size() >= 100 &&
                      sphere_err <= 0.05 && eig_err <= 1e-9;
    return {pass, fmt("plane max %.2e rad (want <=1e-6), sphere max %.4f rad "
                      "(want <=0.05, %zu pts), eigenvalue max err %.2e "
                      "(want <=1e-9)",
                      plane_err, sphere_err, patch.size(), eig_err)};
}

Outcome criterion_relative_angle() {
    SurfaceSpec spec = SurfaceSpec::defaults(3);
    spec.density = 3000.0;
    const SyntheticSurface surf = generate(spec);
    const RelativeAngleField base =
        angles_of(surf.cloud, kDefaultNeighborhood, default_thread_count());

    bool in_range = true;
    for (double a : base.angles)
        in_range = in_range && a >= 0.0 && a <= kHalfPi;

    // a jittered flat cloud has no angular spread at all
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> jitter(0.0, 0.02);
    PointCloud flat;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
            flat.points.emplace_back(0.05 * i + jitter(rng),
                                     0.05 * j + jitter(rng), 0.0);
    const RelativeAngleField flat_angles =
        angles_of(flat, kDefaultNeighborhood, 1);
    const double flat_max =
        *std::max_element(flat_angles.angles.begin(), flat_angles.angles.end());

    double rotation_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const PointCloud rotated =
            rotate(surf.cloud, random_rotation(seed));
        const RelativeAngleField turned =
            angles_of(rotated, kDefaultNeighborhood, default_thread_count());
        for (std::size_t i = 0; i < base.angles.size(); ++i)
            rotation_err = std::max(
                rotation_err, std::abs(turned.angles[i] - base.angles[i]));
    }

    const bool pass = in_range && flat_max < 1e-4 && rotation_err <= 1e-6;
    return {pass, fmt("range %s, flat-cloud max %.2e rad (want <1e-4), "
                      "rotation drift %.2e rad over 10 rotations (want <=1e-6)",
                      in_range ? "ok" : "VIOLATED", flat_max, rotation_err)};
}

Outcome criterion_knn_exactness() {
    std::mt19937_64 rng(77);
    const PointCloud cloud = oracles::random_cloud(rng, 1000);
    const KdTree tree(cloud);
    std::uniform_real_distribution<double> coord(-1.1, 1.1);
    int mismatches = 0;
    for (int q = 0; q < 100; ++q) {
        const Vec3 query(coord(rng), coord(rng), coord(rng));
        if (tree.knn(query, 16) != oracles::linear_knn(cloud, query, 16))
            ++mismatches;
    }
    return {mismatches == 0,
            fmt("%d of 100 queries diverged from the linear-scan oracle "
                "(k=16, 1000 points)",
                mismatches)};
}

Outcome criterion_fps_oracle() {
    std::mt19937_64 rng(88);
    std::uniform_int_distribution<int> size_dist(1, 64);
    int mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = size_dist(rng);
        const PointCloud cloud = oracles::random_cloud(rng, n);
        if (farthest_point_sample(cloud, n) != oracles::exhaustive_fps(cloud, n))
            ++mismatches;
    }

    const PointCloud fixed = oracles::random_cloud(rng, 200);
    const std::vector<int> full = farthest_point_sample(fixed, 8);
    bool prefix_ok = true;
    for (int m = 1; m <= 8; ++m) {
        const std::vector<int> sel = farthest_point_sample(fixed, m);
        prefix_ok = prefix_ok &&
                    std::equal(sel.begin(), sel.end(), full.begin());
    }
    return {mismatches == 0 && prefix_ok,
            fmt("%d of 50 clouds diverged from the exhaustive oracle, prefix "
                "stability %s for m=1..8",
                mismatches, prefix_ok ? "holds" : "BROKEN")};
}

Outcome criterion_subdivision() {
    const bool counts_ok = subset_count(4096, 4096) == 1 &&
                           subset_count(8192, 4096) == 2 &&
                           subset_count(474830, 4096) == 116;

    std::mt19937_64 rng(99);
    const PointCloud cloud = oracles::random_cloud(rng, 3000);
    const KdTree tree(cloud);
    SubsetOptions opts;
    opts.n_input = 256;
    opts.threads = default_thread_count();
    const SubsetPlan plan = extract_subsets(cloud, tree, opts);

    bool subsets_ok = plan.num_subsets == subset_count(3000, 256);
    for (int s = 0; s < plan.num_subsets && subsets_ok; ++s) {
        const Vec3& ref =
            cloud.points[static_cast<std::size_t>(plan.reference_indices[s])];
        subsets_ok = plan.subsets[static_cast<std::size_t>(s)] ==
                     oracles::linear_knn(cloud, ref, 256);
    }

    bool covering_ok = true;
    for (int n_input : {64, 256, 1000, 3000}) {
        SubsetOptions o;
        o.n_input = n_input;
        const SubsetPlan p = extract_subsets(cloud, tree, o);
        covering_ok = covering_ok &&
                      static_cast<std::int64_t>(p.num_subsets) * n_input >=
                          static_cast<std::int64_t>(cloud.size());
    }

    return {counts_ok && subsets_ok && covering_ok,
            fmt("count fixtures %s, %d subsets equal their reference kNN sets "
                "%s, covering bound %s",
                counts_ok ? "ok" : "WRONG", plan.num_subsets,
                subsets_ok ? "ok" : "WRONG", covering_ok ? "ok" : "VIOLATED")};
}

Outcome criterion_metrics_oracle() {
    const LabelField pred = {1, 1, 1, 0, 0, 0, 0, 0, 1, 0};
    const LabelField truth = {1, 1, 1, 0, 0, 0, 0, 0, 0, 1};
    const ScoreResult r = score(pred, truth);
    const double errs[4] = {std::abs(r.scores.accuracy - 0.800),
                            std::abs(r.scores.iou_damaged - 0.600),
                            std::abs(r.scores.iou_undamaged - 5.0 / 7.0),
                            std::abs(r.scores.miou - (0.6 + 5.0 / 7.0) / 2.0)};
    const bool fixture_ok = r.counts.tp == 3 && r.counts.tn == 5 &&
                            r.counts.fp == 1 && r.counts.fn == 1 &&
                            errs[0] <= 1e-9 && errs[1] <= 1e-9 &&
                            errs[2] <= 1e-9 && errs[3] <= 1e-9;

    std::mt19937_64 rng(111);
    std::bernoulli_distribution coin(0.35);
    bool symmetric = true;
    for (int trial = 0; trial < 100; ++trial) {
        LabelField p, t;
        for (int i = 0; i < 50; ++i) {
            p.push_back(coin(rng) ? kDamaged : kUndamaged);
            t.push_back(coin(rng) ? kDamaged : kUndamaged);
        }
        LabelField ps = p, ts = t;
        for (Label& l : ps) l ^= 1;
        for (Label& l : ts) l ^= 1;
        const SegScores a = score(p, t).scores;
        const SegScores b = score(ps, ts).scores;
        symmetric = symmetric && std::abs(a.accuracy - b.accuracy) <= 1e-15 &&
                    std::abs(a.miou - b.miou) <= 1e-15 &&
                    std::abs(a.iou_damaged - b.iou_undamaged) <= 1e-15 &&
                    std::abs(a.iou_undamaged - b.iou_damaged) <= 1e-15;
    }

    return {fixture_ok && symmetric,
            fmt("fixture accuracy %.3f, IoU %.3f/%.4f, mIoU %.4f (max err "
                "%.1e), polarity symmetry %s on 100 pairs",
                r.scores.accuracy, r.scores.iou_damaged, r.scores.iou_undamaged,
                r.scores.miou, *std::max_element(errs, errs + 4),
                symmetric ? "holds" : "BROKEN")};
}

Outcome criterion_normalization() {
    std::mt19937_64 rng(121);
    std::uniform_real_distribution<double> ux(0.0, 10.0);
    std::uniform_real_distribution<double> uy(-2.0, 2.0);
    std::uniform_real_distribution<double> uz(5.0, 5.5);
    PointCloud cloud;
    for (int i = 0; i < 300; ++i)
        cloud.points.emplace_back(ux(rng), uy(rng), uz(rng));

    const NormalizeResult axis = normalize(cloud, NormKind::axis_specific);
    double span_err = 0.0;
    for (int a = 0; a < 3; ++a) {
        double lo = 1e300, hi = -1e300;
        for (const Vec3& p : axis.cloud.points) {
            lo = std::min(lo, p[a]);
            hi = std::max(hi, p[a]);
        }
        span_err = std::max({span_err, std::abs(lo + 0.5), std::abs(hi - 0.5)});
    }

    const NormalizeResult global = normalize(cloud, NormKind::global);
    double ratio_err = 0.0;
    const double base_before = (cloud.points[1] - cloud.points[0]).norm();
    const double base_after =
        (global.cloud.points[1] - global.cloud.points[0]).norm();
    for (std::size_t i = 2; i + 1 < cloud.size(); i += 2) {
        const double before =
            (cloud.points[i + 1] - cloud.points[i]).norm() / base_before;
        const double after =
            (global.cloud.points[i + 1] - global.cloud.points[i]).norm() /
            base_after;
        ratio_err = std::max(ratio_err, std::abs(after - before) /
                                            std::max(before, 1e-300));
    }

    double idem_err = 0.0;
    for (NormKind kind : {NormKind::global, NormKind::axis_specific}) {
        const NormalizeResult once = normalize(cloud, kind);
        const NormalizeResult twice = normalize(once.cloud, kind);
        for (std::size_t i = 0; i < cloud.size(); ++i)
            idem_err = std::max(idem_err,
                                (twice.cloud.points[i] - once.cloud.points[i])
                                    .cwiseAbs()
                                    .maxCoeff());
    }

    PointCloud tri;
    tri.points.emplace_back(0.0, 0.0, 0.0);
    tri.points.emplace_back(4.0, 0.0, 0.0);
    tri.points.emplace_back(4.0, 2.0, 0.0);
    const Vec3 expected_global[3] = {{-0.5, -0.25, 0.0},
                                     {0.5, -0.25, 0.0},
                                     {0.5, 0.25, 0.0}};
    const Vec3 expected_axis[3] = {{-0.5, -0.5, 0.0},
                                   {0.5, -0.5, 0.0},
                                   {0.5, 0.5, 0.0}};
    const NormalizeResult tri_global = normalize(tri, NormKind::global);
    const NormalizeResult tri_axis = normalize(tri, NormKind::axis_specific);
    double fixture_err = 0.0;
    for (int i = 0; i < 3; ++i) {
        fixture_err = std::max(
            fixture_err, (tri_global.cloud.points[static_cast<std::size_t>(i)] -
                          expected_global[i])
                             .cwiseAbs()
                             .maxCoeff());
        fixture_err = std::max(
            fixture_err, (tri_axis.cloud.points[static_cast<std::size_t>(i)] -
                          expected_axis[i])
                             .cwiseAbs()
                             .maxCoeff());
    }

    const bool pass = span_err <= 1e-12 && ratio_err <= 1e-9 &&
                      idem_err <= 1e-12 && fixture_err <= 1e-12;
    return {pass, fmt("axis span err %.1e (want <=1e-12), distance-ratio err "
                      "%.1e (want <=1e-9), idempotence err %.1e, triangle "
                      "fixture err %.1e",
                      span_err, ratio_err, idem_err, fixture_err)};
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

/// Runs the whole CLI pipeline into `dir` and returns true when every stage
/// exits 0. `threads` intentionally varies between reruns: the artifacts
/// must not depend on it.
bool run_pipeline(const fs::path& dir, int threads) {
    fs::create_directories(dir);
    const std::string d = dir.string();
    const std::string t = " --threads " + std::to_string(threads);
    const std::vector<std::string> stages = {
        "synth --out " + d + "/cloud.xyz --seed 1",
        "normalize --in " + d + "/cloud.xyz --out " + d + "/norm.xyz --kind global",
        "subdivide --in " + d + "/norm.xyz --out-dir " + d + "/subsets" + t,
        "features --in " + d + "/subsets/subset_0000.xyz --out " + d +
            "/features.xyz" + t,
        "entropy --in " + d + "/cloud.xyz --out-dir " + d + "/entropy" + t,
        "storage --in " + d + "/subsets/subset_0000.xyz --out-dir " + d +
            "/storage" + t,
        "segment --in " + d + "/features.xyz --out " + d +
            "/segmented.xyz --tau 0.3" + t,
        "score --pred " + d + "/segmented.xyz --truth " + d +
            "/subsets/subset_0000.xyz --out " + d + "/score.json",
        "export-colored --in " + d + "/features.xyz --out " + d + "/view.ply",
    };
    for (const std::string& stage : stages)
        if (run_cli(stage) != 0) return false;
    return true;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(entry.path(), dir).string()] = ss.str();
    }
    return files;
}

Outcome criterion_end_to_end() {
    const SyntheticSurface surf = generate(SurfaceSpec::defaults(1));
    const NormalizeResult norm = normalize(surf.cloud, NormKind::global);
    const RelativeAngleField angles =
        angles_of(norm.cloud, kDefaultNeighborhood, default_thread_count());
    const SweepResult best = sweep_threshold(angles, surf.labels, 64);

    const fs::path run_a = g_scratch / "pipeline_a";
    const fs::path run_b = g_scratch / "pipeline_b";
    const bool a_ok = run_pipeline(run_a, 2);
    const bool b_ok = run_pipeline(run_b, 7);

    bool identical = a_ok && b_ok;
    std::size_t file_count = 0;
    if (identical) {
        const auto files_a = snapshot(run_a);
        const auto files_b = snapshot(run_b);
        identical = files_a == files_b && !files_a.empty();
        file_count = files_a.size();
    }

    const bool pass = best.scores.miou >= 0.7 && a_ok && b_ok && identical;
    return {pass, fmt("swept-threshold mIoU %.4f at tau %.4f (want >=0.7), "
                      "pipeline reruns %s, %zu artifacts byte-identical: %s",
                      best.scores.miou, best.tau,
                      a_ok && b_ok ? "exit 0" : "FAILED", file_count,
                      identical ? "yes" : "NO")};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
        return 64;
    }
    g_cli = argv[1];
    g_scratch = fs::temp_directory_path() / "pcdefect_acceptance";
    fs::remove_all(g_scratch);
    fs::create_directories(g_scratch);

    struct Criterion {
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"feature-file storage ratios", criterion_storage_ratio},
        {"input-channel accounting", criterion_channel_accounting},
        {"entropy fixtures", criterion_entropy_fixtures},
        {"damage entropy separation", criterion_entropy_separation},
        {"normal estimation accuracy", criterion_normal_estimation},
        {"relative-angle properties", criterion_relative_angle},
        {"exact nearest neighbors", criterion_knn_exactness},
        {"farthest-point sampling oracle", criterion_fps_oracle},
        {"subdivision plan", criterion_subdivision},
        {"segmentation metrics oracle", criterion_metrics_oracle},
        {"normalization guarantees", criterion_normalization},
        {"end-to-end segmentation and determinism", criterion_end_to_end},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::printf("%s  %2zu  %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].title, outcome.detail.c_str());
        std::fflush(stdout);
    }

    std::printf("%d of %zu acceptance criteria passed\n",
                static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
