#include "pcdefect/cloud_io.hpp"
#include "pcdefect/entropy.hpp"
#include "pcdefect/features.hpp"
#include "pcdefect/kdtree.hpp"
#include "pcdefect/normalization.hpp"
#include "pcdefect/parallel.hpp"
#include "pcdefect/reports.hpp"
#include "pcdefect/seg_eval.hpp"
#include "pcdefect/subdivision.hpp"
#include "pcdefect/synth_surface.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace pcdefect;

namespace {

fs::path resolve_out_file(const fs::path& out, const char* default_name) {
    const std::string s = out.string();
    if (!s.empty() && (s.back() == '/' || fs::is_directory(out))) return out / default_name;
    return out;
}

void ensure_parent_dir(const fs::path& file) {
    const fs::path dir = file.parent_path();
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw input_error("cannot create directory " + dir.string() + ": " + ec.message());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw input_error("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw input_error("write failure on " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

NormKind parse_kind(const std::string& name) {
    if (name == "global") return NormKind::global;
    if (name == "axis" || name == "axis-specific") return NormKind::axis_specific;
    throw input_error("unknown normalization kind '" + name + "'");
}

const LabelField& require_labels(const CloudBundle& bundle, const std::string& path) {
    if (!bundle.labels) throw input_error(path + " carries no labels");
    return *bundle.labels;
}

/// Normals from the bundle if present, computed from positions otherwise.
void ensure_features(CloudBundle& bundle, int k, int threads) {
    if (bundle.normals && bundle.angles) return;
    KdTree tree(bundle.cloud);
    if (!bundle.normals) bundle.normals = estimate_normals(bundle.cloud, tree, k, threads);
    if (!bundle.angles)
        bundle.angles = relative_angles(*bundle.normals, average_normal(*bundle.normals));
}

std::string subset_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "subset_%04d.xyz", index);
    return buf;
}

// ---- subcommand option structs -------------------------------------------

struct SynthOpts {
    std::string out;
    std::uint64_t seed = 1;
    double density = 40960.0;
    double width = 1.0;
    double height = 1.0;
};

struct NormalizeOpts {
    std::string in, out;
    std::string kind = "global";
    std::optional<std::uint64_t> rotate_seed;
};

struct SubdivideOpts {
    std::string in, out_dir;
    int n_input = 4096;
    bool connectivity = false;
    int graph_k = 8;
    int threads = 0;
};

struct FeaturesOpts {
    std::string in, out;
    int k = kDefaultNeighborhood;
    int threads = 0;
};

struct EntropyOpts {
    std::string in, out_dir;
    std::string norm = "both";
    int n_input = 4096;
    int k = kDefaultNeighborhood;
    int bins = 10;
    std::int64_t min_section = 50;
    int threads = 0;
};

struct StorageOpts {
    std::string in, out_dir;
    int k = kDefaultNeighborhood;
    int threads = 0;
};

struct SegmentOpts {
    std::string in, out;
    double tau = 0.0;
    int smooth_k = 0;
    int k = kDefaultNeighborhood;
    int threads = 0;
};

struct ScoreOpts {
    std::string pred, truth;
    std::string out;
    bool sweep = false;
    int steps = 64;
};

struct ExportOpts {
    std::string in, out;
    std::string field = "angle";
};

// ---- subcommand bodies -----------------------------------------------------

void run_synth(const SynthOpts& o) {
    SurfaceSpec spec = SurfaceSpec::defaults(o.seed);
    spec.density = o.density;
    spec.width = o.width;
    spec.height = o.height;

    const SyntheticSurface surface = generate(spec);
    const fs::path out = resolve_out_file(o.out, "synthetic.xyz");
    ensure_parent_dir(out);

    CloudBundle bundle;
    bundle.cloud = surface.cloud;
    bundle.labels = surface.labels;
    write_bundle(bundle, out);

    std::int64_t damaged = 0;
    for (Label l : surface.labels)
        if (l == kDamaged) ++damaged;
    std::printf("wrote %s: %zu points, %.1f%% damaged\n", out.string().c_str(),
                surface.cloud.size(),
                100.0 * static_cast<double>(damaged) /
                    static_cast<double>(surface.cloud.size()));
}

void run_normalize(const NormalizeOpts& o) {
    const NormKind kind = parse_kind(o.kind);
    CloudBundle bundle = read_cloud(o.in);

    if (o.rotate_seed) bundle.cloud = rotate(bundle.cloud, *o.rotate_seed).cloud;
    const NormalizeResult result = normalize(bundle.cloud, kind);

    CloudBundle out_bundle;
    out_bundle.cloud = result.cloud;
    out_bundle.labels = bundle.labels;  // normals/angles are geometry-dependent; recompute downstream

    const fs::path out = resolve_out_file(o.out, "normalized.xyz");
    ensure_parent_dir(out);
    write_bundle(out_bundle, out);
    std::printf("wrote %s (%s normalization)\n", out.string().c_str(), to_string(kind));
}

void run_subdivide(const SubdivideOpts& o) {
    const CloudBundle bundle = read_cloud(o.in);
    KdTree tree(bundle.cloud);

    SubsetOptions opts;
    opts.n_input = o.n_input;
    opts.connectivity = o.connectivity;
    opts.graph_k = o.graph_k;
    opts.threads = o.threads > 0 ? o.threads : default_thread_count();
    const SubsetPlan plan = extract_subsets(bundle.cloud, tree, opts);

    ensure_dir(o.out_dir);
    nlohmann::json manifest;
    manifest["n_all"] = bundle.cloud.size();
    manifest["n_input"] = plan.n_input;
    manifest["num_subsets"] = plan.num_subsets;
    manifest["reference_indices"] = plan.reference_indices;
    nlohmann::json files = nlohmann::json::array();

    for (int s = 0; s < plan.num_subsets; ++s) {
        CloudBundle subset;
        subset.cloud.points.reserve(plan.subsets[s].size());
        for (int idx : plan.subsets[s]) subset.cloud.points.push_back(bundle.cloud.points[idx]);
        if (bundle.labels) {
            LabelField labels;
            labels.reserve(plan.subsets[s].size());
            for (int idx : plan.subsets[s]) labels.push_back((*bundle.labels)[idx]);
            subset.labels = std::move(labels);
        }
        const std::string name = subset_file_name(s);
        write_bundle(subset, fs::path(o.out_dir) / name);
        files.push_back(name);
    }
    manifest["files"] = files;
    write_json(fs::path(o.out_dir) / "manifest.json", manifest);
    std::printf("wrote %d subsets of %d points to %s\n", plan.num_subsets, plan.n_input,
                o.out_dir.c_str());
}

void run_features(const FeaturesOpts& o) {
    CloudBundle bundle = read_cloud(o.in);
    bundle.normals.reset();
    bundle.angles.reset();
    ensure_features(bundle, o.k, o.threads);

    const fs::path out = resolve_out_file(o.out, "features.xyz");
    ensure_parent_dir(out);
    write_bundle(bundle, out);
    std::printf("wrote %s (k=%d)\n", out.string().c_str(), o.k);
}

std::vector<EntropyRow> entropy_pipeline(const PointCloud& raw, const LabelField& labels,
                                         NormKind kind, const EntropyOpts& o) {
    const NormalizeResult norm = normalize(raw, kind);
    KdTree tree(norm.cloud);

    SubsetOptions sub_opts;
    sub_opts.n_input = o.n_input;
    sub_opts.threads = o.threads > 0 ? o.threads : default_thread_count();
    const SubsetPlan plan = extract_subsets(norm.cloud, tree, sub_opts);

    SubsetEntropyOptions ent_opts;
    ent_opts.bins = o.bins;
    ent_opts.min_section_points = o.min_section;

    std::vector<std::vector<EntropyRow>> per_subset;
    per_subset.reserve(plan.subsets.size());
    for (const std::vector<int>& indices : plan.subsets) {
        PointCloud subset;
        subset.points.reserve(indices.size());
        LabelField subset_labels;
        subset_labels.reserve(indices.size());
        for (int idx : indices) {
            subset.points.push_back(norm.cloud.points[idx]);
            subset_labels.push_back(labels[idx]);
        }
        KdTree subset_tree(subset);
        const NormalField normals =
            estimate_normals(subset, subset_tree, o.k, sub_opts.threads);
        const RelativeAngleField angles =
            relative_angles(normals, average_normal(normals));
        per_subset.push_back(
            evaluate_subset(subset, subset_labels, normals, angles, kind, ent_opts));
    }
    return aggregate(per_subset).rows;
}

void run_entropy(const EntropyOpts& o) {
    const CloudBundle bundle = read_cloud(o.in);
    const LabelField& labels = require_labels(bundle, o.in);

    std::vector<NormKind> kinds;
    if (o.norm == "both")
        kinds = {NormKind::global, NormKind::axis_specific};
    else
        kinds = {parse_kind(o.norm)};

    std::vector<EntropyRow> rows;
    for (NormKind kind : kinds) {
        std::vector<EntropyRow> part = entropy_pipeline(bundle.cloud, labels, kind, o);
        rows.insert(rows.end(), part.begin(), part.end());
    }

    ensure_dir(o.out_dir);
    write_text(fs::path(o.out_dir) / "entropy.csv", entropy_csv(rows));
    write_json(fs::path(o.out_dir) / "entropy.json", entropy_json(rows));
    std::fputs(entropy_table(rows).c_str(), stdout);
}

void run_storage(const StorageOpts& o) {
    CloudBundle bundle = read_cloud(o.in);
    const LabelField& labels = require_labels(bundle, o.in);
    ensure_features(bundle, o.k, o.threads);

    const StorageReport report = storage_report(bundle.cloud, labels, *bundle.normals,
                                                *bundle.angles, fs::path(o.out_dir) / "files");
    write_text(fs::path(o.out_dir) / "storage.csv", storage_csv(report));
    write_json(fs::path(o.out_dir) / "storage.json", storage_json(report));
    std::fputs(storage_table(report).c_str(), stdout);
}

void run_segment(const SegmentOpts& o) {
    CloudBundle bundle = read_cloud(o.in);
    ensure_features(bundle, o.k, o.threads);

    LabelField pred = threshold_segment(*bundle.angles, o.tau);
    if (o.smooth_k > 0) {
        KdTree tree(bundle.cloud);
        pred = majority_smooth(pred, bundle.cloud, tree, o.smooth_k);
    }

    CloudBundle out_bundle;
    out_bundle.cloud = bundle.cloud;
    out_bundle.angles = bundle.angles;
    out_bundle.labels = std::move(pred);

    const fs::path out = resolve_out_file(o.out, "segmented.xyz");
    ensure_parent_dir(out);
    write_bundle(out_bundle, out);
    std::printf("wrote %s (tau=%.6f, smooth_k=%d)\n", out.string().c_str(), o.tau,
                o.smooth_k);
}

void run_score(const ScoreOpts& o) {
    const CloudBundle pred_bundle = read_cloud(o.pred);
    const CloudBundle truth_bundle = read_cloud(o.truth);
    const LabelField& truth = require_labels(truth_bundle, o.truth);

    nlohmann::json j;
    std::string table;
    if (o.sweep) {
        if (!pred_bundle.angles)
            throw input_error(o.pred + " carries no relative angles to sweep");
        const SweepResult best = sweep_threshold(*pred_bundle.angles, truth, o.steps);
        const LabelField pred = threshold_segment(*pred_bundle.angles, best.tau);
        const ScoreResult result = score(pred, truth);
        j = score_json(result);
        j["sweep"] = {{"tau", best.tau}, {"steps", o.steps}};
        char line[64];
        std::snprintf(line, sizeof line, "best tau  %.6f\n", best.tau);
        table = line + score_table(result);
    } else {
        const LabelField& pred = require_labels(pred_bundle, o.pred);
        const ScoreResult result = score(pred, truth);
        j = score_json(result);
        table = score_table(result);
    }

    if (!o.out.empty()) {
        const fs::path out = resolve_out_file(o.out, "score.json");
        ensure_parent_dir(out);
        write_json(out, j);
    }
    std::fputs(table.c_str(), stdout);
}

void run_export(const ExportOpts& o) {
    const CloudBundle bundle = read_cloud(o.in);

    std::vector<double> field;
    field.reserve(bundle.cloud.size());
    if (o.field == "angle") {
        if (!bundle.angles) throw input_error(o.in + " carries no relative angles");
        field = bundle.angles->angles;
    } else if (o.field == "z") {
        for (const Vec3& p : bundle.cloud.points) field.push_back(p.z());
    } else if (o.field == "label") {
        const LabelField& labels = require_labels(bundle, o.in);
        for (Label l : labels) field.push_back(l == kDamaged ? 1.0 : 0.0);
    } else {
        throw input_error("unknown field '" + o.field + "' (expected angle, z, or label)");
    }

    const fs::path out = resolve_out_file(o.out, "colored.ply");
    ensure_parent_dir(out);
    write_colored_cloud(bundle.cloud, field, out);
    std::printf("wrote %s colored by %s\n", out.string().c_str(), o.field.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-cloud surface-defect feature extraction and evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI/TOML file");
    app.set_version_flag("--version", "pcdefect 0.1.0");

    SynthOpts synth;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a labeled synthetic defect surface");
    cmd_synth->add_option("--out", synth.out, "Output file (or directory for synthetic.xyz)")
        ->required();
    cmd_synth->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
    cmd_synth->add_option("--density", synth.density, "Points per unit area")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_synth->add_option("--width", synth.width, "Surface width")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_synth->add_option("--height", synth.height, "Surface height")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_synth->callback([&] { run_synth(synth); });

    NormalizeOpts norm;
    auto* cmd_norm = app.add_subcommand("normalize", "Scale a cloud into [-0.5, 0.5]");
    cmd_norm->add_option("--in", norm.in, "Input cloud")->required();
    cmd_norm->add_option("--out", norm.out, "Output file")->required();
    cmd_norm->add_option("--kind", norm.kind, "global or axis")->capture_default_str()
        ->check(CLI::IsMember({"global", "axis"}));
    cmd_norm->add_option("--rotate-seed", norm.rotate_seed,
                         "Apply a random rotation with this seed before normalizing");
    cmd_norm->callback([&] { run_normalize(norm); });

    SubdivideOpts sub;
    auto* cmd_sub = app.add_subcommand("subdivide", "Split a cloud into fixed-size subsets");
    cmd_sub->add_option("--in", sub.in, "Input cloud")->required();
    cmd_sub->add_option("--out-dir", sub.out_dir, "Output directory")->required();
    cmd_sub->add_option("--n-input", sub.n_input, "Points per subset")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_sub->add_flag("--connectivity", sub.connectivity,
                      "Grow subsets over the mutual k-neighbor graph");
    cmd_sub->add_option("--graph-k", sub.graph_k, "Neighbor graph degree")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_sub->add_option("--threads", sub.threads, "Worker threads (0 = auto)")->capture_default_str();
    cmd_sub->callback([&] { run_subdivide(sub); });

    FeaturesOpts feat;
    auto* cmd_feat = app.add_subcommand("features", "Estimate normals and relative angles");
    cmd_feat->add_option("--in", feat.in, "Input cloud")->required();
    cmd_feat->add_option("--out", feat.out, "Output file")->required();
    cmd_feat->add_option("--k", feat.k, "Neighborhood size")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_feat->add_option("--threads", feat.threads, "Worker threads (0 = auto)")->capture_default_str();
    cmd_feat->callback([&] { run_features(feat); });

    EntropyOpts ent;
    auto* cmd_ent = app.add_subcommand(
        "entropy", "Per-section feature entropies over normalized subsets");
    cmd_ent->add_option("--in", ent.in, "Labeled input cloud")->required();
    cmd_ent->add_option("--out-dir", ent.out_dir, "Report directory")->required();
    cmd_ent->add_option("--norm", ent.norm, "global, axis, or both")->capture_default_str()
        ->check(CLI::IsMember({"global", "axis", "both"}));
    cmd_ent->add_option("--n-input", ent.n_input, "Points per subset")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_ent->add_option("--k", ent.k, "Neighborhood size")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_ent->add_option("--bins", ent.bins, "Histogram bins")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_ent->add_option("--min-section", ent.min_section,
                        "Smallest section evaluated")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_ent->add_option("--threads", ent.threads, "Worker threads (0 = auto)")->capture_default_str();
    cmd_ent->callback([&] { run_entropy(ent); });

    StorageOpts stor;
    auto* cmd_stor = app.add_subcommand("storage", "Feature-combination storage report");
    cmd_stor->add_option("--in", stor.in, "Labeled input cloud")->required();
    cmd_stor->add_option("--out-dir", stor.out_dir, "Report directory")->required();
    cmd_stor->add_option("--k", stor.k, "Neighborhood size")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_stor->add_option("--threads", stor.threads, "Worker threads (0 = auto)")->capture_default_str();
    cmd_stor->callback([&] { run_storage(stor); });

    SegmentOpts seg;
    auto* cmd_seg = app.add_subcommand("segment", "Threshold the relative angle");
    cmd_seg->add_option("--in", seg.in, "Input cloud")->required();
    cmd_seg->add_option("--out", seg.out, "Output file")->required();
    cmd_seg->add_option("--tau", seg.tau, "Angle threshold in radians")->required();
    cmd_seg->add_option("--smooth-k", seg.smooth_k,
                        "Majority smoothing neighborhood (0 = off)")->capture_default_str();
    cmd_seg->add_option("--k", seg.k, "Neighborhood size for features")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_seg->add_option("--threads", seg.threads, "Worker threads (0 = auto)")->capture_default_str();
    cmd_seg->callback([&] { run_segment(seg); });

    ScoreOpts sc;
    auto* cmd_sc = app.add_subcommand("score", "Accuracy and IoU against ground truth");
    cmd_sc->add_option("--pred", sc.pred, "Predicted labels (or angles with --sweep)")
        ->required();
    cmd_sc->add_option("--truth", sc.truth, "Ground-truth labels")->required();
    cmd_sc->add_option("--out", sc.out, "JSON report file");
    cmd_sc->add_flag("--sweep", sc.sweep, "Sweep thresholds and score the best");
    cmd_sc->add_option("--steps", sc.steps, "Sweep steps")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_sc->callback([&] { run_score(sc); });

    ExportOpts exp;
    auto* cmd_exp = app.add_subcommand("export-colored", "Color a cloud by a scalar field");
    cmd_exp->add_option("--in", exp.in, "Input cloud")->required();
    cmd_exp->add_option("--out", exp.out, "Output ply file")->required();
    cmd_exp->add_option("--field", exp.field, "angle, z, or label")->capture_default_str()
        ->check(CLI::IsMember({"angle", "z", "label"}));
    cmd_exp->callback([&] { run_export(exp); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
