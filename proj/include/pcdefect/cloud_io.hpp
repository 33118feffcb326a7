#pragma once

#include "pcdefect/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pcdefect {

enum class CloudFormat { xyz_text, ply_ascii };

/// Picks ply_ascii for a ".ply" extension, xyz_text otherwise.
CloudFormat format_from_extension(const std::filesystem::path& path);

/// The six feature layouts a downstream network can be fed. Combinations 5
/// and 6 use positions only to map points back onto the surface, so their
/// files match combinations 3 and 2 on disk while exposing fewer input
/// channels.
enum class FeatureCombination : int {
    position = 1,
    position_normal = 2,
    position_angle = 3,
    position_normal_angle = 4,
    angle_only = 5,
    normal_only = 6,
};

struct CombinationInfo {
    FeatureCombination id;
    bool position_as_input = false;
    bool uses_normal = false;
    bool uses_angle = false;
    bool position_mapping_only = false;

    int input_channels() const {
        return 3 * (position_as_input ? 1 : 0) + 3 * (uses_normal ? 1 : 0) +
               (uses_angle ? 1 : 0);
    }
};

CombinationInfo combination_info(FeatureCombination combo);
const std::array<FeatureCombination, 6>& all_combinations();

/// A cloud plus whatever per-point fields the source file carried.
struct CloudBundle {
    PointCloud cloud;
    std::optional<LabelField> labels;
    std::optional<NormalField> normals;
    std::optional<RelativeAngleField> angles;
};

/// Reads a cloud file. xyz-text: optional `# cols: ...` header, otherwise
/// the column layout is inferred from the token count (3 xyz, 4 +label,
/// 5 +angle+label, 6 +normal, 7 +normal+label, 8 all). ply-ascii: standard
/// header; properties x/y/z required, nx/ny/nz, angle, and label picked up
/// by name, others skipped. Throws input_error with a line number on
/// malformed input, non-finite values, or labels outside {0, 1}.
CloudBundle read_cloud(const std::filesystem::path& path, CloudFormat format);
CloudBundle read_cloud(const std::filesystem::path& path);

/// Writes every present field as xyz-text with a `# cols:` header.
/// Positions use 9 decimals, normals and angles 6, labels a bare integer.
/// Returns bytes written.
std::uint64_t write_bundle(const CloudBundle& bundle,
                           const std::filesystem::path& path);

/// Writes the file layout for one feature combination (positions, the
/// fields the combination stores, and labels) and returns the exact byte
/// count. Fields the combination does not store may be null.
std::uint64_t write_feature_file(const PointCloud& cloud, const LabelField& labels,
                                 FeatureCombination combo,
                                 const NormalField* normals,
                                 const RelativeAngleField* angles,
                                 const std::filesystem::path& path);

struct StorageRow {
    FeatureCombination combo;
    std::string file_name;
    std::uint64_t bytes = 0;
    double size_ratio = 0.0;    // vs combination 2
    int input_channels = 0;
    double channel_ratio = 0.0;  // vs combination 2's 6 channels
};

struct StorageReport {
    std::vector<StorageRow> rows;  // combinations 1..6 in order
};

/// Writes all six combination files into scratch_dir (created on demand)
/// and measures them against combination 2.
StorageReport storage_report(const PointCloud& cloud, const LabelField& labels,
                             const NormalField& normals,
                             const RelativeAngleField& angles,
                             const std::filesystem::path& scratch_dir);

/// Writes a ply-ascii cloud colored by the scalar field, mapped linearly
/// from [min, max] onto a blue-to-red ramp. A constant field maps to the
/// low color. Throws input_error on an empty cloud, a length mismatch, or
/// non-finite values.
void write_colored_cloud(const PointCloud& cloud, const std::vector<double>& field,
                         const std::filesystem::path& path);

}  // namespace pcdefect
