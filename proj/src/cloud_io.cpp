#include "pcdefect/cloud_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace pcdefect {

namespace fs = std::filesystem;

CloudFormat format_from_extension(const fs::path& path) {
    return path.extension() == ".ply" ? CloudFormat::ply_ascii : CloudFormat::xyz_text;
}

CombinationInfo combination_info(FeatureCombination combo) {
    switch (combo) {
        case FeatureCombination::position:
            return {combo, true, false, false, false};
        case FeatureCombination::position_normal:
            return {combo, true, true, false, false};
        case FeatureCombination::position_angle:
            return {combo, true, false, true, false};
        case FeatureCombination::position_normal_angle:
            return {combo, true, true, true, false};
        case FeatureCombination::angle_only:
            return {combo, false, false, true, true};
        case FeatureCombination::normal_only:
            return {combo, false, true, false, true};
    }
    throw input_error("unknown feature combination " +
                      std::to_string(static_cast<int>(combo)));
}

const std::array<FeatureCombination, 6>& all_combinations() {
    static const std::array<FeatureCombination, 6> combos = {
        FeatureCombination::position,       FeatureCombination::position_normal,
        FeatureCombination::position_angle, FeatureCombination::position_normal_angle,
        FeatureCombination::angle_only,     FeatureCombination::normal_only,
    };
    return combos;
}

namespace {

struct ColumnLayout {
    bool normals = false;
    bool angle = false;
    bool label = false;

    int tokens() const { return 3 + (normals ? 3 : 0) + (angle ? 1 : 0) + (label ? 1 : 0); }
};

[[noreturn]] void fail_at(const fs::path& path, int line_no, const std::string& what) {
    throw input_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

void split_tokens(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
}

double parse_scalar(std::string_view tok, const fs::path& path, int line_no) {
    double v = 0.0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
    if (ec != std::errc() || ptr != last)
        fail_at(path, line_no, "malformed number '" + std::string(tok) + "'");
    if (!std::isfinite(v))
        fail_at(path, line_no, "non-finite value '" + std::string(tok) + "'");
    return v;
}

Label parse_label(std::string_view tok, const fs::path& path, int line_no) {
    if (tok == "0") return kUndamaged;
    if (tok == "1") return kDamaged;
    fail_at(path, line_no, "label '" + std::string(tok) + "' outside {0, 1}");
}

ColumnLayout layout_from_count(std::size_t n, const fs::path& path, int line_no) {
    switch (n) {
        case 3: return {false, false, false};
        case 4: return {false, false, true};
        case 5: return {false, true, true};
        case 6: return {true, false, false};
        case 7: return {true, false, true};
        case 8: return {true, true, true};
        default:
            fail_at(path, line_no,
                    "cannot infer column layout from " + std::to_string(n) + " tokens");
    }
}

ColumnLayout layout_from_header(std::string_view header, const fs::path& path,
                                int line_no) {
    std::vector<std::string_view> names;
    split_tokens(header, names);

    static const std::string_view canonical[] = {"x",  "y",  "z",     "nx",
                                                 "ny", "nz", "angle", "label"};
    ColumnLayout layout;
    std::size_t pos = 0;
    auto take = [&](std::string_view want) {
        if (pos < names.size() && names[pos] == want) {
            ++pos;
            return true;
        }
        return false;
    };
    if (!(take("x") && take("y") && take("z")))
        fail_at(path, line_no, "column header must start with 'x y z'");
    if (take("nx")) {
        if (!(take("ny") && take("nz")))
            fail_at(path, line_no, "normal columns must appear as 'nx ny nz'");
        layout.normals = true;
    }
    layout.angle = take("angle");
    layout.label = take("label");
    if (pos != names.size()) {
        std::string rest(names[pos]);
        std::string allowed;
        for (auto c : canonical) {
            allowed += c;
            allowed += ' ';
        }
        fail_at(path, line_no, "unsupported column '" + rest +
                                   "' (expected subset of: " + allowed + "in order)");
    }
    return layout;
}

CloudBundle read_xyz_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path.string());

    CloudBundle bundle;
    std::vector<Vec3> normals;
    std::vector<double> angles;
    LabelField labels;

    std::optional<ColumnLayout> layout;
    std::string line;
    std::vector<std::string_view> toks;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        while (!view.empty() && (view.back() == '\r' || view.back() == '\n'))
            view.remove_suffix(1);
        if (view.empty()) continue;
        if (view.front() == '#') {
            constexpr std::string_view cols_prefix = "# cols:";
            if (view.substr(0, cols_prefix.size()) == cols_prefix) {
                if (layout)
                    fail_at(path, line_no, "column header after data or duplicated");
                layout = layout_from_header(view.substr(cols_prefix.size()), path, line_no);
            }
            continue;  // other comment lines are ignored
        }

        split_tokens(view, toks);
        if (!layout) layout = layout_from_count(toks.size(), path, line_no);
        if (toks.size() != static_cast<std::size_t>(layout->tokens()))
            fail_at(path, line_no,
                    "expected " + std::to_string(layout->tokens()) + " tokens, got " +
                        std::to_string(toks.size()));

        std::size_t t = 0;
        Vec3 p;
        p.x() = parse_scalar(toks[t++], path, line_no);
        p.y() = parse_scalar(toks[t++], path, line_no);
        p.z() = parse_scalar(toks[t++], path, line_no);
        bundle.cloud.points.push_back(p);
        if (layout->normals) {
            Vec3 n;
            n.x() = parse_scalar(toks[t++], path, line_no);
            n.y() = parse_scalar(toks[t++], path, line_no);
            n.z() = parse_scalar(toks[t++], path, line_no);
            normals.push_back(n);
        }
        if (layout->angle) angles.push_back(parse_scalar(toks[t++], path, line_no));
        if (layout->label) labels.push_back(parse_label(toks[t++], path, line_no));
    }

    if (bundle.cloud.empty()) throw input_error(path.string() + " contains no points");
    if (layout->normals) {
        NormalField nf;
        nf.normals = std::move(normals);
        bundle.normals = std::move(nf);
    }
    if (layout->angle) {
        RelativeAngleField af;
        af.angles = std::move(angles);
        bundle.angles = std::move(af);
    }
    if (layout->label) bundle.labels = std::move(labels);
    return bundle;
}

struct PlyProperty {
    std::string name;
    bool is_integer = false;
};

CloudBundle read_ply_ascii(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path.string());

    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        return true;
    };

    if (!next_line() || line != "ply") fail_at(path, 1, "missing 'ply' magic");
    if (!next_line() || line.rfind("format ascii", 0) != 0)
        fail_at(path, line_no, "only ascii ply is supported");

    long vertex_count = -1;
    std::vector<PlyProperty> props;
    bool in_vertex_element = false;
    while (true) {
        if (!next_line()) fail_at(path, line_no, "unterminated ply header");
        if (line == "end_header") break;
        std::istringstream ss(line);
        std::string kw;
        ss >> kw;
        if (kw == "comment" || kw == "obj_info") continue;
        if (kw == "element") {
            std::string name;
            long count = 0;
            if (!(ss >> name >> count)) fail_at(path, line_no, "malformed element line");
            in_vertex_element = (name == "vertex");
            if (in_vertex_element) vertex_count = count;
            continue;
        }
        if (kw == "property") {
            if (!in_vertex_element) continue;
            std::string type, name;
            if (!(ss >> type)) fail_at(path, line_no, "malformed property line");
            if (type == "list") fail_at(path, line_no, "list properties are not supported on vertices");
            if (!(ss >> name)) fail_at(path, line_no, "malformed property line");
            const bool integer = type == "char" || type == "uchar" || type == "short" ||
                                 type == "ushort" || type == "int" || type == "uint" ||
                                 type == "int8" || type == "uint8" || type == "int16" ||
                                 type == "uint16" || type == "int32" || type == "uint32";
            props.push_back({name, integer});
            continue;
        }
        fail_at(path, line_no, "unexpected header keyword '" + kw + "'");
    }

    if (vertex_count < 0) fail_at(path, line_no, "no vertex element declared");
    if (vertex_count == 0) throw input_error(path.string() + " contains no points");

    auto index_of = [&](std::string_view name) -> int {
        for (std::size_t i = 0; i < props.size(); ++i)
            if (props[i].name == name) return static_cast<int>(i);
        return -1;
    };
    const int ix = index_of("x"), iy = index_of("y"), iz = index_of("z");
    if (ix < 0 || iy < 0 || iz < 0)
        fail_at(path, line_no, "vertex element lacks x/y/z properties");
    const int inx = index_of("nx"), iny = index_of("ny"), inz = index_of("nz");
    const bool has_normals = inx >= 0 && iny >= 0 && inz >= 0;
    const int ia = index_of("angle");
    const int il = index_of("label");

    CloudBundle bundle;
    std::vector<Vec3> normals;
    std::vector<double> angles;
    LabelField labels;
    std::vector<std::string_view> toks;
    for (long v = 0; v < vertex_count; ++v) {
        if (!next_line()) fail_at(path, line_no, "unexpected end of file in vertex data");
        split_tokens(line, toks);
        if (toks.size() != props.size())
            fail_at(path, line_no, "expected " + std::to_string(props.size()) +
                                       " tokens, got " + std::to_string(toks.size()));
        Vec3 p;
        p.x() = parse_scalar(toks[ix], path, line_no);
        p.y() = parse_scalar(toks[iy], path, line_no);
        p.z() = parse_scalar(toks[iz], path, line_no);
        bundle.cloud.points.push_back(p);
        if (has_normals) {
            Vec3 n;
            n.x() = parse_scalar(toks[inx], path, line_no);
            n.y() = parse_scalar(toks[iny], path, line_no);
            n.z() = parse_scalar(toks[inz], path, line_no);
            normals.push_back(n);
        }
        if (ia >= 0) angles.push_back(parse_scalar(toks[ia], path, line_no));
        if (il >= 0) labels.push_back(parse_label(toks[il], path, line_no));
    }

    if (has_normals) {
        NormalField nf;
        nf.normals = std::move(normals);
        bundle.normals = std::move(nf);
    }
    if (ia >= 0) {
        RelativeAngleField af;
        af.angles = std::move(angles);
        bundle.angles = std::move(af);
    }
    if (il >= 0) bundle.labels = std::move(labels);
    return bundle;
}

void append_pos(std::string& line, double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.9f", v);
    line.append(buf, static_cast<std::size_t>(n));
}

void append_feat(std::string& line, double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
    line.append(buf, static_cast<std::size_t>(n));
}

std::string header_line(bool normals, bool angle, bool label) {
    std::string h = "# cols: x y z";
    if (normals) h += " nx ny nz";
    if (angle) h += " angle";
    if (label) h += " label";
    h += '\n';
    return h;
}

std::uint64_t write_xyz_rows(const PointCloud& cloud, const NormalField* normals,
                             const RelativeAngleField* angles, const LabelField* labels,
                             const fs::path& path) {
    for (const Vec3& p : cloud.points)
        if (!p.allFinite())
            throw input_error("cannot write non-finite coordinates to " + path.string());
    if (normals)
        for (const Vec3& n : normals->normals)
            if (!n.allFinite())
                throw input_error("cannot write non-finite normals to " + path.string());
    if (angles)
        for (double a : angles->angles)
            if (!std::isfinite(a))
                throw input_error("cannot write non-finite angles to " + path.string());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open " + path.string() + " for writing");

    std::uint64_t bytes = 0;
    const std::string header = header_line(normals != nullptr, angles != nullptr,
                                           labels != nullptr);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    bytes += header.size();

    std::string line;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        line.clear();
        append_pos(line, cloud.points[i].x());
        line += ' ';
        append_pos(line, cloud.points[i].y());
        line += ' ';
        append_pos(line, cloud.points[i].z());
        if (normals) {
            const Vec3& n = normals->normals[i];
            line += ' ';
            append_feat(line, n.x());
            line += ' ';
            append_feat(line, n.y());
            line += ' ';
            append_feat(line, n.z());
        }
        if (angles) {
            line += ' ';
            append_feat(line, angles->angles[i]);
        }
        if (labels) {
            line += ' ';
            line += ((*labels)[i] == kDamaged) ? '1' : '0';
        }
        line += '\n';
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
        bytes += line.size();
    }
    out.flush();
    if (!out) throw input_error("write failure on " + path.string());
    return bytes;
}

}  // namespace

CloudBundle read_cloud(const fs::path& path, CloudFormat format) {
    return format == CloudFormat::ply_ascii ? read_ply_ascii(path) : read_xyz_text(path);
}

CloudBundle read_cloud(const fs::path& path) {
    return read_cloud(path, format_from_extension(path));
}

std::uint64_t write_bundle(const CloudBundle& bundle, const fs::path& path) {
    const std::size_t n = bundle.cloud.size();
    if (n == 0) throw input_error("cannot write an empty cloud to " + path.string());
    if (bundle.labels && bundle.labels->size() != n)
        throw input_error("label field length " + std::to_string(bundle.labels->size()) +
                          " does not match cloud size " + std::to_string(n));
    if (bundle.normals && bundle.normals->normals.size() != n)
        throw input_error("normal field length " +
                          std::to_string(bundle.normals->normals.size()) +
                          " does not match cloud size " + std::to_string(n));
    if (bundle.angles && bundle.angles->angles.size() != n)
        throw input_error("angle field length " +
                          std::to_string(bundle.angles->angles.size()) +
                          " does not match cloud size " + std::to_string(n));
    return write_xyz_rows(bundle.cloud, bundle.normals ? &*bundle.normals : nullptr,
                          bundle.angles ? &*bundle.angles : nullptr,
                          bundle.labels ? &*bundle.labels : nullptr, path);
}

std::uint64_t write_feature_file(const PointCloud& cloud, const LabelField& labels,
                                 FeatureCombination combo, const NormalField* normals,
                                 const RelativeAngleField* angles,
                                 const fs::path& path) {
    const std::size_t n = cloud.size();
    if (n == 0) throw input_error("cannot write an empty cloud to " + path.string());
    if (labels.size() != n)
        throw input_error("label field length " + std::to_string(labels.size()) +
                          " does not match cloud size " + std::to_string(n));

    const CombinationInfo info = combination_info(combo);
    if (info.uses_normal) {
        if (!normals)
            throw input_error("combination " + std::to_string(static_cast<int>(combo)) +
                              " requires normals");
        if (normals->normals.size() != n)
            throw input_error("normal field length " +
                              std::to_string(normals->normals.size()) +
                              " does not match cloud size " + std::to_string(n));
    }
    if (info.uses_angle) {
        if (!angles)
            throw input_error("combination " + std::to_string(static_cast<int>(combo)) +
                              " requires relative angles");
        if (angles->angles.size() != n)
            throw input_error("angle field length " +
                              std::to_string(angles->angles.size()) +
                              " does not match cloud size " + std::to_string(n));
    }

    return write_xyz_rows(cloud, info.uses_normal ? normals : nullptr,
                          info.uses_angle ? angles : nullptr, &labels, path);
}

StorageReport storage_report(const PointCloud& cloud, const LabelField& labels,
                             const NormalField& normals, const RelativeAngleField& angles,
                             const fs::path& scratch_dir) {
    std::error_code ec;
    fs::create_directories(scratch_dir, ec);
    if (ec && !fs::is_directory(scratch_dir))
        throw input_error("cannot create directory " + scratch_dir.string() + ": " +
                          ec.message());

    StorageReport report;
    for (FeatureCombination combo : all_combinations()) {
        StorageRow row;
        row.combo = combo;
        row.file_name = "combo_" + std::to_string(static_cast<int>(combo)) + ".txt";
        row.bytes = write_feature_file(cloud, labels, combo, &normals, &angles,
                                       scratch_dir / row.file_name);
        row.input_channels = combination_info(combo).input_channels();
        report.rows.push_back(row);
    }

    const double base_bytes = static_cast<double>(report.rows[1].bytes);
    const double base_channels = static_cast<double>(report.rows[1].input_channels);
    for (StorageRow& row : report.rows) {
        row.size_ratio = static_cast<double>(row.bytes) / base_bytes;
        row.channel_ratio = static_cast<double>(row.input_channels) / base_channels;
    }
    return report;
}

void write_colored_cloud(const PointCloud& cloud, const std::vector<double>& field,
                         const fs::path& path) {
    if (cloud.empty()) throw input_error("cannot color an empty cloud");
    if (field.size() != cloud.size())
        throw input_error("scalar field length " + std::to_string(field.size()) +
                          " does not match cloud size " + std::to_string(cloud.size()));
    for (double v : field)
        if (!std::isfinite(v)) throw input_error("scalar field contains non-finite values");
    for (const Vec3& p : cloud.points)
        if (!p.allFinite())
            throw input_error("cannot write non-finite coordinates to " + path.string());

    const auto [lo_it, hi_it] = std::minmax_element(field.begin(), field.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open " + path.string() + " for writing");

    out << "ply\n"
        << "format ascii 1.0\n"
        << "element vertex " << cloud.size() << "\n"
        << "property float x\n"
        << "property float y\n"
        << "property float z\n"
        << "property uchar red\n"
        << "property uchar green\n"
        << "property uchar blue\n"
        << "end_header\n";

    char buf[160];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double t = span > 0.0 ? (field[i] - lo) / span : 0.0;
        const int red = static_cast<int>(std::lround(255.0 * t));
        const int blue = 255 - red;
        const int n = std::snprintf(buf, sizeof buf, "%.9f %.9f %.9f %d 0 %d\n",
                                    cloud.points[i].x(), cloud.points[i].y(),
                                    cloud.points[i].z(), red, blue);
        out.write(buf, n);
    }
    out.flush();
    if (!out) throw input_error("write failure on " + path.string());
}

}  // namespace pcdefect
