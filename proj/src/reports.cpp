#include "pcdefect/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <string_view>

namespace pcdefect {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string lpad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

}  // namespace

std::string entropy_csv(const std::vector<EntropyRow>& rows) {
    std::string out = "normalization,feature,section,subsets,points,e1,e2,e3,mean\n";
    for (const EntropyRow& r : rows) {
        out += to_string(r.normalization);
        out += ',';
        out += to_string(r.feature);
        out += ',';
        out += to_string(r.section);
        out += ',';
        out += std::to_string(r.subsets);
        out += ',';
        out += std::to_string(r.point_count);
        for (std::size_t c = 0; c < 3; ++c) {
            out += ',';
            if (c < r.component_entropy.size()) out += fixed(r.component_entropy[c], 4);
        }
        out += ',';
        out += fixed(r.mean_entropy, 4);
        out += '\n';
    }
    return out;
}

nlohmann::json entropy_json(const std::vector<EntropyRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const EntropyRow& r : rows) {
        arr.push_back({
            {"normalization", to_string(r.normalization)},
            {"feature", to_string(r.feature)},
            {"section", to_string(r.section)},
            {"subsets", r.subsets},
            {"points", r.point_count},
            {"component_entropy", r.component_entropy},
            {"mean_entropy", r.mean_entropy},
        });
    }
    return nlohmann::json{{"entropy", arr}};
}

std::string entropy_table(const std::vector<EntropyRow>& rows) {
    const NormKind kinds_order[] = {NormKind::global, NormKind::axis_specific};
    std::vector<NormKind> kinds;
    for (NormKind k : kinds_order)
        if (std::any_of(rows.begin(), rows.end(),
                        [&](const EntropyRow& r) { return r.normalization == k; }))
            kinds.push_back(k);

    const Feature features[] = {Feature::position, Feature::normal,
                                Feature::relative_angle};
    const Section sections[] = {Section::overall, Section::undamaged, Section::damaged};

    auto find_row = [&](NormKind k, Feature f, Section s) -> const EntropyRow* {
        for (const EntropyRow& r : rows)
            if (r.normalization == k && r.feature == f && r.section == s) return &r;
        return nullptr;
    };

    constexpr std::size_t label_w = 26;
    constexpr std::size_t col_w = 14;
    std::string out = pad("feature / section", label_w);
    for (NormKind k : kinds) out += lpad(to_string(k), col_w);
    out += '\n';
    out.append(label_w + col_w * kinds.size(), '-');
    out += '\n';
    for (Feature f : features) {
        for (Section s : sections) {
            bool any = false;
            for (NormKind k : kinds)
                if (find_row(k, f, s)) any = true;
            if (!any) continue;
            std::string label = std::string(to_string(f)) + " (" + to_string(s) + ")";
            out += pad(label, label_w);
            for (NormKind k : kinds) {
                const EntropyRow* r = find_row(k, f, s);
                out += lpad(r ? fixed(r->mean_entropy, 4) : "-", col_w);
            }
            out += '\n';
        }
    }
    return out;
}

namespace {

const char* combo_name(FeatureCombination combo) {
    switch (combo) {
        case FeatureCombination::position: return "position";
        case FeatureCombination::position_normal: return "position+normal";
        case FeatureCombination::position_angle: return "position+angle";
        case FeatureCombination::position_normal_angle: return "position+normal+angle";
        case FeatureCombination::angle_only: return "angle";
        case FeatureCombination::normal_only: return "normal";
    }
    return "?";
}

}  // namespace

std::string storage_csv(const StorageReport& report) {
    std::string out = "combination,features,file,bytes,size_ratio,input_channels,channel_ratio\n";
    for (const StorageRow& r : report.rows) {
        out += std::to_string(static_cast<int>(r.combo));
        out += ',';
        out += combo_name(r.combo);
        out += ',';
        out += r.file_name;
        out += ',';
        out += std::to_string(r.bytes);
        out += ',';
        out += fixed(r.size_ratio, 4);
        out += ',';
        out += std::to_string(r.input_channels);
        out += ',';
        out += fixed(r.channel_ratio, 4);
        out += '\n';
    }
    return out;
}

nlohmann::json storage_json(const StorageReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const StorageRow& r : report.rows) {
        arr.push_back({
            {"combination", static_cast<int>(r.combo)},
            {"features", combo_name(r.combo)},
            {"file", r.file_name},
            {"bytes", r.bytes},
            {"size_ratio", r.size_ratio},
            {"input_channels", r.input_channels},
            {"channel_ratio", r.channel_ratio},
        });
    }
    return nlohmann::json{{"storage", arr}};
}

std::string storage_table(const StorageReport& report) {
    std::string out = pad("#", 3) + pad("features", 23) + lpad("bytes", 10) +
                      lpad("size", 9) + lpad("channels", 10) + lpad("ch.ratio", 10) + '\n';
    out.append(65, '-');
    out += '\n';
    for (const StorageRow& r : report.rows) {
        out += pad(std::to_string(static_cast<int>(r.combo)), 3);
        out += pad(combo_name(r.combo), 23);
        out += lpad(std::to_string(r.bytes), 10);
        out += lpad(fixed(100.0 * r.size_ratio, 1) + "%", 9);
        out += lpad(std::to_string(r.input_channels), 10);
        out += lpad(fixed(100.0 * r.channel_ratio, 1) + "%", 10);
        out += '\n';
    }
    return out;
}

nlohmann::json score_json(const ScoreResult& result) {
    return nlohmann::json{
        {"counts",
         {{"tp", result.counts.tp},
          {"tn", result.counts.tn},
          {"fp", result.counts.fp},
          {"fn", result.counts.fn}}},
        {"scores",
         {{"accuracy", result.scores.accuracy},
          {"iou_damaged", result.scores.iou_damaged},
          {"iou_undamaged", result.scores.iou_undamaged},
          {"miou", result.scores.miou}}},
    };
}

std::string score_table(const ScoreResult& result) {
    std::string out;
    out += "tp " + std::to_string(result.counts.tp) + "  tn " +
           std::to_string(result.counts.tn) + "  fp " + std::to_string(result.counts.fp) +
           "  fn " + std::to_string(result.counts.fn) + '\n';
    out += pad("accuracy", 16) + fixed(result.scores.accuracy, 4) + '\n';
    out += pad("iou damaged", 16) + fixed(result.scores.iou_damaged, 4) + '\n';
    out += pad("iou undamaged", 16) + fixed(result.scores.iou_undamaged, 4) + '\n';
    out += pad("miou", 16) + fixed(result.scores.miou, 4) + '\n';
    return out;
}

}  // namespace pcdefect
