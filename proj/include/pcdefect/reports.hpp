#pragma once

#include "pcdefect/cloud_io.hpp"
#include "pcdefect/entropy.hpp"
#include "pcdefect/seg_eval.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace pcdefect {

/// Deterministic serializers: same rows in, same bytes out.

std::string entropy_csv(const std::vector<EntropyRow>& rows);
nlohmann::json entropy_json(const std::vector<EntropyRow>& rows);
/// One row per feature/section, one value column per normalization kind
/// present in the input.
std::string entropy_table(const std::vector<EntropyRow>& rows);

std::string storage_csv(const StorageReport& report);
nlohmann::json storage_json(const StorageReport& report);
std::string storage_table(const StorageReport& report);

nlohmann::json score_json(const ScoreResult& result);
std::string score_table(const ScoreResult& result);

}  // namespace pcdefect
