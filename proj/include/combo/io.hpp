#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "combo/core.hpp"

namespace combo {

using nlohmann::json;

/// Reads and parses a JSON file; parse failures carry line and column.
json read_json_file(const std::filesystem::path& path);
json parse_json(const std::string& text, const std::string& source = "input");

json to_json(Dose d);
Dose dose_from_json(const json& j);

/// K rows of J values, row k is agent-B level k. NaN is written as null.
json matrix_to_json(const Matrix& m);
json counts_to_json(const Counts& m);

ToxicityScenario scenario_from_json(const json& j);
json to_json(const ToxicityScenario& s);

json to_json(const CohortRecord& c);
CohortRecord cohort_from_json(const json& j);
json log_to_json(const std::vector<CohortRecord>& log);
std::vector<CohortRecord> log_from_json(const json& j);

json to_json(const Decision& d);
json to_json(const MtdResult& r);

/// Fields missing from j keep the values already in cfg.
StudyConfig study_config_from_json(const json& j, StudyConfig cfg = {});
json to_json(const StudyConfig& cfg);

/// Checks that every key of obj is in allowed; names the offender otherwise.
void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where);

}  // namespace combo
