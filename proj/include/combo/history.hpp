#pragma once

#include <optional>
#include <string>
#include <vector>

#include "combo/design.hpp"
#include "combo/io.hpp"

namespace combo {

/// Everything needed to reproduce a live trial's recommendation offline.
struct TrialHistory {
  json design = json{{"id", "cboin"}};
  DoseGrid grid{5, 3};
  StudyConfig config;
  std::uint64_t seed = 0;
  std::vector<CohortRecord> cohorts;
};

/// {design, J, K, config, seed, cohorts}; design may be an id string.
TrialHistory history_from_json(const json& j);
json to_json(const TrialHistory& h);

struct Recommendation {
  Decision decision;  // terminate once the trial is over
  bool finished = false;
  Matrix estimates;
  std::optional<MtdResult> mtd;  // set when a finished trial selects
};

/// Next step for a trial in progress, with the same seeds, enrollment cap
/// and early-stop rule the simulator applies.
Recommendation recommend(const Design& design, const TrialState& state, const StudyConfig& cfg,
                         std::uint64_t seed);
json to_json(const Recommendation& r);

}  // namespace combo
