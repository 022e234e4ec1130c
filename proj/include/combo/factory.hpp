#pragma once

#include <string>
#include <vector>

#include "combo/design.hpp"
#include "combo/io.hpp"

namespace combo {

/// The nine design ids accepted by make_design.
const std::vector<std::string>& design_ids();

/// Builds a design from {"id": ..., params...}. Missing parameters take the
/// study defaults; unknown ids or fields are config errors. truth is only
/// consulted by a "truth"/"shifted" prior guess.
DesignPtr make_design(const json& spec, const DoseGrid& grid, double phi,
                      const ToxicityScenario* truth = nullptr);

/// True when the design built from spec depends on the scenario.
bool design_uses_truth(const json& spec);

/// Label used in result tables: spec["label"] or the id.
std::string design_label(const json& spec);

/// Parameter schema for every design: name, type, default, description.
json design_catalog();

}  // namespace combo
