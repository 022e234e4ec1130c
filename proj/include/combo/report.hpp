#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "combo/engine.hpp"

namespace combo::report {

enum class Mark { none, best, worst };

struct ReferenceCell {
  double value;
  Mark mark;  // the published best/worst marking
};

struct ReferenceRow {
  std::string setting;  // "main" or "early-stop"
  std::string metric;   // S_C, S_OT, A_C, A_OT
  std::string design;   // published row label
  std::array<ReferenceCell, 10> cells;  // scenarios 1..10
};

/// Published operating characteristics of the nine-design comparison.
const std::vector<ReferenceRow>& reference_table();

const std::vector<std::string>& metrics();
const std::vector<std::string>& settings();

/// Published row label for a results label or design id (cboin -> cBOIN,
/// gcrm -> gCRM.1); nullopt when there is none.
std::optional<std::string> reference_design(const std::string& label);

/// Scenario column for names like "1", "S1", "scenario-01"; nullopt otherwise.
std::optional<int> reference_scenario(const std::string& name);

std::optional<ReferenceCell> reference_value(const std::string& setting, const std::string& metric,
                                             const std::string& design, int scenario);

struct ComparisonRow {
  std::string design;    // results label
  std::string scenario;  // results name
  int column = 0;        // reference scenario number
  std::string metric;
  double result = 0;
  double reference = 0;
  double delta = 0;  // result - reference
  bool best = false, worst = false;  // among the compared results
  Mark reference_mark = Mark::none;
};

struct Comparison {
  std::string setting;
  std::vector<ComparisonRow> rows;
  std::vector<std::string> warnings;
};

/// Joins results with the reference table. Rows without a reference cell are
/// dropped with a warning.
Comparison compare(const std::vector<MetricsRow>& results, const std::string& setting = "main");

std::string to_csv(const Comparison& c);
std::string to_markdown(const Comparison& c);

}  // namespace combo::report
