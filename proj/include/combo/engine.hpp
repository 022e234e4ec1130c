#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "combo/design.hpp"
#include "combo/io.hpp"

namespace combo {

struct TrialRecord {
  std::string design;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CohortRecord> log;
  MtdResult result;
  std::string termination;  // max-n, early-stop, or the design's reason
  int patients_total = 0;
};

/// Terminates when the recommended dose already holds cap patients.
std::optional<Decision> apply_early_stop(const TrialState& state, Dose recommended,
                                         std::optional<int> cap);

/// Simulates one trial. Outcomes come from a stream seeded by seed alone.
TrialRecord run_trial(const Design& design, const ToxicityScenario& scenario,
                      const StudyConfig& cfg, std::uint64_t seed);

struct MetricsRow {
  std::string design;
  std::string scenario;
  double S_C = 0, S_OT = 0, A_C = 0, A_OT = 0;
  int reps = 0;
  double mean_n = 0;
};

struct MetricDefinitions {
  double mtd_tol = 1e-6;
  double over_margin = 1e-9;
};

MetricsRow compute_metrics(const std::vector<TrialRecord>& records, const ToxicityScenario& scenario,
                           double phi, const MetricDefinitions& defs = {});

std::uint64_t replication_seed(std::uint64_t base, const std::string& design,
                               const std::string& scenario, std::uint64_t rep);

struct StudySpec {
  StudyConfig cfg;
  std::vector<json> designs;  // design specs as accepted by make_design
  std::vector<ToxicityScenario> scenarios;
  MetricDefinitions defs;
};

/// Parses a study config; scenario file references resolve against base_dir.
StudySpec study_from_json(const json& j, const std::filesystem::path& base_dir);

struct StudyResult {
  std::vector<MetricsRow> rows;              // design-major, scenario-minor
  std::vector<std::vector<TrialRecord>> records;  // same order, when kept
};

struct StudyOptions {
  int threads = 1;
  bool keep_records = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

StudyResult run_study(const StudySpec& spec, const StudyOptions& opts = {});

std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> metrics_from_csv(const std::string& text);

}  // namespace combo
