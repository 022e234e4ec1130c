#include "combo/core.hpp"

#include <cmath>
#include <numeric>

namespace combo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::out_of_grid: return "out_of_grid";
    case ErrorCode::invalid_counts: return "invalid_counts";
    case ErrorCode::trial_finished: return "trial_finished";
    case ErrorCode::undefined_rate: return "undefined_rate";
    case ErrorCode::mle_undefined: return "mle_undefined";
    case ErrorCode::no_posterior_mass: return "no_posterior_mass";
    case ErrorCode::sampler_diverged: return "sampler_diverged";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::revision_conflict: return "revision_conflict";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::dose_mismatch: return "dose_mismatch";
    case ErrorCode::idempotency_conflict: return "idempotency_conflict";
  }
  return "unknown";
}

std::string to_string(Dose d) {
  return "(" + std::to_string(d.j) + "," + std::to_string(d.k) + ")";
}

DoseGrid::DoseGrid(int j_levels, int k_levels) : J(j_levels), K(k_levels) {
  require(J >= 1 && K >= 1, ErrorCode::invalid_argument, "dose grid needs J >= 1 and K >= 1");
}

std::vector<Dose> all_doses(const DoseGrid& grid) {
  std::vector<Dose> out;
  out.reserve(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) out.push_back(grid.dose(i));
  return out;
}

ToxicityScenario::ToxicityScenario(std::string scenario_name, Matrix scenario_rates)
    : name(std::move(scenario_name)), rates(std::move(scenario_rates)) {
  const DoseGrid& g = rates.shape();
  for (double r : rates.data()) {
    require(std::isfinite(r) && r >= 0.0 && r <= 1.0, ErrorCode::invalid_argument,
            "scenario '" + name + "': toxicity rates must lie in [0,1]");
  }
  monotone = true;
  for (int k = 1; k <= g.K; ++k) {
    for (int j = 1; j <= g.J; ++j) {
      const double r = rates({j, k});
      if (j < g.J && rates({j + 1, k}) < r) monotone = false;
      if (k < g.K && rates({j, k + 1}) < r) monotone = false;
    }
  }
}

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::startup: return "startup";
    case Phase::model: return "model";
    case Phase::finished: return "finished";
  }
  return "unknown";
}

Phase phase_from_string(std::string_view s) {
  if (s == "startup") return Phase::startup;
  if (s == "model") return Phase::model;
  if (s == "finished") return Phase::finished;
  fail(ErrorCode::parse_error, "unknown phase '" + std::string(s) + "'");
}

int TrialState::patients_total() const noexcept {
  return std::accumulate(n.data().begin(), n.data().end(), 0);
}

int TrialState::dlts_total() const noexcept {
  return std::accumulate(y.data().begin(), y.data().end(), 0);
}

TrialState record_cohort(const TrialState& state, Dose dose, int patients, int dlts) {
  require(state.phase != Phase::finished, ErrorCode::trial_finished, "trial already finished");
  require(state.grid.contains(dose), ErrorCode::out_of_grid,
          "dose " + to_string(dose) + " outside " + std::to_string(state.grid.J) + "x" +
              std::to_string(state.grid.K) + " grid");
  require(patients >= 1, ErrorCode::invalid_counts, "cohort needs at least one patient");
  require(dlts >= 0 && dlts <= patients, ErrorCode::invalid_counts,
          "dlts must lie in [0, patients]");
  TrialState next = state;
  next.n(dose) += patients;
  next.y(dose) += dlts;
  next.log.push_back({dose, patients, dlts});
  next.current = dose;
  return next;
}

TrialState replay(DoseGrid grid, const std::vector<CohortRecord>& log) {
  TrialState s(grid);
  for (const auto& c : log) s = record_cohort(s, c.dose, c.patients, c.dlts);
  return s;
}

double empirical_rate(const TrialState& state, Dose dose) {
  const int n = state.n.at(dose);
  require(n > 0, ErrorCode::undefined_rate, "no patients at " + to_string(dose));
  return static_cast<double>(state.y(dose)) / n;
}

Decision Decision::assign(Dose d, Phase phase, int cohort_size, std::string reason) {
  Decision out;
  out.action = Action::assign;
  out.dose = d;
  out.phase = phase;
  out.cohort_size = cohort_size;
  out.reason = std::move(reason);
  return out;
}

Decision Decision::terminate(std::string reason) {
  Decision out;
  out.action = Action::terminate;
  out.phase = Phase::finished;
  out.cohort_size = 0;
  out.reason = std::move(reason);
  return out;
}

void StudyConfig::validate() const {
  require(phi > 0.0 && phi < 1.0, ErrorCode::config_error, "phi must lie in (0,1)");
  require(max_n >= 1, ErrorCode::config_error, "max_n must be positive");
  require(cohort_size >= 1, ErrorCode::config_error, "cohort_size must be positive");
  require(cohort_size == 1 || max_n % cohort_size == 0, ErrorCode::config_error,
          "max_n must be a multiple of cohort_size");
  require(!early_stop_n || *early_stop_n >= cohort_size, ErrorCode::config_error,
          "early_stop_n must be at least cohort_size");
  require(reps >= 1, ErrorCode::config_error, "reps must be positive");
}

std::vector<Dose> true_mtd_set(const ToxicityScenario& scenario, double phi, double tol) {
  std::vector<Dose> out;
  for (Dose d : all_doses(scenario.grid())) {
    if (std::abs(scenario.rates(d) - phi) <= tol) out.push_back(d);
  }
  return out;
}

std::vector<Dose> over_toxic_set(const ToxicityScenario& scenario, double phi, double margin) {
  std::vector<Dose> out;
  for (Dose d : all_doses(scenario.grid())) {
    if (scenario.rates(d) > phi + margin) out.push_back(d);
  }
  return out;
}

}  // namespace combo
