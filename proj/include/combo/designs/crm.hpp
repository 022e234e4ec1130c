#pragma once

#include <map>
#include <string>
#include <vector>

#include "combo/design.hpp"

namespace combo {

/// A linear order of the grid consistent with the matrix partial order.
struct Ordering {
  std::string label;
  std::vector<Dose> doses;  // doses[t] is the t-th least toxic

  /// rank[index(d)] = t
  std::vector<int> ranks(const DoseGrid& grid) const;
};

/// across-rows, up-columns, up-diagonals, down-diagonals,
/// alternating down-up and up-down diagonals.
std::vector<Ordering> enumerate_orderings(const DoseGrid& grid);

bool respects_partial_order(const Ordering& o, const DoseGrid& grid);

/// Power working model psi_m(t, a) = skeleton[t]^exp(a) under each ordering.
struct PocrmModel {
  DoseGrid grid;
  std::vector<Ordering> orderings;
  std::vector<double> skeleton;       // length T, indexed by rank
  std::vector<double> prior_weights;  // p(m)

  static PocrmModel make(const DoseGrid& grid, const SkeletonSpec& spec);
  /// Toxicity of dose d under ordering m at parameter a.
  double psi(std::size_t m, Dose d, double a) const;

  void validate() const;
};

struct PocrmFit {
  std::vector<double> a_hat;
  std::vector<double> weights;  // p(m | data)
  std::vector<double> loglik;   // log L_m(a_hat_m)
};

/// Log of the working-model likelihood under ordering m.
double pocrm_loglik(const PocrmModel& model, std::size_t m, const TrialState& data, double a);

/// MLE per ordering by golden-section search on a in [-5, 5] and the
/// ordering weights. Throws mle_undefined on homogeneous data.
PocrmFit pocrm_fit(const PocrmModel& model, const TrialState& data);

struct PocrmChoice {
  std::size_t ordering;
  Dose dose;
};

/// Draws an ordering by its weight and picks the dose whose estimate is
/// nearest phi under that ordering.
PocrmChoice pocrm_next_dose(const PocrmFit& fit, const PocrmModel& model, double phi, Rng& rng);

/// Zoned start-up on anti-diagonals. nullopt once start-up has ended.
std::optional<Decision> pocrm_startup(const TrialState& state, int cohort_size, Rng& rng);

class PocrmDesign final : public Design {
 public:
  PocrmDesign(const DoseGrid& grid, const SkeletonSpec& spec);

  std::string_view id() const noexcept override { return "pocrm"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  bool supports_early_stop() const noexcept override { return true; }
  nlohmann::json params() const override;

  const PocrmModel& model() const noexcept { return model_; }

 private:
  SkeletonSpec spec_;
  PocrmModel model_;
};

struct BcrmConfig {
  BetaParams prior{1, 1};
  double jitter_eps = 1e-4;
  int B = 500;
  double eps_neighborhood = 0.12;
  double c_e = 0.85;
  double c_d = 0.45;
  double a_sd = 1.0;  // normal prior on the CRM parameter
  int a_nodes = 121;

  void validate() const;
};

/// Per-patient outcome records expanded from the cohort log.
struct PatientRecord {
  Dose dose;
  bool dlt;
};
std::vector<PatientRecord> patient_records(const TrialState& state);

/// Linear order implied by an isotonic estimate matrix: ties broken by a
/// rank jitter r * eps, eps shrunk below the smallest strict gap.
Ordering ordering_from_estimates(const Matrix& iso, double jitter_eps);

/// Bagged CRM posterior: a mixture over the distinct bootstrap orderings,
/// each weighted by its bootstrap frequency.
class BaggedPosterior {
 public:
  const std::map<std::vector<int>, int>& orderings() const noexcept { return counts_; }
  int draws() const noexcept { return draws_; }
  const ToxicitySummary& summary() const noexcept { return summary_; }
  /// Posterior mass of (lo, hi) per dose.
  const Matrix& window() const noexcept { return window_; }

 private:
  friend class BcrmDesign;
  std::map<std::vector<int>, int> counts_;  // rank vector -> frequency
  int draws_ = 0;
  ToxicitySummary summary_;
  Matrix window_;
};

class BcrmDesign final : public Design {
 public:
  BcrmDesign(const DoseGrid& grid, const SkeletonSpec& spec, const BcrmConfig& cfg);

  std::string_view id() const noexcept override { return "bcrm"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  nlohmann::json params() const override;

  /// Bootstrap orderings of the data mixed over the CRM posterior of each.
  BaggedPosterior bagged(const TrialState& state, double phi, std::uint64_t seed) const;
  /// Same mixture with explicit ordering weights (rank vector -> weight).
  BaggedPosterior mixture(const TrialState& state, double phi,
                          const std::map<std::vector<int>, int>& counts) const;

 private:
  DoseGrid grid_;
  SkeletonSpec spec_;
  BcrmConfig cfg_;
  std::vector<double> skeleton_;
  std::vector<double> a_nodes_;
  std::vector<double> log_prior_;
  // per (rank, node): pi, log pi, log(1 - pi)
  std::vector<double> p_, lp_, lq_;
};

}  // namespace combo
