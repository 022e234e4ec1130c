#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "combo/core.hpp"
#include "combo/numerics.hpp"

namespace combo {

/// Common contract every dose-finding design implements. Designs are
/// immutable after construction; every call is a pure function of its
/// arguments, so one instance may serve many threads.
class Design {
 public:
  virtual ~Design() = default;

  virtual std::string_view id() const noexcept = 0;

  /// Next action given the full history, start-up included.
  virtual Decision next(const TrialState& state, const StudyConfig& cfg,
                        std::uint64_t seed) const = 0;

  virtual MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                               std::uint64_t seed) const = 0;

  /// Current toxicity estimate per dose; NaN where the design has none.
  virtual Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                           std::uint64_t seed) const = 0;

  /// Whether the per-dose enrollment cap applies to this design.
  virtual bool supports_early_stop() const noexcept { return false; }

  /// Effective parameters, echoed into logs and the conduct API.
  virtual nlohmann::json params() const = 0;
};

using DesignPtr = std::shared_ptr<const Design>;

/// Monotherapy toxicity profile of the two agents.
struct MonoProfile {
  std::vector<double> p;  // agent A
  std::vector<double> q;  // agent B

  void validate(const DoseGrid& grid) const;
};

/// Table settings used by the study: main and alternative profiles.
MonoProfile main_profile();
MonoProfile alternative_profile();

// ---------------------------------------------------------------------------
// Helpers shared by several designs

/// Admissible neighbours: the doses reachable by the listed moves that lie
/// inside the grid.
std::vector<Dose> neighbours(const DoseGrid& grid, Dose from, std::initializer_list<Dose> moves);

/// Current dose plus its eight neighbours (diagonals included).
std::vector<Dose> king_moves(const DoseGrid& grid, Dose from);

/// Candidate whose estimate is nearest to phi; ties go to the lower dose
/// (smaller j + k, then smaller j).
std::optional<Dose> closest_to(const std::vector<Dose>& candidates, const Matrix& est, double phi);

/// Posterior summary feeding the escalation rule shared by the copula,
/// logistic and bagged designs.
struct ToxicitySummary {
  Matrix mean;
  Matrix below;  // P(pi < phi)
  Matrix above;  // P(pi > phi)
};

/// Escalate when P(pi_cur < phi) > c_e to the candidate closest to phi
/// among those with higher estimated toxicity, de-escalate symmetrically
/// when P(pi_cur > phi) > c_d (terminating at (1,1)), else stay.
Decision cutoff_rule(const ToxicitySummary& s, Dose current, double c_e, double c_d, double phi,
                     int cohort_size);

/// Diagonal start-up: (1,1), (2,2), ... then the remaining agent to (J,K).
std::vector<Dose> diagonal_path(const DoseGrid& grid);

/// Start-up along a fixed path until the first DLT. Returns nullopt once the
/// start-up is over.
std::optional<Decision> path_startup(const TrialState& state, const std::vector<Dose>& path,
                                     int cohort_size);

/// True when every tried dose has y == n or every one has y == 0.
bool homogeneous_outcomes(const TrialState& state);

/// Prior guesses of pi_j1 and pi_1k used to derive effective doses.
struct EdgeGuess {
  std::vector<double> row;  // pi_j1, j = 1..J
  std::vector<double> col;  // pi_1k, k = 1..K
};

/// Resolves a guess spec: "truth" (from the scenario), "shifted" (truth one
/// level off), "profile" (monotherapy profile) or explicit {row, col}.
EdgeGuess resolve_guess(const nlohmann::json& spec, const DoseGrid& grid,
                        const ToxicityScenario* truth, const MonoProfile& profile);

}  // namespace combo
