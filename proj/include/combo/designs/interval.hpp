#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "combo/design.hpp"

namespace combo {

struct BoinBoundaries {
  double phi = 0.3;
  double phi1 = 0.18;
  double phi2 = 0.42;
  double lambda_e = 0.0;
  double lambda_d = 1.0;
};

BoinBoundaries boin_boundaries(double phi, double phi1, double phi2);

struct KeyboardKeys {
  double eps1 = 0.05;
  double eps2 = 0.05;
  std::vector<std::pair<double, double>> keys;  // ascending, tiles [0,1]
  std::size_t target_index = 0;
};

KeyboardKeys keyboard_keys(double phi, double eps1, double eps2);

/// Key with the largest posterior mass; ties go to the key nearer the
/// target, then to the lower key.
std::size_t strongest_key(const KeyboardKeys& keys, BetaParams posterior);

enum class Direction { escalate, stay, deescalate };

std::string_view to_string(Direction d) noexcept;

Direction boin_direction(int y, int n, const BoinBoundaries& b);
Direction keyboard_direction(int y, int n, const KeyboardKeys& keys, BetaParams prior);

/// Model-phase decisions at `current`. With a cap, admissible candidates
/// already holding cap patients are skipped.
Decision boin_decide(const TrialState& state, Dose current, const BoinBoundaries& b,
                     BetaParams prior, std::optional<int> cap = std::nullopt);
Decision keyboard_decide(const TrialState& state, Dose current, const KeyboardKeys& keys,
                         BetaParams prior, std::optional<int> cap = std::nullopt);

/// Isotonic estimates over tried doses (NaN elsewhere).
Matrix isotonic_estimates(const TrialState& state, BetaParams prior);

MtdResult select_mtd_isotonic(const TrialState& state, double phi, BetaParams prior);

struct BoundaryRow {
  int n = 0;
  std::optional<int> escalate_max_y;   // escalate iff y <= this
  std::optional<int> deescalate_min_y; // de-escalate iff y >= this
};

using DirectionRule = std::function<Direction(int y, int n)>;

std::vector<BoundaryRow> boundary_table(const DirectionRule& rule, int max_n);
std::string boundary_table_csv(const std::vector<BoundaryRow>& rows);

class BoinDesign final : public Design {
 public:
  BoinDesign(double phi, double phi1, double phi2, BetaParams prior = {});

  std::string_view id() const noexcept override { return "cboin"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  bool supports_early_stop() const noexcept override { return true; }
  nlohmann::json params() const override;

  const BoinBoundaries& boundaries() const noexcept { return b_; }

 private:
  BoinBoundaries b_;
  BetaParams prior_;
};

class KeyboardDesign final : public Design {
 public:
  KeyboardDesign(double phi, double eps1, double eps2, BetaParams prior = {});

  std::string_view id() const noexcept override { return "ckeyboard"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  bool supports_early_stop() const noexcept override { return true; }
  nlohmann::json params() const override;

  const KeyboardKeys& keys() const noexcept { return keys_; }

 private:
  double phi_;
  KeyboardKeys keys_;
  BetaParams prior_;
};

}  // namespace combo
