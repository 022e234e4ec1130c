#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "combo/error.hpp"

namespace combo {

/// A dose combination; j indexes agent A, k indexes agent B, both 1-based.
struct Dose {
  int j = 1;
  int k = 1;

  friend auto operator<=>(const Dose&, const Dose&) = default;
};

std::string to_string(Dose d);

/// True when a is at or below b on both agents (the known part of the
/// toxicity order).
constexpr bool precedes_or_equal(Dose a, Dose b) noexcept {
  return a.j <= b.j && a.k <= b.k;
}

struct DoseGrid {
  int J = 1;
  int K = 1;

  DoseGrid() = default;
  DoseGrid(int j_levels, int k_levels);

  int size() const noexcept { return J * K; }
  bool contains(Dose d) const noexcept {
    return d.j >= 1 && d.j <= J && d.k >= 1 && d.k <= K;
  }
  /// Flat index, agent-A fastest (row k holds agent-B level k).
  int index(Dose d) const noexcept { return (d.k - 1) * J + (d.j - 1); }
  Dose dose(int index) const noexcept { return {index % J + 1, index / J + 1}; }

  friend bool operator==(const DoseGrid&, const DoseGrid&) = default;
};

/// Dense J x K matrix addressed by Dose.
template <class T>
class Grid {
 public:
  Grid() = default;
  explicit Grid(DoseGrid shape, T fill = T{})
      : shape_(shape), data_(static_cast<std::size_t>(shape.size()), fill) {}

  const DoseGrid& shape() const noexcept { return shape_; }

  T& operator()(Dose d) { return data_[static_cast<std::size_t>(shape_.index(d))]; }
  const T& operator()(Dose d) const {
    return data_[static_cast<std::size_t>(shape_.index(d))];
  }
  T& at(Dose d) {
    require(shape_.contains(d), ErrorCode::out_of_grid, "dose " + to_string(d) + " outside grid");
    return (*this)(d);
  }
  const T& at(Dose d) const {
    require(shape_.contains(d), ErrorCode::out_of_grid, "dose " + to_string(d) + " outside grid");
    return (*this)(d);
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  DoseGrid shape_;
  std::vector<T> data_;
};

using Matrix = Grid<double>;
using Counts = Grid<int>;

/// Every dose of the grid in flat-index order.
std::vector<Dose> all_doses(const DoseGrid& grid);

struct ToxicityScenario {
  std::string name;
  Matrix rates;
  bool monotone = true;  // rates non-decreasing along both agents

  ToxicityScenario() = default;
  ToxicityScenario(std::string name, Matrix rates);

  const DoseGrid& grid() const noexcept { return rates.shape(); }
  double rate(Dose d) const { return rates.at(d); }
};

enum class Phase { startup, model, finished };

std::string_view to_string(Phase p) noexcept;
Phase phase_from_string(std::string_view s);

struct CohortRecord {
  Dose dose;
  int patients = 0;
  int dlts = 0;

  friend bool operator==(const CohortRecord&, const CohortRecord&) = default;
};

/// Running tally of a trial. The cohort log is authoritative; n and y are
/// caches kept in sync by record_cohort.
struct TrialState {
  DoseGrid grid;
  Counts n;
  Counts y;
  std::vector<CohortRecord> log;
  Phase phase = Phase::startup;
  std::optional<Dose> current;

  TrialState() = default;
  explicit TrialState(DoseGrid g) : grid(g), n(g, 0), y(g, 0) {}

  int patients_total() const noexcept;
  int dlts_total() const noexcept;
  bool tried(Dose d) const { return n(d) > 0; }
};

TrialState record_cohort(const TrialState& state, Dose dose, int patients, int dlts);

/// Rebuilds n and y from a cohort log.
TrialState replay(DoseGrid grid, const std::vector<CohortRecord>& log);

double empirical_rate(const TrialState& state, Dose dose);

enum class Action { assign, terminate };

struct Decision {
  Action action = Action::assign;
  Dose dose;
  std::string reason;
  Phase phase = Phase::startup;
  int cohort_size = 3;

  static Decision assign(Dose d, Phase phase, int cohort_size, std::string reason);
  static Decision terminate(std::string reason);

  bool terminates() const noexcept { return action == Action::terminate; }
};

struct StudyConfig {
  double phi = 0.3;
  int max_n = 60;
  int cohort_size = 3;
  std::optional<int> early_stop_n;
  int reps = 2000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct MtdResult {
  std::optional<Dose> selected;
  std::optional<double> estimate;
};

std::vector<Dose> true_mtd_set(const ToxicityScenario& scenario, double phi, double tol = 1e-6);

/// Doses whose true rate exceeds phi + margin.
std::vector<Dose> over_toxic_set(const ToxicityScenario& scenario, double phi,
                                 double margin = 1e-9);

}  // namespace combo
