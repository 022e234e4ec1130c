#pragma once

#include <functional>
#include <span>
#include <vector>

#include "combo/core.hpp"

namespace combo {

/// Grid posterior over a fixed node set for a dose-toxicity surface whose
/// per-cell probabilities are tabulated once. Posterior weights for any
/// trial state then reduce to the vectorized kernels in combo::kernels.
class TabulatedSurface {
 public:
  /// fill(node, out) writes log(1 - pi_cell) for every cell of the grid.
  using Filler = std::function<void(std::size_t node, std::span<double> log1m_pi)>;

  TabulatedSurface(DoseGrid grid, std::size_t nodes, const Filler& fill,
                   std::vector<double> log_prior = {});

  const DoseGrid& grid() const noexcept { return grid_; }
  std::size_t nodes() const noexcept { return nodes_; }

  /// Normalized posterior weights given the counts in state.
  std::vector<double> weights(const TrialState& state) const;

  double mean(std::span<const double> w, Dose d) const;
  /// Posterior probability that pi_d lies strictly between lo and hi.
  double mass(std::span<const double> w, Dose d, double lo, double hi) const;

  struct Split {
    double mean, below, above;  // strict inequalities against cut
  };
  Split split(std::span<const double> w, Dose d, double cut) const;

  std::span<const double> probabilities(Dose d) const;

 private:
  std::size_t offset(Dose d) const {
    return static_cast<std::size_t>(grid_.index(d)) * nodes_;
  }

  DoseGrid grid_;
  std::size_t nodes_;
  std::vector<double> prob_;
  std::vector<double> log_p_;
  std::vector<double> log_q_;
  std::vector<double> log_prior_;
};

}  // namespace combo
