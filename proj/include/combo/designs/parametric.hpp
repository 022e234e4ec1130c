#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "combo/design.hpp"
#include "combo/surface.hpp"

namespace combo {

// ---------------------------------------------------------------------------
// Dose-toxicity surfaces

struct I2dParams {
  double alpha = 1.0;  // > 0
  double beta = 1.0;   // > 0
  double gamma = 0.0;  // <= 0, interaction
  bool interaction = false;
};

/// 1 - a^alpha (1 - b)^(beta + gamma log a), with a = 1 - p the agent-A
/// constant; the interaction term is dropped unless params.interaction is set.
double i2d_surface(const I2dParams& params, double a, double b);

struct CopulaParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;  // > 0
};

/// Clayton-type combination of the two monotherapy curves p^alpha, q^beta.
double copula_surface(const CopulaParams& params, double p, double q);
/// log(1 - pi) of the copula surface, stable for small gamma.
double copula_log1m(const CopulaParams& params, double p, double q);

/// beta0 + beta1 a + beta2 b + beta3 a b
double dfcomb_logit(const std::array<double, 4>& beta, double a, double b);

struct HierarchyEffective {
  double mu0 = 0.0;
  double omega0 = 0.0;
  std::vector<double> a;  // agent A, a[0] = 0
  std::vector<double> b;  // agent B, b[0] = 0
};

/// Prior means and effective doses from clinicians' guesses of pi_j1, pi_1k.
HierarchyEffective hierarchy_effective(const EdgeGuess& guess, double sigma2, double k_const);

struct GcrmEffective {
  std::vector<double> a;      // agent A effective doses
  std::vector<double> delta;  // prior means of alpha_k - alpha_{k-1}, k >= 2
};

GcrmEffective gcrm_effective(const EdgeGuess& guess, double mu_alpha, double mu_beta);

// ---------------------------------------------------------------------------
// Start-up rules

std::vector<Dose> i2d_startup_path(const DoseGrid& grid);

/// Number of leading log entries that belong to a start-up walking `path`
/// and stopping at the first DLT.
std::size_t startup_length(const TrialState& state, const std::vector<Dose>& path);

/// Two-pass start-up: up agent B at A = 1, then up agent A at B = 1; each
/// pass stops at its first DLT or its last dose.
std::optional<Decision> copula_startup(const TrialState& state, int cohort_size);

// ---------------------------------------------------------------------------
// Designs

class I2dDesign final : public Design {
 public:
  I2dDesign(const DoseGrid& grid, const MonoProfile& profile, int resolution = 61,
            double upper = 5.0);

  std::string_view id() const noexcept override { return "i2d"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  nlohmann::json params() const override;

  const std::vector<double>& constants_a() const noexcept { return a_; }
  const std::vector<double>& constants_b() const noexcept { return b_; }

 private:
  DoseGrid grid_;
  MonoProfile profile_;
  std::vector<double> a_, b_;
  int resolution_;
  double upper_;
  std::shared_ptr<const TabulatedSurface> surface_;
};

struct CopulaConfig {
  double c_e = 0.8;
  double c_d = 0.45;
  int resolution = 61;
  double upper = 3.0;
  bool mtd_tried_only = true;
};

class CopulaDesign final : public Design {
 public:
  CopulaDesign(const DoseGrid& grid, const MonoProfile& profile, const CopulaConfig& cfg = {});

  std::string_view id() const noexcept override { return "copula"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  nlohmann::json params() const override;

  ToxicitySummary summary(const TrialState& state, double phi) const;

 private:
  DoseGrid grid_;
  MonoProfile profile_;
  CopulaConfig cfg_;
  std::shared_ptr<const TabulatedSurface> surface_;
};

/// Posterior draws of the per-dose toxicity from a sampled design.
struct SampledSurface {
  DoseGrid grid;
  std::vector<double> draws;  // kept draws x cells, row-major by draw
  double acceptance = 0.0;

  std::size_t size() const noexcept { return draws.size() / std::size_t(grid.size()); }
  double at(std::size_t draw, Dose d) const {
    return draws[draw * std::size_t(grid.size()) + std::size_t(grid.index(d))];
  }
  Matrix mean() const;
  /// P(pi_d in (lo, hi)) estimated from the draws, inclusive when closed.
  Matrix mass(double lo, double hi, bool closed = false) const;
};

struct HierarchyConfig {
  double sigma2 = 10.0;
  double k_const = 0.0;  // 0: number of agent-B levels
  SamplerSettings sampler{};
  double step = 0.6;        // intercepts
  double slope_step = 2.4;  // slopes, barely informed by data
  double ci_level = 0.95;
};

class HierarchyDesign final : public Design {
 public:
  HierarchyDesign(const DoseGrid& grid, const EdgeGuess& guess, const HierarchyConfig& cfg = {});

  std::string_view id() const noexcept override { return "hierarchy"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  nlohmann::json params() const override;

  /// Posterior means of pi_jk, E[(alpha + y) / (alpha + beta + n)].
  Matrix posterior_means(const TrialState& state, std::uint64_t seed,
                         double* acceptance = nullptr) const;
  /// Beta shapes at one point of the hyperparameter space.
  std::pair<double, double> shapes(std::span<const double> theta, Dose d) const;

  const HierarchyEffective& effective() const noexcept { return eff_; }
  double prior_mean(int i) const;

 private:
  DoseGrid grid_;
  EdgeGuess guess_;
  HierarchyConfig cfg_;
  HierarchyEffective eff_;
};

struct DfcombConfig {
  double c_e = 0.85;
  double c_d = 0.45;
  double delta = 0.12;
  SamplerSettings sampler{};
  std::array<double, 4> step{0.5, 0.5, 0.5, 0.5};
  bool interaction = true;  // false fixes beta3 = 0
};

class DfcombDesign final : public Design {
 public:
  DfcombDesign(const DoseGrid& grid, const MonoProfile& profile, const DfcombConfig& cfg = {});

  std::string_view id() const noexcept override { return "dfcomb"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  bool supports_early_stop() const noexcept override { return true; }
  nlohmann::json params() const override;

  SampledSurface posterior(const TrialState& state, std::uint64_t seed) const;
  /// Log prior plus log likelihood; -inf outside the monotone region.
  double log_posterior(std::span<const double> beta, const TrialState& state) const;

  const std::vector<double>& effective_a() const noexcept { return a_; }
  const std::vector<double>& effective_b() const noexcept { return b_; }

 private:
  DoseGrid grid_;
  MonoProfile profile_;
  DfcombConfig cfg_;
  std::vector<double> a_, b_;
};

struct GcrmConfig {
  double mu_alpha = -8.0;
  double mu_beta = 1.0;
  double sigma2_alpha = 1.0;
  double sigma2_beta = 1.0;
  double stop_threshold = 0.95;
  SamplerSettings sampler{};
  double step = 0.5;
};

class GcrmDesign final : public Design {
 public:
  GcrmDesign(const DoseGrid& grid, const EdgeGuess& guess, const GcrmConfig& cfg = {});

  std::string_view id() const noexcept override { return "gcrm"; }
  Decision next(const TrialState& state, const StudyConfig& cfg, std::uint64_t seed) const override;
  MtdResult select_mtd(const TrialState& state, const StudyConfig& cfg,
                       std::uint64_t seed) const override;
  Matrix estimates(const TrialState& state, const StudyConfig& cfg,
                   std::uint64_t seed) const override;
  nlohmann::json params() const override;

  struct Posterior {
    Matrix mean;              // posterior mean of pi_jk
    double p11_above = 0.0;   // P(pi_11 > phi)
    double acceptance = 0.0;
  };
  Posterior posterior(const TrialState& state, double phi, std::uint64_t seed) const;
  /// Parameter vector: alpha_1, Delta_2..Delta_K, beta.
  double log_posterior(std::span<const double> x, const TrialState& state) const;

  const GcrmEffective& effective() const noexcept { return eff_; }

 private:
  DoseGrid grid_;
  EdgeGuess guess_;
  GcrmConfig cfg_;
  GcrmEffective eff_;
};

}  // namespace combo
