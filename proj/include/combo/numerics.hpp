#pragma once

#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "combo/core.hpp"
#include "combo/rng.hpp"

namespace combo {

inline double logit(double p) { return std::log(p / (1.0 - p)); }
inline double expit(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}
/// log(1 + exp(x)) without overflow.
inline double log1pexp(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// ---------------------------------------------------------------------------
// Beta posteriors

struct BetaParams {
  double a = 1.0;
  double b = 1.0;

  BetaParams() = default;
  BetaParams(double shape_a, double shape_b);

  double mean() const noexcept { return a / (a + b); }
};

BetaParams beta_posterior(BetaParams prior, int y, int n);

double beta_cdf(BetaParams p, double x);

/// P(lo < X < hi) for X ~ Beta(a, b).
double prob_in_interval(BetaParams p, double lo, double hi);

/// Beta-binomial probability mass, binomial coefficient included.
double beta_binomial_pmf(int y, int n, double a, double b);

/// log of the beta-binomial mass without the binomial coefficient (the
/// part that depends on a and b).
double beta_binomial_kernel(int y, int n, double a, double b);

/// Clopper-Pearson interval.
std::pair<double, double> exact_binomial_ci(int y, int n, double level = 0.95);

// ---------------------------------------------------------------------------
// Isotonic regression

/// Weighted 1-D pool-adjacent-violators, non-decreasing fit.
std::vector<double> pava(std::span<const double> values, std::span<const double> weights);

/// Weighted least-squares projection onto matrices non-decreasing along
/// both agents. Weights must be positive.
Matrix pava_2d(const Matrix& values, const Matrix& weights);

/// Weighted isotonic fit restricted to the cells where mask is true, under
/// the matrix partial order induced on those cells. Other cells are
/// returned as NaN.
Matrix isotonic_subset(const Matrix& values, const Matrix& weights, const Grid<char>& mask);

// ---------------------------------------------------------------------------
// Low-dimensional quadrature

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct GridPosterior {
  int dim = 0;
  std::vector<double> nodes;    // node-major, dim entries per node
  std::vector<double> weights;  // normalized

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  /// Posterior expectation of f(node).
  double expect(const std::function<double(std::span<const double>)>& f) const;
};

using ParamFunction = std::function<double(std::span<const double>)>;

/// Midpoint-rule posterior on a box; prior_density returns a density, not
/// a log density. Throws no_posterior_mass when every node has zero mass.
GridPosterior grid_posterior(const ParamFunction& loglik, const ParamFunction& prior_density,
                             const Box& bounds, std::span<const int> resolution);

/// Midpoint nodes of one axis.
std::vector<double> midpoints(double lo, double hi, int count);

// ---------------------------------------------------------------------------
// Random-walk Metropolis

struct ChainResult {
  int dim = 0;
  std::vector<double> samples;  // kept draws, row-major
  double acceptance = 0.0;

  std::size_t kept() const noexcept { return dim ? samples.size() / static_cast<std::size_t>(dim) : 0; }
  std::span<const double> row(std::size_t i) const {
    return {samples.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  std::vector<double> mean() const;
};

struct SamplerSettings {
  int steps = 10000;  // total, including burn-in
  int burnin = 2000;
};

/// Gaussian random-walk Metropolis. logpost may return -inf to reject a
/// proposal (constraint violation). Deterministic given seed.
template <class LogPost>
ChainResult rw_sampler(LogPost&& logpost, std::span<const double> init, int steps, int burnin,
                       std::span<const double> step_scales, std::uint64_t seed) {
  const auto dim = init.size();
  require(dim >= 1 && step_scales.size() == dim, ErrorCode::invalid_argument,
          "sampler: init and step_scales must have equal, positive length");
  require(steps > burnin && burnin >= 0, ErrorCode::invalid_argument,
          "sampler: steps must exceed burnin");
  std::vector<double> x(init.begin(), init.end());
  double lp = logpost(std::span<const double>(x));
  require(std::isfinite(lp), ErrorCode::sampler_diverged,
          "sampler: log posterior not finite at initial point");

  Rng rng(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);  // ziggurat
  ChainResult out;
  out.dim = static_cast<int>(dim);
  out.samples.reserve(static_cast<std::size_t>(steps - burnin) * dim);
  std::vector<double> proposal(dim);
  long accepted = 0;
  for (int step = 0; step < steps; ++step) {
    for (std::size_t d = 0; d < dim; ++d) proposal[d] = x[d] + step_scales[d] * normal(rng);
    const double lp_new = logpost(std::span<const double>(proposal));
    if (std::isfinite(lp_new) && std::log(uniform01(rng)) < lp_new - lp) {
      x.swap(proposal);
      lp = lp_new;
      ++accepted;
    }
    if (step >= burnin) out.samples.insert(out.samples.end(), x.begin(), x.end());
  }
  require(std::isfinite(lp), ErrorCode::sampler_diverged, "sampler: chain left the support");
  out.acceptance = static_cast<double>(accepted) / steps;
  return out;
}

// ---------------------------------------------------------------------------
// CRM skeletons

struct SkeletonSpec {
  double half_width = 0.05;
  int mtd_position = 11;  // 1-based
  int n_levels = 15;
  double phi = 0.3;

  void validate() const;
};

/// Indifference-interval skeleton for the power (empiric) working model.
std::vector<double> crm_skeleton(const SkeletonSpec& spec);

}  // namespace combo
