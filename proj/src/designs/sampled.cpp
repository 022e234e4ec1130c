#include <cmath>
#include <limits>

#include "combo/designs/parametric.hpp"

namespace combo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::optional<Dose> closest_among_tried(const TrialState& state, const Matrix& est, double phi) {
  std::vector<Dose> c;
  for (Dose d : all_doses(state.grid)) {
    if (state.tried(d)) c.push_back(d);
  }
  return closest_to(c, est, phi);
}

struct Cell {
  int j, k, y, n;
};

std::vector<Cell> tried_cells(const TrialState& s) {
  std::vector<Cell> out;
  for (Dose d : all_doses(s.grid)) {
    if (s.tried(d)) out.push_back({d.j - 1, d.k - 1, s.y(d), s.n(d)});
  }
  return out;
}

}  // namespace

Matrix SampledSurface::mean() const {
  Matrix m(grid, 0.0);
  const std::size_t T = std::size_t(grid.size()), S = size();
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t c = 0; c < T; ++c) m.data()[c] += draws[s * T + c];
  for (double& v : m.data()) v /= double(S);
  return m;
}

Matrix SampledSurface::mass(double lo, double hi, bool closed) const {
  Matrix m(grid, 0.0);
  const std::size_t T = std::size_t(grid.size()), S = size();
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t c = 0; c < T; ++c) {
      const double v = draws[s * T + c];
      if (closed ? (v >= lo && v <= hi) : (v > lo && v < hi)) m.data()[c] += 1.0;
    }
  }
  for (double& v : m.data()) v /= double(S);
  return m;
}

// ---------------------------------------------------------------------------
// Hierarchy

HierarchyDesign::HierarchyDesign(const DoseGrid& grid, const EdgeGuess& guess,
                                 const HierarchyConfig& cfg)
    : grid_(grid), guess_(guess), cfg_(cfg) {
  if (cfg_.k_const <= 0) cfg_.k_const = grid.K;
  require(cfg_.step > 0 && cfg_.ci_level > 0 && cfg_.ci_level < 1, ErrorCode::config_error,
          "invalid hierarchy settings");
  eff_ = hierarchy_effective(guess_, cfg_.sigma2, cfg_.k_const);
}

double HierarchyDesign::prior_mean(int i) const {
  const double slope = 2.0 * std::sqrt(cfg_.sigma2);
  switch (i) {
    case 0: return eff_.mu0;
    case 3: return eff_.omega0;
    default: return slope;
  }
}

std::pair<double, double> HierarchyDesign::shapes(std::span<const double> t, Dose d) const {
  const double a = eff_.a[std::size_t(d.j - 1)], b = eff_.b[std::size_t(d.k - 1)];
  return {std::exp(t[0] + t[1] * a + t[2] * b), std::exp(t[3] - t[4] * a - t[5] * b)};
}

Matrix HierarchyDesign::posterior_means(const TrialState& state, std::uint64_t seed,
                                        double* acceptance) const {
  const auto cells = tried_cells(state);
  std::array<double, 6> mu{};
  for (int i = 0; i < 6; ++i) mu[std::size_t(i)] = prior_mean(i);
  const double inv2s = 0.5 / cfg_.sigma2;
  auto logpost = [&](std::span<const double> t) {
    double lp = 0.0;
    for (std::size_t i = 0; i < 6; ++i) lp -= (t[i] - mu[i]) * (t[i] - mu[i]) * inv2s;
    for (const auto& c : cells) {
      const double a = eff_.a[std::size_t(c.j)], b = eff_.b[std::size_t(c.k)];
      const double al = std::exp(t[0] + t[1] * a + t[2] * b);
      const double be = std::exp(t[3] - t[4] * a - t[5] * b);
      if (!(al > 0 && be > 0 && std::isfinite(al) && std::isfinite(be))) return kNegInf;
      lp += beta_binomial_kernel(c.y, c.n, al, be);
    }
    return lp;
  };
  const std::array<double, 6> scale{cfg_.step, cfg_.slope_step, cfg_.slope_step,
                                    cfg_.step, cfg_.slope_step, cfg_.slope_step};
  const auto chain = rw_sampler(logpost, mu, cfg_.sampler.steps, cfg_.sampler.burnin, scale, seed);
  if (acceptance) *acceptance = chain.acceptance;
  Matrix m(grid_, 0.0);
  const auto doses = all_doses(grid_);
  for (std::size_t s = 0; s < chain.kept(); ++s) {
    const auto t = chain.row(s);
    for (Dose d : doses) {
      const auto [al, be] = shapes(t, d);
      m(d) += (al + state.y(d)) / (al + be + state.n(d));
    }
  }
  for (double& v : m.data()) v /= double(chain.kept());
  return m;
}

Decision HierarchyDesign::next(const TrialState& state, const StudyConfig& cfg,
                               std::uint64_t seed) const {
  if (state.log.empty()) return Decision::assign({1, 1}, Phase::model, cfg.cohort_size, "start");
  const auto [lo, hi] = exact_binomial_ci(state.dlts_total(), state.patients_total(), cfg_.ci_level);
  if (lo > cfg.phi) return Decision::terminate("safety-stop");
  const Matrix est = posterior_means(state, seed);
  return Decision::assign(*closest_to(king_moves(grid_, *state.current), est, cfg.phi),
                          Phase::model, cfg.cohort_size, "closest");
}

MtdResult HierarchyDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                      std::uint64_t seed) const {
  if (state.patients_total() == 0) return {};
  const Matrix est = posterior_means(state, seed);
  const auto d = closest_among_tried(state, est, cfg.phi);
  return {d, est(*d)};
}

Matrix HierarchyDesign::estimates(const TrialState& state, const StudyConfig&,
                                  std::uint64_t seed) const {
  return posterior_means(state, seed);
}

nlohmann::json HierarchyDesign::params() const {
  return {{"sigma2", cfg_.sigma2},
          {"k_const", cfg_.k_const},
          {"mu", {prior_mean(0), prior_mean(1), prior_mean(2)}},
          {"omega", {prior_mean(3), prior_mean(4), prior_mean(5)}},
          {"eff_a", eff_.a},
          {"eff_b", eff_.b},
          {"guess", {{"row", guess_.row}, {"col", guess_.col}}},
          {"ci_level", cfg_.ci_level},
          {"sampler", {{"steps", cfg_.sampler.steps}, {"burnin", cfg_.sampler.burnin}}}};
}

// ---------------------------------------------------------------------------
// DFCOMB

DfcombDesign::DfcombDesign(const DoseGrid& grid, const MonoProfile& profile, const DfcombConfig& cfg)
    : grid_(grid), profile_(profile), cfg_(cfg) {
  profile_.validate(grid);
  require(cfg_.c_e > 0 && cfg_.c_e < 1 && cfg_.c_d > 0 && cfg_.c_d < 1 && cfg_.c_e + cfg_.c_d > 1,
          ErrorCode::config_error, "cutoffs need c_e, c_d in (0,1) and c_e + c_d > 1");
  require(cfg_.delta > 0, ErrorCode::config_error, "DFCOMB window half-width must be positive");
  for (double p : profile_.p) a_.push_back(logit(p));
  for (double q : profile_.q) b_.push_back(logit(q));
}

double DfcombDesign::log_posterior(std::span<const double> x, const TrialState& state) const {
  const double b0 = x[0], b1 = x[1], b2 = x[2], b3 = cfg_.interaction ? x[3] : 0.0;
  if (!(b1 > 0 && b2 > 0)) return kNegInf;
  for (double b : b_)
    if (!(b1 + b3 * b > 0)) return kNegInf;
  for (double a : a_)
    if (!(b2 + b3 * a > 0)) return kNegInf;
  double lp = -0.5 * b0 * b0 - 0.5 * b3 * b3 - b1 - b2;
  for (Dose d : all_doses(grid_)) {
    const int n = state.n(d);
    if (n == 0) continue;
    const double eta = dfcomb_logit({b0, b1, b2, b3}, a_[std::size_t(d.j - 1)], b_[std::size_t(d.k - 1)]);
    lp += state.y(d) * eta - n * log1pexp(eta);
  }
  return lp;
}

SampledSurface DfcombDesign::posterior(const TrialState& state, std::uint64_t seed) const {
  const std::size_t dim = cfg_.interaction ? 4 : 3;
  std::vector<double> init{0.0, 1.0, 1.0, 0.0};
  init.resize(dim);
  std::vector<double> scale(cfg_.step.begin(), cfg_.step.begin() + long(dim));
  // cache tried cells for the hot loop
  const auto cells = tried_cells(state);
  std::vector<double> ca, cb;
  for (const auto& c : cells) {
    ca.push_back(a_[std::size_t(c.j)]);
    cb.push_back(b_[std::size_t(c.k)]);
  }
  const double amin = *std::min_element(a_.begin(), a_.end()), amax = *std::max_element(a_.begin(), a_.end());
  const double bmin = *std::min_element(b_.begin(), b_.end()), bmax = *std::max_element(b_.begin(), b_.end());
  auto logpost = [&](std::span<const double> x) {
    const double b0 = x[0], b1 = x[1], b2 = x[2], b3 = dim == 4 ? x[3] : 0.0;
    // linear in the effective dose, so the extremes decide the constraint
    if (!(b1 > 0 && b2 > 0 && b1 + b3 * bmin > 0 && b1 + b3 * bmax > 0 && b2 + b3 * amin > 0 &&
          b2 + b3 * amax > 0)) {
      return kNegInf;
    }
    double lp = -0.5 * b0 * b0 - 0.5 * b3 * b3 - b1 - b2;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double eta = b0 + b1 * ca[i] + b2 * cb[i] + b3 * ca[i] * cb[i];
      lp += cells[i].y * eta - cells[i].n * log1pexp(eta);
    }
    return lp;
  };
  const auto chain = rw_sampler(logpost, init, cfg_.sampler.steps, cfg_.sampler.burnin, scale, seed);
  SampledSurface out;
  out.grid = grid_;
  out.acceptance = chain.acceptance;
  out.draws.reserve(chain.kept() * std::size_t(grid_.size()));
  for (std::size_t s = 0; s < chain.kept(); ++s) {
    const auto x = chain.row(s);
    const std::array<double, 4> b{x[0], x[1], x[2], dim == 4 ? x[3] : 0.0};
    for (int c = 0; c < grid_.size(); ++c) {
      const Dose d = grid_.dose(c);
      out.draws.push_back(expit(dfcomb_logit(b, a_[std::size_t(d.j - 1)], b_[std::size_t(d.k - 1)])));
    }
  }
  return out;
}

Decision DfcombDesign::next(const TrialState& state, const StudyConfig& cfg,
                            std::uint64_t seed) const {
  if (auto d = path_startup(state, diagonal_path(grid_), cfg.cohort_size)) return *d;
  const auto post = posterior(state, seed);
  const ToxicitySummary s{post.mean(), post.mass(-1.0, cfg.phi), post.mass(cfg.phi, 2.0)};
  return cutoff_rule(s, *state.current, cfg_.c_e, cfg_.c_d, cfg.phi, cfg.cohort_size);
}

MtdResult DfcombDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                   std::uint64_t seed) const {
  if (state.patients_total() == 0) return {};
  const auto post = posterior(state, seed);
  const Matrix mean = post.mean();
  const Matrix win = post.mass(cfg.phi - cfg_.delta, cfg.phi + cfg_.delta, true);
  std::optional<Dose> best;
  for (Dose d : all_doses(grid_)) {
    if (!state.tried(d)) continue;
    if (!best || win(d) > win(*best) + 1e-12 ||
        (std::abs(win(d) - win(*best)) <= 1e-12 &&
         std::abs(mean(d) - cfg.phi) < std::abs(mean(*best) - cfg.phi))) {
      best = d;
    }
  }
  return {best, mean(*best)};
}

Matrix DfcombDesign::estimates(const TrialState& state, const StudyConfig&,
                               std::uint64_t seed) const {
  return posterior(state, seed).mean();
}

nlohmann::json DfcombDesign::params() const {
  return {{"eff_a", a_},
          {"eff_b", b_},
          {"c_e", cfg_.c_e},
          {"c_d", cfg_.c_d},
          {"delta", cfg_.delta},
          {"interaction", cfg_.interaction},
          {"priors", {{"beta0", "N(0,1)"}, {"beta1", "Exp(1)"}, {"beta2", "Exp(1)"}, {"beta3", "N(0,1)"}}},
          {"sampler", {{"steps", cfg_.sampler.steps}, {"burnin", cfg_.sampler.burnin}}}};
}

// ---------------------------------------------------------------------------
// gCRM

GcrmDesign::GcrmDesign(const DoseGrid& grid, const EdgeGuess& guess, const GcrmConfig& cfg)
    : grid_(grid), guess_(guess), cfg_(cfg) {
  require(cfg_.sigma2_alpha > 0 && cfg_.sigma2_beta > 0, ErrorCode::config_error,
          "gCRM prior variances must be positive");
  require(cfg_.stop_threshold > 0 && cfg_.stop_threshold <= 1, ErrorCode::config_error,
          "gCRM stopping threshold must lie in (0,1]");
  eff_ = gcrm_effective(guess_, cfg_.mu_alpha, cfg_.mu_beta);
}

double GcrmDesign::log_posterior(std::span<const double> x, const TrialState& state) const {
  const std::size_t K = std::size_t(grid_.K);
  const double beta = x[K];
  if (!(beta > 0)) return kNegInf;
  const double shape = cfg_.mu_beta * cfg_.mu_beta / cfg_.sigma2_beta;
  const double rate = cfg_.mu_beta / cfg_.sigma2_beta;
  double lp = -0.5 * (x[0] - cfg_.mu_alpha) * (x[0] - cfg_.mu_alpha) / cfg_.sigma2_alpha;
  lp += (shape - 1.0) * std::log(beta) - rate * beta;
  std::vector<double> alpha(K);
  alpha[0] = x[0];
  for (std::size_t k = 1; k < K; ++k) {
    if (x[k] < 0) return kNegInf;
    const double dev = x[k] - eff_.delta[k - 1];
    lp -= 0.5 * dev * dev / (2.0 * cfg_.sigma2_alpha);
    alpha[k] = alpha[k - 1] + x[k];
  }
  for (Dose d : all_doses(grid_)) {
    const int n = state.n(d);
    if (n == 0) continue;
    const double eta = alpha[std::size_t(d.k - 1)] + beta * eff_.a[std::size_t(d.j - 1)];
    lp += state.y(d) * eta - n * log1pexp(eta);
  }
  return lp;
}

GcrmDesign::Posterior GcrmDesign::posterior(const TrialState& state, double phi,
                                            std::uint64_t seed) const {
  const std::size_t K = std::size_t(grid_.K);
  std::vector<double> init(K + 1);
  init[0] = cfg_.mu_alpha;
  for (std::size_t k = 1; k < K; ++k) init[k] = std::max(eff_.delta[k - 1], 0.1);
  init[K] = cfg_.mu_beta;
  const auto cells = tried_cells(state);
  const double shape = cfg_.mu_beta * cfg_.mu_beta / cfg_.sigma2_beta;
  const double rate = cfg_.mu_beta / cfg_.sigma2_beta;
  std::vector<double> alpha(K);
  auto logpost = [&](std::span<const double> x) {
    const double beta = x[K];
    if (!(beta > 0)) return kNegInf;
    double lp = -0.5 * (x[0] - cfg_.mu_alpha) * (x[0] - cfg_.mu_alpha) / cfg_.sigma2_alpha +
                (shape - 1.0) * std::log(beta) - rate * beta;
    alpha[0] = x[0];
    for (std::size_t k = 1; k < K; ++k) {
      if (x[k] < 0) return kNegInf;
      const double dev = x[k] - eff_.delta[k - 1];
      lp -= 0.25 * dev * dev / cfg_.sigma2_alpha;
      alpha[k] = alpha[k - 1] + x[k];
    }
    for (const auto& c : cells) {
      const double eta = alpha[std::size_t(c.k)] + beta * eff_.a[std::size_t(c.j)];
      lp += c.y * eta - c.n * log1pexp(eta);
    }
    return lp;
  };
  std::vector<double> scale(K + 1, cfg_.step);
  const auto chain = rw_sampler(logpost, init, cfg_.sampler.steps, cfg_.sampler.burnin, scale, seed);
  Posterior out;
  out.acceptance = chain.acceptance;
  out.mean = Matrix(grid_, 0.0);
  std::vector<double> alpha_s(K);
  long above = 0;
  const double cut = logit(phi);
  const auto doses = all_doses(grid_);
  for (std::size_t s = 0; s < chain.kept(); ++s) {
    const auto x = chain.row(s);
    alpha_s[0] = x[0];
    for (std::size_t k = 1; k < K; ++k) alpha_s[k] = alpha_s[k - 1] + x[k];
    if (x[0] + x[K] * eff_.a[0] > cut) ++above;
    for (Dose d : doses) {
      out.mean(d) += expit(alpha_s[std::size_t(d.k - 1)] + x[K] * eff_.a[std::size_t(d.j - 1)]);
    }
  }
  const double S = double(chain.kept());
  out.p11_above = double(above) / S;
  for (double& v : out.mean.data()) v /= S;
  return out;
}

Decision GcrmDesign::next(const TrialState& state, const StudyConfig& cfg,
                          std::uint64_t seed) const {
  if (state.log.empty()) return Decision::assign({1, 1}, Phase::model, 1, "start");
  const auto post = posterior(state, cfg.phi, seed);
  if (post.p11_above > cfg_.stop_threshold) return Decision::terminate("safety-stop");
  return Decision::assign(*closest_to(king_moves(grid_, *state.current), post.mean, cfg.phi),
                          Phase::model, 1, "closest");
}

MtdResult GcrmDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                 std::uint64_t seed) const {
  if (state.patients_total() == 0) return {};
  const auto post = posterior(state, cfg.phi, seed);
  const auto d = closest_among_tried(state, post.mean, cfg.phi);
  return {d, post.mean(*d)};
}

Matrix GcrmDesign::estimates(const TrialState& state, const StudyConfig& cfg,
                             std::uint64_t seed) const {
  return posterior(state, cfg.phi, seed).mean;
}

nlohmann::json GcrmDesign::params() const {
  return {{"mu_alpha", cfg_.mu_alpha},
          {"mu_beta", cfg_.mu_beta},
          {"sigma2_alpha", cfg_.sigma2_alpha},
          {"sigma2_beta", cfg_.sigma2_beta},
          {"beta_prior", {{"shape", cfg_.mu_beta * cfg_.mu_beta / cfg_.sigma2_beta},
                          {"rate", cfg_.mu_beta / cfg_.sigma2_beta}}},
          {"eff_a", eff_.a},
          {"delta", eff_.delta},
          {"guess", {{"row", guess_.row}, {"col", guess_.col}}},
          {"stop_threshold", cfg_.stop_threshold},
          {"sampler", {{"steps", cfg_.sampler.steps}, {"burnin", cfg_.sampler.burnin}}}};
}

}  // namespace combo
