#include <cmath>
#include <limits>

#include "combo/designs/parametric.hpp"

namespace combo {

double i2d_surface(const I2dParams& params, double a, double b) {
  const double power = params.beta + (params.interaction ? params.gamma * std::log(a) : 0.0);
  return 1.0 - std::pow(a, params.alpha) * std::pow(1.0 - b, power);
}

double copula_log1m(const CopulaParams& params, double p, double q) {
  const double g = params.gamma;
  const double la = std::log1p(-std::pow(p, params.alpha));
  const double lb = std::log1p(-std::pow(q, params.beta));
  // A + B - 1 with A = (1 - p^alpha)^-gamma, written to keep precision as gamma -> 0
  return -std::log1p(std::expm1(-g * la) + std::expm1(-g * lb)) / g;
}

double copula_surface(const CopulaParams& params, double p, double q) {
  return -std::expm1(copula_log1m(params, p, q));
}

double dfcomb_logit(const std::array<double, 4>& beta, double a, double b) {
  return beta[0] + beta[1] * a + beta[2] * b + beta[3] * a * b;
}

HierarchyEffective hierarchy_effective(const EdgeGuess& guess, double sigma2, double k_const) {
  require(sigma2 > 0 && k_const > 0, ErrorCode::config_error,
          "hierarchy needs sigma2 > 0 and a positive scaling constant");
  HierarchyEffective e;
  const double p11 = guess.row.front();
  e.mu0 = std::log(k_const * p11);
  e.omega0 = std::log(k_const * (1 - p11));
  const double slope = 2.0 * std::sqrt(sigma2);  // mu1 = omega1 = mu2 = omega2
  auto odds = [](double p) { return p / (1 - p); };
  for (double p : guess.row) e.a.push_back(std::log(odds(p) / odds(p11)) / (slope + slope));
  for (double q : guess.col) e.b.push_back(std::log(odds(q) / odds(guess.col.front())) / (slope + slope));
  return e;
}

GcrmEffective gcrm_effective(const EdgeGuess& guess, double mu_alpha, double mu_beta) {
  require(mu_beta > 0, ErrorCode::config_error, "gCRM needs mu_beta > 0");
  GcrmEffective e;
  for (double p : guess.row) e.a.push_back((logit(p) - mu_alpha) / mu_beta);
  for (std::size_t k = 1; k < guess.col.size(); ++k) {
    e.delta.push_back(logit(guess.col[k]) - logit(guess.col[k - 1]));
  }
  return e;
}

std::vector<Dose> i2d_startup_path(const DoseGrid& g) {
  std::vector<Dose> path;
  for (int j = 1; j <= g.J; ++j) path.push_back({j, 1});
  if (g.K == 1) return path;
  int j = g.J;
  for (int k = 2; k <= g.K; ++k) {
    j = std::max(1, j - 2);
    path.push_back({j, k});
  }
  for (int jj = j + 1; jj <= g.J; ++jj) path.push_back({jj, g.K});
  return path;
}

std::size_t startup_length(const TrialState& state, const std::vector<Dose>& path) {
  std::size_t n = 0;
  for (const auto& c : state.log) {
    if (n >= path.size() || c.dose != path[n]) break;
    ++n;
    if (c.dlts > 0) break;
  }
  return n;
}

std::optional<Decision> copula_startup(const TrialState& state, int cohort_size) {
  const DoseGrid& g = state.grid;
  int pass = 0;  // 0: agent B at A = 1, 1: agent A at B = 1
  int pos = 1;
  auto at = [](int p, int i) { return p == 0 ? Dose{1, i} : Dose{i, 1}; };
  auto length = [&](int p) { return p == 0 ? g.K : g.J; };
  for (const auto& c : state.log) {
    if (pass == 1 && pos > g.J) return std::nullopt;
    if (c.dose != at(pass, pos)) return std::nullopt;
    if (c.dlts > 0 || pos == length(pass)) {
      if (pass == 1) return std::nullopt;
      pass = 1;
      pos = 2;
    } else {
      ++pos;
    }
  }
  if (pass == 1 && pos > g.J) return std::nullopt;
  return Decision::assign(at(pass, pos), Phase::startup, cohort_size,
                          state.log.empty() ? "start" : pass == 0 ? "startup-agent-b" : "startup-agent-a");
}

// ---------------------------------------------------------------------------
// I2D

namespace {

Matrix surface_means(const TabulatedSurface& s, const std::vector<double>& w) {
  Matrix m(s.grid());
  for (Dose d : all_doses(s.grid())) m(d) = s.mean(w, d);
  return m;
}

std::optional<Dose> closest_tried(const TrialState& state, const Matrix& est, double phi,
                                  bool tried_only) {
  std::vector<Dose> c;
  for (Dose d : all_doses(state.grid)) {
    if (!tried_only || state.tried(d)) c.push_back(d);
  }
  return closest_to(c, est, phi);
}

}  // namespace

I2dDesign::I2dDesign(const DoseGrid& grid, const MonoProfile& profile, int resolution, double upper)
    : grid_(grid), profile_(profile), resolution_(resolution), upper_(upper) {
  profile_.validate(grid);
  require(resolution >= 2 && upper > 0, ErrorCode::config_error, "invalid I2D posterior grid");
  for (double p : profile_.p) a_.push_back(1.0 - p);
  b_ = profile_.q;
  const auto axis = midpoints(0.0, upper, resolution);
  const std::size_t R = axis.size();
  std::vector<double> la, lb;
  for (double a : a_) la.push_back(std::log(a));
  for (double b : b_) lb.push_back(std::log1p(-b));
  surface_ = std::make_shared<TabulatedSurface>(
      grid_, R * R, [&](std::size_t node, std::span<double> out) {
        const double alpha = axis[node / R], beta = axis[node % R];
        for (Dose d : all_doses(grid_)) {
          out[std::size_t(grid_.index(d))] = alpha * la[std::size_t(d.j - 1)] + beta * lb[std::size_t(d.k - 1)];
        }
      });
}

Decision I2dDesign::next(const TrialState& state, const StudyConfig& cfg, std::uint64_t) const {
  const auto path = i2d_startup_path(grid_);
  const std::size_t L = startup_length(state, path);
  const bool all_startup = L == state.log.size();
  if (all_startup && state.dlts_total() == 0 && L < path.size()) {
    return Decision::assign(path[L], Phase::startup, 1, L == 0 ? "start" : "startup-escalate");
  }
  const auto w = surface_->weights(state);
  const Matrix est = surface_means(*surface_, w);
  if (all_startup) {
    std::vector<Dose> row;
    for (int j = 1; j <= grid_.J; ++j) row.push_back({j, 1});
    return Decision::assign(*closest_to(row, est, cfg.phi), Phase::model, cfg.cohort_size,
                            "model-entry");
  }
  const Dose cur = *state.current;
  auto cand = neighbours(grid_, cur, {{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}, {1, -1}, {-1, 1}});
  return Decision::assign(*closest_to(cand, est, cfg.phi), Phase::model, cfg.cohort_size, "closest");
}

MtdResult I2dDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                std::uint64_t) const {
  if (state.patients_total() == 0) return {};
  const Matrix est = surface_means(*surface_, surface_->weights(state));
  const auto d = closest_tried(state, est, cfg.phi, true);
  return {d, est(*d)};
}

Matrix I2dDesign::estimates(const TrialState& state, const StudyConfig&, std::uint64_t) const {
  return surface_means(*surface_, surface_->weights(state));
}

nlohmann::json I2dDesign::params() const {
  return {{"a", a_},
          {"b", b_},
          {"interaction", false},
          {"prior", "uniform"},
          {"box", {{0.0, upper_}, {0.0, upper_}}},
          {"resolution", resolution_}};
}

// ---------------------------------------------------------------------------
// Copula

CopulaDesign::CopulaDesign(const DoseGrid& grid, const MonoProfile& profile, const CopulaConfig& cfg)
    : grid_(grid), profile_(profile), cfg_(cfg) {
  profile_.validate(grid);
  require(cfg_.c_e > 0 && cfg_.c_e < 1 && cfg_.c_d > 0 && cfg_.c_d < 1 && cfg_.c_e + cfg_.c_d > 1,
          ErrorCode::config_error, "cutoffs need c_e, c_d in (0,1) and c_e + c_d > 1");
  require(cfg_.resolution >= 2 && cfg_.upper > 0, ErrorCode::config_error,
          "invalid copula posterior grid");
  const auto axis = midpoints(0.0, cfg_.upper, cfg_.resolution);
  const std::size_t R = axis.size();
  surface_ = std::make_shared<TabulatedSurface>(
      grid_, R * R * R, [&](std::size_t node, std::span<double> out) {
        const CopulaParams cp{axis[node / (R * R)], axis[(node / R) % R], axis[node % R]};
        for (Dose d : all_doses(grid_)) {
          out[std::size_t(grid_.index(d))] =
              copula_log1m(cp, profile_.p[std::size_t(d.j - 1)], profile_.q[std::size_t(d.k - 1)]);
        }
      });
}

ToxicitySummary CopulaDesign::summary(const TrialState& state, double phi) const {
  const auto w = surface_->weights(state);
  ToxicitySummary s{Matrix(grid_), Matrix(grid_), Matrix(grid_)};
  for (Dose d : all_doses(grid_)) {
    const auto sp = surface_->split(w, d, phi);
    s.mean(d) = sp.mean;
    s.below(d) = sp.below;
    s.above(d) = sp.above;
  }
  return s;
}

Decision CopulaDesign::next(const TrialState& state, const StudyConfig& cfg, std::uint64_t) const {
  if (auto d = copula_startup(state, cfg.cohort_size)) return *d;
  return cutoff_rule(summary(state, cfg.phi), *state.current, cfg_.c_e, cfg_.c_d, cfg.phi,
                     cfg.cohort_size);
}

MtdResult CopulaDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                   std::uint64_t) const {
  if (state.patients_total() == 0) return {};
  const Matrix est = surface_means(*surface_, surface_->weights(state));
  const auto d = closest_tried(state, est, cfg.phi, cfg_.mtd_tried_only);
  return {d, est(*d)};
}

Matrix CopulaDesign::estimates(const TrialState& state, const StudyConfig&, std::uint64_t) const {
  return surface_means(*surface_, surface_->weights(state));
}

nlohmann::json CopulaDesign::params() const {
  return {{"p", profile_.p},
          {"q", profile_.q},
          {"c_e", cfg_.c_e},
          {"c_d", cfg_.c_d},
          {"prior", "uniform"},
          {"box", {{0.0, cfg_.upper}, {0.0, cfg_.upper}, {0.0, cfg_.upper}}},
          {"resolution", cfg_.resolution},
          {"mtd_tried_only", cfg_.mtd_tried_only}};
}

}  // namespace combo
