#include "combo/designs/crm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace combo {

std::vector<int> Ordering::ranks(const DoseGrid& grid) const {
  std::vector<int> r(static_cast<std::size_t>(grid.size()), -1);
  for (std::size_t t = 0; t < doses.size(); ++t) r[std::size_t(grid.index(doses[t]))] = int(t);
  return r;
}

namespace {

// Doses on anti-diagonal s = j + k, listed by increasing j.
std::vector<Dose> diagonal(const DoseGrid& g, int s) {
  std::vector<Dose> out;
  for (int j = 1; j <= g.J; ++j) {
    const int k = s - j;
    if (k >= 1 && k <= g.K) out.push_back({j, k});
  }
  return out;
}

Ordering by_diagonals(const DoseGrid& g, std::string label, bool (*increasing_j)(int s)) {
  Ordering o{std::move(label), {}};
  for (int s = 2; s <= g.J + g.K; ++s) {
    auto d = diagonal(g, s);
    if (!increasing_j(s)) std::reverse(d.begin(), d.end());
    o.doses.insert(o.doses.end(), d.begin(), d.end());
  }
  return o;
}

}  // namespace

std::vector<Ordering> enumerate_orderings(const DoseGrid& g) {
  std::vector<Ordering> out;
  Ordering rows{"across-rows", {}}, cols{"up-columns", {}};
  for (int k = 1; k <= g.K; ++k)
    for (int j = 1; j <= g.J; ++j) rows.doses.push_back({j, k});
  for (int j = 1; j <= g.J; ++j)
    for (int k = 1; k <= g.K; ++k) cols.doses.push_back({j, k});
  out.push_back(std::move(rows));
  out.push_back(std::move(cols));
  // "up" walks a diagonal towards higher agent-B levels, "down" the reverse
  out.push_back(by_diagonals(g, "up-diagonals", [](int) { return false; }));
  out.push_back(by_diagonals(g, "down-diagonals", [](int) { return true; }));
  out.push_back(by_diagonals(g, "alt-down-up-diagonals", [](int s) { return s % 2 == 1; }));
  out.push_back(by_diagonals(g, "alt-up-down-diagonals", [](int s) { return s % 2 == 0; }));
  return out;
}

bool respects_partial_order(const Ordering& o, const DoseGrid& grid) {
  if (int(o.doses.size()) != grid.size()) return false;
  const auto r = o.ranks(grid);
  if (std::find(r.begin(), r.end(), -1) != r.end()) return false;
  for (Dose a : all_doses(grid)) {
    for (Dose b : all_doses(grid)) {
      if (a != b && precedes_or_equal(a, b) &&
          r[std::size_t(grid.index(a))] > r[std::size_t(grid.index(b))]) {
        return false;
      }
    }
  }
  return true;
}

PocrmModel PocrmModel::make(const DoseGrid& grid, const SkeletonSpec& spec) {
  PocrmModel m;
  m.grid = grid;
  m.orderings = enumerate_orderings(grid);
  SkeletonSpec s = spec;
  s.n_levels = grid.size();
  require(s.mtd_position <= s.n_levels, ErrorCode::config_error,
          "skeleton MTD position exceeds the number of combinations");
  m.skeleton = crm_skeleton(s);
  m.prior_weights.assign(m.orderings.size(), 1.0 / double(m.orderings.size()));
  m.validate();
  return m;
}

void PocrmModel::validate() const {
  require(!orderings.empty() && prior_weights.size() == orderings.size(), ErrorCode::config_error,
          "partial-order model needs one prior weight per ordering");
  require(int(skeleton.size()) == grid.size(), ErrorCode::config_error,
          "skeleton length must equal J*K");
  const double total = std::accumulate(prior_weights.begin(), prior_weights.end(), 0.0);
  require(std::abs(total - 1.0) < 1e-9, ErrorCode::config_error, "ordering prior must sum to 1");
  for (const auto& o : orderings) {
    require(respects_partial_order(o, grid), ErrorCode::config_error,
            "ordering '" + o.label + "' violates the dose partial order");
  }
}

double PocrmModel::psi(std::size_t m, Dose d, double a) const {
  const auto& doses = orderings[m].doses;
  const auto t = std::size_t(std::find(doses.begin(), doses.end(), d) - doses.begin());
  return std::pow(skeleton[t], std::exp(a));
}

double pocrm_loglik(const PocrmModel& model, std::size_t m, const TrialState& data, double a) {
  const double e = std::exp(a);
  const auto& doses = model.orderings[m].doses;
  double ll = 0.0;
  for (std::size_t t = 0; t < doses.size(); ++t) {
    const int n = data.n(doses[t]);
    if (n == 0) continue;
    const int y = data.y(doses[t]);
    const double ls = std::log(model.skeleton[t]);
    ll += y * e * ls + (n - y) * std::log1p(-std::exp(e * ls));
  }
  return ll;
}

namespace {

template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<Dose> extreme_tried(const TrialState& s, bool highest) {
  std::optional<Dose> best;
  for (Dose d : all_doses(s.grid)) {
    if (!s.tried(d)) continue;
    const auto key = std::pair(d.j + d.k, d.j);
    if (!best || (highest ? key > std::pair(best->j + best->k, best->j)
                          : key < std::pair(best->j + best->k, best->j))) {
      best = d;
    }
  }
  return best;
}

}  // namespace

PocrmFit pocrm_fit(const PocrmModel& model, const TrialState& data) {
  require(data.patients_total() > 0 && !homogeneous_outcomes(data), ErrorCode::mle_undefined,
          "likelihood maximum undefined without both DLT and non-DLT outcomes");
  PocrmFit fit;
  const std::size_t M = model.orderings.size();
  for (std::size_t m = 0; m < M; ++m) {
    const double a = golden_max([&](double x) { return pocrm_loglik(model, m, data, x); }, -5.0,
                                5.0, 1e-8);
    fit.a_hat.push_back(a);
    fit.loglik.push_back(pocrm_loglik(model, m, data, a));
  }
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < M; ++m) {
    if (model.prior_weights[m] > 0) top = std::max(top, fit.loglik[m] + std::log(model.prior_weights[m]));
  }
  double total = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const double w = model.prior_weights[m] > 0
                         ? std::exp(fit.loglik[m] + std::log(model.prior_weights[m]) - top)
                         : 0.0;
    fit.weights.push_back(w);
    total += w;
  }
  for (double& w : fit.weights) w /= total;
  return fit;
}

PocrmChoice pocrm_next_dose(const PocrmFit& fit, const PocrmModel& model, double phi, Rng& rng) {
  const double u = uniform01(rng);
  std::size_t m = 0;
  double acc = 0.0;
  for (; m + 1 < fit.weights.size(); ++m) {
    acc += fit.weights[m];
    if (u < acc) break;
  }
  while (fit.weights[m] == 0.0 && m > 0) --m;  // rounding at the top end
  const double e = std::exp(fit.a_hat[m]);
  const auto& doses = model.orderings[m].doses;
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < doses.size(); ++t) {
    const double gap = std::abs(std::pow(model.skeleton[t], e) - phi);
    if (gap < best_gap - 1e-12) {
      best = t;
      best_gap = gap;
    }
  }
  return {m, doses[best]};
}

std::optional<Decision> pocrm_startup(const TrialState& state, int cohort_size, Rng& rng) {
  if (state.log.empty()) return Decision::assign({1, 1}, Phase::startup, cohort_size, "start");
  if (state.dlts_total() > 0) return std::nullopt;
  const DoseGrid& g = state.grid;
  for (int s = 2; s <= g.J + g.K; ++s) {
    std::vector<Dose> open;
    for (Dose d : diagonal(g, s)) {
      if (!state.tried(d)) open.push_back(d);
    }
    if (open.empty()) continue;
    return Decision::assign(open[uniform_index(rng, open.size())], Phase::startup, cohort_size,
                            "startup-zone-" + std::to_string(s - 1));
  }
  return std::nullopt;
}

PocrmDesign::PocrmDesign(const DoseGrid& grid, const SkeletonSpec& spec)
    : spec_(spec), model_(PocrmModel::make(grid, spec)) {}

Decision PocrmDesign::next(const TrialState& state, const StudyConfig& cfg,
                           std::uint64_t seed) const {
  Rng rng(seed);
  if (auto d = pocrm_startup(state, cfg.cohort_size, rng)) return *d;
  if (homogeneous_outcomes(state)) {
    const bool none = state.dlts_total() == 0;
    return Decision::assign(*extreme_tried(state, none), Phase::model, cfg.cohort_size,
                            none ? "no-dlt-hold-highest" : "all-dlt-hold-lowest");
  }
  const auto fit = pocrm_fit(model_, state);
  const auto choice = pocrm_next_dose(fit, model_, cfg.phi, rng);
  return Decision::assign(choice.dose, Phase::model, cfg.cohort_size,
                          "ordering-" + model_.orderings[choice.ordering].label);
}

MtdResult PocrmDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                  std::uint64_t) const {
  if (state.patients_total() == 0) return {};
  if (homogeneous_outcomes(state)) {
    const Dose d = *extreme_tried(state, state.dlts_total() == 0);
    return {d, empirical_rate(state, d)};
  }
  const auto fit = pocrm_fit(model_, state);
  const auto m = std::size_t(std::max_element(fit.weights.begin(), fit.weights.end()) - fit.weights.begin());
  std::optional<Dose> best;
  double best_gap = 0.0, best_est = 0.0;
  for (Dose d : model_.orderings[m].doses) {
    const double est = model_.psi(m, d, fit.a_hat[m]);
    if (!best || std::abs(est - cfg.phi) < best_gap - 1e-12) {
      best = d;
      best_gap = std::abs(est - cfg.phi);
      best_est = est;
    }
  }
  return {best, best_est};
}

Matrix PocrmDesign::estimates(const TrialState& state, const StudyConfig&, std::uint64_t) const {
  Matrix out(state.grid, std::numeric_limits<double>::quiet_NaN());
  if (state.patients_total() == 0 || homogeneous_outcomes(state)) return out;
  const auto fit = pocrm_fit(model_, state);
  out.data().assign(out.data().size(), 0.0);
  for (std::size_t m = 0; m < fit.weights.size(); ++m) {
    for (Dose d : all_doses(state.grid)) out(d) += fit.weights[m] * model_.psi(m, d, fit.a_hat[m]);
  }
  return out;
}

nlohmann::json PocrmDesign::params() const {
  nlohmann::json orderings = nlohmann::json::array();
  for (const auto& o : model_.orderings) orderings.push_back(o.label);
  return {{"skeleton_half_width", spec_.half_width},
          {"skeleton_mtd_position", spec_.mtd_position},
          {"skeleton", model_.skeleton},
          {"orderings", orderings},
          {"a_search", {-5.0, 5.0}}};
}

// ---------------------------------------------------------------------------
// bCRM

void BcrmConfig::validate() const {
  require(B >= 1, ErrorCode::config_error, "bootstrap count B must be at least 1");
  require(jitter_eps > 0 && eps_neighborhood > 0, ErrorCode::config_error,
          "jitter and neighbourhood widths must be positive");
  require(c_e > 0 && c_e < 1 && c_d > 0 && c_d < 1 && c_e + c_d > 1, ErrorCode::config_error,
          "cutoffs need c_e, c_d in (0,1) and c_e + c_d > 1");
  require(a_sd > 0 && a_nodes >= 11, ErrorCode::config_error, "invalid CRM prior grid");
}

std::vector<PatientRecord> patient_records(const TrialState& state) {
  std::vector<PatientRecord> out;
  for (const auto& c : state.log) {
    for (int i = 0; i < c.patients; ++i) out.push_back({c.dose, i < c.dlts});
  }
  return out;
}

Ordering ordering_from_estimates(const Matrix& iso, double jitter_eps) {
  const DoseGrid& g = iso.shape();
  auto cells = all_doses(g);
  auto key = [&](Dose d) { return std::tuple(iso(d), d.j + d.k, d.j); };
  std::sort(cells.begin(), cells.end(), [&](Dose a, Dose b) { return key(a) < key(b); });
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const double diff = iso(cells[i]) - iso(cells[i - 1]);
    if (diff > 0) gap = std::min(gap, diff);
  }
  const double eps = std::min(jitter_eps, gap / (double(cells.size()) + 1.0));
  Matrix jittered(g);
  for (std::size_t r = 0; r < cells.size(); ++r) jittered(cells[r]) = iso(cells[r]) + double(r + 1) * eps;
  Ordering out{"bootstrap", cells};
  std::stable_sort(out.doses.begin(), out.doses.end(),
                   [&](Dose a, Dose b) { return jittered(a) < jittered(b); });
  return out;
}

BcrmDesign::BcrmDesign(const DoseGrid& grid, const SkeletonSpec& spec, const BcrmConfig& cfg)
    : grid_(grid), spec_(spec), cfg_(cfg) {
  cfg_.validate();
  SkeletonSpec s = spec;
  s.n_levels = grid.size();
  require(s.mtd_position <= s.n_levels, ErrorCode::config_error,
          "skeleton MTD position exceeds the number of combinations");
  skeleton_ = crm_skeleton(s);
  const double half = 6.0 * cfg_.a_sd;
  a_nodes_ = midpoints(-half, half, cfg_.a_nodes);
  for (double a : a_nodes_) log_prior_.push_back(-0.5 * a * a / (cfg_.a_sd * cfg_.a_sd));
  const std::size_t A = a_nodes_.size();
  p_.resize(skeleton_.size() * A);
  lp_.resize(p_.size());
  lq_.resize(p_.size());
  for (std::size_t t = 0; t < skeleton_.size(); ++t) {
    for (std::size_t i = 0; i < A; ++i) {
      const double lp = std::exp(a_nodes_[i]) * std::log(skeleton_[t]);
      p_[t * A + i] = std::exp(lp);
      lp_[t * A + i] = lp;
      lq_[t * A + i] = std::log1p(-std::exp(lp));
    }
  }
}

BaggedPosterior BcrmDesign::mixture(const TrialState& state, double phi,
                                    const std::map<std::vector<int>, int>& counts) const {
  BaggedPosterior out;
  out.counts_ = counts;
  for (const auto& [r, c] : counts) out.draws_ += c;
  const std::size_t A = a_nodes_.size();
  const int T = grid_.size();
  const double lo = std::max(0.0, phi - cfg_.eps_neighborhood);
  const double hi = std::min(1.0, phi + cfg_.eps_neighborhood);
  out.summary_ = {Matrix(grid_, 0.0), Matrix(grid_, 0.0), Matrix(grid_, 0.0)};
  out.window_ = Matrix(grid_, 0.0);
  std::vector<double> w(A);
  for (const auto& [rank, count] : counts) {
    const double f = double(count) / out.draws_;
    w = log_prior_;
    for (int c = 0; c < T; ++c) {
      const Dose d = grid_.dose(c);
      const int n = state.n(d);
      if (n == 0) continue;
      const int y = state.y(d);
      const std::size_t base = std::size_t(rank[std::size_t(c)]) * A;
      for (std::size_t i = 0; i < A; ++i) w[i] += y * lp_[base + i] + (n - y) * lq_[base + i];
    }
    const double top = *std::max_element(w.begin(), w.end());
    double total = 0.0;
    for (double& v : w) total += (v = std::exp(v - top));
    for (double& v : w) v /= total;
    for (int c = 0; c < T; ++c) {
      const Dose d = grid_.dose(c);
      const std::size_t base = std::size_t(rank[std::size_t(c)]) * A;
      double mean = 0, below = 0, above = 0, win = 0;
      for (std::size_t i = 0; i < A; ++i) {
        const double p = p_[base + i];
        mean += w[i] * p;
        if (p < phi) below += w[i];
        if (p > phi) above += w[i];
        if (p > lo && p < hi) win += w[i];
      }
      out.summary_.mean(d) += f * mean;
      out.summary_.below(d) += f * below;
      out.summary_.above(d) += f * above;
      out.window_(d) += f * win;
    }
  }
  return out;
}

BaggedPosterior BcrmDesign::bagged(const TrialState& state, double phi, std::uint64_t seed) const {
  const auto patients = patient_records(state);
  require(!patients.empty(), ErrorCode::invalid_argument, "bagging needs at least one patient");
  std::map<std::vector<int>, int> counts;
  Matrix est(grid_), wts(grid_);
  Counts n(grid_), y(grid_);
  const double prior_mass = cfg_.prior.a + cfg_.prior.b;
  for (int b = 0; b < cfg_.B; ++b) {
    Rng rng(combine_seed(seed, std::uint64_t(b)));
    n.data().assign(n.data().size(), 0);
    y.data().assign(y.data().size(), 0);
    for (std::size_t i = 0; i < patients.size(); ++i) {
      const auto& p = patients[uniform_index(rng, patients.size())];
      n(p.dose) += 1;
      y(p.dose) += p.dlt;
    }
    for (Dose d : all_doses(grid_)) {
      est(d) = (y(d) + cfg_.prior.a) / (n(d) + prior_mass);
      wts(d) = n(d) + prior_mass;
    }
    const auto order = ordering_from_estimates(pava_2d(est, wts), cfg_.jitter_eps);
    counts[order.ranks(grid_)] += 1;
  }
  return mixture(state, phi, counts);
}

Decision BcrmDesign::next(const TrialState& state, const StudyConfig& cfg,
                          std::uint64_t seed) const {
  if (auto d = path_startup(state, diagonal_path(grid_), cfg.cohort_size)) return *d;
  const auto post = bagged(state, cfg.phi, seed);
  return cutoff_rule(post.summary(), *state.current, cfg_.c_e, cfg_.c_d, cfg.phi, cfg.cohort_size);
}

MtdResult BcrmDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                 std::uint64_t seed) const {
  if (state.patients_total() == 0) return {};
  const auto post = bagged(state, cfg.phi, seed);
  std::optional<Dose> best;
  for (Dose d : all_doses(grid_)) {
    if (!state.tried(d)) continue;
    if (!best) {
      best = d;
      continue;
    }
    const double m = post.window()(d), mb = post.window()(*best);
    if (m > mb + 1e-12 ||
        (std::abs(m - mb) <= 1e-12 && std::abs(post.summary().mean(d) - cfg.phi) <
                                          std::abs(post.summary().mean(*best) - cfg.phi))) {
      best = d;
    }
  }
  return {best, post.summary().mean(*best)};
}

Matrix BcrmDesign::estimates(const TrialState& state, const StudyConfig& cfg,
                             std::uint64_t seed) const {
  if (state.patients_total() == 0) return Matrix(grid_, std::numeric_limits<double>::quiet_NaN());
  return bagged(state, cfg.phi, seed).summary().mean;
}

nlohmann::json BcrmDesign::params() const {
  return {{"prior", {cfg_.prior.a, cfg_.prior.b}},
          {"B", cfg_.B},
          {"jitter_eps", cfg_.jitter_eps},
          {"eps_neighborhood", cfg_.eps_neighborhood},
          {"c_e", cfg_.c_e},
          {"c_d", cfg_.c_d},
          {"a_prior_sd", cfg_.a_sd},
          {"skeleton", skeleton_}};
}

}  // namespace combo
