#include "combo/designs/interval.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace combo {

BoinBoundaries boin_boundaries(double phi, double phi1, double phi2) {
  require(0.0 < phi1 && phi1 < phi && phi < phi2 && phi2 < 1.0, ErrorCode::invalid_argument,
          "boundaries need 0 < phi1 < phi < phi2 < 1");
  BoinBoundaries b{phi, phi1, phi2, 0.0, 0.0};
  b.lambda_e = std::log((1 - phi1) / (1 - phi)) / std::log(phi * (1 - phi1) / (phi1 * (1 - phi)));
  b.lambda_d = std::log((1 - phi) / (1 - phi2)) / std::log(phi2 * (1 - phi) / (phi * (1 - phi2)));
  return b;
}

KeyboardKeys keyboard_keys(double phi, double eps1, double eps2) {
  require(eps1 > 0 && eps2 > 0 && phi - eps1 > 0 && phi + eps2 < 1, ErrorCode::invalid_argument,
          "target key must lie strictly inside (0,1)");
  KeyboardKeys out{eps1, eps2, {}, 0};
  const double w = eps1 + eps2;
  const double tiny = 1e-12;
  std::vector<std::pair<double, double>> below;
  for (double hi = phi - eps1; hi > tiny; hi -= w) below.push_back({std::max(0.0, hi - w), hi});
  for (auto it = below.rbegin(); it != below.rend(); ++it) {
    if (it->first < tiny) it->first = 0.0;
    out.keys.push_back(*it);
  }
  out.target_index = out.keys.size();
  out.keys.push_back({phi - eps1, phi + eps2});
  for (double lo = phi + eps2; lo < 1.0 - tiny; lo += w) {
    double hi = lo + w;
    if (hi > 1.0 - tiny) hi = 1.0;
    out.keys.push_back({lo, hi});
  }
  return out;
}

std::size_t strongest_key(const KeyboardKeys& keys, BetaParams posterior) {
  std::size_t best = 0;
  double best_mass = -1.0;
  auto dist = [&](std::size_t i) {
    return i > keys.target_index ? i - keys.target_index : keys.target_index - i;
  };
  for (std::size_t i = 0; i < keys.keys.size(); ++i) {
    const double m = prob_in_interval(posterior, keys.keys[i].first, keys.keys[i].second);
    if (m > best_mass + 1e-12 || (std::abs(m - best_mass) <= 1e-12 && dist(i) < dist(best))) {
      best = i;
      best_mass = m;
    }
  }
  return best;
}

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::escalate: return "escalate";
    case Direction::stay: return "stay";
    case Direction::deescalate: return "de-escalate";
  }
  return "unknown";
}

Direction boin_direction(int y, int n, const BoinBoundaries& b) {
  require(n > 0, ErrorCode::undefined_rate, "no patients at the current dose");
  require(y >= 0 && y <= n, ErrorCode::invalid_counts, "need 0 <= y <= n");
  const double rate = double(y) / n;
  if (rate <= b.lambda_e) return Direction::escalate;
  if (rate >= b.lambda_d) return Direction::deescalate;
  return Direction::stay;
}

Direction keyboard_direction(int y, int n, const KeyboardKeys& keys, BetaParams prior) {
  require(n > 0, ErrorCode::undefined_rate, "no patients at the current dose");
  const std::size_t s = strongest_key(keys, beta_posterior(prior, y, n));
  if (s < keys.target_index) return Direction::escalate;
  if (s > keys.target_index) return Direction::deescalate;
  return Direction::stay;
}

namespace {

Decision move(const TrialState& state, Dose current, Direction dir, BetaParams prior, double lo,
              double hi, std::optional<int> cap) {
  const DoseGrid& g = state.grid;
  if (dir == Direction::stay) return Decision::assign(current, Phase::model, 3, "stay");
  const bool up = dir == Direction::escalate;
  const auto cands = up ? neighbours(g, current, {{1, 0}, {0, 1}})
                        : neighbours(g, current, {{-1, 0}, {0, -1}});
  std::optional<Dose> best;
  double best_mass = -1.0;
  for (Dose d : cands) {
    if (cap && state.n(d) >= *cap) continue;
    const double m = prob_in_interval(beta_posterior(prior, state.y(d), state.n(d)), lo, hi);
    if (!best || m > best_mass + 1e-12 ||
        (std::abs(m - best_mass) <= 1e-12 && state.n(d) < state.n(*best))) {
      best = d;
      best_mass = m;
    }
  }
  if (!best) {
    return Decision::assign(current, Phase::model, 3, up ? "stay-at-top" : "stay-at-bottom");
  }
  return Decision::assign(*best, Phase::model, 3, up ? "escalate" : "de-escalate");
}

}  // namespace

Decision boin_decide(const TrialState& state, Dose current, const BoinBoundaries& b,
                     BetaParams prior, std::optional<int> cap) {
  const Direction dir = boin_direction(state.y.at(current), state.n(current), b);
  return move(state, current, dir, prior, b.lambda_e, b.lambda_d, cap);
}

Decision keyboard_decide(const TrialState& state, Dose current, const KeyboardKeys& keys,
                         BetaParams prior, std::optional<int> cap) {
  const Direction dir = keyboard_direction(state.y.at(current), state.n(current), keys, prior);
  const auto& t = keys.keys[keys.target_index];
  return move(state, current, dir, prior, t.first, t.second, cap);
}

Matrix isotonic_estimates(const TrialState& state, BetaParams prior) {
  Matrix values(state.grid, 0.0), weights(state.grid, 1.0);
  Grid<char> mask(state.grid, 0);
  for (Dose d : all_doses(state.grid)) {
    if (!state.tried(d)) continue;
    values(d) = beta_posterior(prior, state.y(d), state.n(d)).mean();
    weights(d) = state.n(d) + prior.a + prior.b;
    mask(d) = 1;
  }
  return isotonic_subset(values, weights, mask);
}

MtdResult select_mtd_isotonic(const TrialState& state, double phi, BetaParams prior) {
  const Matrix est = isotonic_estimates(state, prior);
  std::optional<Dose> best;
  auto better = [&](Dose a, Dose b) {
    const double ea = est(a), eb = est(b);
    const double ga = std::abs(ea - phi), gb = std::abs(eb - phi);
    if (ga < gb - 1e-12) return true;
    if (ga > gb + 1e-12) return false;
    const bool la = ea <= phi + 1e-12, lb = eb <= phi + 1e-12;
    if (la != lb) return la;
    if (std::abs(ea - eb) > 1e-12) return ea > eb;
    const auto ka = std::pair(a.j + a.k, a.j), kb = std::pair(b.j + b.k, b.j);
    return la ? ka > kb : ka < kb;
  };
  for (Dose d : all_doses(state.grid)) {
    if (!state.tried(d)) continue;
    if (!best || better(d, *best)) best = d;
  }
  if (!best) return {};
  return {best, est(*best)};
}

std::vector<BoundaryRow> boundary_table(const DirectionRule& rule, int max_n) {
  std::vector<BoundaryRow> rows;
  for (int n = 1; n <= max_n; ++n) {
    BoundaryRow r;
    r.n = n;
    for (int y = 0; y <= n; ++y) {
      const Direction d = rule(y, n);
      if (d == Direction::escalate) r.escalate_max_y = y;
      if (d == Direction::deescalate && !r.deescalate_min_y) r.deescalate_min_y = y;
    }
    rows.push_back(r);
  }
  return rows;
}

std::string boundary_table_csv(const std::vector<BoundaryRow>& rows) {
  std::ostringstream out;
  out << "n,escalate_if_y_le,deescalate_if_y_ge\n";
  for (const auto& r : rows) {
    out << r.n << ',';
    if (r.escalate_max_y) out << *r.escalate_max_y;
    out << ',';
    if (r.deescalate_min_y) out << *r.deescalate_min_y;
    out << '\n';
  }
  return out.str();
}

namespace {

Decision first_or(const TrialState& state, const StudyConfig& cfg,
                  const std::function<Decision(Dose)>& model) {
  if (state.log.empty()) return Decision::assign({1, 1}, Phase::startup, cfg.cohort_size, "start");
  Decision d = model(*state.current);
  d.cohort_size = cfg.cohort_size;
  return d;
}

}  // namespace

BoinDesign::BoinDesign(double phi, double phi1, double phi2, BetaParams prior)
    : b_(boin_boundaries(phi, phi1, phi2)), prior_(prior) {}

Decision BoinDesign::next(const TrialState& state, const StudyConfig& cfg, std::uint64_t) const {
  return first_or(state, cfg, [&](Dose cur) {
    return boin_decide(state, cur, b_, prior_, cfg.early_stop_n);
  });
}

MtdResult BoinDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                 std::uint64_t) const {
  return select_mtd_isotonic(state, cfg.phi, prior_);
}

Matrix BoinDesign::estimates(const TrialState& state, const StudyConfig&, std::uint64_t) const {
  return isotonic_estimates(state, prior_);
}

nlohmann::json BoinDesign::params() const {
  return {{"phi", b_.phi},           {"phi1", b_.phi1},
          {"phi2", b_.phi2},         {"lambda_e", b_.lambda_e},
          {"lambda_d", b_.lambda_d}, {"prior", {prior_.a, prior_.b}}};
}

KeyboardDesign::KeyboardDesign(double phi, double eps1, double eps2, BetaParams prior)
    : phi_(phi), keys_(keyboard_keys(phi, eps1, eps2)), prior_(prior) {}

Decision KeyboardDesign::next(const TrialState& state, const StudyConfig& cfg,
                              std::uint64_t) const {
  return first_or(state, cfg, [&](Dose cur) {
    return keyboard_decide(state, cur, keys_, prior_, cfg.early_stop_n);
  });
}

MtdResult KeyboardDesign::select_mtd(const TrialState& state, const StudyConfig& cfg,
                                     std::uint64_t) const {
  return select_mtd_isotonic(state, cfg.phi, prior_);
}

Matrix KeyboardDesign::estimates(const TrialState& state, const StudyConfig&,
                                 std::uint64_t) const {
  return isotonic_estimates(state, prior_);
}

nlohmann::json KeyboardDesign::params() const {
  return {{"phi", phi_},
          {"eps1", keys_.eps1},
          {"eps2", keys_.eps2},
          {"target_key", {keys_.keys[keys_.target_index].first, keys_.keys[keys_.target_index].second}},
          {"prior", {prior_.a, prior_.b}}};
}

}  // namespace combo
