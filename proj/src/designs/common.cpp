#include <algorithm>
#include <cmath>

#include "combo/design.hpp"

namespace combo {

void MonoProfile::validate(const DoseGrid& grid) const {
  require(int(p.size()) == grid.J && int(q.size()) == grid.K, ErrorCode::config_error,
          "monotherapy profile does not match the grid");
  auto check = [](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      require(v[i] > 0.0 && v[i] < 1.0, ErrorCode::config_error,
              std::string("profile ") + name + " entries must lie in (0,1)");
      require(i == 0 || v[i] > v[i - 1], ErrorCode::config_error,
              std::string("profile ") + name + " must be strictly increasing");
    }
  };
  check(p, "p");
  check(q, "q");
}

MonoProfile main_profile() { return {{0.1, 0.2, 0.25, 0.3, 0.35}, {0.1, 0.3, 0.35}}; }
MonoProfile alternative_profile() { return {{0.05, 0.1, 0.2, 0.25, 0.3}, {0.1, 0.2, 0.25}}; }

std::vector<Dose> neighbours(const DoseGrid& grid, Dose from, std::initializer_list<Dose> moves) {
  std::vector<Dose> out;
  for (Dose m : moves) {
    const Dose d{from.j + m.j, from.k + m.k};
    if (grid.contains(d)) out.push_back(d);
  }
  return out;
}

std::vector<Dose> king_moves(const DoseGrid& grid, Dose from) {
  std::vector<Dose> out;
  for (int dk = -1; dk <= 1; ++dk) {
    for (int dj = -1; dj <= 1; ++dj) {
      const Dose d{from.j + dj, from.k + dk};
      if (grid.contains(d)) out.push_back(d);
    }
  }
  return out;
}

std::optional<Dose> closest_to(const std::vector<Dose>& candidates, const Matrix& est, double phi) {
  std::optional<Dose> best;
  double best_gap = 0.0;
  for (Dose d : candidates) {
    const double gap = std::abs(est(d) - phi);
    if (!best || gap < best_gap - 1e-12 ||
        (std::abs(gap - best_gap) <= 1e-12 &&
         std::pair(d.j + d.k, d.j) < std::pair(best->j + best->k, best->j))) {
      best = d;
      best_gap = gap;
    }
  }
  return best;
}

Decision cutoff_rule(const ToxicitySummary& s, Dose current, double c_e, double c_d, double phi,
                     int cohort_size) {
  const DoseGrid& g = s.mean.shape();
  const double here = s.mean(current);
  if (s.below(current) > c_e) {
    std::vector<Dose> up;
    for (Dose d : neighbours(g, current, {{1, 0}, {0, 1}, {1, -1}, {-1, 1}})) {
      if (s.mean(d) > here) up.push_back(d);
    }
    if (auto d = closest_to(up, s.mean, phi)) {
      return Decision::assign(*d, Phase::model, cohort_size, "escalate");
    }
    return Decision::assign(current, Phase::model, cohort_size, "stay-no-higher-dose");
  }
  if (s.above(current) > c_d) {
    if (current == Dose{1, 1}) return Decision::terminate("safety-stop");
    std::vector<Dose> down;
    for (Dose d : neighbours(g, current, {{-1, 0}, {0, -1}, {1, -1}, {-1, 1}})) {
      if (s.mean(d) < here) down.push_back(d);
    }
    if (auto d = closest_to(down, s.mean, phi)) {
      return Decision::assign(*d, Phase::model, cohort_size, "de-escalate");
    }
    return Decision::assign(current, Phase::model, cohort_size, "stay-no-lower-dose");
  }
  return Decision::assign(current, Phase::model, cohort_size, "stay");
}

std::vector<Dose> diagonal_path(const DoseGrid& grid) {
  std::vector<Dose> out;
  Dose d{1, 1};
  out.push_back(d);
  while (d != Dose{grid.J, grid.K}) {
    if (d.j < grid.J) ++d.j;
    if (d.k < grid.K) ++d.k;
    out.push_back(d);
  }
  return out;
}

std::optional<Decision> path_startup(const TrialState& state, const std::vector<Dose>& path,
                                     int cohort_size) {
  if (state.dlts_total() > 0) return std::nullopt;
  const auto& log = state.log;
  if (log.size() >= path.size()) return std::nullopt;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].dose != path[i]) return std::nullopt;  // manual override ends start-up
  }
  return Decision::assign(path[log.size()], Phase::startup, cohort_size,
                          log.empty() ? "start" : "startup-escalate");
}

bool homogeneous_outcomes(const TrialState& state) {
  bool all_tox = true, none_tox = true;
  for (int i = 0; i < state.grid.size(); ++i) {
    const int n = state.n.data()[std::size_t(i)], y = state.y.data()[std::size_t(i)];
    if (n == 0) continue;
    if (y > 0) none_tox = false;
    if (y < n) all_tox = false;
  }
  return all_tox || none_tox;
}

namespace {

std::vector<double> clamp_guess(std::vector<double> v) {
  for (double& x : v) x = std::clamp(x, 0.01, 0.99);
  for (std::size_t i = 1; i < v.size(); ++i) {
    require(v[i] >= v[i - 1], ErrorCode::config_error, "prior guesses must be non-decreasing");
  }
  return v;
}

}  // namespace

EdgeGuess resolve_guess(const nlohmann::json& spec, const DoseGrid& grid,
                        const ToxicityScenario* truth, const MonoProfile& profile) {
  EdgeGuess g;
  if (spec.is_object()) {
    g.row = spec.at("row").get<std::vector<double>>();
    g.col = spec.at("col").get<std::vector<double>>();
  } else {
    const std::string mode = spec.is_string() ? spec.get<std::string>() : "profile";
    if (mode == "profile") {
      g.row = profile.p;
      g.col = profile.q;
    } else if (mode == "truth" || mode == "shifted") {
      require(truth != nullptr, ErrorCode::config_error,
              "prior guess '" + mode + "' needs a scenario");
      const int shift = mode == "shifted" ? 1 : 0;
      for (int j = 1; j <= grid.J; ++j) g.row.push_back(truth->rates({std::min(j + shift, grid.J), 1}));
      for (int k = 1; k <= grid.K; ++k) g.col.push_back(truth->rates({1, std::min(k + shift, grid.K)}));
      if (shift) {
        // past the last level keep climbing by the last observed step
        g.row.back() += grid.J > 1 ? g.row.back() - truth->rates({grid.J - 1, 1}) : 0.05;
        g.col.back() += grid.K > 1 ? g.col.back() - truth->rates({1, grid.K - 1}) : 0.05;
      }
    } else {
      fail(ErrorCode::config_error, "unknown prior guess '" + mode + "'");
    }
  }
  require(int(g.row.size()) == grid.J && int(g.col.size()) == grid.K, ErrorCode::config_error,
          "prior guesses do not match the grid");
  g.row = clamp_guess(std::move(g.row));
  g.col = clamp_guess(std::move(g.col));
  return g;
}

}  // namespace combo
