#include "combo/history.hpp"

#include <limits>

#include "combo/engine.hpp"

namespace combo {

TrialHistory history_from_json(const json& j) {
  require(j.is_object(), ErrorCode::parse_error, "history must be a JSON object");
  check_keys(j, {"design", "J", "K", "config", "seed", "cohorts", "note"}, "history");
  TrialHistory h;
  require(j.contains("design"), ErrorCode::config_error, "history needs a 'design'");
  h.design = j.at("design").is_string() ? json{{"id", j.at("design")}} : j.at("design");
  require(h.design.is_object() && h.design.contains("id"), ErrorCode::config_error,
          "history design needs an 'id'");
  const int J = j.value("J", 5), K = j.value("K", 3);
  require(J >= 1 && K >= 1, ErrorCode::config_error, "grid dimensions must be positive");
  h.grid = DoseGrid(J, K);
  if (j.contains("config")) h.config = study_config_from_json(j.at("config"));
  if (j.contains("seed")) h.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("cohorts")) {
    require(j.at("cohorts").is_array(), ErrorCode::parse_error, "history 'cohorts' must be an array");
    int total = 0;
    for (const auto& c : j.at("cohorts")) {
      const auto rec = cohort_from_json(c);
      require(h.grid.contains(rec.dose), ErrorCode::out_of_grid,
              "history cohort at " + to_string(rec.dose) + " lies outside the grid");
      total += rec.patients;
      h.cohorts.push_back(rec);
    }
    require(total <= h.config.max_n, ErrorCode::invalid_counts,
            "history enrolls " + std::to_string(total) + " patients, above max_n");
  }
  return h;
}

json to_json(const TrialHistory& h) {
  json cohorts = json::array();
  for (const auto& c : h.cohorts) cohorts.push_back(to_json(c));
  return {{"design", h.design}, {"J", h.grid.J},  {"K", h.grid.K},
          {"config", to_json(h.config)}, {"seed", h.seed}, {"cohorts", cohorts}};
}

Recommendation recommend(const Design& design, const TrialState& state, const StudyConfig& cfg,
                         std::uint64_t seed) {
  Recommendation r;
  const std::uint64_t s = decision_seed(seed, state.log.size());
  try {
    r.estimates = design.estimates(state, cfg, s);
  } catch (const Error& e) {
    // some working models have no estimate yet (e.g. before heterogeneous outcomes)
    if (e.code() != ErrorCode::mle_undefined && e.code() != ErrorCode::no_posterior_mass) throw;
    r.estimates = Matrix(state.grid, std::numeric_limits<double>::quiet_NaN());
  }
  auto finish = [&](Decision d, bool select) {
    r.decision = std::move(d);
    r.finished = true;
    if (select) r.mtd = design.select_mtd(state, cfg, selection_seed(seed));
    return r;
  };
  if (state.patients_total() >= cfg.max_n) return finish(Decision::terminate("max-n"), true);
  const Decision d = design.next(state, cfg, s);
  if (d.terminates()) return finish(d, false);
  const std::optional<int> cap = design.supports_early_stop() ? cfg.early_stop_n : std::nullopt;
  if (auto stop = apply_early_stop(state, d.dose, cap)) return finish(*stop, true);
  r.decision = d;
  r.decision.cohort_size = std::min(d.cohort_size, cfg.max_n - state.patients_total());
  return r;
}

json to_json(const Recommendation& r) {
  json out{{"decision", to_json(r.decision)},
           {"finished", r.finished},
           {"estimates", matrix_to_json(r.estimates)},
           {"mtd", nullptr}};
  if (r.mtd) out["mtd"] = to_json(*r.mtd);
  return out;
}

}  // namespace combo
