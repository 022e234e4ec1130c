#include "combo/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "combo/factory.hpp"

namespace combo {

std::optional<Decision> apply_early_stop(const TrialState& state, Dose recommended,
                                         std::optional<int> cap) {
  if (!cap || state.n(recommended) < *cap) return std::nullopt;
  return Decision::terminate("early-stop");
}

TrialRecord run_trial(const Design& design, const ToxicityScenario& scenario,
                      const StudyConfig& cfg, std::uint64_t seed) {
  const DoseGrid& g = scenario.grid();
  TrialState state(g);
  Rng outcomes(combine_seed(seed, 0x6f7574636f6d65ULL));
  TrialRecord rec;
  rec.design = std::string(design.id());
  rec.scenario = scenario.name;
  rec.seed = seed;
  const std::optional<int> cap = design.supports_early_stop() ? cfg.early_stop_n : std::nullopt;
  bool select = true;
  rec.termination = "max-n";
  while (state.patients_total() < cfg.max_n) {
    const Decision d = design.next(state, cfg, decision_seed(seed, state.log.size()));
    if (d.terminates()) {
      rec.termination = d.reason;
      select = false;
      break;
    }
    require(g.contains(d.dose), ErrorCode::invalid_argument,
            std::string(design.id()) + " assigned " + to_string(d.dose) + " outside the " +
                std::to_string(g.J) + "x" + std::to_string(g.K) + " grid (scenario " +
                scenario.name + ", seed " + std::to_string(seed) + ")");
    require(d.cohort_size >= 1, ErrorCode::invalid_argument,
            std::string(design.id()) + " returned an empty cohort");
    if (apply_early_stop(state, d.dose, cap)) {
      rec.termination = "early-stop";
      break;
    }
    const int m = std::min(d.cohort_size, cfg.max_n - state.patients_total());
    const double rate = scenario.rates(d.dose);
    int dlts = 0;
    for (int i = 0; i < m; ++i) dlts += uniform01(outcomes) < rate;
    state = record_cohort(state, d.dose, m, dlts);
    state.phase = d.phase;
  }
  if (select) rec.result = design.select_mtd(state, cfg, selection_seed(seed));
  rec.log = state.log;
  rec.patients_total = state.patients_total();
  return rec;
}

MetricsRow compute_metrics(const std::vector<TrialRecord>& records, const ToxicityScenario& scenario,
                           double phi, const MetricDefinitions& defs) {
  require(!records.empty(), ErrorCode::invalid_argument, "no trial records to summarize");
  const auto mtd = true_mtd_set(scenario, phi, defs.mtd_tol);
  const auto over = over_toxic_set(scenario, phi, defs.over_margin);
  auto in = [](const std::vector<Dose>& s, Dose d) { return std::find(s.begin(), s.end(), d) != s.end(); };
  MetricsRow row;
  row.design = records.front().design;
  row.scenario = scenario.name;
  row.reps = int(records.size());
  for (const auto& r : records) {
    require(r.scenario == scenario.name, ErrorCode::invalid_argument,
            "records mix scenarios '" + r.scenario + "' and '" + scenario.name + "'");
    if (r.result.selected) {
      row.S_C += in(mtd, *r.result.selected);
      row.S_OT += in(over, *r.result.selected);
    }
    int at_mtd = 0, at_over = 0;
    for (const auto& c : r.log) {
      if (in(mtd, c.dose)) at_mtd += c.patients;
      if (in(over, c.dose)) at_over += c.patients;
    }
    if (r.patients_total > 0) {
      row.A_C += double(at_mtd) / r.patients_total;
      row.A_OT += double(at_over) / r.patients_total;
    }
    row.mean_n += r.patients_total;
  }
  const double n = double(records.size());
  row.S_C /= n;
  row.S_OT /= n;
  row.A_C /= n;
  row.A_OT /= n;
  row.mean_n /= n;
  return row;
}

std::uint64_t replication_seed(std::uint64_t base, const std::string& design,
                               const std::string& scenario, std::uint64_t rep) {
  return combine_seed(combine_seed(combine_seed(base, hash_string(design)), hash_string(scenario)), rep);
}

StudySpec study_from_json(const json& j, const std::filesystem::path& base_dir) {
  require(j.is_object(), ErrorCode::config_error, "study config must be a JSON object");
  check_keys(j, {"phi", "max_n", "cohort_size", "reps", "seed", "early_stop_n", "designs", "scenarios",
                 "mtd_tol", "over_margin", "note"},
             "study config");
  StudySpec spec;
  spec.cfg = study_config_from_json(j);
  if (j.contains("mtd_tol")) spec.defs.mtd_tol = j.at("mtd_tol").get<double>();
  if (j.contains("over_margin")) spec.defs.over_margin = j.at("over_margin").get<double>();
  require(j.contains("designs") && j.at("designs").is_array() && !j.at("designs").empty(),
          ErrorCode::config_error, "study config needs a non-empty 'designs' array");
  for (const auto& d : j.at("designs")) {
    json spec_d = d.is_string() ? json{{"id", d}} : d;
    require(spec_d.is_object() && spec_d.contains("id"), ErrorCode::config_error,
            "each design needs an 'id'");
    spec.designs.push_back(std::move(spec_d));
  }
  require(j.contains("scenarios") && j.at("scenarios").is_array() && !j.at("scenarios").empty(),
          ErrorCode::config_error, "study config needs a non-empty 'scenarios' array");
  for (const auto& s : j.at("scenarios")) {
    if (s.is_string()) {
      const std::filesystem::path p = s.get<std::string>();
      spec.scenarios.push_back(scenario_from_json(read_json_file(p.is_absolute() ? p : base_dir / p)));
    } else {
      spec.scenarios.push_back(scenario_from_json(s));
    }
  }
  // labels and scenario names key the seeds and the results, so they must be unique
  std::set<std::string> labels, names;
  for (const auto& d : spec.designs) {
    require(labels.insert(design_label(d)).second, ErrorCode::config_error,
            "duplicate design label '" + design_label(d) + "'");
  }
  for (const auto& s : spec.scenarios) {
    require(names.insert(s.name).second, ErrorCode::config_error, "duplicate scenario '" + s.name + "'");
  }
  return spec;
}

StudyResult run_study(const StudySpec& spec, const StudyOptions& opts) {
  spec.cfg.validate();
  const std::size_t D = spec.designs.size(), S = spec.scenarios.size();
  const auto reps = std::size_t(spec.cfg.reps);
  // designs independent of the scenario are built once per grid
  std::map<std::string, DesignPtr> cache;
  std::vector<DesignPtr> built(D * S);
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto& sc = spec.scenarios[s];
      const bool truth = design_uses_truth(spec.designs[d]);
      const std::string key = spec.designs[d].dump() + "|" + std::to_string(sc.grid().J) + "x" +
                              std::to_string(sc.grid().K) + (truth ? "|" + sc.name : "");
      auto it = cache.find(key);
      if (it == cache.end()) {
        it = cache.emplace(key, make_design(spec.designs[d], sc.grid(), spec.cfg.phi, &sc)).first;
      }
      built[d * S + s] = it->second;
    }
  }

  const std::size_t total = D * S * reps;
  std::vector<TrialRecord> records(total);
  std::atomic<std::size_t> next{0}, done{0};
  std::mutex err_mu, progress_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      {
        std::lock_guard lock(err_mu);
        if (error) return;
      }
      const std::size_t pair = i / reps, rep = i % reps;
      const std::size_t d = pair / S, s = pair % S;
      const auto label = design_label(spec.designs[d]);
      try {
        auto rec = run_trial(*built[pair], spec.scenarios[s], spec.cfg,
                             replication_seed(spec.cfg.seed, label, spec.scenarios[s].name, rep));
        rec.design = label;
        records[i] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!error) error = std::current_exception();
        return;
      }
      const auto n = done.fetch_add(1) + 1;
      if (opts.progress) {
        std::lock_guard lock(progress_mu);
        opts.progress(n, total);
      }
    }
  };
  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  StudyResult out;
  for (std::size_t pair = 0; pair < D * S; ++pair) {
    std::vector<TrialRecord> group(std::make_move_iterator(records.begin() + long(pair * reps)),
                                   std::make_move_iterator(records.begin() + long((pair + 1) * reps)));
    auto row = compute_metrics(group, spec.scenarios[pair % S], spec.cfg.phi, spec.defs);
    row.design = design_label(spec.designs[pair / S]);
    out.rows.push_back(std::move(row));
    if (opts.keep_records) out.records.push_back(std::move(group));
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "design,scenario,S_C,S_OT,A_C,A_OT,reps,mean_n\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f,%d,%.4f\n", r.S_C, r.S_OT, r.A_C, r.A_OT, r.reps,
                  r.mean_n);
    out += csv_field(r.design) + "," + csv_field(r.scenario) + buf;
  }
  return out;
}

std::vector<MetricsRow> metrics_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(bool(std::getline(in, line)), ErrorCode::parse_error, "results CSV is empty");
  const auto header = split_csv_line(line);
  const std::vector<std::string> want{"design", "scenario", "S_C", "S_OT", "A_C", "A_OT", "reps", "mean_n"};
  require(header == want, ErrorCode::parse_error,
          "results CSV header must be design,scenario,S_C,S_OT,A_C,A_OT,reps,mean_n");
  std::vector<MetricsRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    require(f.size() == 8, ErrorCode::parse_error, "results CSV line " + std::to_string(lineno) + ": expected 8 fields");
    try {
      rows.push_back({f[0], f[1], std::stod(f[2]), std::stod(f[3]), std::stod(f[4]), std::stod(f[5]),
                      std::stoi(f[6]), std::stod(f[7])});
    } catch (const std::exception&) {
      fail(ErrorCode::parse_error, "results CSV line " + std::to_string(lineno) + ": bad number");
    }
  }
  return rows;
}

}  // namespace combo
