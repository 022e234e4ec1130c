#include "combo/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace combo {

namespace {

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <class T>
T get_as(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::config_error, where + ": field '" + key + "' missing or of the wrong type");
  }
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse_error, source + ": " + line_context(text, e.byte ? e.byte - 1 : 0) +
                                     ": malformed JSON");
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(bool(in), ErrorCode::config_error, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

json to_json(Dose d) { return {{"j", d.j}, {"k", d.k}}; }

Dose dose_from_json(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<int>(), j[1].get<int>()};
  require(j.is_object(), ErrorCode::parse_error, "dose must be {j, k} or [j, k]");
  return {get_as<int>(j, "j", "dose"), get_as<int>(j, "k", "dose")};
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int k = 1; k <= m.shape().K; ++k) {
    json row = json::array();
    for (int j = 1; j <= m.shape().J; ++j) {
      const double v = m({j, k});
      row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json counts_to_json(const Counts& m) {
  json rows = json::array();
  for (int k = 1; k <= m.shape().K; ++k) {
    json row = json::array();
    for (int j = 1; j <= m.shape().J; ++j) row.push_back(m({j, k}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ToxicityScenario scenario_from_json(const json& j) {
  require(j.is_object(), ErrorCode::config_error, "scenario must be a JSON object");
  check_keys(j, {"name", "J", "K", "rates", "note"}, "scenario");
  const auto name = get_as<std::string>(j, "name", "scenario");
  const int J = get_as<int>(j, "J", "scenario '" + name + "'");
  const int K = get_as<int>(j, "K", "scenario '" + name + "'");
  require(J >= 1 && K >= 1, ErrorCode::config_error, "scenario '" + name + "': J and K must be positive");
  const auto& rates = j.at("rates");
  require(rates.is_array() && int(rates.size()) == K, ErrorCode::config_error,
          "scenario '" + name + "': rates needs K rows");
  Matrix m(DoseGrid(J, K));
  for (int k = 1; k <= K; ++k) {
    const auto& row = rates[std::size_t(k - 1)];
    require(row.is_array() && int(row.size()) == J, ErrorCode::config_error,
            "scenario '" + name + "': row " + std::to_string(k) + " needs J entries");
    for (int jj = 1; jj <= J; ++jj) {
      require(row[std::size_t(jj - 1)].is_number(), ErrorCode::config_error,
              "scenario '" + name + "': rates must be numbers");
      m({jj, k}) = row[std::size_t(jj - 1)].get<double>();
    }
  }
  return ToxicityScenario(name, std::move(m));
}

json to_json(const ToxicityScenario& s) {
  return {{"name", s.name}, {"J", s.grid().J}, {"K", s.grid().K}, {"rates", matrix_to_json(s.rates)}};
}

json to_json(const CohortRecord& c) {
  return {{"dose", to_json(c.dose)}, {"patients", c.patients}, {"dlts", c.dlts}};
}

CohortRecord cohort_from_json(const json& j) {
  require(j.is_object(), ErrorCode::parse_error, "cohort must be a JSON object");
  require(j.contains("dose"), ErrorCode::parse_error, "cohort needs a dose");
  CohortRecord c;
  c.dose = dose_from_json(j.at("dose"));
  try {
    c.patients = j.at("patients").get<int>();
    c.dlts = j.at("dlts").get<int>();
  } catch (const json::exception&) {
    fail(ErrorCode::parse_error, "cohort needs integer patients and dlts");
  }
  return c;
}

json log_to_json(const std::vector<CohortRecord>& log) {
  json a = json::array();
  for (const auto& c : log) a.push_back(to_json(c));
  return a;
}

std::vector<CohortRecord> log_from_json(const json& j) {
  require(j.is_array(), ErrorCode::parse_error, "cohort log must be an array");
  std::vector<CohortRecord> out;
  for (const auto& c : j) out.push_back(cohort_from_json(c));
  return out;
}

json to_json(const Decision& d) {
  json out{{"action", d.terminates() ? "terminate" : "assign"},
           {"phase", std::string(to_string(d.phase))},
           {"reason", d.reason}};
  if (!d.terminates()) {
    out["dose"] = to_json(d.dose);
    out["cohort_size"] = d.cohort_size;
  }
  return out;
}

json to_json(const MtdResult& r) {
  json out{{"selected", nullptr}, {"estimate", nullptr}};
  if (r.selected) out["selected"] = to_json(*r.selected);
  if (r.estimate && std::isfinite(*r.estimate)) out["estimate"] = *r.estimate;
  return out;
}

StudyConfig study_config_from_json(const json& j, StudyConfig cfg) {
  require(j.is_object(), ErrorCode::config_error, "study config must be a JSON object");
  const std::string w = "study config";
  if (j.contains("phi")) cfg.phi = get_as<double>(j, "phi", w);
  if (j.contains("max_n")) cfg.max_n = get_as<int>(j, "max_n", w);
  if (j.contains("cohort_size")) cfg.cohort_size = get_as<int>(j, "cohort_size", w);
  if (j.contains("reps")) cfg.reps = get_as<int>(j, "reps", w);
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed", w);
  if (j.contains("early_stop_n")) {
    if (j.at("early_stop_n").is_null()) {
      cfg.early_stop_n.reset();
    } else {
      cfg.early_stop_n = get_as<int>(j, "early_stop_n", w);
    }
  }
  cfg.validate();
  return cfg;
}

json to_json(const StudyConfig& cfg) {
  json out{{"phi", cfg.phi},   {"max_n", cfg.max_n}, {"cohort_size", cfg.cohort_size},
           {"reps", cfg.reps}, {"seed", cfg.seed},   {"early_stop_n", nullptr}};
  if (cfg.early_stop_n) out["early_stop_n"] = *cfg.early_stop_n;
  return out;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(ErrorCode::config_error, where + ": unknown field '" + key + "' (expected one of: " + list + ")");
  }
}

}  // namespace combo
