#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "combo/conduct.hpp"
#include "combo/factory.hpp"

namespace combo::conduct {

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::revision_conflict:
    case ErrorCode::trial_finished:
    case ErrorCode::dose_mismatch:
    case ErrorCode::idempotency_conflict: return 409;
    case ErrorCode::invalid_argument:
    case ErrorCode::out_of_grid:
    case ErrorCode::invalid_counts:
    case ErrorCode::config_error:
    case ErrorCode::parse_error: return 400;
    default: return 500;
  }
}

json error_body(const Error& e) {
  const auto* api = dynamic_cast<const ApiError*>(&e);
  return {{"code", std::string(to_string(e.code()))},
          {"message", e.what()},
          {"detail", api ? api->detail() : json(nullptr)}};
}

namespace {

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string random_id() {
  std::random_device rd;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%08x%08x", rd(), rd());
  return buf;
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) | rd();
}

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') return false;
  }
  return true;
}

}  // namespace

struct TrialService::Session {
  std::string id;
  TrialHistory history;
  DesignPtr design;
  TrialState state{DoseGrid(1, 1)};
  int revision = 0;
  std::string created_at;
  std::vector<json> audit;               // override notes
  std::map<std::string, json> idem;      // idempotency key -> response
  std::vector<std::string> cohort_keys;  // key per cohort ("" when none)
  std::filesystem::path file;
  mutable std::mutex mu;

  void append(const json& event) const {
    std::ofstream out(file, std::ios::app);
    out << event.dump() << '\n';
    out.flush();
    require(bool(out), ErrorCode::invalid_argument, "cannot write session log " + file.string());
  }

  void rebuild_state() { state = replay(history.grid, history.cohorts); }

  json view() const {
    const auto rec = recommend(*design, state, history.config, history.seed);
    json log = json::array();
    for (std::size_t i = 0; i < history.cohorts.size(); ++i) {
      json c = to_json(history.cohorts[i]);
      c["index"] = i + 1;
      log.push_back(c);
    }
    return {{"id", id},
            {"revision", revision},
            {"created_at", created_at},
            {"design", history.design},
            {"design_params", design->params()},
            {"grid", {{"J", history.grid.J}, {"K", history.grid.K}}},
            {"config", to_json(history.config)},
            {"seed", history.seed},
            {"log", log},
            {"n", counts_to_json(state.n)},
            {"y", counts_to_json(state.y)},
            {"patients_total", state.patients_total()},
            {"current", state.current ? to_json(*state.current) : json(nullptr)},
            {"recommendation", to_json(rec.decision)},
            {"finished", rec.finished},
            {"estimates", matrix_to_json(rec.estimates)},
            {"mtd", rec.mtd ? to_json(*rec.mtd) : json(nullptr)},
            {"audit", audit},
            {"history", to_json(history)}};
  }
};

TrialService::TrialService(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {
  std::filesystem::create_directories(dir_);
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() != ".jsonl") continue;
    auto s = load(entry.path());
    sessions_[s->id] = s;
  }
}

TrialService::~TrialService() = default;

std::size_t TrialService::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

json TrialService::designs() { return design_catalog(); }

std::shared_ptr<TrialService::Session> TrialService::find(const std::string& id) const {
  if (!valid_id(id)) throw ApiError(ErrorCode::not_found, "malformed trial id", {{"id", id}});
  std::shared_lock lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError(ErrorCode::not_found, "no trial '" + id + "'", {{"id", id}});
  return it->second;
}

std::shared_ptr<TrialService::Session> TrialService::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  auto s = std::make_shared<Session>();
  s->file = file;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json ev = parse_json(line, file.string() + ":" + std::to_string(lineno));
    const std::string type = ev.at("type");
    if (type == "create") {
      s->id = ev.at("id");
      s->created_at = ev.value("at", "");
      s->history = history_from_json(ev.at("history"));
      s->design = make_design(s->history.design, s->history.grid, s->history.config.phi);
    } else if (type == "cohort") {
      s->history.cohorts.push_back(cohort_from_json(ev.at("cohort")));
      const std::string key = ev.value("idempotency_key", "");
      s->cohort_keys.push_back(key);
      if (!key.empty()) s->idem[key] = {{"request", ev.at("request")}, {"response", ev.at("response")}};
      if (ev.value("override", false)) s->audit.push_back(ev.at("audit"));
    } else if (type == "undo") {
      require(!s->history.cohorts.empty(), ErrorCode::parse_error, file.string() + ": undo on empty log");
      s->history.cohorts.pop_back();
      if (!s->cohort_keys.back().empty()) s->idem.erase(s->cohort_keys.back());
      s->cohort_keys.pop_back();
    } else {
      fail(ErrorCode::parse_error, file.string() + ": unknown event type '" + type + "'");
    }
    s->revision = ev.at("revision");
  }
  require(s->design != nullptr, ErrorCode::parse_error, file.string() + ": missing create event");
  s->rebuild_state();
  return s;
}

json TrialService::create(const json& body) {
  require(body.is_object(), ErrorCode::parse_error, "request body must be a JSON object");
  check_keys(body, {"design", "J", "K", "config", "seed"}, "trial");
  json h = body;
  if (!h.contains("seed")) h["seed"] = random_seed();
  h["cohorts"] = json::array();
  auto s = std::make_shared<Session>();
  s->history = history_from_json(h);
  // live trials have no true scenario to borrow a prior guess from
  s->design = make_design(s->history.design, s->history.grid, s->history.config.phi, nullptr);
  s->created_at = now_utc();
  s->rebuild_state();
  {
    std::unique_lock lock(mu_);
    do {
      s->id = random_id();
    } while (sessions_.count(s->id));
    s->file = dir_ / (s->id + ".jsonl");
    s->append({{"type", "create"}, {"id", s->id}, {"revision", 0}, {"at", s->created_at},
               {"history", to_json(s->history)}});
    sessions_[s->id] = s;
  }
  std::lock_guard lock(s->mu);
  return s->view();
}

json TrialService::get(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->view();
}

json TrialService::post_cohort(const std::string& id, const json& body) {
  require(body.is_object(), ErrorCode::parse_error, "request body must be a JSON object");
  check_keys(body, {"dose", "patients", "dlts", "idempotency_key", "revision", "override", "note"}, "cohort");
  auto s = find(id);
  std::lock_guard lock(s->mu);
  const std::string key = body.value("idempotency_key", "");
  json request = body;
  request.erase("revision");
  if (!key.empty()) {
    const auto it = s->idem.find(key);
    if (it != s->idem.end()) {
      if (it->second.at("request") != request) {
        throw ApiError(ErrorCode::idempotency_conflict,
                       "idempotency key '" + key + "' was used for a different cohort", {{"key", key}});
      }
      return it->second.at("response");
    }
  }
  if (body.contains("revision") && body.at("revision").get<int>() != s->revision) {
    throw ApiError(ErrorCode::revision_conflict, "trial changed since revision " + body.at("revision").dump(),
                   {{"revision", s->revision}});
  }
  const auto rec = recommend(*s->design, s->state, s->history.config, s->history.seed);
  if (rec.finished) {
    throw ApiError(ErrorCode::trial_finished, "trial finished (" + rec.decision.reason + ")",
                   {{"reason", rec.decision.reason}});
  }
  require(body.contains("dose") && body.contains("patients") && body.contains("dlts"), ErrorCode::invalid_counts,
          "cohort needs dose, patients and dlts");
  CohortRecord c{dose_from_json(body.at("dose")), body.at("patients").get<int>(), body.at("dlts").get<int>()};
  if (!s->history.grid.contains(c.dose)) {
    throw ApiError(ErrorCode::out_of_grid, to_string(c.dose) + " lies outside the grid",
                   {{"J", s->history.grid.J}, {"K", s->history.grid.K}});
  }
  const int remaining = s->history.config.max_n - s->state.patients_total();
  if (c.patients < 1 || c.dlts < 0 || c.dlts > c.patients || c.patients > remaining) {
    throw ApiError(ErrorCode::invalid_counts, "need 1 <= patients <= " + std::to_string(remaining) +
                                                  " and 0 <= dlts <= patients",
                   {{"remaining", remaining}});
  }
  const bool override_flag = body.value("override", false);
  json audit = nullptr;
  if (c.dose != rec.decision.dose) {
    if (!override_flag) {
      throw ApiError(ErrorCode::dose_mismatch,
                     to_string(c.dose) + " differs from the recommended " + to_string(rec.decision.dose) +
                         "; resend with override and a note to record it anyway",
                     {{"recommended", to_json(rec.decision.dose)}});
    }
    const std::string note = body.value("note", "");
    require(!note.empty(), ErrorCode::invalid_argument, "an override needs a non-empty note");
    audit = {{"cohort", s->history.cohorts.size() + 1}, {"recommended", to_json(rec.decision.dose)},
             {"given", to_json(c.dose)}, {"note", note}, {"at", now_utc()}};
  }

  s->history.cohorts.push_back(c);
  s->cohort_keys.push_back(key);
  s->rebuild_state();
  ++s->revision;
  if (!audit.is_null()) s->audit.push_back(audit);
  json response = s->view();
  json ev{{"type", "cohort"}, {"revision", s->revision}, {"at", now_utc()}, {"cohort", to_json(c)},
          {"idempotency_key", key}, {"override", !audit.is_null()}, {"audit", audit},
          {"request", request}, {"response", key.empty() ? json(nullptr) : response}};
  try {
    s->append(ev);
  } catch (...) {
    s->history.cohorts.pop_back();
    s->cohort_keys.pop_back();
    if (!audit.is_null()) s->audit.pop_back();
    --s->revision;
    s->rebuild_state();
    throw;
  }
  if (!key.empty()) s->idem[key] = {{"request", request}, {"response", response}};
  return response;
}

json TrialService::undo(const std::string& id, const json& body) {
  require(body.is_object() || body.is_null(), ErrorCode::parse_error, "request body must be a JSON object");
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (body.is_object() && body.contains("revision") && body.at("revision").get<int>() != s->revision) {
    throw ApiError(ErrorCode::revision_conflict, "trial changed since revision " + body.at("revision").dump(),
                   {{"revision", s->revision}});
  }
  if (s->history.cohorts.empty()) throw ApiError(ErrorCode::invalid_argument, "nothing to undo");
  s->append({{"type", "undo"}, {"revision", s->revision + 1}, {"at", now_utc()}});
  s->history.cohorts.pop_back();
  if (!s->cohort_keys.back().empty()) s->idem.erase(s->cohort_keys.back());
  s->cohort_keys.pop_back();
  ++s->revision;
  s->rebuild_state();
  return s->view();
}

}  // namespace combo::conduct
