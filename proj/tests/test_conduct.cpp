#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "combo/conduct.hpp"
#include "combo/engine.hpp"
#include "combo/factory.hpp"

using namespace combo;
using conduct::TrialService;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("combo-conduct-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

json cohort(const json& view, int dlts, const std::string& key = "") {
  const auto& rec = view.at("recommendation");
  json b{{"dose", rec.at("dose")}, {"patients", rec.at("cohort_size")}, {"dlts", dlts}};
  if (!key.empty()) b["idempotency_key"] = key;
  return b;
}

Recommendation offline(const json& view) {
  const auto h = history_from_json(view.at("history"));
  const auto d = make_design(h.design, h.grid, h.config.phi);
  return recommend(*d, replay(h.grid, h.cohorts), h.config, h.seed);
}

}  // namespace

TEST_CASE("create and get") {
  TempDir dir;
  TrialService svc(dir.path);
  const json v = svc.create({{"design", "cboin"}, {"config", {{"phi", 0.3}}}, {"seed", 5}});
  CHECK(v.at("recommendation").at("dose") == json{{"j", 1}, {"k", 1}});
  CHECK(v.at("recommendation").at("phase") == "startup");
  CHECK(v.at("revision") == 0);
  CHECK(v.at("n") == counts_to_json(Counts(DoseGrid(5, 3), 0)));
  CHECK(svc.get(v.at("id")) == v);
  CHECK(code_of([&] { svc.get("missing"); }) == ErrorCode::not_found);
  CHECK(code_of([&] { svc.create({{"design", "cboin"}, {"config", {{"phi", 1.5}}}}); }) ==
        ErrorCode::config_error);
  CHECK(code_of([&] { svc.create({{"design", "nope"}}); }) == ErrorCode::config_error);
  // live trials cannot borrow a prior guess from the true rates
  CHECK_THROWS_AS(svc.create({{"design", {{"id", "gcrm"}, {"guess", "truth"}}}}), Error);
  const json p = svc.create({{"design", "pocrm"}});
  CHECK(p.at("recommendation").at("dose") == json{{"j", 1}, {"k", 1}});
  CHECK(p.at("recommendation").at("phase") == "startup");
}

TEST_CASE("posting cohorts") {
  TempDir dir;
  TrialService svc(dir.path);
  json v = svc.create({{"design", "cboin"}, {"seed", 1}});
  const std::string id = v.at("id");
  v = svc.post_cohort(id, cohort(v, 0, "a"));
  CHECK(v.at("revision") == 1);
  CHECK(v.at("n").at(0).at(0) == 3);
  CHECK(v.at("recommendation").at("dose") == json{{"j", 2}, {"k", 1}});

  SUBCASE("idempotent retry") {
    const json again = svc.post_cohort(id, {{"dose", {{"j", 1}, {"k", 1}}}, {"patients", 3}, {"dlts", 0},
                                            {"idempotency_key", "a"}});
    CHECK(again == v);
    CHECK(svc.get(id).at("revision") == 1);
    CHECK(code_of([&] {
            svc.post_cohort(id, {{"dose", {{"j", 1}, {"k", 1}}}, {"patients", 3}, {"dlts", 1},
                                 {"idempotency_key", "a"}});
          }) == ErrorCode::idempotency_conflict);
  }
  SUBCASE("revision conflict") {
    json b = cohort(v, 1);
    b["revision"] = 0;
    CHECK(code_of([&] { svc.post_cohort(id, b); }) == ErrorCode::revision_conflict);
    b["revision"] = 1;
    CHECK(svc.post_cohort(id, b).at("revision") == 2);
  }
  SUBCASE("dose mismatch needs an override note") {
    json b{{"dose", {{"j", 1}, {"k", 2}}}, {"patients", 3}, {"dlts", 0}};
    CHECK(code_of([&] { svc.post_cohort(id, b); }) == ErrorCode::dose_mismatch);
    b["override"] = true;
    CHECK(code_of([&] { svc.post_cohort(id, b); }) == ErrorCode::invalid_argument);
    b["note"] = "pharmacy supplied the wrong vial";
    const json w = svc.post_cohort(id, b);
    CHECK(w.at("audit").size() == 1);
    CHECK(w.at("audit").at(0).at("note") == "pharmacy supplied the wrong vial");
  }
  SUBCASE("invalid counts") {
    json b = cohort(v, 4);
    CHECK(code_of([&] { svc.post_cohort(id, b); }) == ErrorCode::invalid_counts);
    b["patients"] = 0;
    b["dlts"] = 0;
    CHECK(code_of([&] { svc.post_cohort(id, b); }) == ErrorCode::invalid_counts);
    b["patients"] = 58;
    CHECK(code_of([&] { svc.post_cohort(id, b); }) == ErrorCode::invalid_counts);
    b["dose"] = {{"j", 9}, {"k", 1}};
    b["patients"] = 3;
    CHECK(code_of([&] { svc.post_cohort(id, b); }) == ErrorCode::out_of_grid);
    CHECK(svc.get(id).at("revision") == 1);
  }
}

TEST_CASE("undo") {
  TempDir dir;
  TrialService svc(dir.path);
  const json fresh = svc.create({{"design", "pocrm"}, {"seed", 77}});
  const std::string id = fresh.at("id");
  CHECK(code_of([&] { svc.undo(id, json::object()); }) == ErrorCode::invalid_argument);
  const json one = svc.post_cohort(id, cohort(fresh, 0, "k1"));
  const json back = svc.undo(id, json::object());
  CHECK(back.at("recommendation") == fresh.at("recommendation"));
  CHECK(back.at("log").empty());
  CHECK(back.at("revision") == 2);
  // the key is free again and the same post gives the same recommendation
  const json redo = svc.post_cohort(id, cohort(fresh, 0, "k1"));
  CHECK(redo.at("recommendation") == one.at("recommendation"));
  CHECK(redo.at("estimates") == one.at("estimates"));
}

TEST_CASE("finished trials reject cohorts") {
  TempDir dir;
  TrialService svc(dir.path);
  json v = svc.create({{"design", "cboin"}, {"config", {{"max_n", 6}}}});
  const std::string id = v.at("id");
  v = svc.post_cohort(id, cohort(v, 0));
  v = svc.post_cohort(id, cohort(v, 1));
  CHECK(v.at("finished") == true);
  CHECK(v.at("recommendation").at("action") == "terminate");
  CHECK(!v.at("mtd").at("selected").is_null());
  CHECK(code_of([&] { svc.post_cohort(id, {{"dose", {{"j", 1}, {"k", 1}}}, {"patients", 1}, {"dlts", 0}}); }) ==
        ErrorCode::trial_finished);

  json e = svc.create({{"design", "cboin"}, {"config", {{"early_stop_n", 6}}}});
  const std::string eid = e.at("id");
  e = svc.post_cohort(eid, cohort(e, 2));  // (1,1) 2/3: stay... or de-escalate at the floor
  e = svc.post_cohort(eid, cohort(e, 1));
  CHECK(e.at("finished") == true);
  CHECK(e.at("recommendation").at("reason") == "early-stop");
}

TEST_CASE("sessions survive a restart") {
  TempDir dir;
  json before;
  std::string id;
  {
    TrialService svc(dir.path);
    json v = svc.create({{"design", "bcrm"}, {"seed", 3}, {"design", {{"id", "bcrm"}, {"B", 50}}}});
    id = v.at("id");
    std::mt19937_64 rng(9);
    for (int c = 0; c < 5; ++c) v = svc.post_cohort(id, cohort(v, int(rng() % 2), "c" + std::to_string(c)));
    v = svc.undo(id, json::object());
    v = svc.post_cohort(id, cohort(v, 1, "c4"));
    before = svc.get(id);
    svc.create({{"design", "ckeyboard"}});
  }
  TrialService again(dir.path);
  CHECK(again.size() == 2);
  CHECK(again.get(id) == before);
  // stored idempotency responses are replayed too
  const auto& last = before.at("log").back();
  CHECK(again.post_cohort(id, {{"dose", last.at("dose")}, {"patients", last.at("patients")},
                               {"dlts", 1}, {"idempotency_key", "c4"}}) == before);
}

TEST_CASE("recommendation equals the offline decision on the exported history") {
  TempDir dir;
  TrialService svc(dir.path);
  for (const std::string id : {"cboin", "ckeyboard", "pocrm", "i2d", "bcrm"}) {
    CAPTURE(id);
    json spec{{"id", id}};
    if (id == "bcrm") spec["B"] = 40;
    json v = svc.create({{"design", spec}, {"seed", 123}});
    const std::string tid = v.at("id");
    std::mt19937_64 rng(std::hash<std::string>{}(id));
    for (int c = 0; c < 10 && !v.at("finished").get<bool>(); ++c) {
      const auto off = offline(v);
      CHECK(to_json(off.decision) == v.at("recommendation"));
      CHECK(matrix_to_json(off.estimates) == v.at("estimates"));
      const int n = v.at("recommendation").at("cohort_size");
      v = svc.post_cohort(tid, cohort(v, int(rng() % std::uint64_t(n + 1)) / 2));
    }
    CHECK(to_json(offline(v).decision) == v.at("recommendation"));
  }
}

TEST_CASE("concurrent posts to one session are serialized") {
  TempDir dir;
  TrialService svc(dir.path);
  const json v = svc.create({{"design", "cboin"}});
  const std::string id = v.at("id");
  json b = cohort(v, 0);
  b["revision"] = 0;
  std::atomic<int> ok{0}, conflict{0};
  std::vector<std::thread> ts;
  for (int t = 0; t < 8; ++t) {
    ts.emplace_back([&] {
      try {
        svc.post_cohort(id, b);
        ++ok;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::revision_conflict) ++conflict;
      }
    });
  }
  for (auto& t : ts) t.join();
  CHECK(ok == 1);
  CHECK(conflict == 7);
  CHECK(svc.get(id).at("log").size() == 1);
}

TEST_CASE("http api") {
  TempDir dir;
  TrialService svc(dir.path);
  httplib::Server server;
  conduct::install_routes(server, svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client cli("127.0.0.1", port);

  auto designs = cli.Get("/api/designs");
  REQUIRE(designs);
  CHECK(designs->status == 200);
  CHECK(json::parse(designs->body).size() == 9);
  CHECK(designs->get_header_value("Access-Control-Allow-Origin") == "*");

  auto created = cli.Post("/api/trials", R"({"design":"cboin","seed":4})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  json v = json::parse(created->body);
  const std::string id = v.at("id");

  for (int c = 0; c < 10; ++c) {
    auto r = cli.Post("/api/trials/" + id + "/cohorts", cohort(v, c % 3 == 2 ? 1 : 0).dump(), "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    v = json::parse(r->body);
    CHECK(to_json(offline(v).decision) == v.at("recommendation"));
  }
  auto got = cli.Get("/api/trials/" + id);
  CHECK(json::parse(got->body) == v);

  auto missing = cli.Get("/api/trials/nothere");
  CHECK(missing->status == 404);
  const json err = json::parse(missing->body);
  CHECK(err.at("code") == "not_found");
  CHECK(err.contains("message"));
  CHECK(err.contains("detail"));

  json stale = cohort(v, 0);
  stale["revision"] = 0;
  CHECK(cli.Post("/api/trials/" + id + "/cohorts", stale.dump(), "application/json")->status == 409);
  CHECK(cli.Post("/api/trials/" + id + "/cohorts", "{not json", "application/json")->status == 400);
  CHECK(cli.Post("/api/trials", R"({"design":"cboin","config":{"phi":1.5}})", "application/json")->status == 400);
  auto undone = cli.Post("/api/trials/" + id + "/undo", "", "application/json");
  CHECK(undone->status == 200);
  CHECK(json::parse(undone->body).at("log").size() == 9);
  CHECK(cli.Get("/api/nothing")->status == 404);

  server.stop();
  th.join();
}
