#include <doctest.h>

#include "combo/factory.hpp"
#include "combo/io.hpp"

using namespace combo;

TEST_CASE("scenario JSON") {
  const auto j = json::parse(R"({"name":"S","J":3,"K":2,"rates":[[0.1,0.2,0.3],[0.2,0.3,0.4]]})");
  const auto s = scenario_from_json(j);
  CHECK(s.grid().J == 3);
  CHECK(s.rates({3, 2}) == 0.4);
  CHECK(s.rates({3, 1}) == 0.3);
  CHECK(scenario_from_json(to_json(s)).rates({2, 2}) == 0.3);
  auto bad = j;
  bad["rates"][0][1] = 1.5;
  CHECK_THROWS_AS(scenario_from_json(bad), Error);
  bad = j;
  bad["J"] = 4;
  CHECK_THROWS_AS(scenario_from_json(bad), Error);
  bad = j;
  bad["extra"] = true;
  CHECK_THROWS_AS(scenario_from_json(bad), Error);
}

TEST_CASE("parse errors carry a location") {
  try {
    parse_json("{\n  \"a\": ,\n}", "cfg.json");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(std::string(e.what()).find("cfg.json") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("dose and decision JSON") {
  CHECK(dose_from_json(json::parse(R"({"j":2,"k":3})")) == Dose{2, 3});
  CHECK(dose_from_json(json::parse("[4,1]")) == Dose{4, 1});
  CHECK_THROWS_AS(dose_from_json(json::parse("[4]")), Error);
  const auto d = to_json(Decision::assign({2, 1}, Phase::model, 3, "closest"));
  CHECK(d["action"] == "assign");
  CHECK(d["dose"]["j"] == 2);
  CHECK(to_json(Decision::terminate("safety-stop"))["action"] == "terminate");
}

TEST_CASE("study config overrides and validation") {
  const auto cfg = study_config_from_json(json::parse(R"({"phi":0.25,"early_stop_n":12})"));
  CHECK(cfg.phi == 0.25);
  CHECK(*cfg.early_stop_n == 12);
  CHECK(cfg.max_n == 60);
  CHECK_THROWS_AS(study_config_from_json(json::parse(R"({"phi":1.2})")), Error);
  CHECK_THROWS_AS(study_config_from_json(json::parse(R"({"max_n":"sixty"})")), Error);
}

TEST_CASE("factory builds every design and rejects unknown ids") {
  const DoseGrid g(5, 3);
  Matrix m(g, 0.2);
  const ToxicityScenario truth("t", m);
  CHECK(design_ids().size() == 9);
  for (const auto& id : design_ids()) {
    auto d = make_design({{"id", id}}, g, 0.3, &truth);
    CHECK(d->id() == id);
    CHECK(d->params().is_object());
  }
  try {
    make_design({{"id", "boin3"}}, g, 0.3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
    const std::string msg = e.what();
    CHECK(msg.find("boin3") != std::string::npos);
    for (const auto& id : design_ids()) CHECK(msg.find(id) != std::string::npos);
  }
  CHECK_THROWS_AS(make_design({{"id", "cboin"}, {"lambda", 1}}, g, 0.3), Error);
  CHECK_THROWS_AS(make_design({{"id", "hierarchy"}, {"guess", "truth"}}, g, 0.3, nullptr), Error);
  CHECK(design_uses_truth({{"id", "gcrm"}, {"guess", "truth"}}));
  CHECK_FALSE(design_uses_truth({{"id", "gcrm"}}));
  CHECK(design_label({{"id", "gcrm"}, {"label", "gCRM.1"}}) == "gCRM.1");
}

TEST_CASE("catalog lists every design with parameter schemas") {
  const auto cat = design_catalog();
  REQUIRE(cat.size() == design_ids().size());
  for (const auto& d : cat) {
    CHECK(d.contains("id"));
    CHECK(d.contains("name"));
    for (const auto& p : d["parameters"]) {
      CHECK(p.contains("name"));
      CHECK(p.contains("type"));
      CHECK(p.contains("default"));
    }
  }
}
