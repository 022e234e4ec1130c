#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "combo/engine.hpp"
#include "combo/factory.hpp"
#include "combo/history.hpp"
#include "combo/report.hpp"

using namespace combo;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(COMBOTRIAL_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("combo-cli-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("").status == 2);
  CHECK(run("simulate").status == 2);
  CHECK(run("--help").status == 0);
  const auto bad = scratch("bad.json");
  write(bad, "{\n  \"designs\": [\"cboin\",\n}");
  CHECK(run("simulate --config " + bad.string()).status == 2);
  write(bad, R"({"designs": ["nope"], "scenarios": []})");
  CHECK(run("simulate --config " + bad.string()).status == 2);
  write(bad, R"({"design": "cboin", "cohorts": [{"dose": {"j": 7, "k": 1}, "patients": 3, "dlts": 0}]})");
  CHECK(run("decide " + bad.string()).status == 2);
  write(bad, "{ malformed");
  CHECK(run("decide " + bad.string()).status == 2);
}

TEST_CASE("unknown design id lists the valid ids") {
  const auto cfg = scratch("unknown.json");
  write(cfg, R"({"designs": ["boin2"], "scenarios": [{"name": "s", "J": 1, "K": 1, "rates": [[0.3]]}]})");
  const std::string cmd = std::string(COMBOTRIAL_BIN) + " simulate --config " + cfg.string() + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out(4096, '\0');
  out.resize(std::fread(out.data(), 1, out.size(), p));
  pclose(p);
  CHECK(out.find("boin2") != std::string::npos);
  for (const auto& id : design_ids()) CHECK(out.find(id) != std::string::npos);
}

TEST_CASE("decide") {
  const auto h = scratch("empty.json");
  write(h, R"({"design": "cboin"})");
  const auto text = run("decide --format text " + h.string());
  CHECK(text.status == 0);
  CHECK(text.out.rfind("(1,1), start-up\n", 0) == 0);

  // boundary-crossing data: 2/3 at (2,2) de-escalates, matching the interval rule
  write(h, R"({"design": "cboin", "cohorts": [{"dose": {"j": 1, "k": 1}, "patients": 3, "dlts": 0},
              {"dose": {"j": 2, "k": 1}, "patients": 3, "dlts": 0},
              {"dose": {"j": 2, "k": 2}, "patients": 3, "dlts": 2}]})");
  const auto r = run("decide " + h.string());
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  const auto hist = history_from_json(read_json_file(h));
  const auto design = make_design(hist.design, hist.grid, hist.config.phi);
  const auto rec = recommend(*design, replay(hist.grid, hist.cohorts), hist.config, hist.seed);
  CHECK(j == to_json(rec));
  const Dose d = dose_from_json(j.at("decision").at("dose"));
  CHECK(d.j + d.k < 4);
}

TEST_CASE("boundary table") {
  const auto a = run("boundary-table --design cboin --phi 0.3 --cap 12");
  CHECK(a.status == 0);
  CHECK(a.out == run("boundary-table --design cboin --phi 0.3 --cap 12").out);
  CHECK(a.out.find("\n3,0,2\n") != std::string::npos);
  CHECK(run("boundary-table --cap 0").out == "n,escalate_if_y_le,deescalate_if_y_ge\n");
  CHECK(run("boundary-table --design ckeyboard --cap 5").status == 0);
  CHECK(run("boundary-table --design other").status == 2);
}

TEST_CASE("simulate then report round trip") {
  const auto cfg = scratch("one.json");
  write(cfg, R"({"designs": ["cboin"], "reps": 1,
                 "scenarios": [{"name": "S1", "J": 5, "K": 3,
                   "rates": [[0.05,0.1,0.15,0.3,0.45],[0.1,0.15,0.3,0.45,0.55],[0.15,0.3,0.45,0.55,0.6]]}]})");
  const auto csv = scratch("one.csv");
  REQUIRE(run("simulate --quiet --config " + cfg.string() + " --out " + csv.string()).status == 0);
  std::ifstream in(csv);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = metrics_from_csv(ss.str());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].reps == 1);
  // seed defaults to 0 when neither the config nor the flag sets it
  CHECK(run("simulate --quiet --config " + cfg.string()).out == ss.str());
  CHECK(run("simulate --quiet --seed 0 --config " + cfg.string()).out == ss.str());
  CHECK(run("simulate --quiet --threads 3 --config " + cfg.string()).out == ss.str());

  const auto rep = run("report --format csv --results " + csv.string());
  REQUIRE(rep.status == 0);
  const auto cmp = report::compare(rows, "main");
  CHECK(rep.out == report::to_csv(cmp));
  char line[128];
  std::snprintf(line, sizeof line, "cboin,S1,1,S_C,%.6f,0.70,", rows[0].S_C);
  CHECK(rep.out.find(line) != std::string::npos);
  CHECK(run("report --format md --results " + csv.string()).status == 0);
  CHECK(run("report --setting early-stop --results " + csv.string()).status == 0);
}

TEST_CASE("shipped configs load") {
  for (const auto& entry : fs::directory_iterator(fs::path(COMBO_SOURCE_DIR) / "configs")) {
    CAPTURE(entry.path().string());
    const auto spec = study_from_json(read_json_file(entry.path()), entry.path().parent_path());
    for (const auto& d : spec.designs) {
      // scenario-independent designs only need building once per grid
      for (const auto& sc : spec.scenarios) {
        CHECK(make_design(d, sc.grid(), spec.cfg.phi, &sc) != nullptr);
        if (!design_uses_truth(d)) break;
      }
    }
  }
}
