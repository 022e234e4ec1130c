#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "combo/conduct.hpp"
#include "combo/designs/interval.hpp"
#include "combo/engine.hpp"
#include "combo/factory.hpp"
#include "combo/history.hpp"
#include "combo/report.hpp"

using namespace combo;

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeAbort = 3;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::config_error:
    case ErrorCode::parse_error:
    case ErrorCode::invalid_argument:
    case ErrorCode::out_of_grid:
    case ErrorCode::invalid_counts:
    case ErrorCode::not_found: return kConfigError;
    default: return kRuntimeAbort;
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorCode::not_found, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrorCode::invalid_argument, "cannot write " + path);
  out << text;
}

struct SimulateArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps, early_stop;
  bool early_stop_flag = false;
  int threads = 1;
  bool quiet = false;
};

int simulate(const SimulateArgs& a) {
  const json j = read_json_file(a.config);
  auto spec = study_from_json(j, std::filesystem::path(a.config).parent_path());
  if (a.seed) spec.cfg.seed = *a.seed;
  if (a.reps) spec.cfg.reps = *a.reps;
  if (a.early_stop_flag) spec.cfg.early_stop_n = a.early_stop.value_or(12);
  spec.cfg.validate();
  StudyOptions opts;
  opts.threads = a.threads;
  if (!a.quiet) {
    opts.progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 50 == 0) {
        std::fprintf(stderr, "\r%zu/%zu trials", done, total);
        if (done == total) std::fputc('\n', stderr);
      }
    };
  }
  const auto result = run_study(spec, opts);
  write_output(a.out, metrics_csv(result.rows));
  return 0;
}

int decide(const std::string& path, const std::string& format) {
  const auto h = history_from_json(parse_json(read_text(path), path));
  const auto design = make_design(h.design, h.grid, h.config.phi, nullptr);
  const auto state = replay(h.grid, h.cohorts);
  const auto rec = recommend(*design, state, h.config, h.seed);
  if (format == "json") {
    std::cout << to_json(rec).dump(2) << '\n';
    return 0;
  }
  const auto& d = rec.decision;
  if (d.terminates()) {
    std::cout << "terminate (" << d.reason << ")";
    if (rec.mtd && rec.mtd->selected) std::cout << ", MTD " << to_string(*rec.mtd->selected);
    std::cout << '\n';
  } else {
    std::cout << to_string(d.dose) << ", " << (d.phase == Phase::startup ? "start-up" : "model") << '\n';
    std::cout << "cohort size " << d.cohort_size << ", reason " << d.reason << '\n';
  }
  std::cout << "estimates (rows: agent B level k, columns: agent A level j)\n";
  for (int k = h.grid.K; k >= 1; --k) {
    for (int jj = 1; jj <= h.grid.J; ++jj) {
      const double v = rec.estimates({jj, k});
      char buf[16];
      if (std::isnan(v)) {
        std::snprintf(buf, sizeof buf, "%8s", "-");
      } else {
        std::snprintf(buf, sizeof buf, "%8.3f", v);
      }
      std::cout << buf;
    }
    std::cout << '\n';
  }
  return 0;
}

int report_cmd(const std::string& results, const std::string& setting, const std::string& format,
           const std::string& out) {
  const auto rows = metrics_from_csv(read_text(results));
  const auto cmp = report::compare(rows, setting);
  for (const auto& w : cmp.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  write_output(out, format == "csv" ? report::to_csv(cmp) : report::to_markdown(cmp));
  return 0;
}

struct BoundaryArgs {
  std::string design = "cboin";
  double phi = 0.3;
  int cap = 30;
  std::optional<double> phi1, phi2;
  double eps1 = 0.05, eps2 = 0.05;
  std::string out;
};

int boundary(const BoundaryArgs& a) {
  require(a.cap >= 0, ErrorCode::config_error, "--cap must be non-negative");
  std::vector<BoundaryRow> rows;
  if (a.design == "cboin") {
    const auto b = boin_boundaries(a.phi, a.phi1.value_or(0.6 * a.phi), a.phi2.value_or(1.4 * a.phi));
    rows = boundary_table([&](int y, int n) { return boin_direction(y, n, b); }, a.cap);
  } else if (a.design == "ckeyboard") {
    const auto k = keyboard_keys(a.phi, a.eps1, a.eps2);
    rows = boundary_table([&](int y, int n) { return keyboard_direction(y, n, k, {}); }, a.cap);
  } else {
    fail(ErrorCode::config_error, "--design must be cboin or ckeyboard");
  }
  write_output(a.out, boundary_table_csv(rows));
  return 0;
}

int serve(const std::string& host, int port, const std::string& dir) {
  conduct::TrialService service(dir);
  std::fprintf(stderr, "serving %zu trial(s) from %s on http://%s:%d\n", service.size(), dir.c_str(),
               host.c_str(), port);
  if (!conduct::serve(service, host, port)) {
    std::fprintf(stderr, "error: cannot listen on %s:%d\n", host.c_str(), port);
    return kRuntimeAbort;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combination dose-finding designs: simulation, reporting and trial conduct"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "run a simulation study and write the metrics CSV");
  s->add_option("--config", sim.config, "study config JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--out", sim.out, "output CSV (default stdout)");
  s->add_option("--seed", sim.seed, "base seed (overrides the config; default 0)");
  s->add_option("--reps", sim.reps, "replications per design and scenario")->check(CLI::PositiveNumber);
  s->add_option("--threads", sim.threads, "worker threads")->check(CLI::PositiveNumber);
  auto* es = s->add_option("--early-stop", sim.early_stop, "stop at N patients on the recommended dose (default 12)")
                 ->expected(0, 1);
  s->add_flag("--quiet", sim.quiet, "no progress on stderr");

  std::string history, dformat = "json";
  auto* d = app.add_subcommand("decide", "recommend the next dose for a trial history");
  d->add_option("history", history, "history JSON")->required();
  d->add_option("--format", dformat, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string results, setting = "main", rformat = "md", rout;
  auto* r = app.add_subcommand("report", "compare a metrics CSV against the published tables");
  r->add_option("--results", results, "metrics CSV from simulate")->required();
  r->add_option("--setting", setting, "main or early-stop")->check(CLI::IsMember({"main", "early-stop"}));
  r->add_option("--format", rformat, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  r->add_option("--out", rout, "output file (default stdout)");

  BoundaryArgs ba;
  auto* b = app.add_subcommand("boundary-table", "print the interval design decision chart");
  b->add_option("--design", ba.design, "cboin or ckeyboard")->check(CLI::IsMember({"cboin", "ckeyboard"}));
  b->add_option("--phi", ba.phi, "target toxicity rate");
  b->add_option("--cap", ba.cap, "largest n in the chart");
  b->add_option("--phi1", ba.phi1, "cBOIN sub-therapeutic rate (default 0.6 phi)");
  b->add_option("--phi2", ba.phi2, "cBOIN overly toxic rate (default 1.4 phi)");
  b->add_option("--eps1", ba.eps1, "cKeyboard lower half-width");
  b->add_option("--eps2", ba.eps2, "cKeyboard upper half-width");
  b->add_option("--out", ba.out, "output file (default stdout)");

  std::string host = "127.0.0.1", data_dir = "trials";
  int port = 8080;
  auto* sv = app.add_subcommand("serve", "run the trial conduct HTTP API");
  sv->add_option("--host", host);
  sv->add_option("--port", port);
  sv->add_option("--data-dir", data_dir, "session log directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*s) {
      sim.early_stop_flag = es->count() > 0;
      return simulate(sim);
    }
    if (*d) return decide(history, dformat);
    if (*r) return report_cmd(results, setting, rformat, rout);
    if (*b) return boundary(ba);
    if (*sv) return serve(host, port, data_dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeAbort;
  }
  return 0;
}
