#include "combo/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <regex>
#include <set>

#include "combo/error.hpp"

namespace combo::report {

const std::vector<std::string>& metrics() {
  static const std::vector<std::string> m{"S_C", "S_OT", "A_C", "A_OT"};
  return m;
}

const std::vector<std::string>& settings() {
  static const std::vector<std::string> s{"main", "early-stop"};
  return s;
}

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool higher_is_better(const std::string& metric) { return metric == "S_C" || metric == "A_C"; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const char* mark_name(Mark m) {
  switch (m) {
    case Mark::best: return "best";
    case Mark::worst: return "worst";
    default: return "";
  }
}

}  // namespace

std::optional<std::string> reference_design(const std::string& label) {
  static const std::map<std::string, std::string> alias{
      {"i2d", "I2D"},         {"copula", "Copula"}, {"hierarchy", "Hierarchy.1"},
      {"pocrm", "POCRM"},     {"dfcomb", "DFCOMB"}, {"gcrm", "gCRM.1"},
      {"bcrm", "bCRM"},       {"cboin", "cBOIN"},   {"ckeyboard", "cKeyboard"},
      {"hierarchy.1", "Hierarchy.1"}, {"gcrm.1", "gCRM.1"}};
  const auto it = alias.find(lower(label));
  if (it == alias.end()) return std::nullopt;
  return it->second;
}

std::optional<int> reference_scenario(const std::string& name) {
  static const std::regex re(R"(^\s*(?:scenario[\s_-]*|s)?0*(\d+)\s*$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  const int n = std::stoi(m[1].str());
  if (n < 1 || n > 10) return std::nullopt;
  return n;
}

std::optional<ReferenceCell> reference_value(const std::string& setting, const std::string& metric,
                                             const std::string& design, int scenario) {
  if (scenario < 1 || scenario > 10) return std::nullopt;
  for (const auto& r : reference_table()) {
    if (r.setting == setting && r.metric == metric && r.design == design) {
      return r.cells[std::size_t(scenario - 1)];
    }
  }
  return std::nullopt;
}

Comparison compare(const std::vector<MetricsRow>& results, const std::string& setting) {
  require(std::find(settings().begin(), settings().end(), setting) != settings().end(),
          ErrorCode::config_error, "unknown reference setting '" + setting + "' (main, early-stop)");
  Comparison out;
  out.setting = setting;
  std::set<std::string> warned;
  auto warn = [&](const std::string& w) {
    if (warned.insert(w).second) out.warnings.push_back(w);
  };
  std::set<int> covered;
  for (const auto& r : results) {
    const auto column = reference_scenario(r.scenario);
    if (!column) {
      warn("scenario '" + r.scenario + "' has no reference column; omitted");
      continue;
    }
    const auto design = reference_design(r.design);
    if (!design || !reference_value(setting, "S_C", *design, *column)) {
      warn("design '" + r.design + "' has no " + setting + " reference row; omitted");
      continue;
    }
    covered.insert(*column);
    const std::map<std::string, double> got{{"S_C", r.S_C}, {"S_OT", r.S_OT}, {"A_C", r.A_C}, {"A_OT", r.A_OT}};
    for (const auto& m : metrics()) {
      const auto ref = *reference_value(setting, m, *design, *column);
      ComparisonRow row;
      row.design = r.design;
      row.scenario = r.scenario;
      row.column = *column;
      row.metric = m;
      row.result = got.at(m);
      row.reference = ref.value;
      row.delta = row.result - ref.value;
      row.reference_mark = ref.mark;
      out.rows.push_back(std::move(row));
    }
  }
  for (int s = 1; s <= 10; ++s) {
    if (!covered.count(s)) warn("reference scenario " + std::to_string(s) + " missing from results");
  }
  // best/worst among the compared designs, per scenario and metric
  std::map<std::pair<int, std::string>, std::vector<ComparisonRow*>> groups;
  for (auto& row : out.rows) groups[{row.column, row.metric}].push_back(&row);
  for (auto& [key, rows] : groups) {
    if (rows.size() < 2) continue;
    double lo = rows.front()->result, hi = lo;
    for (auto* r : rows) {
      lo = std::min(lo, r->result);
      hi = std::max(hi, r->result);
    }
    if (hi - lo < 1e-12) continue;
    const bool up = higher_is_better(key.second);
    for (auto* r : rows) {
      r->best = std::abs(r->result - (up ? hi : lo)) < 1e-12;
      r->worst = std::abs(r->result - (up ? lo : hi)) < 1e-12;
    }
  }
  return out;
}

std::string to_csv(const Comparison& c) {
  std::string s = "design,scenario,column,metric,result,reference,delta,best,worst,reference_mark\n";
  for (const auto& r : c.rows) {
    s += r.design + "," + r.scenario + "," + std::to_string(r.column) + "," + r.metric + "," +
         fmt("%.6f", r.result) + "," + fmt("%.2f", r.reference) + "," + fmt("%+.6f", r.delta) + "," +
         (r.best ? "1" : "0") + "," + (r.worst ? "1" : "0") + "," + mark_name(r.reference_mark) + "\n";
  }
  return s;
}

std::string to_markdown(const Comparison& c) {
  std::string s = "# Comparison with published operating characteristics (" + c.setting + " setting)\n\n";
  s += "Cells read `result (reference, delta)`. `+` marks the best and `-` the worst result among the\n"
       "compared designs; `[best]`/`[worst]` repeat the published marking.\n";
  std::vector<int> columns;
  std::vector<std::string> designs;
  for (const auto& r : c.rows) {
    if (std::find(columns.begin(), columns.end(), r.column) == columns.end()) columns.push_back(r.column);
    if (std::find(designs.begin(), designs.end(), r.design) == designs.end()) designs.push_back(r.design);
  }
  std::sort(columns.begin(), columns.end());
  for (const auto& m : metrics()) {
    s += "\n## " + m + "\n\n| design |";
    for (int col : columns) s += " " + std::to_string(col) + " |";
    s += "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) s += "---|";
    s += "\n";
    for (const auto& d : designs) {
      s += "| " + d + " |";
      for (int col : columns) {
        const auto it = std::find_if(c.rows.begin(), c.rows.end(), [&](const ComparisonRow& r) {
          return r.design == d && r.column == col && r.metric == m;
        });
        if (it == c.rows.end()) {
          s += " |";
          continue;
        }
        s += " " + fmt("%.6f", it->result) + " (" + fmt("%.2f", it->reference) + ", " +
             fmt("%+.4f", it->delta) + ")";
        if (it->best) s += " +";
        if (it->worst) s += " -";
        if (it->reference_mark != Mark::none) s += std::string(" [") + mark_name(it->reference_mark) + "]";
        s += " |";
      }
      s += "\n";
    }
  }
  if (!c.warnings.empty()) {
    s += "\n## Warnings\n\n";
    for (const auto& w : c.warnings) s += "- " + w + "\n";
  }
  return s;
}

}  // namespace combo::report
