#include "combo/factory.hpp"

#include <algorithm>

#include "combo/designs/crm.hpp"
#include "combo/designs/interval.hpp"
#include "combo/designs/parametric.hpp"

namespace combo {

namespace {

struct Param {
  const char* name;
  const char* type;
  json fallback;
  const char* about;
};

struct Entry {
  const char* id;
  const char* title;
  const char* about;
  std::vector<Param> params;
};

json profile_p() { return main_profile().p; }
json profile_q() { return main_profile().q; }

const std::vector<Entry>& catalog() {
  static const std::vector<Entry> entries{
      {"i2d", "I2D", "Two-dimensional three-parameter model with a one-patient start-up.",
       {{"p", "number[]", profile_p(), "agent-A monotherapy toxicity"},
        {"q", "number[]", profile_q(), "agent-B monotherapy toxicity"},
        {"resolution", "integer", 61, "posterior grid nodes per parameter"},
        {"upper", "number", 5.0, "upper bound of the (alpha, beta) prior box"}}},
      {"copula", "Copula", "Clayton-type copula of the two monotherapy curves.",
       {{"p", "number[]", profile_p(), "agent-A monotherapy toxicity"},
        {"q", "number[]", profile_q(), "agent-B monotherapy toxicity"},
        {"c_e", "number", 0.8, "escalation cutoff on P(pi < phi)"},
        {"c_d", "number", 0.45, "de-escalation cutoff on P(pi > phi)"},
        {"resolution", "integer", 61, "posterior grid nodes per parameter"},
        {"upper", "number", 3.0, "upper bound of the prior box"},
        {"mtd_tried_only", "boolean", true, "restrict the final MTD to tried doses"}}},
      {"pocrm", "POCRM", "Partial-order CRM over six orderings with a zoned start-up.",
       {{"half_width", "number", 0.05, "skeleton indifference half-width"},
        {"mtd_position", "integer", 11, "skeleton prior MTD position (1-based)"}}},
      {"hierarchy", "Hierarchy", "Hierarchical beta-binomial model on effective doses.",
       {{"guess", "string|object", "profile", "prior guesses: profile, truth, shifted or {row, col}"},
        {"p", "number[]", profile_p(), "profile used by guess=profile"},
        {"q", "number[]", profile_q(), "profile used by guess=profile"},
        {"sigma2", "number", 10.0, "prior variance of the hyperparameters"},
        {"k_const", "number", 0.0, "scaling constant of the intercept priors; 0 means K"},
        {"ci_level", "number", 0.95, "level of the pooled-toxicity safety interval"},
        {"step", "number", 0.6, "sampler step for the intercepts"},
        {"slope_step", "number", 2.4, "sampler step for the slopes"},
        {"steps", "integer", 10000, "sampler steps including burn-in"},
        {"burnin", "integer", 2000, "sampler burn-in"}}},
      {"dfcomb", "DFCOMB", "Bayesian logistic model with interaction and diagonal start-up.",
       {{"p", "number[]", profile_p(), "agent-A monotherapy toxicity"},
        {"q", "number[]", profile_q(), "agent-B monotherapy toxicity"},
        {"c_e", "number", 0.85, "escalation cutoff on P(pi < phi)"},
        {"c_d", "number", 0.45, "de-escalation cutoff on P(pi > phi)"},
        {"delta", "number", 0.12, "half-width of the MTD window"},
        {"interaction", "boolean", true, "include the interaction coefficient"},
        {"step", "number[]", {0.5, 0.5, 0.5, 0.5}, "sampler steps per coefficient"},
        {"steps", "integer", 10000, "sampler steps including burn-in"},
        {"burnin", "integer", 2000, "sampler burn-in"}}},
      {"gcrm", "gCRM", "Proportional-odds CRM fitted row by row, patient by patient.",
       {{"guess", "string|object", "profile", "prior guesses: profile, truth, shifted or {row, col}"},
        {"p", "number[]", profile_p(), "profile used by guess=profile"},
        {"q", "number[]", profile_q(), "profile used by guess=profile"},
        {"mu_alpha", "number", -8.0, "prior mean of alpha_1"},
        {"mu_beta", "number", 1.0, "prior mean of beta"},
        {"sigma2_alpha", "number", 1.0, "prior variance of alpha_1"},
        {"sigma2_beta", "number", 1.0, "prior variance of beta"},
        {"stop_threshold", "number", 0.95, "stop when P(pi_11 > phi) exceeds this"},
        {"step", "number", 0.5, "sampler step"},
        {"steps", "integer", 10000, "sampler steps including burn-in"},
        {"burnin", "integer", 2000, "sampler burn-in"}}},
      {"bcrm", "bCRM", "Bootstrap-aggregated CRM over data-driven orderings.",
       {{"half_width", "number", 0.05, "skeleton indifference half-width"},
        {"mtd_position", "integer", 11, "skeleton prior MTD position (1-based)"},
        {"B", "integer", 500, "bootstrap samples per decision"},
        {"jitter_eps", "number", 1e-4, "rank jitter, shrunk below the smallest gap"},
        {"eps_neighborhood", "number", 0.12, "half-width of the MTD window"},
        {"c_e", "number", 0.85, "escalation cutoff on P(pi < phi)"},
        {"c_d", "number", 0.45, "de-escalation cutoff on P(pi > phi)"},
        {"prior", "number[2]", {1.0, 1.0}, "beta prior of the bootstrap estimates"}}},
      {"cboin", "cBOIN", "Combination BOIN interval design.",
       {{"phi1", "number", nullptr, "highest rate deemed sub-therapeutic; default 0.6 phi"},
        {"phi2", "number", nullptr, "lowest rate deemed overly toxic; default 1.4 phi"},
        {"prior", "number[2]", {1.0, 1.0}, "beta prior for isotonic estimates"}}},
      {"ckeyboard", "cKeyboard", "Combination Keyboard design.",
       {{"eps1", "number", 0.05, "target key lower half-width"},
        {"eps2", "number", 0.05, "target key upper half-width"},
        {"prior", "number[2]", {1.0, 1.0}, "beta prior for key masses"}}},
  };
  return entries;
}

const Entry& entry(const std::string& id) {
  for (const auto& e : catalog())
    if (id == e.id) return e;
  std::string list;
  for (const auto& i : design_ids()) list += (list.empty() ? "" : ", ") + i;
  fail(ErrorCode::config_error, "unknown design id '" + id + "' (valid ids: " + list + ")");
}

/// Parameter lookup with the catalog default.
class Params {
 public:
  Params(const json& spec, const Entry& e) : spec_(spec), e_(e) {}

  template <class T>
  T get(const char* name) const {
    try {
      if (spec_.contains(name)) return spec_.at(name).get<T>();
      for (const auto& p : e_.params)
        if (std::string(p.name) == name) return p.fallback.get<T>();
    } catch (const json::exception&) {
      fail(ErrorCode::config_error,
           std::string(e_.id) + ": parameter '" + name + "' has the wrong type");
    }
    fail(ErrorCode::config_error, std::string(e_.id) + ": no parameter '" + name + "'");
  }
  bool has(const char* name) const { return spec_.contains(name) && !spec_.at(name).is_null(); }
  const json& raw(const char* name) const {
    static const json none;
    return spec_.contains(name) ? spec_.at(name) : none;
  }

  MonoProfile profile() const {
    return {get<std::vector<double>>("p"), get<std::vector<double>>("q")};
  }
  SamplerSettings sampler() const { return {get<int>("steps"), get<int>("burnin")}; }
  BetaParams prior() const {
    const auto v = get<std::vector<double>>("prior");
    require(v.size() == 2, ErrorCode::config_error, std::string(e_.id) + ": prior needs [a, b]");
    return {v[0], v[1]};
  }

 private:
  const json& spec_;
  const Entry& e_;
};

}  // namespace

const std::vector<std::string>& design_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& e : catalog()) out.push_back(e.id);
    return out;
  }();
  return ids;
}

bool design_uses_truth(const json& spec) {
  if (!spec.is_object() || !spec.contains("guess") || !spec.at("guess").is_string()) return false;
  const auto g = spec.at("guess").get<std::string>();
  return g == "truth" || g == "shifted";
}

std::string design_label(const json& spec) {
  if (spec.contains("label")) return spec.at("label").get<std::string>();
  return spec.at("id").get<std::string>();
}

DesignPtr make_design(const json& spec, const DoseGrid& grid, double phi,
                      const ToxicityScenario* truth) {
  require(spec.is_object() && spec.contains("id") && spec.at("id").is_string(),
          ErrorCode::config_error, "design spec needs a string 'id'");
  const std::string id = spec.at("id").get<std::string>();
  const Entry& e = entry(id);
  std::vector<std::string> allowed{"id", "label"};
  for (const auto& p : e.params) allowed.push_back(p.name);
  check_keys(spec, allowed, "design '" + id + "'");
  require(phi > 0 && phi < 1, ErrorCode::config_error, "phi must lie in (0,1)");
  const Params P(spec, e);

  if (id == "i2d") {
    return std::make_shared<I2dDesign>(grid, P.profile(), P.get<int>("resolution"), P.get<double>("upper"));
  }
  if (id == "copula") {
    return std::make_shared<CopulaDesign>(
        grid, P.profile(),
        CopulaConfig{P.get<double>("c_e"), P.get<double>("c_d"), P.get<int>("resolution"),
                     P.get<double>("upper"), P.get<bool>("mtd_tried_only")});
  }
  if (id == "pocrm" || id == "bcrm") {
    SkeletonSpec sk{P.get<double>("half_width"), P.get<int>("mtd_position"), grid.size(), phi};
    if (id == "pocrm") return std::make_shared<PocrmDesign>(grid, sk);
    BcrmConfig bc;
    bc.prior = P.prior();
    bc.jitter_eps = P.get<double>("jitter_eps");
    bc.B = P.get<int>("B");
    bc.eps_neighborhood = P.get<double>("eps_neighborhood");
    bc.c_e = P.get<double>("c_e");
    bc.c_d = P.get<double>("c_d");
    return std::make_shared<BcrmDesign>(grid, sk, bc);
  }
  if (id == "hierarchy" || id == "gcrm") {
    const auto guess = resolve_guess(P.raw("guess"), grid, truth, P.profile());
    if (id == "hierarchy") {
      HierarchyConfig hc;
      hc.sigma2 = P.get<double>("sigma2");
      hc.k_const = P.get<double>("k_const");
      hc.ci_level = P.get<double>("ci_level");
      hc.step = P.get<double>("step");
      hc.slope_step = P.get<double>("slope_step");
      hc.sampler = P.sampler();
      return std::make_shared<HierarchyDesign>(grid, guess, hc);
    }
    GcrmConfig gc;
    gc.mu_alpha = P.get<double>("mu_alpha");
    gc.mu_beta = P.get<double>("mu_beta");
    gc.sigma2_alpha = P.get<double>("sigma2_alpha");
    gc.sigma2_beta = P.get<double>("sigma2_beta");
    gc.stop_threshold = P.get<double>("stop_threshold");
    gc.step = P.get<double>("step");
    gc.sampler = P.sampler();
    return std::make_shared<GcrmDesign>(grid, guess, gc);
  }
  if (id == "dfcomb") {
    DfcombConfig dc;
    dc.c_e = P.get<double>("c_e");
    dc.c_d = P.get<double>("c_d");
    dc.delta = P.get<double>("delta");
    dc.interaction = P.get<bool>("interaction");
    const auto step = P.get<std::vector<double>>("step");
    require(step.size() == 4, ErrorCode::config_error, "dfcomb: step needs four entries");
    std::copy(step.begin(), step.end(), dc.step.begin());
    dc.sampler = P.sampler();
    return std::make_shared<DfcombDesign>(grid, P.profile(), dc);
  }
  if (id == "cboin") {
    const double p1 = P.has("phi1") ? P.get<double>("phi1") : 0.6 * phi;
    const double p2 = P.has("phi2") ? P.get<double>("phi2") : 1.4 * phi;
    return std::make_shared<BoinDesign>(phi, p1, p2, P.prior());
  }
  return std::make_shared<KeyboardDesign>(phi, P.get<double>("eps1"), P.get<double>("eps2"), P.prior());
}

json design_catalog() {
  json out = json::array();
  for (const auto& e : catalog()) {
    json params = json::array();
    for (const auto& p : e.params) {
      params.push_back({{"name", p.name}, {"type", p.type}, {"default", p.fallback}, {"description", p.about}});
    }
    out.push_back({{"id", e.id}, {"name", e.title}, {"description", e.about}, {"parameters", params}});
  }
  return out;
}

}  // namespace combo
