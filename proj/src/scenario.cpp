#include "tz/scenario.hpp"

#include "tz/lagrangian.hpp"
#include "tz/liealg.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace tz::scenario {

namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) config_error(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

template <class T>
T get_as(const nlohmann::json& v, const char* what) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    config_error(std::string("wrong type for ") + what);
  }
}

twistor::Sign sign_from_string(const std::string& s) {
  if (s == "+" || s == "plus") return twistor::Sign::Plus;
  if (s == "-" || s == "minus") return twistor::Sign::Minus;
  config_error("unknown sign '" + s + "' (expected + or -)");
}

json sample_json(const lagrangian::CandidateChart& c, const lagrangian::SampleIndex& s) {
  if (s.i < 0) return nullptr;
  return json{{"u", c.u(s.i)}, {"v", c.v(s.j)}, {"theta", c.t(s.k)}, {"lambda", s.lambda}};
}

json grid_json(const surface::GridMax& m) { return json{{"u", m.u}, {"v", m.v}}; }

Defect upper(std::string name, double value, double tol, json argmax = nullptr) {
  return {std::move(name), value, tol, value < tol, std::move(argmax)};
}

}  // namespace

const char* to_string(Check c) {
  switch (c) {
    case Check::Superminimal: return "superminimal";
    case Check::Lagrangian: return "lagrangian";
    case Check::MinimalL: return "minimal-L";
    case Check::Converse: return "converse";
    case Check::Lie: return "lie";
  }
  return "?";
}

Check check_from_string(const std::string& name) {
  for (Check c : all_checks())
    if (name == to_string(c)) return c;
  config_error("unknown check '" + name + "'");
}

const std::vector<Check>& all_checks() {
  static const std::vector<Check> order{Check::Superminimal, Check::Lagrangian, Check::MinimalL, Check::Converse,
                                        Check::Lie};
  return order;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "?";
}

void Tolerances::set(const std::string& key, double value) {
  if (!(value >= std::numeric_limits<double>::epsilon()) || !std::isfinite(value))
    config_error("tolerance '" + key + "' must be at least machine epsilon");
  double* slot = key == "vertical"            ? &vertical
                 : key == "indicatrix"        ? &indicatrix
                 : key == "holonomy"          ? &holonomy
                 : key == "lagrangian"        ? &lagrangian
                 : key == "mean_curvature"    ? &mean_curvature
                 : key == "containment"       ? &containment
                 : key == "finite_difference" ? &finite_difference
                 : key == "lie"               ? &lie
                                              : nullptr;
  if (!slot) config_error("unknown tolerance '" + key + "'");
  *slot = value;
}

json Tolerances::to_json() const {
  return json{{"vertical", vertical},       {"indicatrix", indicatrix},         {"holonomy", holonomy},
              {"lagrangian", lagrangian},   {"mean_curvature", mean_curvature}, {"containment", containment},
              {"finite_difference", finite_difference}, {"lie", lie}};
}

json ScenarioConfig::to_json() const {
  json j;
  j["schema"] = kConfigSchema;
  j["model"] = model ? json(geom::to_string(*model)) : json(nullptr);
  if (surface) {
    json s;
    if (!surface->builtin.empty()) s["builtin"] = surface->builtin;
    else s["formulas"] = surface->formulas;
    s["domain"] = {surface->domain.u0, surface->domain.u1, surface->domain.v0, surface->domain.v1};
    s["grid"] = {surface->grid.nu, surface->grid.nv};
    j["surface"] = s;
  } else {
    j["surface"] = nullptr;
  }
  j["lambda"] = lambdas;
  json signs_j = json::array();
  for (auto s : signs) signs_j.push_back(twistor::to_string(s));
  j["signs"] = signs_j;
  j["n_theta"] = n_theta;
  j["tolerances"] = tolerances.to_json();
  json checks_j = json::array();
  for (Check c : checks) checks_j.push_back(to_string(c));
  j["checks"] = checks_j;
  return j;
}

ScenarioConfig builtin_config(const std::string& name, std::vector<Check> checks) {
  const surface::CorpusEntry& e = surface::corpus_entry(name);
  ScenarioConfig c;
  c.model = e.model;
  c.surface = SurfaceSpec{e.name, e.formulas, e.domain, surface::Grid{}};
  c.checks = std::move(checks);
  return c;
}

ScenarioConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  reject_unknown_keys(doc, {"schema", "model", "surface", "lambda", "signs", "n_theta", "tolerances", "checks"},
                      "config");
  if (doc.contains("schema") && get_as<std::string>(doc["schema"], "schema") != kConfigSchema)
    config_error(std::string("unsupported config schema (expected ") + kConfigSchema + ")");

  ScenarioConfig c;
  if (doc.contains("model") && !doc["model"].is_null()) {
    try {
      c.model = geom::model_kind_from_string(get_as<std::string>(doc["model"], "model"));
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  if (doc.contains("surface") && !doc["surface"].is_null()) {
    const auto& s = doc["surface"];
    SurfaceSpec spec;
    if (s.is_string()) {
      spec.builtin = s.get<std::string>();
    } else if (s.is_object()) {
      reject_unknown_keys(s, {"builtin", "formulas", "domain", "grid"}, "surface");
      if (s.contains("builtin") == s.contains("formulas"))
        config_error("surface needs exactly one of 'builtin' or 'formulas'");
      if (s.contains("builtin")) spec.builtin = get_as<std::string>(s["builtin"], "surface.builtin");
      if (s.contains("formulas")) {
        const auto f = get_as<std::vector<std::string>>(s["formulas"], "surface.formulas");
        if (f.size() != 4) config_error("surface.formulas needs four expressions");
        for (int k = 0; k < 4; ++k) spec.formulas[k] = f[k];
      }
      if (s.contains("domain")) {
        const auto d = get_as<std::vector<double>>(s["domain"], "surface.domain");
        if (d.size() != 4) config_error("surface.domain is [u0, u1, v0, v1]");
        spec.domain = {d[0], d[1], d[2], d[3]};
      }
      if (s.contains("grid")) {
        const auto g = get_as<std::vector<int>>(s["grid"], "surface.grid");
        if (g.size() != 2) config_error("surface.grid is [nu, nv]");
        spec.grid = {g[0], g[1]};
      }
    } else {
      config_error("surface must be a built-in name or an object");
    }
    if (!spec.builtin.empty()) {
      if (!surface::is_corpus_name(spec.builtin)) config_error("unknown built-in surface '" + spec.builtin + "'");
      const auto& e = surface::corpus_entry(spec.builtin);
      spec.formulas = e.formulas;
      if (!(s.is_object() && s.contains("domain"))) spec.domain = e.domain;
      if (c.model && *c.model != e.model)
        config_error("model does not match the built-in surface '" + spec.builtin + "'");
      c.model = e.model;
    }
    c.surface = spec;
  }
  if (doc.contains("lambda")) {
    const auto& l = doc["lambda"];
    c.lambdas = l.is_number() ? std::vector<double>{l.get<double>()} : get_as<std::vector<double>>(l, "lambda");
  }
  if (doc.contains("signs")) {
    c.signs.clear();
    for (const auto& s : get_as<std::vector<std::string>>(doc["signs"], "signs")) c.signs.push_back(sign_from_string(s));
  }
  if (doc.contains("n_theta")) c.n_theta = get_as<int>(doc["n_theta"], "n_theta");
  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    if (!t.is_object()) config_error("tolerances must be an object");
    for (auto it = t.begin(); it != t.end(); ++it) c.tolerances.set(it.key(), get_as<double>(it.value(), "tolerance"));
  }
  if (doc.contains("checks")) {
    const auto& ch = doc["checks"];
    if (ch.is_string() && ch.get<std::string>() == "all") {
      c.checks = all_checks();
    } else {
      for (const auto& n : get_as<std::vector<std::string>>(ch, "checks")) c.checks.push_back(check_from_string(n));
    }
  } else {
    c.checks = all_checks();
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

void validate(const ScenarioConfig& c) {
  if (c.lambdas.empty()) config_error("lambda list is empty");
  for (double l : c.lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) config_error("lambda values must be positive");
  if (c.signs.empty()) config_error("sign list is empty");
  if (c.n_theta < 4) config_error("n_theta must be at least 4");
  if (c.checks.empty()) config_error("no checks requested");
  std::set<Check> seen;
  for (Check k : c.checks)
    if (!seen.insert(k).second) config_error(std::string("check listed twice: ") + to_string(k));

  const bool needs_surface =
      std::any_of(c.checks.begin(), c.checks.end(), [](Check k) { return k != Check::Lie; });
  if (!needs_surface) return;
  if (!c.surface) config_error("these checks need a surface");
  if (!c.model) config_error("model is required for a formula surface");
  const SurfaceSpec& s = *c.surface;
  if (s.grid.nu < 4 || s.grid.nv < 4) config_error("grid must be at least 4x4");
  if (!(s.domain.u1 > s.domain.u0) || !(s.domain.v1 > s.domain.v0)) config_error("domain is empty");
  // Formula errors (syntax, unknown identifiers, domain violations) surface here.
  const surface::ImmersedSurface surf = make_surface(c);
  for (int i = 0; i < s.grid.nu; ++i)
    for (int j = 0; j < s.grid.nv; ++j) (void)surf.jet(surf.grid_u(i), surf.grid_v(j));
}

surface::ImmersedSurface make_surface(const ScenarioConfig& c) {
  const SurfaceSpec& s = *c.surface;
  return surface::ImmersedSurface::from_formulas(geom::ManifoldModel{*c.model}, s.formulas, s.domain, s.grid);
}

// ---------------------------------------------------------------------------

namespace {

void run_superminimal(const ScenarioConfig& c, CheckResult& r) {
  const Tolerances& t = c.tolerances;
  const surface::SuperminimalityReport s = surface::superminimality_sweep(make_surface(c));
  r.defects.push_back(upper("vertical_defect", s.vertical.value, t.vertical, grid_json(s.vertical)));
  r.defects.push_back(upper("indicatrix_circularity", s.indicatrix.value, t.indicatrix, grid_json(s.indicatrix)));
  r.defects.push_back(upper("holonomy_commutator", s.holonomy.value, t.holonomy, grid_json(s.holonomy)));
}

void run_lagrangian(const ScenarioConfig& c, CheckResult& r) {
  const lagrangian::LagrangianPatch patch = lagrangian::build_lift(make_surface(c), c.n_theta);
  const lagrangian::CandidateChart cand = lagrangian::as_candidate(patch);
  const lagrangian::DefectReport d = lagrangian::lagrangian_defect(cand, c.lambdas, c.signs);
  const double tol = c.tolerances.lagrangian;
  for (auto s : c.signs) {
    if (s == twistor::Sign::Plus)
      r.defects.push_back(upper("omega_plus", d.max_omega_plus, tol, sample_json(cand, d.argmax_plus)));
    else
      r.defects.push_back(upper("omega_minus", d.max_omega_minus, tol, sample_json(cand, d.argmax_minus)));
  }
  r.defects.push_back(upper("metric_defect", d.max_metric_defect, tol, sample_json(cand, d.argmax_metric)));
}

void run_minimal(const ScenarioConfig& c, CheckResult& r) {
  const lagrangian::LagrangianPatch patch = lagrangian::build_lift(make_surface(c), c.n_theta);
  const lagrangian::CandidateChart cand = lagrangian::as_candidate(patch);
  const lagrangian::MeanCurvatureReport m = lagrangian::mean_curvature_sweep(patch, c.lambdas);
  r.defects.push_back(
      upper("mean_curvature_L", m.max_norm, c.tolerances.mean_curvature, sample_json(cand, m.argmax)));
  r.detail = std::to_string(m.samples) + " interior samples";
}

void run_converse(const ScenarioConfig& c, CheckResult& r) {
  const Tolerances& t = c.tolerances;
  const lagrangian::LagrangianPatch patch = lagrangian::build_lift(make_surface(c), c.n_theta);
  const lagrangian::CandidateChart cand = lagrangian::as_candidate(patch);
  lagrangian::ConverseThresholds th;
  th.lagrangian = t.lagrangian;
  th.vertical = t.vertical;
  th.indicatrix = t.indicatrix;
  th.holonomy = t.holonomy;
  th.containment = t.containment;
  th.finite_difference = t.finite_difference;
  const lagrangian::ConverseReport rep = lagrangian::converse_check(cand, c.lambdas, th);
  auto stage = [&](const char* name, const lagrangian::StageResult& s) {
    Defect d{name, s.value, s.threshold, s.ran && s.pass, nullptr};
    if (!s.ran) d.argmax = json{{"skipped", true}};
    r.defects.push_back(d);
  };
  stage("stage_a_lagrangian", rep.lagrangian);
  r.defects.back().argmax = sample_json(cand, rep.defects.argmax_plus);
  // Rank stage: value is the smallest projected rank, which must equal 2.
  Defect rank{"stage_b_projected_rank", rep.rank.value, rep.rank.threshold, rep.rank.ran && rep.rank.pass, nullptr};
  if (!rep.rank.ran) rank.argmax = json{{"skipped", true}};
  r.defects.push_back(rank);
  stage("stage_c_superminimal_ratio", rep.superminimal);
  stage("stage_d_containment", rep.containment);
  const std::string failed = rep.failed_stage();
  r.detail = failed.empty() ? "all stages pass" : "failed at stage " + failed;
  if (!rep.rank.detail.empty()) r.detail += "; " + rep.rank.detail;
  if (!rep.superminimal.detail.empty()) r.detail += "; " + rep.superminimal.detail;
}

void run_lie(const ScenarioConfig& c, CheckResult& r) {
  for (const liealg::CheckReport& rep : liealg::run_all()) {
    bool lower_ok = true;
    for (const auto& i : rep.items)
      if (i.lower && !i.pass()) lower_ok = false;
    Defect d = upper(rep.name, rep.residual(), c.tolerances.lie);
    d.pass = d.pass && lower_ok;
    r.defects.push_back(d);
  }
}

}  // namespace

Report run_scenario(const ScenarioConfig& config) {
  validate(config);
  const auto t0 = Clock::now();
  Report rep;
  rep.config = config;
  std::vector<Check> order;
  for (Check k : all_checks())
    if (std::find(config.checks.begin(), config.checks.end(), k) != config.checks.end()) order.push_back(k);
  for (Check k : order) {
    CheckResult r;
    r.check = k;
    const auto t1 = Clock::now();
    try {
      switch (k) {
        case Check::Superminimal: run_superminimal(config, r); break;
        case Check::Lagrangian: run_lagrangian(config, r); break;
        case Check::MinimalL: run_minimal(config, r); break;
        case Check::Converse: run_converse(config, r); break;
        case Check::Lie: run_lie(config, r); break;
      }
      const bool ok = std::all_of(r.defects.begin(), r.defects.end(), [](const Defect& d) { return d.pass; });
      r.status = ok ? Status::Pass : Status::Fail;
    } catch (const Error& e) {
      r.status = Status::Error;
      r.error = std::string(tz::to_string(e.kind())) + ": " + e.what();
    }
    r.seconds = seconds_since(t1);
    rep.checks.push_back(std::move(r));
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == Status::Pass; });
}

int exit_code(const Report& report) { return report.all_pass() ? 0 : 1; }

json Report::to_json(bool timing) const {
  json j;
  j["schema"] = kReportSchema;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["config"] = config.to_json();
  json cs = json::array();
  for (const CheckResult& c : checks) {
    json cj;
    cj["check"] = to_string(c.check);
    cj["status"] = to_string(c.status);
    json ds = json::array();
    for (const Defect& d : c.defects)
      ds.push_back({{"name", d.name}, {"value", d.value}, {"tolerance", d.tolerance}, {"pass", d.pass},
                    {"argmax", d.argmax}});
    cj["defects"] = ds;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    if (c.status == Status::Error) cj["error"] = c.error;
    if (timing) cj["seconds"] = c.seconds;
    cs.push_back(cj);
  }
  j["checks"] = cs;
  j["status"] = all_pass() ? "pass" : "fail";
  if (timing) j["timing"] = {{"total_seconds", seconds}};
  return j;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "check,defect,value,tolerance,pass,argmax\n";
  for (const CheckResult& c : checks)
    for (const Defect& d : c.defects) {
      std::string where = d.argmax.is_null() ? "" : d.argmax.dump();
      std::string quoted = "\"";
      for (char ch : where) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      quoted += "\"";
      os << to_string(c.check) << ',' << d.name << ',' << d.value << ',' << d.tolerance << ','
         << (d.pass ? "true" : "false") << ',' << quoted << '\n';
    }
  return os.str();
}

json corpus_table() {
  json rows = json::array();
  for (const surface::CorpusEntry& e : surface::corpus()) {
    rows.push_back({{"name", e.name},
                    {"model", geom::to_string(e.model)},
                    {"formulas", e.formulas},
                    {"domain", {e.domain.u0, e.domain.u1, e.domain.v0, e.domain.v1}},
                    {"expected", surface::to_string(e.expected)},
                    {"provenance", e.provenance},
                    {"orientation", e.orientation}});
  }
  return json{{"schema", kCorpusSchema}, {"surfaces", rows}};
}

}  // namespace tz::scenario
