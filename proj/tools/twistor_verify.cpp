// twistor-verify: run verification scenarios and print JSON reports.
//
// Exit status: 0 every requested check passes, 1 some check fails or errors,
// 2 the configuration or a surface formula is invalid.

#include "tz/expr.hpp"
#include "tz/scenario.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sc = tz::scenario;

namespace {

struct Overrides {
  std::vector<double> lambdas;
  std::string sign;
  std::string grid;
  int n_theta = 0;
  std::vector<std::string> tolerances;
  std::string csv;
  bool text = false;
  bool no_timing = false;
};

// Positive integer or -1.
int parse_count(const std::string& s) {
  int n = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  return ec == std::errc() && end == s.data() + s.size() ? n : -1;
}

void apply(const Overrides& o, sc::ScenarioConfig& c) {
  if (!o.lambdas.empty()) c.lambdas = o.lambdas;
  if (!o.sign.empty()) {
    if (o.sign == "+") c.signs = {tz::twistor::Sign::Plus};
    else if (o.sign == "-") c.signs = {tz::twistor::Sign::Minus};
    else if (o.sign == "both") c.signs = {tz::twistor::Sign::Plus, tz::twistor::Sign::Minus};
    else throw tz::Error(tz::ErrorKind::ConfigError, "--sign expects +, - or both");
  }
  if (!o.grid.empty()) {
    if (!c.surface) throw tz::Error(tz::ErrorKind::ConfigError, "--grid needs a surface");
    const auto x = o.grid.find_first_of("x,");
    const std::string a = o.grid.substr(0, x), b = x == std::string::npos ? a : o.grid.substr(x + 1);
    const int nu = parse_count(a), nv = parse_count(b);
    if (nu <= 0 || nv <= 0) throw tz::Error(tz::ErrorKind::ConfigError, "--grid expects N or NxM");
    c.surface->grid = {nu, nv};
  }
  if (o.n_theta) c.n_theta = o.n_theta;
  for (const std::string& kv : o.tolerances) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw tz::Error(tz::ErrorKind::ConfigError, "--tolerance expects key=value");
    double v = 0.0;
    try {
      v = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw tz::Error(tz::ErrorKind::ConfigError, "--tolerance value is not a number: " + kv);
    }
    c.tolerances.set(kv.substr(0, eq), v);
  }
}

sc::ScenarioConfig config_for(const std::string& target, std::vector<sc::Check> checks) {
  if (tz::surface::is_corpus_name(target)) return sc::builtin_config(target, std::move(checks));
  sc::ScenarioConfig c = sc::load_config(target);
  c.checks = std::move(checks);
  return c;
}

void print_text(const sc::Report& r, std::ostream& os) {
  for (const auto& c : r.checks) {
    os << sc::to_string(c.check) << ": " << sc::to_string(c.status);
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
    if (!c.error.empty()) os << "  error: " << c.error << "\n";
    for (const auto& d : c.defects)
      os << "  " << (d.pass ? "PASS " : "FAIL ") << d.name << " = " << d.value << " (tolerance " << d.tolerance
         << ")\n";
  }
  os << "overall: " << (r.all_pass() ? "pass" : "fail") << "\n";
}

int execute(sc::ScenarioConfig config, const Overrides& o) {
  apply(o, config);
  const sc::Report report = sc::run_scenario(config);
  if (o.text) print_text(report, std::cout);
  else std::cout << report.to_json(!o.no_timing).dump(2) << "\n";
  if (!o.csv.empty()) {
    std::ofstream out(o.csv);
    if (!out) throw tz::Error(tz::ErrorKind::ConfigError, "cannot write " + o.csv);
    out << report.to_csv();
  }
  return sc::exit_code(report);
}

int config_failure(const std::string& kind, const std::string& msg, long offset = -1) {
  sc::json j{{"schema", sc::kReportSchema}, {"status", "error"}, {"error", {{"kind", kind}, {"message", msg}}}};
  if (offset >= 0) j["error"]["offset"] = offset;
  std::cout << j.dump(2) << "\n";
  std::cerr << "twistor-verify: " << msg << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twistor-space verification of superminimal surfaces and their Lagrangian lifts"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--lambda", o.lambdas, "lambda values (comma separated or repeated)")->delimiter(',');
    sub->add_option("--sign", o.sign, "+, - or both");
    sub->add_option("--grid", o.grid, "surface grid N or NxM");
    sub->add_option("--n-theta", o.n_theta, "fiber circle samples");
    sub->add_option("--csv", o.csv, "write the defect table as CSV");
    sub->add_option("--tolerance", o.tolerances, "override a tolerance, key=value");
    sub->add_flag("--text", o.text, "human-readable table instead of JSON");
    sub->add_flag("--no-timing", o.no_timing, "omit timing fields from the report");
  };

  std::string config_path, target;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "config JSON")->required();
  add_common(run);

  auto* list = app.add_subcommand("list-corpus", "list the built-in surfaces");
  bool list_text = false;
  list->add_flag("--text", list_text, "human-readable table");

  auto* lie = app.add_subcommand("verify-lie", "exact so(5) suite");
  add_common(lie);

  auto* sm = app.add_subcommand("check-superminimal", "superminimality meters on a surface");
  sm->add_option("target", target, "built-in name or config path")->required();
  add_common(sm);
  auto* lag = app.add_subcommand("check-lagrangian", "Lagrangian defects of the lift");
  lag->add_option("target", target, "built-in name or config path")->required();
  add_common(lag);
  auto* mc = app.add_subcommand("mean-curvature-l", "mean curvature of the lift");
  mc->add_option("target", target, "built-in name or config path")->required();
  add_common(mc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      const sc::json t = sc::corpus_table();
      if (list_text) {
        for (const auto& r : t["surfaces"])
          std::cout << r["name"].get<std::string>() << "\t" << r["model"].get<std::string>() << "\t"
                    << r["expected"].get<std::string>() << "\t" << r["provenance"].get<std::string>() << "\n";
      } else {
        std::cout << t.dump(2) << "\n";
      }
      return 0;
    }
    if (*run) return execute(sc::load_config(config_path), o);
    if (*lie) {
      sc::ScenarioConfig c;
      c.checks = {sc::Check::Lie};
      return execute(c, o);
    }
    if (*sm) return execute(config_for(target, {sc::Check::Superminimal}), o);
    if (*lag) return execute(config_for(target, {sc::Check::Lagrangian}), o);
    if (*mc) return execute(config_for(target, {sc::Check::MinimalL}), o);
  } catch (const tz::expr::ExprError& e) {
    return config_failure(tz::to_string(e.kind()), e.what(), static_cast<long>(e.offset()));
  } catch (const tz::Error& e) {
    return config_failure(tz::to_string(e.kind()), e.what());
  }
  return 2;
}
