// sutured: rank tables, verification suites, orbit catalogs and figures for
// the pseudo-Anosov mapping torus model.
//
// Exit codes: 0 success, 1 config error, 2 oracle or count mismatch,
// 3 verification failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sutured/sutured.hpp"

using namespace sutured;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 1, kMismatch = 2, kVerification = 3 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidModel: return kConfig;
    case ErrorCode::OracleMismatch:
    case ErrorCode::OrbitCountMismatch:
    case ErrorCode::InconsistentIdentification: return kMismatch;
    default: return kVerification;
  }
}

// Flag values; unset ones leave the config file (or the defaults) alone.
struct Flags {
  std::optional<std::string> config_path;
  std::optional<int> n, h_max, s_max;
  std::optional<double> mu, eps, a, N, r_sing, R, R_star, c, eps_chi;
  std::optional<std::string> theory, suite, what, format, out;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::optional<double>> tol;
};

const char* const kTolKeys[] = {"ode_rel", "ode_abs", "newton", "dedup", "quad", "pullback",
                                "flow", "identity", "action", "degenerate", "area"};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (see docs/config.schema.json)");
  cmd->add_option("--n", f.n, "number of prongs");
  cmd->add_option("--mu", f.mu);
  cmd->add_option("--eps", f.eps);
  cmd->add_option("--a", f.a);
  cmd->add_option("--N", f.N);
  cmd->add_option("--r-sing", f.r_sing);
  cmd->add_option("--R", f.R);
  cmd->add_option("--R-star", f.R_star);
  cmd->add_option("--c", f.c, "saddle radius");
  cmd->add_option("--format", f.format, "json or csv");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
  cmd->add_option("--seed", f.seed);
  for (const char* key : kTolKeys) {
    std::string flag = std::string("--tol-") + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    cmd->add_option(flag, f.tol[key]);
  }
}

json merged_config(const std::string& command, const Flags& f) {
  json j = json::object();
  if (f.config_path) {
    std::ifstream in(*f.config_path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + *f.config_path);
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ConfigError, *f.config_path + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  }
  j["command"] = command;
  auto set = [&](json& obj, const char* key, const auto& v) {
    if (v) obj[key] = *v;
  };
  json& model = j["model"];
  if (model.is_null()) model = json::object();
  set(model, "n", f.n);
  set(model, "mu", f.mu);
  set(model, "eps", f.eps);
  set(model, "a", f.a);
  set(model, "N", f.N);
  set(model, "r_sing", f.r_sing);
  set(model, "R", f.R);
  set(model, "R_star", f.R_star);
  set(model, "c", f.c);
  for (const auto& [key, v] : f.tol) {
    if (!v) continue;
    if (!model.contains("tolerances")) model["tolerances"] = json::object();
    model["tolerances"][key] = *v;
  }
  set(j, "theory", f.theory);
  set(j, "h_max", f.h_max);
  set(j, "s_max", f.s_max);
  set(j, "suite", f.suite);
  set(j, "what", f.what);
  set(j, "format", f.format);
  set(j, "out", f.out);
  set(j, "eps_chi", f.eps_chi);
  set(j, "seed", f.seed);
  return j;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + cfg.out);
  out << text;
}

void emit_json(const RunConfig& cfg, const json& doc) {
  const auto errs = schema::errors(doc, schema::output_schema());
  if (!errs.empty()) {
    std::string msg = "output failed schema validation:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  emit(cfg, doc.dump(2) + "\n");
}

TorusModel build_model(const RunConfig& cfg) { return TorusModel(cfg.model); }

int cmd_ranks(const RunConfig& cfg) {
  const TorusModel m = build_model(cfg);
  const int h_max = cfg.effective_h_max();
  const RankTable t = rank_table(cfg.theory, build_orbits(m), h_max);

  // closed forms: C(n-1, h); n-1 for h >= 1; coefficients of prod_s (1 + x^s)^{n-1}
  std::vector<BigInt> expected(h_max + 1, 0);
  std::string formula;
  const int n = m.n();
  switch (cfg.theory) {
    case Theory::ECH: {
      formula = "binomial(n-1, h)";
      BigInt b = 1;
      for (int h = 0; h <= std::min(h_max, n - 1); ++h) {
        expected[h] = b;
        b = b * (n - 1 - h) / (h + 1);
      }
      break;
    }
    case Theory::CYL:
      formula = "n-1 for h >= 1";
      for (int h = 1; h <= h_max; ++h) expected[h] = n - 1;
      break;
    case Theory::CH: {
      formula = "[x^h] prod_s (1 + x^s)^(n-1)";
      expected = ch_generating_series(n, h_max).c;
      break;
    }
  }
  const bool matches = t.entries == expected;

  if (cfg.format == "csv") {
    emit(cfg, to_csv(t));
  } else {
    json exp = json::array();
    for (const auto& e : expected) exp.push_back(bigint_json(e));
    emit_json(cfg, {{"command", "ranks"}, {"config", cfg}, {"table", t},
                    {"oracle", {{"matches", matches}, {"expected", exp}, {"formula", formula}}}});
  }
  if (!matches) {
    std::cerr << "sutured: rank table does not match " << formula << "\n";
    return kMismatch;
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const TorusModel m = build_model(cfg);
  std::vector<SuiteReport> reports;
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "dynamics") reports.push_back(run_dynamics_suite(m, cfg.samples, cfg.seed));
  if (all || cfg.suite == "contact") reports.push_back(run_contact_suite(m, cfg.samples, cfg.eps_chi, cfg.seed));
  if (all || cfg.suite == "gluing") reports.push_back(run_gluing_suite(m));
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass();

  if (cfg.format == "csv")
    emit(cfg, to_csv(reports));
  else
    emit_json(cfg, {{"command", "verify"}, {"config", cfg}, {"pass", pass}, {"suites", reports}});
  if (!pass) {
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        if (!c.pass) std::cerr << "sutured: " << r.suite << "/" << c.name << " failed\n";
    return kVerification;
  }
  return kOk;
}

json complex_json(const std::complex<double>& z) {
  if (z.imag() == 0.0) return z.real();
  return {{"re", z.real()}, {"im", z.imag()}};
}

int cmd_orbits(const RunConfig& cfg) {
  const TorusModel m = build_model(cfg);
  const OrbitCatalog cat = build_orbits(m);
  json orbits = json::array();
  std::string csv = "label,s,action,class,cz_index,good\n";
  for (const ReebOrbit& o : cat) {
    json j = o;
    const auto ev = eigenvalues(o.return_map);
    j["eigenvalues"] = {complex_json(ev[0]), complex_json(ev[1])};
    json its = json::array();
    for (int s = 1; s <= cfg.s_max; ++s) {
      const OrbitIterate it = iterate(o, s, m.tol().degenerate);
      its.push_back(it);
      csv += std::to_string(o.label) + "," + std::to_string(s) + "," + format_double(it.action) + "," +
             std::to_string(it.homology_class) + "," + std::to_string(it.cz_index) + "," +
             (it.is_good ? "true" : "false") + "\n";
    }
    j["iterates"] = its;
    orbits.push_back(j);
  }
  if (cfg.format == "csv")
    emit(cfg, csv);
  else
    emit_json(cfg, {{"command", "orbits"},
                    {"config", cfg},
                    {"expected_eigenvalues", {std::exp(-m.a() / m.eps()), std::exp(m.a() / m.eps())}},
                    {"orbits", orbits}});
  return kOk;
}

int cmd_plot(const RunConfig& cfg) {
  const TorusModel m = build_model(cfg);
  if (cfg.what == "levelsets")
    emit(cfg, levelsets_svg(m));
  else
    emit(cfg, gluing_svg(construct_gluing_data(m)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank tables, verification suites, orbit catalogs and figures for the mapping torus model"};
  app.require_subcommand(1, 1);
  Flags f;

  CLI::App* ranks = app.add_subcommand("ranks", "ECH / cylindrical / contact homology rank table");
  add_common(ranks, f);
  ranks->add_option("--theory", f.theory, "ech, cyl or ch");
  ranks->add_option("--hmax", f.h_max, "largest homology class (default n-1 for ech, else 20)");

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, f);
  verify->add_option("--suite", f.suite, "dynamics, contact, gluing or all");
  verify->add_option("--eps-chi", f.eps_chi, "flat margin of the cutoff pair");

  CLI::App* orbits = app.add_subcommand("orbits", "orbit catalog with iterates");
  add_common(orbits, f);
  orbits->add_option("--smax", f.s_max, "largest multiplicity");

  CLI::App* plot = app.add_subcommand("plot", "SVG figure");
  add_common(plot, f);
  plot->add_option("--what", f.what, "levelsets or gluing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = run_config_from_json(merged_config(command, f));
    if (command == "ranks") return cmd_ranks(cfg);
    if (command == "verify") return cmd_verify(cfg);
    if (command == "orbits") return cmd_orbits(cfg);
    return cmd_plot(cfg);
  } catch (const Error& e) {
    std::cerr << "sutured: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "sutured: " << e.what() << "\n";
    return kVerification;
  }
}
