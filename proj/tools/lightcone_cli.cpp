// Command-line laboratory for spacelike surfaces in the future lightcone of
// 4-dimensional Lorentz-Minkowski space: catalog browsing, pointwise
// invariant evaluation, identity verification, compact-surface integral
// checks and Laplace spectra, with machine-readable reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lightcone/definition.hpp"
#include "lightcone/embed.hpp"
#include "lightcone/report.hpp"
#include "lightcone/sampling.hpp"
#include "lightcone/spectrum.hpp"
#include "lightcone/verify.hpp"

namespace lc = lightcone;

namespace {

struct RunConfig {
  std::string command;
  std::string surface = "example1_base";
  std::string definition;
  std::string factor;
  std::vector<std::string> params;
  std::string u_text = "-1,0,0,0";
  std::string grid;
  int random_n = -1;
  std::uint64_t seed = 20240801;
  int level = 5;
  int eigs = 6;
  double tol = 0.005;
  double cert_tol = 1e-6;
  std::string format = "json";
  std::string out;
  std::string export_off;
};

lc::Vec4 parse_u(const std::string& text) {
  lc::Vec4 u;
  double c[4];
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &c[0], &c[1], &c[2], &c[3]) != 4)
    throw lc::ConfigError("--u expects four comma-separated numbers t,x,y,z");
  u = {c[0], c[1], c[2], c[3]};
  return u;
}

std::pair<int, int> parse_grid(const std::string& text) {
  int w = 0, h = 0;
  if (std::sscanf(text.c_str(), "%dx%d", &w, &h) != 2 || w < 2 || h < 2)
    throw lc::ConfigError("--grid expects WxH with W, H >= 2");
  return {w, h};
}

lc::ParamMap parse_params(const std::vector<std::string>& kvs) {
  lc::ParamMap out;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw lc::ConfigError("--params expects name=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    try {
      out[key] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw lc::ConfigError("--params " + key + ": expected a number");
    }
  }
  return out;
}

lc::Surface build_surface(const RunConfig& cfg) {
  if (!cfg.definition.empty()) return lc::surface_from_definition_file(cfg.definition);
  std::optional<lc::ConformalFactor> sigma;
  if (!cfg.factor.empty()) sigma = lc::parse_sigma(cfg.factor);
  return lc::instantiate(cfg.surface, parse_params(cfg.params), std::move(sigma));
}

std::vector<lc::ChartPoint> build_sample(const RunConfig& cfg, const lc::Surface& s) {
  if (!cfg.grid.empty()) {
    if (s.domain != lc::DomainKind::rectangle)
      throw lc::ConfigError("--grid applies to rectangle-domain surfaces; use --random N");
    const auto [w, h] = parse_grid(cfg.grid);
    return lc::grid_points(s, w, h);
  }
  if (cfg.random_n >= 0) return lc::random_points(s, cfg.random_n, cfg.seed);
  return lc::default_sample(s, cfg.seed);
}

lc::Json config_echo(const RunConfig& cfg) {
  lc::Json j;
  j["command"] = cfg.command;
  j["surface"] = cfg.surface;
  j["definition"] = cfg.definition;
  j["factor"] = cfg.factor;
  lc::Json p = lc::Json::object();
  for (const auto& [k, v] : parse_params(cfg.params)) p[k] = v;
  j["params"] = p;
  j["u"] = cfg.u_text;
  j["grid"] = cfg.grid;
  j["random"] = cfg.random_n;
  j["seed"] = cfg.seed;
  j["level"] = cfg.level;
  j["eigs"] = cfg.eigs;
  j["tol"] = cfg.tol;
  j["format"] = cfg.format;
  return j;
}

void emit(const RunConfig& cfg, const lc::Report& report) {
  std::string text;
  if (cfg.format == "json") {
    text = report.to_json().dump(2);
    text += "\n";
  } else if (cfg.format == "csv") {
    text = report.to_csv();
  } else {
    // human
    text = std::string(lc::kToolName) + " " + lc::kToolVersion + "  command=" + cfg.command +
           " surface=" + cfg.surface + "\n";
    for (const lc::CheckRecord& c : report.checks) {
      char line[512];
      std::snprintf(line, sizeof(line), "[%-7s] %-32s %s\n", to_string(c.verdict), c.name.c_str(),
                    c.anchor.c_str());
      text += line;
      text += "          " + c.values.dump() + "\n";
    }
    if (!report.points.empty()) {
      text += "points: " + std::to_string(report.points.size()) + "\n";
      for (const lc::EvalRow& r : report.points) {
        char head[128];
        std::snprintf(head, sizeof(head), "  (%d, % .5f, % .5f)", r.chart, r.s, r.t);
        text += head;
        for (const auto& [k, v] : r.values) {
          char item[96];
          std::snprintf(item, sizeof(item), "  %s=%.12g", k.c_str(), v);
          text += item;
        }
        text += r.spacelike ? "\n" : "  NOT SPACELIKE\n";
      }
    }
    int npass = 0, nfail = 0, nskip = 0;
    for (const lc::CheckRecord& c : report.checks)
      (c.verdict == lc::Verdict::pass   ? npass
       : c.verdict == lc::Verdict::fail ? nfail
                                        : nskip)++;
    text += "summary: " + std::to_string(npass) + " pass, " + std::to_string(nfail) +
            " fail, " + std::to_string(nskip) + " skipped\n";
  }
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw lc::ConfigError("cannot open output file '" + cfg.out + "'");
    f << text;
  }
}

lc::Report run_catalog(const RunConfig& cfg) {
  lc::Report rep;
  rep.config = config_echo(cfg);
  for (const lc::CatalogEntry& e : lc::catalog()) {
    lc::Json v;
    v["summary"] = e.summary;
    v["domain"] = e.domain == lc::DomainKind::rectangle ? "rectangle" : "sphere_atlas";
    v["claims_lightcone"] = e.claims_lightcone;
    v["compact"] = e.compact;
    v["sigma"] = e.sigma_required ? "<required>" : e.sigma_text;
    lc::Json defaults = lc::Json::object();
    for (const auto& [k, val] : e.default_params) defaults[k] = val;
    v["default_params"] = defaults;
    if (e.expects_constant_K) v["constant_K"] = true;
    if (e.expected_umbilical.has_value()) v["umbilical"] = *e.expected_umbilical;
    try {
      if (!e.sigma_required) {
        const lc::Surface s = lc::instantiate(e.name);
        if (s.expected_K) v["expected_K"] = *s.expected_K;
      }
    } catch (const lc::Error&) {
    }
    rep.checks.push_back(lc::CheckRecord::skip(e.name, "catalog entry", v));
  }
  return rep;
}

lc::Report run_eval(const RunConfig& cfg) {
  lc::Report rep;
  rep.config = config_echo(cfg);
  const lc::Surface s = build_surface(cfg);
  const auto pts = build_sample(cfg, s);
  lc::FrameOptions fopt;
  fopt.u = parse_u(cfg.u_text);
  rep.points = lc::eval_rows(s, pts, fopt);
  int bad = 0;
  for (const auto& r : rep.points) bad += r.spacelike ? 0 : 1;
  rep.checks.push_back(lc::CheckRecord::make(
      "spacelike", "det g > 0 at every sample point", 0.0, bad == 0,
      lc::Json{{"points", rep.points.size()}, {"failures", bad}}));
  return rep;
}

lc::Report run_verify(const RunConfig& cfg) {
  lc::Report rep;
  rep.config = config_echo(cfg);
  const lc::Surface s = build_surface(cfg);
  const auto pts = build_sample(cfg, s);
  lc::VerifyOptions vopt;
  vopt.u = parse_u(cfg.u_text);
  vopt.tol_closed_form = cfg.cert_tol;
  vopt.tol_parallel = cfg.cert_tol;
  rep.checks = lc::verify_checks(s, pts, vopt);
  return rep;
}

lc::Report run_integrate(const RunConfig& cfg, bool with_spectrum_if_reilly = true) {
  lc::Report rep;
  rep.config = config_echo(cfg);
  const lc::Surface s = build_surface(cfg);
  const lc::Vec4 u = parse_u(cfg.u_text);
  const lc::EmbeddedMesh em = lc::embed(s, lc::build_icosphere(cfg.level), u);
  rep.checks = lc::integrate_checks(s, em, cfg.tol);
  if (!s.claims_lightcone && with_spectrum_if_reilly) {
    // the Reilly-form bound needs lambda1; solve the spectrum to report it
    lc::SpectrumResult spec;
    const auto spec_checks = lc::spectrum_checks(s, em, cfg.eigs, u, &spec);
    for (const auto& c : spec_checks)
      if (c.name == "reilly_form_offcone" || c.name == "spectrum_sanity")
        rep.checks.push_back(c);
  }
  if (!cfg.export_off.empty()) lc::write_off(em, cfg.export_off);
  return rep;
}

lc::Report run_spectrum(const RunConfig& cfg) {
  lc::Report rep;
  rep.config = config_echo(cfg);
  const lc::Surface s = build_surface(cfg);
  const lc::Vec4 u = parse_u(cfg.u_text);
  const lc::EmbeddedMesh em = lc::embed(s, lc::build_icosphere(cfg.level), u);
  rep.checks = lc::spectrum_checks(s, em, cfg.eigs, u);
  if (!cfg.export_off.empty()) lc::write_off(em, cfg.export_off);
  return rep;
}

lc::Report run_report(const RunConfig& cfg) {
  lc::Report rep;
  rep.config = config_echo(cfg);
  const lc::Surface s = build_surface(cfg);
  const lc::Vec4 u = parse_u(cfg.u_text);
  const auto pts = build_sample(cfg, s);

  lc::VerifyOptions vopt;
  vopt.u = u;
  for (auto& c : lc::verify_checks(s, pts, vopt)) {
    c.name = "verify/" + c.name;
    rep.checks.push_back(std::move(c));
  }
  if (s.compact) {
    const lc::EmbeddedMesh em = lc::embed(s, lc::build_icosphere(cfg.level), u);
    for (auto& c : lc::integrate_checks(s, em, cfg.tol)) {
      c.name = "integrate/" + c.name;
      rep.checks.push_back(std::move(c));
    }
    for (auto& c : lc::spectrum_checks(s, em, cfg.eigs, u)) {
      c.name = "spectrum/" + c.name;
      rep.checks.push_back(std::move(c));
    }
    if (!cfg.export_off.empty()) lc::write_off(em, cfg.export_off);
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification laboratory for spacelike surfaces in a lightcone of L^4"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&cfg](CLI::App* cmd, bool with_mesh) {
    cmd->add_option("--surface", cfg.surface, "catalog surface name");
    cmd->add_option("--definition", cfg.definition, "surface definition JSON file");
    cmd->add_option("--factor", cfg.factor, "conformal exponent sigma expression");
    cmd->add_option("--params", cfg.params, "named parameters, name=value");
    cmd->add_option("--u", cfg.u_text, "timelike direction t,x,y,z (default -1,0,0,0)");
    cmd->add_option("--grid", cfg.grid, "WxH sample grid (rectangle domains)");
    cmd->add_option("--random", cfg.random_n, "number of random sample points");
    cmd->add_option("--seed", cfg.seed, "sample seed");
    cmd->add_option("--tol", cfg.tol, "relative tolerance for the mesh integrals");
    cmd->add_option("--format", cfg.format, "json | csv | human")
        ->check(CLI::IsMember({"json", "csv", "human"}));
    cmd->add_option("--out", cfg.out, "write the report to this path");
    if (with_mesh) {
      cmd->add_option("--level", cfg.level, "icosphere subdivision level")
          ->check(CLI::Range(0, 8));
      cmd->add_option("--k", cfg.eigs, "number of eigenvalues");
      cmd->add_option("--export-off", cfg.export_off, "write the embedded mesh as OFF");
    }
  };

  add_common(app.add_subcommand("catalog", "list the surface catalog"), false);
  add_common(app.add_subcommand("eval", "pointwise geometry table"), false);
  add_common(app.add_subcommand("verify", "pointwise identity verification"), false);
  add_common(app.add_subcommand("integrate", "mesh integral identities"), true);
  add_common(app.add_subcommand("spectrum", "first Laplace eigenvalue and bounds"), true);
  add_common(app.add_subcommand("report", "full bundled report"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    lc::Report rep;
    if (cfg.command == "catalog")
      rep = run_catalog(cfg);
    else if (cfg.command == "eval")
      rep = run_eval(cfg);
    else if (cfg.command == "verify")
      rep = run_verify(cfg);
    else if (cfg.command == "integrate")
      rep = run_integrate(cfg);
    else if (cfg.command == "spectrum")
      rep = run_spectrum(cfg);
    else
      rep = run_report(cfg);
    emit(cfg, rep);
    return rep.all_pass() ? 0 : 2;
  } catch (const lc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const lc::UnknownSurface& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const lc::BadParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const lc::ParseError& e) {
    std::cerr << "config error in --factor: " << e.what() << "\n";
    return 1;
  } catch (const lc::Error& e) {
    // domain failures inside a run become failing checks; anything reaching
    // here is a usage problem
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
