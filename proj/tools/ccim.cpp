// Command-line harness: convergence sweeps, single solves, molecular runs,
// interface evolution and matrix dumps. Every subcommand accepts --config FILE
// with key=value lines; explicit flags override the file.

#include <cstdio>
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ccim/driver.hpp"
#include "ccim/error.hpp"
#include "ccim/evolve.hpp"
#include "ccim/molecule.hpp"
#include "ccim/simd.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ccim;

namespace {

struct Flags {
  std::string config_path;
  cli::KeyValues given;
};

/// Registers a string flag whose value, when given, lands in `flags.given[key]`.
void add_flag(CLI::App* app, Flags& flags, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      "--" + key, [&flags, key](const std::string& v) { flags.given[key] = v; }, help);
}

cli::RunConfig resolve(const Flags& flags) {
  cli::KeyValues base;
  if (!flags.config_path.empty()) base = cli::load_key_values(flags.config_path);
  return cli::make_config(cli::merge(base, flags.given));
}

RunOptions run_options(const cli::RunConfig& c) {
  RunOptions o;
  o.threads = c.threads;
  o.solver.tolerance = c.tolerance;
  o.solver.max_iterations = c.max_iterations;
  o.solver.precondition = c.precondition;
  o.coupling.condition_tie_break = c.tie_break;
  o.coupling.overrides = c.overrides;
  return o;
}

json config_json(const cli::RunConfig& c) {
  return json{{"surface", c.surface},  {"problem", c.problem},     {"ns", c.ns},
              {"tolerance", c.tolerance}, {"threads", c.threads}, {"precondition", c.precondition},
              {"tie_break", c.tie_break}, {"output", c.output},   {"simd", simd::isa_name(simd::active().isa)}};
}

json run_json(const RunResult& r) {
  return json{{"N", r.n},
              {"h", r.h},
              {"err_u_inf", r.errors.err_u_inf},
              {"err_grad_inf", r.errors.err_grad_inf},
              {"iterations", r.solve.iterations},
              {"relative_residual", r.solve.relative_residual},
              {"assemble_seconds", r.assemble_seconds},
              {"solve_seconds", r.solve.seconds},
              {"interface_points", r.interface_points},
              {"crossings", r.crossings},
              {"max_stencil_radius", r.max_radius},
              {"max_condition", r.max_condition},
              {"condition_comparisons", r.tie_points},
              {"scheme_histogram", r.scheme_histogram}};
}

fs::path prepare_output(const cli::RunConfig& c) {
  fs::path dir(c.output);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void log(const cli::RunConfig& c, const std::string& msg) {
  if (c.verbosity >= 0) std::cerr << msg << "\n";
}

int run_converge(const cli::RunConfig& c, bool single) {
  const auto surface = catalog_surface(c.surface);
  const auto problem = preset_problem(c.problem);
  const fs::path dir = prepare_output(c);
  std::vector<ConvergenceRow> rows;
  json runs = json::array();
  std::vector<int> ns = single ? std::vector<int>{c.ns.back()} : c.ns;
  std::vector<std::pair<double, double>> eu, eg;
  for (int n : ns) {
    RunResult r;
    try {
      r = run_manufactured(*surface, *problem, n, run_options(c));
    } catch (const Error& e) {
      throw Error("N=" + std::to_string(n) + ": " + e.what());
    }
    log(c, "N=" + std::to_string(n) + " err_u=" + num(r.errors.err_u_inf) +
               " err_grad=" + num(r.errors.err_grad_inf) + " iterations=" + std::to_string(r.solve.iterations));
    rows.push_back(r.row());
    runs.push_back(run_json(r));
    eu.emplace_back(n, r.errors.err_u_inf);
    eg.emplace_back(n, r.errors.err_grad_inf);
    if (single) {
      std::ofstream g(dir / "gradients.csv");
      g << "x,y,z,axis,error\n";
      for (const auto& s : r.errors.gradients)
        g << s.location[0] << "," << s.location[1] << "," << s.location[2] << "," << s.axis << "," << s.error << "\n";
    }
  }
  {
    std::ofstream csv(dir / (single ? "solve.csv" : "convergence.csv"));
    write_convergence_csv(csv, rows);
  }
  json summary{{"command", single ? "solve" : "converge"}, {"config", config_json(c)}, {"runs", runs}};
  if (eu.size() >= 2) {
    const double su = fit_slope(eu), sg = fit_slope(eg);
    summary["slope_u"] = su;
    summary["slope_grad"] = sg;
    log(c, "slope_u=" + num(su) + " slope_grad=" + num(sg));
  }
  write_json(dir / "summary.json", summary);
  return 0;
}

int run_molecule(const cli::RunConfig& c) {
  if (c.pqr.empty()) throw ConfigError("molecule needs --pqr FILE");
  const auto atoms = parse_pqr(c.pqr);
  const auto surface = molecular_surface(scale_to_box(atoms, c.margin), c.level, c.eta);
  const auto problem = preset_problem(c.problem);
  const fs::path dir = prepare_output(c);
  json runs = json::array();
  std::vector<ConvergenceRow> rows;
  for (int n : c.ns) {
    const RunResult r = run_manufactured(*surface, *problem, n, run_options(c));
    log(c, "N=" + std::to_string(n) + " err_u=" + num(r.errors.err_u_inf));
    rows.push_back(r.row());
    runs.push_back(run_json(r));
  }
  std::ofstream csv(dir / "molecule.csv");
  write_convergence_csv(csv, rows);
  write_json(dir / "summary.json", json{{"command", "molecule"},
                                        {"config", config_json(c)},
                                        {"atoms", atoms.size()},
                                        {"level", c.level},
                                        {"eta", c.eta},
                                        {"runs", runs}});
  return 0;
}

int run_evolve(const cli::RunConfig& c) {
  const fs::path dir = prepare_output(c);
  EvolveOptions o;
  o.t_end = c.t_end;
  o.r0 = c.r0;
  o.cfl = c.cfl;
  o.dt_h2 = c.dt_h2;
  o.run = run_options(c);
  json runs = json::array();
  std::vector<std::pair<double, double>> rmse;
  for (int n : c.ns) {
    const EvolveReport r = run_expanding_sphere(n, o);
    log(c, "N=" + std::to_string(n) + " rmse=" + num(r.rmse) + " max=" + num(r.max_error));
    std::ofstream h(dir / ("evolve_history_N" + std::to_string(n) + ".csv"));
    write_history_csv(h, r);
    std::ofstream rad(dir / ("evolve_radii_N" + std::to_string(n) + ".csv"));
    write_radii_csv(rad, r);
    runs.push_back(json{{"N", n},
                        {"steps", r.history.size()},
                        {"reference_radius", r.reference},
                        {"max_error", r.max_error},
                        {"rmse", r.rmse}});
    rmse.emplace_back(n, r.rmse);
  }
  json summary{{"command", "evolve"}, {"config", config_json(c)}, {"t_end", c.t_end}, {"runs", runs}};
  if (rmse.size() >= 2) summary["slope_rmse"] = fit_slope(rmse);
  write_json(dir / "summary.json", summary);
  return 0;
}

int run_dump(const cli::RunConfig& c) {
  const auto surface = catalog_surface(c.surface);
  const auto problem = preset_problem(c.problem);
  const fs::path dir = prepare_output(c);
  const Grid grid(c.ns.back());
  const SignField signs(grid, *surface);
  AssemblyOptions ao;
  ao.threads = c.threads;
  ao.coupling = run_options(c).coupling;
  const AssembledSystem sys = assemble_system(grid, *surface, signs, *problem, ao);
  write_matrix_market(sys.matrix, (dir / "matrix.mtx").string());
  std::ofstream rhs(dir / "rhs.txt");
  rhs.precision(17);
  for (double v : sys.rhs) rhs << v << "\n";
  json points = json::array();
  for (const auto& p : sys.interface_points) {
    json kinds = json::array();
    for (MixedKind k : p.schemes) kinds.push_back(std::string(kind_name(k)));
    points.push_back(json{{"point", p.point}, {"schemes", kinds}, {"condition", p.condition}, {"radius", p.radius}});
  }
  write_json(dir / "summary.json", json{{"command", "dump-matrix"},
                                        {"config", config_json(c)},
                                        {"N", grid.n()},
                                        {"rows", sys.matrix.n},
                                        {"nnz", sys.matrix.nnz()},
                                        {"interface_points", points}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact coupling interface solver"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    std::vector<std::string> keys;
  };
  const std::vector<std::string> common{"surface", "problem", "ns", "n", "tolerance", "max_iterations", "precondition",
                                        "output", "threads", "verbosity", "tie_break", "force_scheme"};
  auto with = [&](std::vector<std::string> extra) {
    extra.insert(extra.begin(), common.begin(), common.end());
    return extra;
  };
  const std::vector<Sub> subs{
      {"converge", "Convergence sweep over N", with({})},
      {"solve", "Single solve at the last N", with({})},
      {"molecule", "Solve on a molecular surface from a PQR file", with({"pqr", "level", "eta", "margin"})},
      {"evolve", "Expanding-sphere interface evolution", with({"t_end", "r0", "cfl", "dt_h2"})},
      {"dump-matrix", "Write the assembled system in Matrix Market format", with({})},
  };
  std::vector<Flags> flags(subs.size());
  std::vector<CLI::App*> apps;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    CLI::App* sub = app.add_subcommand(subs[s].name, subs[s].help);
    sub->add_option("--config", flags[s].config_path, "key=value configuration file");
    for (const auto& key : subs[s].keys) add_flag(sub, flags[s], key, "overrides '" + key + "'");
    apps.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t s = 0; s < subs.size(); ++s) {
      if (!apps[s]->parsed()) continue;
      const cli::RunConfig c = resolve(flags[s]);
      const std::string name = subs[s].name;
      if (name == "converge") return run_converge(c, false);
      if (name == "solve") return run_converge(c, true);
      if (name == "molecule") return run_molecule(c);
      if (name == "evolve") return run_evolve(c);
      if (name == "dump-matrix") return run_dump(c);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
