#include "fracpq/cli.hpp"

#include <CLI11.hpp>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "fracpq/random.hpp"
#include "fracpq/report.hpp"

namespace fracpq {

namespace {

namespace fs = std::filesystem;

constexpr const char* kToolName = "fracpq";
constexpr const char* kToolVersion = "0.1.0";

int thread_cap() {
  if (const char* env = std::getenv("FRACPQ_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config;
}

SolverOptions solver_options_from(const nlohmann::json& raw, std::uint64_t seed) {
  const nlohmann::json config = effective_config(raw);
  SolverOptions opts;
  opts.seed = seed;
  if (config.contains("solver")) {
    const auto& s = config["solver"];
    if (s.contains("step")) opts.step = s["step"].get<double>();
    if (s.contains("tol_residual")) opts.tol_residual = s["tol_residual"].get<double>();
    if (s.contains("max_iter")) opts.max_iter = s["max_iter"].get<int>();
    if (s.contains("restarts")) opts.restarts = s["restarts"].get<int>();
  }
  opts.validate();
  return opts;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) {
        try {
          out.push_back(std::stod(token));
        } catch (const std::exception&) {
          throw ConfigError("cannot parse number '" + token + "' in list");
        }
        token.clear();
      }
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  return out;
}

/// Collects emitted files and writes a reproducible manifest (no wall-clock
/// data; identical inputs give identical bytes). The manifest embeds the
/// configuration it ran from, so it can itself be passed back as --config.
class OutputDir {
 public:
  OutputDir(std::string dir, nlohmann::json config, std::uint64_t seed,
            std::string subcommand)
      : dir_(std::move(dir)),
        config_(std::move(config)),
        seed_(seed),
        subcommand_(std::move(subcommand)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir_) / name, std::ios::binary);
    if (!out) throw Error("cannot write output file " + name);
    out << content;
    outputs_.push_back(name);
  }

  void flag(const std::string& key, nlohmann::json value) {
    flags_[key] = std::move(value);
  }

  void finalize() {
    nlohmann::json manifest;
    manifest["config"] = config_;
    manifest["seed"] = seed_;
    manifest["subcommand"] = subcommand_;
    manifest["flags"] = flags_;
    manifest["threads"] = thread_cap();
    manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    std::vector<std::string> files = outputs_;
    files.push_back("manifest.json");
    manifest["outputs"] = files;
    std::ofstream out(fs::path(dir_) / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
  }

 private:
  std::string dir_;
  nlohmann::json config_;
  std::uint64_t seed_;
  std::string subcommand_;
  nlohmann::json flags_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
};

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "problem configuration JSON")
      ->required();
  cmd->add_option("-o,--out", args.out_dir, "output directory (writes files + manifest)");
  cmd->add_flag("--strict", args.strict,
                "refuse (exit 4) instead of warning when thresholds are exceeded");
}

int cmd_constants(const CommonArgs& args) {
  const nlohmann::json config = effective_config(load_config_file(args.config_path));
  const Problem prob = assemble_problem(config);
  const ConstantsReport rep = build_constants_report(prob);
  const nlohmann::json j = to_json(rep);
  std::cout << j.dump(2) << '\n';
  if (!args.out_dir.empty()) {
    OutputDir out(args.out_dir, config, prob.seed, "constants");
    out.write("constants.json", j.dump(2) + "\n");
    out.finalize();
  }
  return 0;
}

int cmd_fibering(const CommonArgs& args, int scan_points) {
  const nlohmann::json config = effective_config(load_config_file(args.config_path));
  const Problem prob = assemble_problem(config);

  // Seeded sample; prefer one with both coefficient integrals positive so the
  // two-root picture shows when it exists.
  std::mt19937_64 rng(derive_seed(prob.seed, "fibering-cli"));
  GridFunction u = fourier_sample(prob.grid, rng);
  for (int tries = 0; tries < 200; ++tries) {
    const FiberingMap map = fibering_map(u, prob);
    if (map.P > 0.0 && map.Ia > 0.0 && map.Ib > 0.0) break;
    u = fourier_sample(prob.grid, rng);
  }

  const FiberingProfile prof = classify(u, prob);
  const nlohmann::json j = to_json(prof);
  std::cout << j.dump(2) << '\n';
  if (!args.out_dir.empty()) {
    OutputDir out(args.out_dir, config, prob.seed, "fibering");
    out.flag("scan_points", scan_points);
    out.write("fibering.json", j.dump(2) + "\n");
    out.write("ray_scan.csv", ray_scan_csv(prof.map, scan_points));
    out.finalize();
  }
  return 0;
}

int cmd_solve(const CommonArgs& args, double lambda_flag, bool lambda_set,
              const std::string& branch) {
  nlohmann::json config = effective_config(load_config_file(args.config_path));
  if (lambda_set) config["lambda"] = lambda_flag;  // fold into the replayable config
  Problem prob = assemble_problem(config);
  const SolverOptions opts = solver_options_from(config, prob.seed);

  if (args.strict && branch != "mp") {
    const double S_r = estimate_sobolev(prob.params.r, prob);
    const double l0 =
        lambda_zero(prob.params, S_r, prob.fields.a_dual, prob.fields.b_sup);
    if (prob.params.lambda >= l0)
      throw PreconditionError("strict mode: lambda = " + std::to_string(prob.params.lambda) +
                              " is not below the degenerate-set threshold lambda_0 = " +
                              std::to_string(l0));
  }

  nlohmann::json summary;
  std::vector<std::pair<std::string, SolutionRecord>> records;

  if (branch == "both") {
    const TwoSolutionsResult res = two_solutions(prob, opts);
    summary = to_json(res, false);
    records.emplace_back("nplus", res.plus);
    records.emplace_back("nminus", res.minus);
  } else if (branch == "nplus" || branch == "nminus") {
    const SolutionRecord rec = solve_nehari(
        prob, branch == "nplus" ? Branch::NehariPlus : Branch::NehariMinus, opts);
    summary = to_json(rec, false);
    records.emplace_back(branch, rec);
  } else if (branch == "mp") {
    const SolutionRecord rec = solve_mountain_pass(prob, opts);
    summary = to_json(rec, false);
    records.emplace_back("mp", rec);
  } else {
    throw ConfigError("branch must be one of nplus, nminus, mp, both");
  }

  std::cout << summary.dump(2) << '\n';
  if (!args.out_dir.empty()) {
    OutputDir out(args.out_dir, config, prob.seed, "solve");
    out.flag("branch", branch);
    for (const auto& [name, rec] : records) {
      out.write("solution_" + name + ".json", to_json(rec, true).dump(2) + "\n");
      out.write("solution_" + name + ".csv", solution_csv(rec.u));
    }
    out.write("solve_summary.json", summary.dump(2) + "\n");
    out.finalize();
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& lambdas_text) {
  const nlohmann::json config = effective_config(load_config_file(args.config_path));
  const Problem prob = assemble_problem(config);
  const SolverOptions opts = solver_options_from(config, prob.seed);
  const std::vector<double> lambdas = parse_double_list(lambdas_text);
  const std::vector<SweepRow> rows = sweep_lambda(prob, lambdas, opts);
  const std::string csv = sweep_csv(rows);
  std::cout << csv;
  if (!args.out_dir.empty()) {
    OutputDir out(args.out_dir, config, prob.seed, "sweep");
    out.flag("lambdas", lambdas_text);
    out.write("sweep.csv", csv);
    out.finalize();
  }
  return 0;
}

int cmd_regularity(const CommonArgs& args, const std::string& input_path,
                   const std::string& x0_text, const std::string& radii_text, int levels) {
  const nlohmann::json config = effective_config(load_config_file(args.config_path));
  const Problem prob = assemble_problem(config);

  std::ifstream in(input_path);
  if (!in) throw ConfigError("cannot open solution file: " + input_path);
  nlohmann::json sol;
  try {
    in >> sol;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solution file is not valid JSON: ") + e.what());
  }
  if (!sol.contains("u") || !sol["u"].is_array())
    throw ConfigError("solution file has no 'u' value array");
  const std::vector<double> vals = sol["u"].get<std::vector<double>>();
  if (static_cast<Eigen::Index>(vals.size()) != prob.grid->size())
    throw ConfigError("solution length does not match the configured grid");
  GridFunction u = GridFunction::zero(prob.grid);
  for (Eigen::Index i = 0; i < u.values.size(); ++i) {
    if (!std::isfinite(vals[static_cast<std::size_t>(i)]))
      throw ConfigError("solution file contains a non-finite value");
    u.values[i] = vals[static_cast<std::size_t>(i)];
  }

  const std::vector<double> x0_list = parse_double_list(x0_text);
  Eigen::Vector2d x0(0.0, 0.0);
  for (std::size_t a = 0; a < x0_list.size() && a < 2; ++a) x0[a] = x0_list[a];
  const std::vector<double> radii = parse_double_list(radii_text);
  if (radii.empty()) throw ConfigError("--radii needs at least one radius");

  const RegularityReport rep = holder_exponent(u, prob, x0, radii);
  nlohmann::json j;
  j["oscillation"] = to_json(rep);
  if (!prob.params.critical()) {
    j["linf_iteration"] = to_json(degiorgi_verify(u, prob, levels));
  } else {
    j["linf_iteration"] = nullptr;  // needs a subcritical configuration
  }

  std::cout << j.dump(2) << '\n';
  if (!args.out_dir.empty()) {
    OutputDir out(args.out_dir, config, prob.seed, "regularity");
    out.flag("input", input_path);
    out.flag("x0", x0_text);
    out.flag("radii", radii_text);
    out.flag("levels", levels);
    out.write("regularity.json", j.dump(2) + "\n");
    out.write("osc.csv", osc_csv(rep));
    out.finalize();
  }
  return 0;
}

int cmd_critical_probe(const CommonArgs& args, double lambda_flag, bool lambda_set,
                       double kappa, bool kappa_set, double alpha, bool alpha_set) {
  nlohmann::json config = effective_config(load_config_file(args.config_path));
  if (lambda_set) config["lambda"] = lambda_flag;  // fold into the replayable config
  Problem prob = assemble_problem(config);

  const Grid& g = *prob.grid;
  double inradius = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.n; ++a)
    inradius = std::min({inradius, -g.lo[a], g.hi[a]});
  if (!kappa_set) kappa = 0.25 * inradius;
  if (!alpha_set)
    alpha = 2.0 * (static_cast<double>(prob.params.n) - prob.params.p * prob.params.s1) /
            (prob.params.p - 1.0);

  const CriticalProbe probe = critical_level_probe(prob, kappa, alpha);
  const nlohmann::json j = to_json(probe);
  std::cout << j.dump(2) << '\n';
  if (!args.out_dir.empty()) {
    OutputDir out(args.out_dir, config, prob.seed, "critical-probe");
    out.flag("kappa", kappa);
    out.flag("alpha", alpha);
    out.write("critical_probe.json", j.dump(2) + "\n");
    out.finalize();
  }
  return 0;
}

void emit_error(const char* kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = message;
  j["kind"] = kind;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"numerical laboratory for a doubly nonlocal (p,q) Dirichlet problem"};
  app.require_subcommand(1);

  CommonArgs constants_args;
  auto* constants_cmd = app.add_subcommand("constants", "compute the constants report");
  add_common(constants_cmd, constants_args);

  CommonArgs fibering_args;
  int scan_points = 400;
  auto* fibering_cmd =
      app.add_subcommand("fibering", "classify the ray map of a seeded sample");
  add_common(fibering_cmd, fibering_args);
  fibering_cmd->add_option("--scan-points", scan_points, "rows in the ray scan CSV");

  CommonArgs solve_args;
  double solve_lambda = 0.0;
  std::string solve_branch = "both";
  auto* solve_cmd = app.add_subcommand("solve", "compute critical points");
  add_common(solve_cmd, solve_args);
  auto* solve_lambda_opt =
      solve_cmd->add_option("--lambda", solve_lambda, "override the config lambda");
  solve_cmd->add_option("--branch", solve_branch, "nplus | nminus | mp | both")
      ->check(CLI::IsMember({"nplus", "nminus", "mp", "both"}));

  CommonArgs sweep_args;
  std::string sweep_lambdas;
  auto* sweep_cmd = app.add_subcommand("sweep", "two_solutions across a lambda list");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--lambdas", sweep_lambdas, "comma-separated lambda values")
      ->required();

  CommonArgs reg_args;
  std::string reg_input, reg_x0 = "0", reg_radii;
  int reg_levels = 20;
  auto* reg_cmd = app.add_subcommand("regularity", "oscillation and uniform-bound report");
  add_common(reg_cmd, reg_args);
  reg_cmd->add_option("--input", reg_input, "solution JSON written by solve")->required();
  reg_cmd->add_option("--x0", reg_x0, "probe center (comma-separated in 2D)");
  reg_cmd->add_option("--radii", reg_radii, "comma-separated probe radii")->required();
  reg_cmd->add_option("--levels", reg_levels, "truncation levels for the bound iteration");

  CommonArgs probe_args;
  double probe_lambda = 0.0, probe_kappa = 0.0, probe_alpha = 0.0;
  auto* probe_cmd =
      app.add_subcommand("critical-probe", "energy-level probe of the critical case");
  add_common(probe_cmd, probe_args);
  auto* probe_lambda_opt =
      probe_cmd->add_option("--lambda", probe_lambda, "override the config lambda");
  auto* probe_kappa_opt = probe_cmd->add_option("--kappa", probe_kappa, "bump radius");
  auto* probe_alpha_opt =
      probe_cmd->add_option("--alpha", probe_alpha, "beta = eps^alpha exponent");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("config", e.what());
    return 2;
  }

  try {
    if (constants_cmd->parsed()) return cmd_constants(constants_args);
    if (fibering_cmd->parsed()) return cmd_fibering(fibering_args, scan_points);
    if (solve_cmd->parsed())
      return cmd_solve(solve_args, solve_lambda, solve_lambda_opt->count() > 0,
                       solve_branch);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, sweep_lambdas);
    if (reg_cmd->parsed())
      return cmd_regularity(reg_args, reg_input, reg_x0, reg_radii, reg_levels);
    if (probe_cmd->parsed())
      return cmd_critical_probe(probe_args, probe_lambda, probe_lambda_opt->count() > 0,
                                probe_kappa, probe_kappa_opt->count() > 0, probe_alpha,
                                probe_alpha_opt->count() > 0);
    emit_error("config", "no subcommand given");
    return 2;
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const ConvergenceError& e) {
    emit_error("convergence", e.what());
    return 3;
  } catch (const PreconditionError& e) {
    emit_error("precondition", e.what());
    return 4;
  } catch (const UsageError& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace fracpq
