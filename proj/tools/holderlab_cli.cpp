// holderlab: norms of polygonal paths, counterexample schedules, and the
// experiment drivers behind them, over plain-text files and CSV reports.
//
// Exit codes: 0 success, 1 invalid configuration or (under --strict) failing
// report rows, 2 infeasible schedule.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holderlab/experiments.hpp"

namespace {

using namespace holderlab;

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::int64_t replicas = 1000;
  int threads = 1;
  std::string out;
  bool strict = false;
};

struct GenOpts {
  std::string kind = "gaussian";
  double beta = 4.0;
  std::vector<double> coeffs;
  std::string innovation = "gaussian";
  double truncation = 2.5;
};

GeneratorKind parse_kind(const std::string& name) {
  if (name == "gaussian") return GeneratorKind::iid_gaussian;
  if (name == "rademacher") return GeneratorKind::iid_rademacher;
  if (name == "pareto") return GeneratorKind::iid_pareto;
  if (name == "linear") return GeneratorKind::linear_process;
  if (name == "bounded") return GeneratorKind::bounded_martingale;
  throw std::invalid_argument("unknown generator kind: " + name);
}

GeneratorSpec make_spec(const GenOpts& g, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = parse_kind(g.kind);
  spec.seed = seed;
  spec.beta = g.beta;
  spec.coeffs = g.coeffs;
  spec.innovation = parse_kind(g.innovation);
  spec.truncation = g.truncation;
  if (spec.kind == GeneratorKind::linear_process && spec.coeffs.empty())
    spec.coeffs = {1.0};
  return spec;
}

void add_generator_flags(CLI::App* cmd, GenOpts& g) {
  cmd->add_option("--generator", g.kind,
                  "increment stream: gaussian, rademacher, pareto, linear, bounded")
      ->capture_default_str();
  cmd->add_option("--beta", g.beta, "pareto tail exponent")->capture_default_str();
  cmd->add_option("--coeffs", g.coeffs, "linear-process weights a_0,a_1,...")->delimiter(',');
  cmd->add_option("--innovation", g.innovation, "linear-process driver kind")
      ->capture_default_str();
  cmd->add_option("--truncation", g.truncation, "bounded variant: keep |x| <= this")
      ->capture_default_str();
}

// CSV to --out (or stdout); --strict turns failing rows into exit 1
int write_report(const ExperimentReport& rep, const GlobalOpts& go) {
  if (go.out.empty())
    std::cout << csv_string(rep);
  else
    save_csv(go.out, rep);
  const std::size_t bad = failed_rows(rep);
  if (bad > 0) {
    std::cerr << "holderlab: " << bad << " row(s) with a fail verdict\n";
    if (go.strict) return 1;
  }
  return 0;
}

double resolve_alpha(double p, double alpha) {
  if (alpha > 0.0) return alpha;
  if (!(p > 2.0)) throw std::invalid_argument("norm: p must exceed 2 when alpha is derived");
  return 0.5 - 1.0 / p;
}

int cmd_norm(const std::string& file, double p, double alpha_opt, const GlobalOpts& go) {
  const PolygonalPath<double> path = load_path_file(file);
  const double alpha = resolve_alpha(p, alpha_opt);
  std::ostringstream os;
  os << "n " << path.n << "\n";
  os << "scale " << format_g17(path.scale) << "\n";
  os << "alpha " << format_g17(alpha) << "\n";
  os << "sequential-norm " << format_g17(sequential_norm(path, alpha)) << "\n";
  os << "vertex-norm " << format_g17(vertex_norm(path, alpha)) << "\n";
  if (go.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(go.out, std::ios::binary);
    if (!f) throw std::invalid_argument("norm: cannot open output file " + go.out);
    f << os.str();
  }
  return 0;
}

int cmd_simulate(const GenOpts& g, std::int64_t n, std::uint64_t replica, const GlobalOpts& go) {
  const GeneratorSpec spec = make_spec(g, go.seed);
  const SamplePath sample = generate(spec, n, replica);
  const PolygonalPath<double> path = build_polygonal(sample.values);
  if (go.out.empty()) {
    save_path_file(std::cout, path);
  } else {
    save_path_file(go.out, path);
  }
  return 0;
}

int cmd_counterexample_build(double p, int levels, std::int64_t height_cap,
                             const std::string& mode, const GlobalOpts& go) {
  std::ostringstream os;
  if (mode == "desk") {
    save_schedule(os, build_desk_schedule(p, levels, height_cap));
  } else if (mode == "faithful") {
    save_schedule(os, build_faithful_schedule(p, levels));
  } else {
    throw std::invalid_argument("counterexample build: mode must be desk or faithful");
  }
  if (go.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(go.out, std::ios::binary);
    if (!f) throw std::invalid_argument("counterexample build: cannot open " + go.out);
    f << os.str();
  }
  return 0;
}

int cmd_counterexample_validate(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw std::invalid_argument("counterexample validate: cannot open " + file);
  const ScheduleFile sf = load_schedule(is);
  const auto checks =
      sf.mode == "desk" ? validate_schedule(sf.desk) : validate_schedule(sf.faithful);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << c.name << " " << (c.pass ? "pass" : "fail");
    if (!c.detail.empty()) std::cout << " " << c.detail;
    std::cout << "\n";
    ok = ok && c.pass;
  }
  if (!ok) {
    std::cerr << "holderlab: schedule violates its invariants\n";
    return 1;
  }
  return 0;
}

int cmd_counterexample_run(const std::string& schedule_file, double p, int levels,
                           std::int64_t height_cap, const GlobalOpts& go) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::counterexample;
  cfg.p = p;
  cfg.levels = levels;
  cfg.height_cap = height_cap;
  cfg.replicas = go.replicas;
  cfg.seed = go.seed;
  cfg.threads = go.threads;
  ExperimentReport rep;
  if (schedule_file.empty()) {
    rep = run_counterexample(cfg);
  } else {
    std::ifstream is(schedule_file);
    if (!is) throw std::invalid_argument("counterexample run: cannot open " + schedule_file);
    const ScheduleFile sf = load_schedule(is);
    if (sf.mode != "desk")
      throw InfeasibleScheduleError(
          "counterexample run: faithful schedules describe heights far beyond simulation; "
          "use a desk schedule");
    cfg.levels = static_cast<int>(sf.desk.levels.size());
    rep = run_counterexample(cfg, sf.desk);
  }
  return write_report(rep, go);
}

int cmd_experiment(const std::string& kind, const GenOpts& g, ExperimentConfig cfg,
                   const std::vector<std::int64_t>& n_grid, const GlobalOpts& go) {
  cfg.experiment = parse_experiment(kind);
  cfg.generator = make_spec(g, go.seed);
  cfg.replicas = go.replicas;
  cfg.seed = go.seed;
  cfg.threads = go.threads;
  if (!n_grid.empty()) {
    cfg.n_grid.clear();
    for (auto n : n_grid) cfg.n_grid.push_back(static_cast<Eigen::Index>(n));
  }
  return write_report(run_experiment(cfg), go);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holder-norm laboratory for polygonal partial-sum processes"};
  app.require_subcommand(1);
  // global flags may appear before or after the subcommand name
  app.fallthrough();

  GlobalOpts go;
  app.add_option("--seed", go.seed, "base seed for every replica stream")->capture_default_str();
  app.add_option("--replicas", go.replicas, "Monte Carlo replicas per estimate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--threads", go.threads, "worker threads (results are thread-count invariant)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", go.out, "write output to this file instead of stdout");
  app.add_flag("--strict", go.strict, "exit 1 when any report row fails");

  // norm
  auto* norm = app.add_subcommand("norm", "norms of a stored polygonal path");
  std::string norm_file;
  double norm_p = 4.0, norm_alpha = 0.0;
  norm->add_option("file", norm_file, "path file: 'n scale' header, one increment per line")
      ->required();
  norm->add_option("--p", norm_p, "moment exponent; alpha = 1/2 - 1/p")->capture_default_str();
  norm->add_option("--alpha", norm_alpha, "use this exponent directly");

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw one replica path and store it");
  GenOpts sim_gen;
  std::int64_t sim_n = 1024;
  std::uint64_t sim_replica = 0;
  add_generator_flags(sim, sim_gen);
  sim->add_option("--n", sim_n, "path height")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--replica", sim_replica, "replica index within the seed's stream")
      ->capture_default_str();

  // counterexample build|validate|run
  auto* ce = app.add_subcommand("counterexample", "non-tightness schedules and their diagnostics");
  ce->require_subcommand(1);
  double ce_p = 3.0;
  int ce_levels = 2;
  std::int64_t ce_cap = std::int64_t(1) << 40;
  std::string ce_mode = "desk";
  std::string ce_file;
  auto* ce_build = ce->add_subcommand("build", "derive a schedule and write the schedule file");
  ce_build->add_option("--p", ce_p, "moment exponent")->capture_default_str();
  ce_build->add_option("--levels", ce_levels, "schedule depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ce_build->add_option("--height-cap", ce_cap, "reject levels taller than this")
      ->capture_default_str();
  ce_build->add_option("--mode", ce_mode, "desk (simulable) or faithful (exact bignum)")
      ->capture_default_str();
  auto* ce_validate = ce->add_subcommand("validate", "check a schedule file's invariants");
  ce_validate->add_option("file", ce_file, "schedule file")->required();
  auto* ce_run = ce->add_subcommand("run", "weak-norm rows and the lower-bound chain as CSV");
  ce_run->add_option("--p", ce_p, "moment exponent")->capture_default_str();
  ce_run->add_option("--levels", ce_levels, "schedule depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ce_run->add_option("--height-cap", ce_cap, "reject levels taller than this")
      ->capture_default_str();
  ce_run->add_option("--schedule", ce_file, "run this schedule file instead of deriving one");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run an experiment driver and emit CSV");
  std::string exp_kind;
  GenOpts exp_gen;
  ExperimentConfig exp_cfg;
  std::vector<std::int64_t> exp_grid;
  exp->add_option("kind", exp_kind, "donsker, tail_boundary, counterexample, hannan, inequalities")
      ->required();
  add_generator_flags(exp, exp_gen);
  exp->add_option("--p", exp_cfg.p, "moment exponent; alpha = 1/2 - 1/p")->capture_default_str();
  exp->add_option("--n-grid", exp_grid, "path heights, strictly increasing")->delimiter(',');
  exp->add_option("--J-grid", exp_cfg.J_grid,
                  "donsker: cut levels; hannan: truncation lags")
      ->delimiter(',');
  exp->add_option("--epsilon", exp_cfg.epsilon, "level-tail event threshold")
      ->capture_default_str();
  exp->add_option("--tail-threshold", exp_cfg.tail_threshold,
                  "norm cutoff; 0 calibrates at the smallest height");
  exp->add_option("--levels", exp_cfg.levels, "counterexample: schedule depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  exp->add_option("--height-cap", exp_cfg.height_cap, "counterexample: height bound")
      ->capture_default_str();

  // check
  auto* chk = app.add_subcommand("check", "run the martingale inequality suite");
  double chk_p = 4.0;
  chk->add_option("--p", chk_p, "moment exponent")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (norm->parsed()) return cmd_norm(norm_file, norm_p, norm_alpha, go);
    if (sim->parsed()) return cmd_simulate(sim_gen, sim_n, sim_replica, go);
    if (ce->parsed()) {
      if (ce_build->parsed()) return cmd_counterexample_build(ce_p, ce_levels, ce_cap, ce_mode, go);
      if (ce_validate->parsed()) return cmd_counterexample_validate(ce_file);
      return cmd_counterexample_run(ce_run->count("--schedule") ? ce_file : std::string(), ce_p,
                                    ce_levels, ce_cap, go);
    }
    if (exp->parsed()) return cmd_experiment(exp_kind, exp_gen, exp_cfg, exp_grid, go);
    if (chk->parsed()) {
      ExperimentConfig cfg;
      cfg.experiment = ExperimentKind::inequalities;
      cfg.p = chk_p;
      cfg.replicas = go.replicas;
      cfg.seed = go.seed;
      cfg.threads = go.threads;
      return write_report(run_inequalities(cfg), go);
    }
  } catch (const InfeasibleScheduleError& e) {
    std::cerr << "holderlab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "holderlab: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "holderlab: no subcommand\n";
  return 1;
}
