#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "holderlab/experiments.hpp"
#include "holderlab/parallel.hpp"
#include "holderlab/report.hpp"

using namespace holderlab;

// ---------------------------------------------------------------- parallel

TEST_CASE("parallel_collect returns index-ordered results for any thread count") {
  auto square = [](std::uint64_t i) { return static_cast<double>(i * i); };
  const auto one = parallel_collect(37, 1, square);
  for (int threads : {2, 4, 8, 13}) {
    const auto many = parallel_collect(37, threads, square);
    CHECK(many == one);
  }
  CHECK(one.size() == 37);
  CHECK(one[36] == 36.0 * 36.0);
}

TEST_CASE("parallel_collect handles zero work and rejects bad thread counts") {
  const auto none = parallel_collect(0, 4, [](std::uint64_t) { return 1; });
  CHECK(none.empty());
  CHECK_THROWS_AS(parallel_collect(3, 0, [](std::uint64_t) { return 1; }),
                  std::invalid_argument);
}

TEST_CASE("parallel_collect propagates a worker exception") {
  auto boom = [](std::uint64_t i) -> int {
    if (i == 11) throw std::runtime_error("replica 11 failed");
    return static_cast<int>(i);
  };
  CHECK_THROWS_AS(parallel_collect(16, 4, boom), std::runtime_error);
  CHECK_THROWS_AS(parallel_collect(16, 1, boom), std::runtime_error);
}

// ------------------------------------------------------------------ report

TEST_CASE("csv writer emits the documented byte layout") {
  ExperimentReport rep;
  rep.experiment = "demo";
  ReportRow row;
  row.statistic = "stat-one";
  row.n = 64;
  row.index = 2.0;
  row.estimate = 0.5;
  row.se = 0.25;
  row.threshold = 1.0;
  row.verdict = "pass";
  row.seed = 7;
  row.params = "a=1 b=2";
  rep.rows.push_back(row);
  const std::string expected =
      "experiment,statistic,n,index,estimate,se,threshold,verdict,seed,params\n"
      "demo,stat-one,64,2,0.5,0.25,1,pass,7,a=1 b=2\n";
  CHECK(csv_string(rep) == expected);
}

TEST_CASE("csv cells never leak separators or carriage returns") {
  ExperimentReport rep;
  rep.experiment = "demo";
  ReportRow row;
  row.statistic = "with,comma";
  row.params = "line\nbreak\rreturn";
  rep.rows.push_back(row);
  const std::string text = csv_string(rep);
  std::size_t commas = 0;
  for (char c : text)
    if (c == ',') ++commas;
  CHECK(commas == 2 * 9);  // header and the row carry nine separators each
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
  for (double v : {1.0 / 3.0, 0.1, 1e300, 2.2250738585072014e-308, -2.5, 1.189207115002721, 0.0}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("path files round-trip bitwise") {
  rng::Stream s(404);
  ArrayX<double> inc(9);
  for (auto& v : inc) v = s.normal();
  const auto path = build_polygonal(inc, 0.125);
  std::ostringstream os;
  save_path_file(os, path);
  std::istringstream is(os.str());
  const auto back = load_path_file(is);
  CHECK(back.n == path.n);
  CHECK(back.scale == path.scale);
  for (Eigen::Index i = 0; i < path.n; ++i) CHECK(back.increments[i] == path.increments[i]);
  // default scale survives too
  const auto scaled = build_polygonal(inc);
  std::ostringstream os2;
  save_path_file(os2, scaled);
  std::istringstream is2(os2.str());
  CHECK(load_path_file(is2).scale == scaled.scale);
}

TEST_CASE("path files reject malformed input") {
  auto rejects = [](const std::string& text) {
    std::istringstream is(text);
    CHECK_THROWS_AS(load_path_file(is), std::invalid_argument);
  };
  rejects("");                          // no header
  rejects("x 1\n0.5\n");               // non-numeric count
  rejects("0 1\n");                    // empty path
  rejects("2 0\n0.5\n0.5\n");          // zero scale
  rejects("3 1\n0.5\n0.5\n");          // too few increments
  rejects("2 1\n0.5\n0.5\n0.5\n");     // trailing data
  rejects("2 1\n0.5\nabc\n");          // non-numeric increment
}

// ----------------------------------------------------------- configuration

TEST_CASE("experiment names round-trip and unknown names throw") {
  for (ExperimentKind k :
       {ExperimentKind::donsker, ExperimentKind::tail_boundary, ExperimentKind::counterexample,
        ExperimentKind::hannan, ExperimentKind::inequalities})
    CHECK(parse_experiment(experiment_name(k)) == k);
  CHECK_THROWS_AS(parse_experiment("nope"), std::invalid_argument);
}

TEST_CASE("experiment configuration is validated") {
  ExperimentConfig good;
  CHECK_NOTHROW(validate(good));
  auto broken = [&](auto mutate) {
    ExperimentConfig cfg;
    mutate(cfg);
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  };
  broken([](ExperimentConfig& c) { c.replicas = 0; });
  broken([](ExperimentConfig& c) { c.p = 2.0; });
  broken([](ExperimentConfig& c) { c.n_grid.clear(); });
  broken([](ExperimentConfig& c) { c.n_grid = {64, 64}; });
  broken([](ExperimentConfig& c) { c.n_grid = {1}; });
  broken([](ExperimentConfig& c) { c.threads = 0; });
  broken([](ExperimentConfig& c) { c.epsilon = 0.0; });
  broken([](ExperimentConfig& c) { c.J_grid = {2, 2}; });
  broken([](ExperimentConfig& c) { c.J_grid = {-1, 2}; });
  broken([](ExperimentConfig& c) { c.levels = 0; });
  broken([](ExperimentConfig& c) { c.tail_threshold = -1.0; });
  broken([](ExperimentConfig& c) {
    c.experiment = ExperimentKind::hannan;  // needs a linear-process generator
  });
}

TEST_CASE("derived seeds separate purposes deterministically") {
  CHECK(derive_seed(1, 10) == derive_seed(1, 10));
  CHECK(derive_seed(1, 10) != derive_seed(1, 11));
  CHECK(derive_seed(1, 10) != derive_seed(2, 10));
}

// ----------------------------------------------------------------- drivers

namespace {

ExperimentConfig small_donsker() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::donsker;
  cfg.generator.kind = GeneratorKind::iid_gaussian;
  cfg.p = 4.0;
  cfg.n_grid = {64, 256};
  cfg.replicas = 60;
  cfg.seed = 32;
  return cfg;
}

std::string rows_as_csv(const std::vector<ReportRow>& rows) {
  ExperimentReport rep;
  rep.experiment = "x";
  rep.rows = rows;
  return csv_string(rep);
}

std::vector<ReportRow> rows_named(const ExperimentReport& rep,
                                  const std::vector<std::string>& names) {
  std::vector<ReportRow> out;
  for (const auto& r : rep.rows)
    for (const auto& name : names)
      if (r.statistic == name) out.push_back(r);
  return out;
}

long count_named(const ExperimentReport& rep, const std::string& name) {
  long c = 0;
  for (const auto& r : rep.rows) c += r.statistic == name ? 1 : 0;
  return c;
}

}  // namespace

TEST_CASE("donsker reports are byte-identical across thread counts") {
  ExperimentConfig cfg = small_donsker();
  cfg.threads = 1;
  const std::string one = csv_string(run_donsker(cfg));
  for (int threads : {4, 8}) {
    cfg.threads = threads;
    CHECK(csv_string(run_donsker(cfg)) == one);
  }
}

TEST_CASE("donsker report structure") {
  const auto rep = run_donsker(small_donsker());
  // per height: one tail row per default cut level, a step row per adjacent
  // pair, one endpoint test
  CHECK(count_named(rep, "tightness-tail") == 10);
  CHECK(count_named(rep, "tightness-step") == 8);
  CHECK(count_named(rep, "endpoint-ks") == 2);
  for (const auto& r : rep.rows) {
    if (r.statistic == "tightness-tail") {
      CHECK(r.estimate >= 0.0);
      CHECK(r.estimate <= 1.0);
      CHECK(r.threshold == 0.5);
    }
    if (r.statistic == "endpoint-ks") {
      // iid gaussian endpoints are exactly their matched normal reference
      CHECK(r.verdict == "pass");
    }
  }
  // the gaussian tail rates thin out as the cut level grows
  std::vector<double> rates;
  for (const auto& r : rep.rows)
    if (r.statistic == "tightness-tail" && r.n == 256) rates.push_back(r.estimate);
  REQUIRE(rates.size() == 5);
  for (std::size_t i = 1; i < rates.size(); ++i) CHECK(rates[i] <= rates[i - 1]);
}

TEST_CASE("a unit-coefficient linear process reproduces the iid driver bitwise") {
  ExperimentConfig iid = small_donsker();
  ExperimentConfig lin = small_donsker();
  lin.experiment = ExperimentKind::hannan;
  lin.generator.kind = GeneratorKind::linear_process;
  lin.generator.coeffs = {1.0};
  lin.generator.innovation = GeneratorKind::iid_gaussian;
  const auto iid_rep = run_donsker(iid);
  const auto lin_rep = run_hannan(lin);
  const std::vector<std::string> names{"tightness-tail", "tightness-step", "endpoint-ks"};
  CHECK(rows_as_csv(rows_named(lin_rep, names)) == rows_as_csv(rows_named(iid_rep, names)));
}

TEST_CASE("hannan residuals track the projection tails") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::hannan;
  cfg.generator.kind = GeneratorKind::linear_process;
  cfg.generator.coeffs = {1.0, 0.5, 0.25, 0.125, 0.0625};
  cfg.generator.innovation = GeneratorKind::iid_gaussian;
  cfg.p = 4.0;
  cfg.n_grid = {128};
  cfg.replicas = 50;
  cfg.seed = 77;
  const auto rep = run_hannan(cfg);
  CHECK(count_named(rep, "projection-tail") == 4);
  CHECK(count_named(rep, "residual-norm") == 4);
  double last_mean = -1.0;
  for (const auto& r : rep.rows) {
    if (r.statistic == "projection-summable") CHECK(r.estimate == 1.0);
    if (r.statistic == "residual-norm") {
      if (last_mean >= 0.0) CHECK(r.estimate <= last_mean);
      last_mean = r.estimate;
      if (r.index == 4.0) CHECK(r.estimate == 0.0);  // full lag leaves nothing
    }
    if (r.statistic == "residual-concordance") {
      CHECK(r.verdict == "pass");
      CHECK(r.estimate < 0.05);
    }
    if (r.statistic == "coboundary-bound") {
      CHECK(r.verdict == "pass");
      CHECK(r.estimate == 0.0);
    }
  }
}

TEST_CASE("tail boundary reports calibrate a cutoff and track exceedance") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::tail_boundary;
  cfg.generator.kind = GeneratorKind::iid_pareto;
  cfg.generator.beta = 8.0;
  cfg.p = 4.0;
  cfg.n_grid = {64, 128, 256};
  cfg.replicas = 80;
  cfg.seed = 5;
  auto rep = run_tail_boundary(cfg);
  CHECK(count_named(rep, "norm-cutoff") == 1);
  CHECK(count_named(rep, "norm-exceed") == 3);
  CHECK(count_named(rep, "norm-exceed-trend") == 1);
  double cutoff = 0.0;
  for (const auto& r : rep.rows)
    if (r.statistic == "norm-cutoff") {
      cutoff = r.estimate;
      CHECK(r.params == "source=pilot");
    }
  CHECK(cutoff > 0.0);
  for (const auto& r : rep.rows)
    if (r.statistic == "norm-exceed") {
      CHECK(r.threshold == cutoff);
      CHECK(r.estimate >= 0.0);
      CHECK(r.estimate <= 1.0);
    }
  // a frozen cutoff is taken as-is
  cfg.tail_threshold = 2.0;
  rep = run_tail_boundary(cfg);
  for (const auto& r : rep.rows)
    if (r.statistic == "norm-cutoff") {
      CHECK(r.estimate == 2.0);
      CHECK(r.params == "source=config");
    }
}

TEST_CASE("counterexample reports carry schedule, norm, and chain rows") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::counterexample;
  cfg.p = 3.0;
  cfg.levels = 1;
  cfg.replicas = 80;
  cfg.seed = 13;
  const auto rep = run_counterexample(cfg);
  CHECK(count_named(rep, "weak-norm") == 1);
  CHECK(count_named(rep, "weak-norm-closed") == 1);
  CHECK(count_named(rep, "weak-norm-main") == 1);
  CHECK(count_named(rep, "weak-norm-main-closed") == 1);
  for (const char* name : {"transfer-half", "transfer-exact", "union-product",
                           "union-normal-lower", "union-linearized", "leak-activation",
                           "floor-implication", "modulus-dominates", "gaussian-control"})
    CHECK(count_named(rep, name) == 1);
  CHECK(count_named(rep, "half-event") == 1);
  CHECK(count_named(rep, "modulus-event") == 1);
  bool any_schedule = false;
  for (const auto& r : rep.rows) {
    if (r.statistic.rfind("schedule-", 0) == 0) {
      any_schedule = true;
      CHECK(r.verdict == "pass");
    }
    if (r.statistic.rfind("weak-norm", 0) == 0) CHECK(r.verdict == "pass");
  }
  CHECK(any_schedule);
  // the driver is a pure function of its configuration
  CHECK(csv_string(run_counterexample(cfg)) == csv_string(rep));
}

TEST_CASE("counterexample propagates infeasible schedules") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::counterexample;
  cfg.p = 3.0;
  cfg.levels = 3;
  cfg.height_cap = 1000000;
  cfg.replicas = 10;
  CHECK_THROWS_AS(run_counterexample(cfg), InfeasibleScheduleError);
}

TEST_CASE("inequality report totals its evaluations") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::inequalities;
  cfg.p = 4.0;
  cfg.replicas = 40;
  cfg.seed = 3;
  const auto rep = run_inequalities(cfg);
  double sum = 0.0, total = -1.0;
  for (const auto& r : rep.rows) {
    if (r.statistic == "evaluations-total")
      total = r.estimate;
    else
      sum += r.index;  // each row reports its own evaluation count there
  }
  CHECK(total == sum);
  CHECK(total > 0.0);
}

TEST_CASE("run_experiment dispatches on the configured kind") {
  ExperimentConfig cfg = small_donsker();
  cfg.n_grid = {64};
  cfg.replicas = 20;
  CHECK(run_experiment(cfg).experiment == "donsker");
  cfg.experiment = ExperimentKind::tail_boundary;
  cfg.n_grid = {64, 128, 256};
  CHECK(run_experiment(cfg).experiment == "tail_boundary");
}
