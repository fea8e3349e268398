// Acceptance gate: ten checklist items, one verdict line each, exit code equal
// to the number of failing items.  Everything is pinned to a single seed, so a
// run is reproducible bit for bit; items that measure Monte Carlo rates state
// their margins in the printed detail.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "holderlab/experiments.hpp"

using namespace holderlab;

namespace {

constexpr std::uint64_t kSeed = 20260823;  // pinned acceptance seed

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<const ReportRow*> rows_named(const ExperimentReport& rep, const char* stat) {
  std::vector<const ReportRow*> out;
  for (const auto& row : rep.rows)
    if (row.statistic == stat) out.push_back(&row);
  return out;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return std::string(buf);
}

// --------------------------------------------------------------- fuzz corpus

struct CorpusPath {
  PolygonalPath<double> path;
  double alpha;
};

// mixed increment families and scalings; the family cycles with the index so
// every (family, scale, exponent) combination appears many times
std::vector<CorpusPath> make_corpus(int count) {
  std::vector<CorpusPath> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    rng::Stream s(derive_seed(kSeed, 0xC0DE0000ULL + static_cast<std::uint64_t>(i)));
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(s.u01() * 255.0);
    ArrayX<double> x(n);
    switch (i % 6) {
      case 0:
        for (Eigen::Index k = 0; k < n; ++k) x[k] = s.normal();
        break;
      case 1:
        for (Eigen::Index k = 0; k < n; ++k) x[k] = s.u01() < 0.5 ? -1.0 : 1.0;
        break;
      case 2:  // symmetric heavy tail
        for (Eigen::Index k = 0; k < n; ++k) {
          const double v = std::pow(std::max(s.u01(), 1e-12), -1.0 / 2.5);
          x[k] = s.u01() < 0.5 ? -v : v;
        }
        break;
      case 3:  // small-lattice increments, many exact ties
        for (Eigen::Index k = 0; k < n; ++k)
          x[k] = static_cast<double>(static_cast<int>(s.u01() * 5.0) - 2);
        break;
      case 4:  // sparse bursts between long zero runs
        for (Eigen::Index k = 0; k < n; ++k) x[k] = s.u01() < 0.3 ? s.normal() * 4.0 : 0.0;
        break;
      default:  // signed powers of two
        for (Eigen::Index k = 0; k < n; ++k) {
          const int e = static_cast<int>(s.u01() * 17.0) - 8;
          x[k] = std::ldexp(s.u01() < 0.5 ? -1.0 : 1.0, e);
        }
        break;
    }
    double scale = 0.0;  // n^{-1/2}
    if (i % 3 == 1) scale = 1.0;
    if (i % 3 == 2) scale = std::exp(3.0 * s.normal());
    CorpusPath cp{build_polygonal(x, scale), 0.05 + 0.43 * s.u01()};
    out.push_back(std::move(cp));
  }
  return out;
}

// ----------------------------------------- independent brute-force scans

// dyadic second difference straight from the defining formula
double brute_lambda(const PolygonalPath<double>& p, int j, std::int64_t cell) {
  const double h = std::ldexp(1.0, -j);
  const double r = (2.0 * cell - 1.0) * h;
  return p.value(r) - 0.5 * (p.value(r + h) + p.value(r - h));
}

// Complete enumeration of the cells that can carry a nonzero coefficient: all
// of them while the level is coarse, and above that only cells whose open
// support contains a path vertex (everywhere else the polygon is affine, so
// the second difference vanishes identically).
template <typename F>
void for_candidate_cells(const PolygonalPath<double>& p, int j, F&& fn) {
  const std::int64_t cells = std::int64_t(1) << (j - 1);
  if (cells <= 2 * p.n) {
    for (std::int64_t c = 1; c <= cells; ++c) fn(c);
    return;
  }
  std::int64_t last = 0;
  for (Eigen::Index i = 0; i <= p.n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(p.n);
    const std::int64_t base = static_cast<std::int64_t>(t * static_cast<double>(cells));
    for (std::int64_t c = std::max<std::int64_t>(base, 1);
         c <= std::min<std::int64_t>(base + 2, cells); ++c)
      if (c > last) {
        fn(c);
        last = c;
      }
  }
}

double brute_sequential_norm(const PolygonalPath<double>& p, double alpha, int jmax,
                             bool* certified) {
  double m = std::max(std::abs(p.value(0.0)), std::abs(p.value(1.0)));
  for (int j = 1; j <= jmax; ++j) {
    double lv = 0.0;
    for_candidate_cells(p, j, [&](std::int64_t c) {
      lv = std::max(lv, std::abs(brute_lambda(p, j, c)));
    });
    m = std::max(m, std::pow(2.0, alpha * j) * lv);
  }
  // levels below the scan depth are bounded by the slope and cannot move the sup
  if (certified)
    *certified = p.max_slope() * std::pow(2.0, (alpha - 1.0) * (jmax + 1)) <= m + 1e-300;
  return m;
}

double brute_vertex_norm(const PolygonalPath<double>& p, double alpha) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < p.n; ++i)
    for (Eigen::Index j = i + 1; j <= p.n; ++j)
      best = std::max(best, std::abs(p.scale) * std::abs(p.prefix[j] - p.prefix[i]) *
                                std::pow(static_cast<double>(p.n) / static_cast<double>(j - i),
                                         alpha));
  return best;
}

// ------------------------------------------------------------------- item 1

Outcome check_norm_engine() {
  const double t0 = now_s();
  const auto corpus = make_corpus(1000);
  int bad_seq = 0, bad_vertex = 0, bad_modulus = 0, uncertified = 0;
  double worst = 0.0;
  for (const auto& cp : corpus) {
    bool cert = false;
    const double seq_ref = brute_sequential_norm(cp.path, cp.alpha, 24, &cert);
    if (!cert) ++uncertified;
    const double seq = sequential_norm(cp.path, cp.alpha);
    if (!rel_close(seq, seq_ref, 1e-12)) ++bad_seq;
    worst = std::max(worst, std::abs(seq - seq_ref));
    const double vx = vertex_norm(cp.path, cp.alpha);
    if (!rel_close(vx, brute_vertex_norm(cp.path, cp.alpha), 1e-12)) ++bad_vertex;
    if (!rel_close(vx, holder_modulus(cp.path, cp.alpha, 1.0), 1e-12)) ++bad_modulus;
  }
  const double dt = now_s() - t0;
  const bool pass =
      bad_seq == 0 && bad_vertex == 0 && bad_modulus == 0 && uncertified == 0 && dt < 10.0;
  return {pass, fmt("1000 paths, n<=256, levels<=24: %d sequential, %d vertex, %d modulus "
                    "mismatches, %d uncertified scans, worst gap %.2e, %.1fs (budget 10s)",
                    bad_seq, bad_vertex, bad_modulus, uncertified, worst, dt)};
}

// ------------------------------------------------------------------- item 2

Outcome check_exact_inequalities() {
  const auto corpus = make_corpus(3000);
  long coeff_checks = 0, coeff_viol = 0;
  long interior_checks = 0, interior_viol = 0;
  for (const auto& cp : corpus) {
    const auto& p = cp.path;
    for (int j = 1; j <= 24; ++j) {
      const double h = std::ldexp(1.0, -j);
      for_candidate_cells(p, j, [&](std::int64_t c) {
        const double r = (2.0 * c - 1.0) * h;
        const double dp = p.value(r + h) - p.value(r);
        const double dm = p.value(r - h) - p.value(r);
        const double lam = 0.5 * std::abs(dp + dm);
        const double half_sum = 0.5 * (std::abs(dp) + std::abs(dm));
        const double larger = std::max(std::abs(dp), std::abs(dm));
        ++coeff_checks;
        if (!(lam <= half_sum) || !(half_sum <= larger)) ++coeff_viol;
      });
    }
    ++interior_checks;
    if (!(tightness_statistic(p, cp.alpha, 1) <= increment_seq_bound(p, cp.alpha)))
      ++interior_viol;
  }
  const bool pass = coeff_viol == 0 && interior_viol == 0;
  return {pass, fmt("zero-tolerance comparisons on 3000 paths: %ld/%ld coefficient chains, "
                    "%ld/%ld interior majorant checks violated",
                    coeff_viol, coeff_checks, interior_viol, interior_checks)};
}

// ------------------------------------------------------------------- item 3

Outcome check_weak_lp() {
  const double p = 4.0;
  const int N = 1000000;
  std::vector<std::pair<double, double>> fa, sa;
  fa.reserve(N);
  sa.reserve(N);
  for (int i = 1; i <= N; ++i) {
    const double u = static_cast<double>(i) / N;
    const double v = std::pow(u, -1.0 / p);
    const double w = std::pow(static_cast<double>(N - i + 1) / N, -1.0 / p);
    fa.emplace_back(v, 1.0 / N);
    sa.emplace_back(v + w, 1.0 / N);  // the mirrored copy shares every cell
  }
  const auto f = SimpleFunction<double>::from_atoms(std::move(fa));
  const auto s = SimpleFunction<double>::from_atoms(std::move(sa));
  const double norm_f = weak_norm_exact(f, p);
  const double norm_sum = weak_norm_exact(s, p);
  const double lower = std::pow(2.0, 1.0 + 1.0 / p) * (1.0 - 1e-3);
  const bool triangle_ok = norm_sum >= lower && std::abs(norm_f + norm_f - 2.0) <= 1e-3;

  long sandwich_viol = 0;
  rng::Stream rs(derive_seed(kSeed, 0x5A5AULL));
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::pair<double, double>> a;
    const int atoms = 1 + static_cast<int>(rs.u01() * 12.0);
    double total = 0.0;
    for (int k = 0; k < atoms; ++k) {
      a.emplace_back(std::exp(rs.normal()), rs.u01() + 0.01);
      total += a.back().second;
    }
    for (auto& [v, m] : a) m *= 0.95 / total;
    const auto g = SimpleFunction<double>::from_atoms(std::move(a));
    const double q = 2.05 + 4.0 * rs.u01();
    const double weak = weak_norm_exact(g, q);
    const double renorm = np_norm(g, q);
    const double kp = q / (q - 1.0);
    if (!(weak <= renorm * (1.0 + 1e-10)) || !(renorm <= kp * weak * (1.0 + 1e-10)))
      ++sandwich_viol;
  }
  const bool pass = triangle_ok && sandwich_viol == 0;
  return {pass, fmt("million-atom pair: |f+g| = %.6f (floor %.6f), |f|+|g| = %.6f; sandwich "
                    "violations %ld/10000",
                    norm_sum, lower, norm_f + norm_f, sandwich_viol)};
}

// ------------------------------------------------------------------- item 4

Outcome check_tower_norms() {
  int bad_bound = 0, bad_closed = 0, levels_seen = 0;
  for (double p : {2.5, 3.0, 4.0}) {
    const DeskSchedule sched = build_desk_schedule(p, 2);
    for (const auto& lv : sched.levels) {
      ++levels_seen;
      const auto f = make_tower_function(lv, p);
      const double eps = lv.c / static_cast<double>(lv.n);
      const double full = weak_norm_exact(tower_function_distribution(f, eps), p);
      const double main = weak_norm_exact(tower_function_main_distribution(f, eps), p);
      if (!(full <= kappa_p_prime(p) / lv.L)) ++bad_bound;
      if (!(main <= std::pow(2.0 / std::pow(lv.L, p), 1.0 / p))) ++bad_bound;
      if (!detail::ulps_close(full, tower_weak_norm_closed(lv, p), 8)) ++bad_closed;
      if (!detail::ulps_close(main, tower_main_weak_norm_closed(lv, p), 8)) ++bad_closed;
    }
  }
  const bool pass = bad_bound == 0 && bad_closed == 0;
  return {pass, fmt("schedules at p=2.5,3,4 (%d levels): %d bound violations, %d closed-form "
                    "mismatches beyond 8 ulps",
                    levels_seen, bad_bound, bad_closed)};
}

// ------------------------------------------------------------------- item 5

// frozen from a pilot run at the pinned seed (measured 0.690 and 0.572); each
// level's event probability must stay above its floor
constexpr double kModulusFloor[2] = {0.5, 0.4};

Outcome check_counterexample_chain() {
  const double t0 = now_s();
  // the literal target: three levels with every height at most 1e6.  The
  // height recursion forbids it at every p: report the sharpest certificate.
  std::string certificate;
  bool three_levels_possible = false;
  for (double p : {2.1, 2.5, 3.0, 3.5, 4.0}) {
    try {
      (void)build_desk_schedule(p, 3, 1000000);
      three_levels_possible = true;
    } catch (const InfeasibleScheduleError& e) {
      if (certificate.empty()) certificate = e.what();
    }
  }

  // two levels do fit under the same height cap at p=3; run the full chain
  // there with the demanded replica count
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::counterexample;
  cfg.p = 3.0;
  cfg.replicas = 10000;
  cfg.seed = kSeed;
  cfg.levels = 2;
  cfg.height_cap = 1000000;
  const ExperimentReport rep = run_counterexample(cfg);

  int row_fails = 0;
  for (const auto& row : rep.rows)
    if (row.verdict == "fail") ++row_fails;
  std::vector<double> modulus, control;
  for (const auto* row : rows_named(rep, "modulus-event")) modulus.push_back(row->estimate);
  for (const auto* row : rows_named(rep, "gaussian-control")) control.push_back(row->estimate);
  bool floors_ok = modulus.size() == 2;
  for (std::size_t l = 0; l < modulus.size() && l < 2; ++l)
    floors_ok = floors_ok && modulus[l] >= kModulusFloor[l];
  const bool control_ok = control.size() == 2 && control[1] <= 0.5 * control[0];
  const double dt = now_s() - t0;
  const bool demo_ok = row_fails == 0 && floors_ok && control_ok && dt < 600.0;

  std::ostringstream os;
  if (three_levels_possible)
    os << "three desk levels fit under height 1e6; ";
  else
    os << "three desk levels under height 1e6 impossible at every p (" << certificate << "); ";
  os << fmt("two-level run at p=3: %d failing rows, modulus events %.4f/%.4f (floors %.4f/%.4f), "
            "control decay %.5f -> %.5f, %.0fs (budget 600s)",
            row_fails, modulus.size() > 0 ? modulus[0] : -1.0,
            modulus.size() > 1 ? modulus[1] : -1.0, kModulusFloor[0], kModulusFloor[1],
            control.size() > 0 ? control[0] : -1.0, control.size() > 1 ? control[1] : -1.0, dt);
  return {three_levels_possible && demo_ok, os.str()};
}

// ------------------------------------------------------------------- item 6

Outcome check_inequality_oracles() {
  const auto rows = inequality_suite(4.0, 1000, kSeed);
  long fails = 0;
  std::size_t evals = 0;
  bool has_nagaev = false, has_doob = false, has_split = false, has_truncation = false;
  for (const auto& r : rows) {
    if (!r.pass) ++fails;
    evals += r.evaluations;
    if (r.check.rfind("nagaev", 0) == 0) has_nagaev = true;
    if (r.check.rfind("doob", 0) == 0) has_doob = true;
    if (r.check.rfind("split-", 0) == 0) has_split = true;
    if (r.check.rfind("truncation-", 0) == 0) has_truncation = true;
  }
  const bool families = has_nagaev && has_doob && has_split && has_truncation;
  const bool pass = fails == 0 && evals >= 100000 && families;
  return {pass, fmt("%zu rows, %ld violations, %zu bound evaluations (floor 100000)%s",
                    rows.size(), fails, evals,
                    families ? "" : ", missing an inequality family")};
}

// ------------------------------------------------------------------- item 7

Outcome check_tightness_decay() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::donsker;
  cfg.generator.kind = GeneratorKind::iid_gaussian;
  cfg.p = 4.0;
  cfg.n_grid = {1 << 14};
  cfg.replicas = 2000;
  cfg.seed = kSeed;
  cfg.J_grid = {2, 4, 6, 8};
  cfg.epsilon = 0.5;
  const ExperimentReport rep = run_donsker(cfg);
  const auto tails = rows_named(rep, "tightness-tail");
  const auto steps = rows_named(rep, "tightness-step");
  const auto ks = rows_named(rep, "endpoint-ks");
  bool decreasing = tails.size() == 4;
  for (std::size_t i = 1; i < tails.size(); ++i)
    decreasing = decreasing && tails[i]->estimate < tails[i - 1]->estimate;
  bool steps_ok = steps.size() == 3;
  for (const auto* s : steps) steps_ok = steps_ok && s->verdict == "pass";
  const bool ks_ok = ks.size() == 1 && ks[0]->verdict == "pass";
  std::ostringstream os;
  os << "rates";
  for (const auto* t : tails) os << fmt(" %.4f", t->estimate);
  os << "; steps";
  for (const auto* s : steps) os << fmt(" %.4f>%.4f", s->estimate, s->threshold);
  if (!ks.empty()) os << fmt("; endpoint ks p=%.4f", ks[0]->estimate);
  return {decreasing && steps_ok && ks_ok, os.str()};
}

// ------------------------------------------------------------------- item 8

Outcome check_tail_boundary() {
  const double t0 = now_s();
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::tail_boundary;
  cfg.generator.kind = GeneratorKind::iid_pareto;
  cfg.generator.beta = 4.0;  // tail exponent equal to p
  cfg.p = 4.0;
  cfg.n_grid = {1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16};
  cfg.replicas = 1200;
  cfg.seed = kSeed;
  const ExperimentReport at_p = run_tail_boundary(cfg);

  const auto cut = rows_named(at_p, "norm-cutoff");
  const double M = cut.empty() ? 0.0 : cut[0]->estimate;
  cfg.generator.beta = 8.0;  // tail exponent twice p, same frozen cutoff
  cfg.tail_threshold = M;
  const ExperimentReport at_2p = run_tail_boundary(cfg);

  auto rates_of = [](const ExperimentReport& rep) {
    std::vector<double> r, s;
    for (const auto* row : rows_named(rep, "norm-exceed")) {
      r.push_back(row->estimate);
      s.push_back(row->se);
    }
    return std::make_pair(r, s);
  };
  auto trend_of = [](const ExperimentReport& rep) {
    const auto rows = rows_named(rep, "norm-exceed-trend");
    return rows.empty() ? std::make_pair(0.0, 0.0)
                        : std::make_pair(rows[0]->estimate, rows[0]->se);
  };
  const auto [rp, sp] = rates_of(at_p);
  const auto [slope_p, se_p] = trend_of(at_p);
  const auto [r2, s2] = rates_of(at_2p);
  const auto [slope_2, se_2] = trend_of(at_2p);

  // heavy side: every rate positive and the sequence consistent with a
  // non-decreasing limit (no adjacent drop beyond its paired error, trend not
  // significantly negative)
  bool heavy_ok = rp.size() == 7;
  double worst_drop = 0.0;
  for (std::size_t i = 0; i + 1 < rp.size(); ++i) {
    const double drop = rp[i] - rp[i + 1];
    const double pair_se = std::sqrt(sp[i] * sp[i] + sp[i + 1] * sp[i + 1]);
    worst_drop = std::max(worst_drop, drop / std::max(pair_se, 1e-12));
  }
  for (double r : rp) heavy_ok = heavy_ok && r > 0.0;
  heavy_ok = heavy_ok && worst_drop <= 4.0 && slope_p >= -2.0 * se_p;

  // light side: the same statistic must fall, visibly against its error
  const bool light_ok = r2.size() == 7 && slope_2 <= -2.0 * se_2;

  const double dt = now_s() - t0;
  std::ostringstream os;
  os << fmt("cutoff %.4f; heavy rates", M);
  for (double r : rp) os << fmt(" %.3f", r);
  os << fmt(" slope %.2e+-%.2e; light rates", slope_p, se_p);
  for (double r : r2) os << fmt(" %.3f", r);
  os << fmt(" slope %.2e+-%.2e (needs <= %.2e); %.0fs", slope_2, se_2, -2.0 * se_2, dt);
  return {heavy_ok && light_ok, os.str()};
}

// ------------------------------------------------------------------- item 9

Outcome check_residual_ordering() {
  long concordant = 0, discordant = 0;
  int cob_fail_seeds = 0, seeds_run = 0;
  for (int s = 1; s <= 20; ++s) {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::hannan;
    cfg.generator.kind = GeneratorKind::linear_process;
    cfg.generator.innovation = GeneratorKind::iid_gaussian;
    cfg.generator.coeffs.clear();
    for (int i = 0; i <= 8; ++i) cfg.generator.coeffs.push_back(std::ldexp(1.0, -i));
    cfg.p = 4.0;
    cfg.n_grid = {512};
    cfg.replicas = 100;
    cfg.seed = kSeed + static_cast<std::uint64_t>(s);
    cfg.J_grid = {0, 2, 4, 8};
    const ExperimentReport rep = run_hannan(cfg);
    ++seeds_run;
    for (const auto* row : rows_named(rep, "residual-concordance")) {
      long c = 0, d = 0;
      if (std::sscanf(row->params.c_str(), "concordant=%ld discordant=%ld", &c, &d) == 2) {
        concordant += c;
        discordant += d;
      }
    }
    for (const auto* row : rows_named(rep, "coboundary-bound"))
      if (row->verdict != "pass") ++cob_fail_seeds;
  }
  const double pv = stats::concordance_p_value(concordant, discordant);
  const bool pass =
      seeds_run == 20 && concordant > discordant && pv < 0.05 && cob_fail_seeds == 0;
  return {pass, fmt("20 seeds pooled: concordant %ld vs discordant %ld, p=%.2e; coboundary "
                    "violations in %d seeds",
                    concordant, discordant, pv, cob_fail_seeds)};
}

// ------------------------------------------------------------------ item 10

Outcome check_determinism() {
  auto csv_at = [](ExperimentConfig cfg, Eigen::Index threads) {
    cfg.threads = threads;
    return csv_string(run_experiment(cfg));
  };
  int mismatches = 0, configs = 0;
  std::vector<ExperimentConfig> cfgs;
  {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::donsker;
    cfg.generator.kind = GeneratorKind::iid_gaussian;
    cfg.n_grid = {256, 1024};
    cfg.replicas = 300;
    cfg.seed = kSeed;
    cfgs.push_back(cfg);
  }
  {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::tail_boundary;
    cfg.generator.kind = GeneratorKind::iid_pareto;
    cfg.generator.beta = 8.0;
    cfg.n_grid = {256, 512, 1024};
    cfg.replicas = 200;
    cfg.seed = kSeed + 1;
    cfgs.push_back(cfg);
  }
  {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::hannan;
    cfg.generator.kind = GeneratorKind::linear_process;
    cfg.generator.innovation = GeneratorKind::iid_rademacher;
    cfg.generator.coeffs = {1.0, 0.5, 0.25};
    cfg.n_grid = {256};
    cfg.replicas = 150;
    cfg.seed = kSeed + 2;
    cfgs.push_back(cfg);
  }
  for (const auto& cfg : cfgs) {
    ++configs;
    const std::string one = csv_at(cfg, 1);
    if (csv_at(cfg, 4) != one || csv_at(cfg, 8) != one) ++mismatches;
  }
  return {mismatches == 0,
          fmt("%d experiment configs under 1/4/8 threads: %d byte mismatches", configs,
              mismatches)};
}

}  // namespace

int main() {
  struct Item {
    const char* label;
    Outcome (*fn)();
  };
  const Item items[] = {
      {"exact norms match independent brute-force scans", check_norm_engine},
      {"coefficient and majorant inequalities, zero tolerance", check_exact_inequalities},
      {"weak-norm triangle failure and renorming sandwich", check_weak_lp},
      {"tower weak norms: bounds and closed forms", check_tower_norms},
      {"lower-bound chain at desk heights", check_counterexample_chain},
      {"martingale inequality oracle suite", check_inequality_oracles},
      {"tightness statistic decay and endpoint normality", check_tightness_decay},
      {"tail-boundary exceedance trends", check_tail_boundary},
      {"residual ordering and coboundary bound", check_residual_ordering},
      {"byte-identical reports across thread counts", check_determinism},
  };
  int failures = 0;
  const double t0 = now_s();
  for (std::size_t i = 0; i < std::size(items); ++i) {
    const Outcome out = items[i].fn();
    if (!out.pass) ++failures;
    std::printf("[%2zu] %s  %s\n     %s\n", i + 1, out.pass ? "PASS" : "FAIL", items[i].label,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu checks passed in %.0fs\n", static_cast<int>(std::size(items)) - failures,
              std::size(items), now_s() - t0);
  return failures;
}
