#pragma once

// Monte-Carlo verification chain for the multi-level construction.
//
// Per level, the quantity of interest is the sliding-window increment
// statistic of a simulated stationary sequence; the chain links its tail
// probability to explicit sign-block events through a sequence of testable
// inequalities:
//   transfer      P{stat(level term) >= 1} >= c (1 - 2k/n) P{block union}
//   block-normal  each block frequency matches a two-sided normal tail up
//                 to a Berry-Esseen term
//   union-product the union frequency equals 1 - prod(1 - block rates)
//                 because the blocks are disjoint, hence independent
//   lower bounds  union >= 1 - prod(1 - c_j) - J * BE  and the linearized
//                 J c* - (J c*)^2/2 - J * BE
//   drift         the window statistic of the lower-level sum never
//                 exceeds 1/2 (deterministic, by the height budget)
//   leakage       higher-level terms activate a window with frequency at
//                 most 2 n_l sum_{i>l} k_i/n_i
//   event floor   {stat(level term) >= 1, no higher-level activity} implies
//                 {stat(full sum) >= 1/2} path by path
// plus an iid Gaussian control of the same half-event at matched variance.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "holderlab/modulus.hpp"
#include "holderlab/path.hpp"
#include "holderlab/rng.hpp"
#include "holderlab/schedule.hpp"
#include "holderlab/stats.hpp"
#include "holderlab/tower.hpp"
#include "holderlab/tower_process.hpp"

namespace holderlab {

// (1/n^{1/p}) max over windows u in [1, n-k], spans v in [1, k] of
// |S_{u+v} - S_u| / v^{1/2 - 1/p}
inline double window_statistic(const ArrayX<double>& values, std::int64_t k, double p) {
  const std::int64_t n = values.size();
  if (n < 2) throw std::invalid_argument("window_statistic: need at least two terms");
  if (k < 1 || k >= n) throw std::invalid_argument("window_statistic: window out of range");
  ArrayX<double> prefix(n + 1);
  prefix[0] = 0.0;
  std::partial_sum(values.data(), values.data() + n, prefix.data() + 1);
  const double expo = 0.5 - 1.0 / p;
  const Eigen::Index span = static_cast<Eigen::Index>(n - k);
  double best = 0.0;
  for (std::int64_t v = 1; v <= k; ++v) {
    const double d =
        (prefix.segment(1 + v, span) - prefix.segment(1, span)).abs().maxCoeff();
    const double w = d * std::pow(static_cast<double>(v), -expo);
    if (w > best) best = w;
  }
  return best / std::pow(static_cast<double>(n), 1.0 / p);
}

namespace detail {

// sum of `count` independent signs, 64 per draw
inline std::int64_t rademacher_sum(rng::Stream& rng, std::int64_t count) {
  std::int64_t sum = 0;
  while (count >= 64) {
    sum += 2 * std::popcount(rng.next_u64()) - 64;
    count -= 64;
  }
  if (count > 0) {
    const std::uint64_t bits = rng.next_u64() >> (64 - count);
    sum += 2 * std::popcount(bits) - count;
  }
  return sum;
}

}  // namespace detail

// Disjoint dyadic sign blocks for one level: block j = 1..J sums the
// k_j - 1 signs between positions k_j and k_{j-1} - 1, where k_j = 2^{I+J-j},
// and fires when |sum| >= L (k_j - 1)^{1/2-1/p} k_{j-1}^{1/p}.
struct LevelGEvents {
  std::vector<double> thresholds;      // standardized: |sum|/sqrt(k_j - 1) >= t_j
  std::vector<double> gaussian_exact;  // two-sided normal tail at t_j
  std::vector<double> block_rate;      // Monte-Carlo frequency per block
  std::vector<double> berry_block;     // 0.95 / sqrt(k_j - 1)
  double berry_uniform = 0.0;          // sqrt(2) 2^{-I/2}, majorizes every block
  double union_rate = 0.0;
  std::size_t replicas = 0;
};

inline LevelGEvents probe_g_events(const DeskLevel& lv, double p, std::size_t replicas,
                                   std::uint64_t seed) {
  if (replicas == 0) throw std::invalid_argument("probe_g_events: need replicas");
  LevelGEvents out;
  out.replicas = replicas;
  out.berry_uniform = std::sqrt(2.0) * std::ldexp(1.0, -lv.I / 2) *
                      (lv.I % 2 ? std::sqrt(0.5) : 1.0);
  const int J = lv.J;
  std::vector<std::int64_t> len(static_cast<std::size_t>(J));
  std::vector<double> raw_threshold(static_cast<std::size_t>(J));
  for (int j = 1; j <= J; ++j) {
    const std::int64_t kj = std::int64_t(1) << (lv.I + lv.J - j);
    const std::int64_t kprev = 2 * kj;
    len[static_cast<std::size_t>(j - 1)] = kj - 1;
    out.thresholds.push_back(
        lv.L * std::pow(static_cast<double>(kprev) / static_cast<double>(kj - 1), 1.0 / p));
    raw_threshold[static_cast<std::size_t>(j - 1)] =
        lv.L * std::pow(static_cast<double>(kj - 1), 0.5 - 1.0 / p) *
        std::pow(static_cast<double>(kprev), 1.0 / p);
    out.gaussian_exact.push_back(stats::normal_two_sided_tail(out.thresholds.back()));
    out.berry_block.push_back(0.95 / std::sqrt(static_cast<double>(kj - 1)));
  }
  std::vector<std::int64_t> hits(static_cast<std::size_t>(J), 0);
  std::int64_t union_hits = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    auto rng = rng::Stream::for_replica(seed, r);
    bool any = false;
    for (int j = 0; j < J; ++j) {
      const auto sum = detail::rademacher_sum(rng, len[static_cast<std::size_t>(j)]);
      if (std::abs(static_cast<double>(sum)) >= raw_threshold[static_cast<std::size_t>(j)]) {
        ++hits[static_cast<std::size_t>(j)];
        any = true;
      }
    }
    if (any) ++union_hits;
  }
  for (int j = 0; j < J; ++j)
    out.block_rate.push_back(static_cast<double>(hits[static_cast<std::size_t>(j)]) /
                             static_cast<double>(replicas));
  out.union_rate = static_cast<double>(union_hits) / static_cast<double>(replicas);
  return out;
}

// ------------------------------------------------------------- orchestration

struct ChainContext {
  DeskSchedule schedule;
  std::vector<TowerFunction> functions;
  std::vector<std::shared_ptr<RotationTower>> towers;  // null above the size cap

  bool tower_in_memory(int level) const {
    return towers[static_cast<std::size_t>(level - 1)] != nullptr;
  }
};

inline ChainContext make_chain_context(const DeskSchedule& s) {
  ChainContext ctx;
  ctx.schedule = s;
  for (const auto& lv : s.levels) {
    ctx.functions.push_back(make_tower_function(lv, s.p));
    if (lv.n <= detail::kTowerSizeCap)
      ctx.towers.push_back(std::make_shared<RotationTower>(build_tower(lv.n, lv.c)));
    else
      ctx.towers.push_back(nullptr);
  }
  return ctx;
}

struct ChainRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string note;
};

struct LevelChainConfig {
  std::size_t sign_replicas = 100000;  // block-event probes on the sign sequence
  std::size_t path_replicas = 1000;    // full-window simulations
  std::size_t modulus_replicas = 200;  // polygonal-modulus subset
  std::uint64_t seed = 0x5eed;
};

struct LevelChainResult {
  int level = 0;
  LevelGEvents g;
  double stat_one_rate = 0.0, stat_one_se = 0.0;    // window stat of level term >= 1
  double stat_half_rate = 0.0, stat_half_se = 0.0;  // window stat of full sum >= 1/2
  double modulus_rate = 0.0, modulus_se = 0.0;      // polygonal modulus >= 1/2
  double drift_max = 0.0;
  std::size_t drift_violations = 0;
  bool drift_present = false;
  double leak_rate = 0.0, leak_bound = 0.0;
  bool leak_complete = true;   // every higher level was simulated
  int leak_levels = 0;         // higher levels actually in memory
  std::size_t floor_violations = 0;    // transfer implication failures, path by path
  std::size_t modulus_violations = 0;  // modulus < window statistic failures
  double gauss_rate = 0.0, gauss_se = 0.0;
  double eta_hat = 0.0;  // mean square of the full-sum terms
  std::vector<ChainRow> rows;
};

inline LevelChainResult run_level_chain(const ChainContext& ctx, int level,
                                        const LevelChainConfig& cfg) {
  const auto& s = ctx.schedule;
  const int L = static_cast<int>(s.levels.size());
  if (level < 1 || level > L) throw std::invalid_argument("run_level_chain: level out of range");
  if (cfg.path_replicas == 0)
    throw std::invalid_argument("run_level_chain: need path replicas");
  const auto& lv = s.levels[static_cast<std::size_t>(level - 1)];
  if (!ctx.tower_in_memory(level))
    throw InfeasibleScheduleError("run_level_chain: level tower exceeds the in-memory cap");
  const double p = s.p;
  const std::int64_t n = lv.n;
  const std::int64_t k = lv.k();

  LevelChainResult res;
  res.level = level;
  res.g = probe_g_events(lv, p, cfg.sign_replicas, cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  // active levels: everything with a tower in memory; levels below the
  // current one always qualify because heights grow
  std::vector<const TowerFunction*> funcs;
  std::vector<const RotationTower*> tws;
  std::vector<int> act;
  for (int i = 1; i <= L; ++i) {
    if (!ctx.tower_in_memory(i)) continue;
    act.push_back(i);
    funcs.push_back(&ctx.functions[static_cast<std::size_t>(i - 1)]);
    tws.push_back(ctx.towers[static_cast<std::size_t>(i - 1)].get());
  }
  res.leak_levels = static_cast<int>(std::count_if(act.begin(), act.end(),
                                                  [&](int i) { return i > level; }));
  res.leak_complete = res.leak_levels == L - level;
  double tail = 0.0;
  for (int i = level + 1; i <= L; ++i) {
    const auto& iv = s.levels[static_cast<std::size_t>(i - 1)];
    tail += static_cast<double>(iv.k()) / static_cast<double>(iv.n);
  }
  res.leak_bound = 2.0 * static_cast<double>(n) * tail;
  res.drift_present = level >= 2;

  std::int64_t one_hits = 0, half_hits = 0, leak_hits = 0, mod_hits = 0;
  double eta_sum = 0.0;
  const double alpha = 0.5 - 1.0 / p;
  const double delta = static_cast<double>(k) / static_cast<double>(n);
  const std::uint64_t path_seed = cfg.seed ^ 0xc2b2ae3d27d4eb4fULL;
  for (std::size_t r = 0; r < cfg.path_replicas; ++r) {
    auto rng = rng::Stream::for_replica(path_seed, r);
    const auto comp = eval_components(funcs, tws, static_cast<Eigen::Index>(n), rng);
    ArrayX<double> sum_f = ArrayX<double>::Zero(n);
    ArrayX<double> lower_f = ArrayX<double>::Zero(n);
    ArrayX<double> upper_f = ArrayX<double>::Zero(n);
    for (std::size_t a = 0; a < act.size(); ++a) {
      sum_f += comp.f_paths[a];
      if (act[a] < level) lower_f += comp.f_paths[a];
      if (act[a] > level) upper_f += comp.f_paths[a];
    }
    const ArrayX<double> term = comp.signs * comp.f_paths[static_cast<std::size_t>(
                                                std::find(act.begin(), act.end(), level) -
                                                act.begin())];
    const ArrayX<double> full = comp.signs * sum_f;
    const double stat_one = window_statistic(term, k, p);
    const double stat_half = window_statistic(full, k, p);
    const bool leak_active = upper_f.maxCoeff() > 0.0;
    if (stat_one >= 1.0) ++one_hits;
    if (stat_half >= 0.5) ++half_hits;
    if (leak_active) ++leak_hits;
    eta_sum += full.square().mean();
    if (res.drift_present) {
      const double drift = window_statistic(ArrayX<double>(comp.signs * lower_f), k, p);
      if (drift > res.drift_max) res.drift_max = drift;
      if (drift > 0.5) ++res.drift_violations;
    }
    if (stat_one >= 1.0 && !leak_active && stat_half < 0.5) ++res.floor_violations;
    if (r < cfg.modulus_replicas) {
      const auto path =
          build_polygonal(full, 1.0 / std::sqrt(static_cast<double>(n)));
      const double mod = holder_modulus(path, alpha, delta);
      if (mod >= 0.5) ++mod_hits;
      if (mod < stat_half * (1.0 - 1e-12)) ++res.modulus_violations;
    }
  }
  const double reps = static_cast<double>(cfg.path_replicas);
  res.stat_one_rate = static_cast<double>(one_hits) / reps;
  res.stat_half_rate = static_cast<double>(half_hits) / reps;
  res.leak_rate = static_cast<double>(leak_hits) / reps;
  res.eta_hat = eta_sum / reps;
  res.stat_one_se = stats::binomial_se(res.stat_one_rate, cfg.path_replicas);
  res.stat_half_se = stats::binomial_se(res.stat_half_rate, cfg.path_replicas);
  if (cfg.modulus_replicas > 0) {
    const std::size_t mreps = std::min(cfg.modulus_replicas, cfg.path_replicas);
    res.modulus_rate = static_cast<double>(mod_hits) / static_cast<double>(mreps);
    res.modulus_se = stats::binomial_se(res.modulus_rate, mreps);
  }

  // iid Gaussian control at matched variance
  const std::uint64_t gauss_seed = cfg.seed ^ 0x94d049bb133111ebULL;
  const double sigma = std::sqrt(std::max(res.eta_hat, 0.0));
  std::int64_t gauss_hits = 0;
  for (std::size_t r = 0; r < cfg.path_replicas; ++r) {
    auto rng = rng::Stream::for_replica(gauss_seed, r);
    ArrayX<double> z(n);
    for (std::int64_t u = 0; u < n; ++u) z[u] = sigma * rng.normal();
    if (window_statistic(z, k, p) >= 0.5) ++gauss_hits;
  }
  res.gauss_rate = static_cast<double>(gauss_hits) / reps;
  res.gauss_se = stats::binomial_se(res.gauss_rate, cfg.path_replicas);

  // assemble the report rows
  const double se_union = stats::binomial_se(res.g.union_rate, res.g.replicas);
  const double margin = 1.0 - 2.0 * static_cast<double>(k) / static_cast<double>(n);
  auto add = [&](const std::string& name, double lhs, double rhs, bool pass,
                 const std::string& note) {
    res.rows.push_back({name, lhs, rhs, pass, note});
  };
  {
    const double rhs = 0.5 * margin * res.g.union_rate;
    const double tol = 4.0 * (res.stat_one_se + 0.5 * margin * se_union);
    add("transfer-half", res.stat_one_rate, rhs, res.stat_one_rate >= rhs - tol,
        "level-term tail vs sign-block union, mass bounded below by 1/2");
  }
  {
    const double rhs = lv.c * margin * res.g.union_rate;
    const double tol = 4.0 * (res.stat_one_se + lv.c * margin * se_union);
    add("transfer-exact", res.stat_one_rate, rhs, res.stat_one_rate >= rhs - tol,
        "level-term tail vs sign-block union at the exact tower mass");
  }
  for (int j = 0; j < lv.J; ++j) {
    const double rate = res.g.block_rate[static_cast<std::size_t>(j)];
    const double exact = res.g.gaussian_exact[static_cast<std::size_t>(j)];
    const double be = std::min(res.g.berry_block[static_cast<std::size_t>(j)],
                               res.g.berry_uniform);
    const double tol = be + 4.0 * stats::binomial_se(rate, res.g.replicas);
    std::ostringstream note;
    note << "threshold " << res.g.thresholds[static_cast<std::size_t>(j)];
    add("block-normal-" + std::to_string(j + 1), std::abs(rate - exact), tol,
        std::abs(rate - exact) <= tol, note.str());
  }
  {
    double prod = 1.0;
    double se_sum = 0.0;
    for (int j = 0; j < lv.J; ++j) {
      prod *= 1.0 - res.g.block_rate[static_cast<std::size_t>(j)];
      se_sum += stats::binomial_se(res.g.block_rate[static_cast<std::size_t>(j)],
                                   res.g.replicas);
    }
    const double tol = 4.0 * (se_union + se_sum);
    add("union-product", res.g.union_rate, 1.0 - prod,
        std::abs(res.g.union_rate - (1.0 - prod)) <= tol,
        "independence of disjoint blocks makes this an equality");
  }
  {
    double prod = 1.0;
    for (int j = 0; j < lv.J; ++j)
      prod *= 1.0 - res.g.gaussian_exact[static_cast<std::size_t>(j)];
    const double rhs = 1.0 - prod - lv.J * res.g.berry_uniform - 4.0 * se_union;
    add("union-normal-lower", res.g.union_rate, rhs, res.g.union_rate >= rhs,
        "union against the exact normal product with a uniform normal-approx debit");
  }
  {
    const double cstar =
        stats::normal_two_sided_tail(std::pow(4.0, 1.0 / p) * lv.L);
    const double jc = lv.J * cstar;
    const double rhs = jc - 0.5 * jc * jc - lv.J * res.g.berry_uniform - 4.0 * se_union;
    std::ostringstream note;
    note << "J c* = " << jc;
    add("union-linearized", res.g.union_rate, rhs, res.g.union_rate >= rhs, note.str());
  }
  if (res.drift_present) {
    add("drift-window", res.drift_max, 0.5,
        res.drift_max <= 0.5 && res.drift_violations == 0,
        "deterministic consequence of the height budget, checked path by path");
  }
  {
    std::ostringstream note;
    if (level == L)
      note << "top level, nothing above";
    else if (!res.leak_complete)
      note << res.leak_levels << " of " << (L - level)
           << " higher towers in memory; simulated activation undercounts";
    else
      note << "all higher towers simulated";
    const double tol = 4.0 * stats::binomial_se(res.leak_rate, cfg.path_replicas);
    add("leak-activation", res.leak_rate, res.leak_bound + tol,
        res.leak_rate <= res.leak_bound + tol, note.str());
  }
  add("floor-implication", static_cast<double>(res.floor_violations), 0.0,
      res.floor_violations == 0,
      "level event without higher-level activity forces the half event");
  if (cfg.modulus_replicas > 0) {
    add("modulus-dominates", static_cast<double>(res.modulus_violations), 0.0,
        res.modulus_violations == 0,
        "polygonal modulus at span k/n majorizes the window statistic");
  }
  add("gaussian-control", res.gauss_rate, res.stat_half_rate, true,
      "iid normal half-event rate at matched variance, for cross-level decay");
  return res;
}

}  // namespace holderlab
