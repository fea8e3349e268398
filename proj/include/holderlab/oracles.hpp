#pragma once

// Inequality oracle battery.  Every check compares an empirical or exactly
// computed left side against the corresponding bound and emits one row per
// bound instance: (check, n, parameter text, lhs, rhs, se, pass).  The exact
// checks (dyadic sums, truncation transfer, pathwise split inequalities) carry
// zero tolerance; the Monte Carlo checks allow four standard errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "holderlab/generators.hpp"
#include "holderlab/modulus.hpp"
#include "holderlab/qfunction.hpp"
#include "holderlab/schedule.hpp"
#include "holderlab/stats.hpp"
#include "holderlab/tower_process.hpp"
#include "holderlab/weak_lp.hpp"

namespace holderlab {

struct OracleRow {
  std::string check;
  Eigen::Index n = 0;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double se = 0.0;
  bool pass = true;
  long evaluations = 1;  // elementary bound comparisons the row accounts for
};

inline long total_evaluations(const std::vector<OracleRow>& rows) {
  long total = 0;
  for (const auto& r : rows) total += r.evaluations;
  return total;
}

inline long failed_rows(const std::vector<OracleRow>& rows) {
  long failed = 0;
  for (const auto& r : rows)
    if (!r.pass) ++failed;
  return failed;
}

// One replica of a martingale difference stream together with the conditional
// second moments along the path (E[m_u^2 | past], available in closed form for
// the iid kinds and pathwise for the sign-modulated tower streams).
struct MartingaleReplica {
  ArrayX<double> increments;
  ArrayX<double> cond_second;
};

using MartingaleSampler = std::function<MartingaleReplica(std::uint64_t)>;

// same stream family across several horizons (first argument is the length)
using HorizonSampler = std::function<MartingaleReplica(Eigen::Index, std::uint64_t)>;

// conditional second moment of an iid-kind stream (a constant)
inline double iid_cond_second(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::iid_gaussian:
    case GeneratorKind::iid_rademacher:
    case GeneratorKind::iid_pareto:
      return 1.0;  // unit variance by construction
    case GeneratorKind::bounded_martingale: {
      const double xm = pareto_x_min(spec.beta);
      if (spec.truncation < xm) return 0.0;  // the whole support is zeroed
      return 1.0 - std::pow(xm / spec.truncation, spec.beta - 2.0);
    }
    default:
      throw std::invalid_argument(
          "conditional second moment: stream is not a martingale difference sequence");
  }
}

inline MartingaleSampler make_iid_sampler(const GeneratorSpec& spec, Eigen::Index n) {
  validate(spec);
  const double cs = iid_cond_second(spec);
  return [spec, n, cs](std::uint64_t replica) {
    MartingaleReplica out;
    out.increments = generate(spec, n, replica).values;
    out.cond_second = ArrayX<double>::Constant(n, cs);
    return out;
  };
}

inline HorizonSampler make_iid_horizon_sampler(const GeneratorSpec& spec) {
  validate(spec);
  const double cs = iid_cond_second(spec);
  return [spec, cs](Eigen::Index n, std::uint64_t replica) {
    MartingaleReplica out;
    out.increments = generate(spec, n, replica).values;
    out.cond_second = ArrayX<double>::Constant(n, cs);
    return out;
  };
}

// sign-modulated tower stream m_u = g_u * f(T^u x); conditioning away the
// current sign leaves E[m^2 | past] = f^2 pathwise
inline MartingaleSampler make_gf_sampler(const DeskLevel& lv, double p, Eigen::Index n,
                                         std::uint64_t seed) {
  auto tower = std::make_shared<RotationTower>(build_tower(lv.n, lv.c));
  auto f = std::make_shared<TowerFunction>(make_tower_function(lv, p));
  return [tower, f, n, seed](std::uint64_t replica) {
    rng::Stream rng = rng::Stream::for_replica(seed, replica);
    const ComponentPaths paths = eval_components({f.get()}, {tower.get()}, n, rng);
    MartingaleReplica out;
    out.increments = paths.signs * paths.f_paths[0];
    out.cond_second = paths.f_paths[0].square();
    return out;
  };
}

// analytic marginal tail t -> mu{|m| > t} of an iid-kind stream
inline std::function<double(double)> marginal_tail(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::iid_gaussian:
      return [](double t) { return t <= 0.0 ? 1.0 : stats::normal_two_sided_tail(t); };
    case GeneratorKind::iid_rademacher:
      return [](double t) { return t < 1.0 ? 1.0 : 0.0; };
    case GeneratorKind::iid_pareto: {
      const double xm = pareto_x_min(spec.beta);
      const double beta = spec.beta;
      return [xm, beta](double t) { return t <= xm ? 1.0 : std::pow(xm / t, beta); };
    }
    case GeneratorKind::bounded_martingale: {
      const double xm = pareto_x_min(spec.beta);
      const double beta = spec.beta;
      const double cap = spec.truncation;
      return [xm, beta, cap](double t) {
        if (t >= cap || cap < xm) return 0.0;
        const double top = std::pow(xm / cap, beta);
        if (t <= xm) return 1.0 - top;
        return std::pow(xm / t, beta) - top;
      };
    }
    default:
      throw std::invalid_argument("marginal tail: no closed form for this stream");
  }
}

// sup_t t^p mu{|m| > t} for the iid kinds; closed form where the maximizer is
// known, golden-section on the strictly concave log objective for the gaussian
inline double weak_power_reference(const GeneratorSpec& spec, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("weak power reference: p must be positive");
  switch (spec.kind) {
    case GeneratorKind::iid_rademacher:
      return 1.0;  // t^p * 1 increases to 1 as t approaches the atom
    case GeneratorKind::iid_pareto: {
      const double xm = pareto_x_min(spec.beta);
      if (!(p < spec.beta)) throw std::invalid_argument("weak power reference: p must stay below the tail exponent");
      return std::pow(xm, p);  // t^p (xm/t)^beta falls beyond xm
    }
    case GeneratorKind::bounded_martingale: {
      const double xm = pareto_x_min(spec.beta);
      if (spec.truncation < xm) return 0.0;
      if (!(p < spec.beta)) throw std::invalid_argument("weak power reference: p must stay below the tail exponent");
      // both branches of t^p mu(t) decrease past xm, so the supremum sits there
      return std::pow(xm, p) * (1.0 - std::pow(xm / spec.truncation, spec.beta));
    }
    case GeneratorKind::iid_gaussian: {
      double lo = 1e-8, hi = 40.0;
      const auto value = [p](double t) { return p * std::log(t) + std::log(stats::normal_two_sided_tail(t)); };
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = lo, b = hi;
      double c = b - gr * (b - a), d = a + gr * (b - a);
      for (int it = 0; it < 200; ++it) {
        if (value(c) < value(d)) a = c; else b = d;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
      }
      const double t = 0.5 * (a + b);
      return std::pow(t, p) * stats::normal_two_sided_tail(t);
    }
    default:
      throw std::invalid_argument("weak power reference: no closed form for this stream");
  }
}

// sup_t t^p mu_hat{X > t} of a finite sample (the p-th power of the empirical
// weak norm)
inline double empirical_weak_power(const ArrayX<double>& samples, double p) {
  const double norm = weak_norm_exact(SimpleFunction<double>::from_samples(samples), p);
  return std::pow(norm, p);
}

namespace detail {

inline ArrayX<double> log_spaced(double lo, double hi, Eigen::Index count) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log grid: need 0 < lo < hi");
  if (count < 2) throw std::invalid_argument("log grid: need at least two points");
  ArrayX<double> out(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (Eigen::Index i = 0; i < count; ++i)
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

inline std::string format_params(const std::string& head, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.6g", head.c_str(), value);
  return buf;
}

}  // namespace detail

// empirical two-part tail function of a martingale stream at horizon n
inline QFunction q_function(const MartingaleSampler& sample, Eigen::Index n,
                            Eigen::Index replicas, Eigen::Index grid_size = 0) {
  if (replicas <= 0) throw std::invalid_argument("q function: need replicas");
  std::vector<double> max_samples, quad_samples;
  max_samples.reserve(static_cast<std::size_t>(replicas));
  quad_samples.reserve(static_cast<std::size_t>(replicas));
  for (Eigen::Index r = 0; r < replicas; ++r) {
    const MartingaleReplica rep = sample(static_cast<std::uint64_t>(r));
    if (rep.increments.size() != n || rep.cond_second.size() != n)
      throw std::invalid_argument("q function: replica length mismatch");
    max_samples.push_back(rep.increments.abs().maxCoeff());
    quad_samples.push_back(std::sqrt(rep.cond_second.sum()));
  }
  return make_q_function(max_samples, quad_samples, n, grid_size);
}

// deviation bound check: empirical mu{|S_n| > y} against the Nagaev-type
// bound built from the same ensemble, one row per grid point
inline std::vector<OracleRow> nagaev_check(const MartingaleSampler& sample, Eigen::Index n,
                                           Eigen::Index replicas, const ArrayX<double>& y_grid,
                                           const NagaevParams& par, const std::string& label) {
  if (replicas <= 0) throw std::invalid_argument("deviation check: need replicas");
  validate(par);
  std::vector<double> max_samples, quad_samples, sums;
  for (Eigen::Index r = 0; r < replicas; ++r) {
    const MartingaleReplica rep = sample(static_cast<std::uint64_t>(r));
    max_samples.push_back(rep.increments.abs().maxCoeff());
    quad_samples.push_back(std::sqrt(rep.cond_second.sum()));
    sums.push_back(std::abs(rep.increments.sum()));
  }
  const QFunction q = make_q_function(max_samples, quad_samples, n);
  std::vector<OracleRow> rows;
  for (Eigen::Index i = 0; i < y_grid.size(); ++i) {
    const double y = y_grid[i];
    long count = 0;
    for (double s : sums) count += (s > y) ? 1 : 0;
    OracleRow row;
    row.check = "nagaev";
    row.n = n;
    row.params = label + " " + detail::format_params("y=", y);
    row.lhs = static_cast<double>(count) / static_cast<double>(replicas);
    row.rhs = nagaev_bound(q, y, par);
    row.se = stats::binomial_se(row.lhs, static_cast<std::size_t>(replicas));
    row.pass = row.lhs <= row.rhs + 4.0 * row.se;
    row.evaluations = 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

// maximal second-moment bound: (1/n) E max_j S_j^2 against twice E[m^2]
inline std::vector<OracleRow> doob_type_check(const MartingaleSampler& sample, Eigen::Index n,
                                              Eigen::Index replicas, const std::string& label) {
  if (replicas <= 0) throw std::invalid_argument("maximal check: need replicas");
  double sum_max = 0.0, sum_max2 = 0.0;
  double sum_m2 = 0.0, sum_m4 = 0.0;
  for (Eigen::Index r = 0; r < replicas; ++r) {
    const MartingaleReplica rep = sample(static_cast<std::uint64_t>(r));
    double run = 0.0, peak = 0.0;
    for (Eigen::Index i = 0; i < rep.increments.size(); ++i) {
      run += rep.increments[i];
      peak = std::max(peak, run * run);
    }
    const double scaled = peak / static_cast<double>(n);
    sum_max += scaled;
    sum_max2 += scaled * scaled;
    const double m2 = rep.increments.square().mean();
    sum_m2 += m2;
    sum_m4 += m2 * m2;
  }
  const double R = static_cast<double>(replicas);
  const double lhs = sum_max / R;
  const double var_lhs = std::max(0.0, sum_max2 / R - lhs * lhs);
  const double mean_m2 = sum_m2 / R;
  const double var_m2 = std::max(0.0, sum_m4 / R - mean_m2 * mean_m2);
  OracleRow row;
  row.check = "doob";
  row.n = n;
  row.params = label;
  row.lhs = lhs;
  row.rhs = 2.0 * mean_m2;
  row.se = std::sqrt(var_lhs / R) + 2.0 * std::sqrt(var_m2 / R);
  row.pass = row.lhs <= row.rhs + 4.0 * row.se;
  return {row};
}

// ---------------------------------------------------------------------------
// dyadic-increment statistic of the rescaled polygonal path, split into the
// coarse levels (2^j <= n), their grid-indexed and interpolation parts, and
// the fine levels (2^j > n)

struct SplitStat {
  double low = 0.0;        // sup over levels with 2^j <= n
  double grid_part = 0.0;  // same levels, increments read at floor(n k 2^-j)
  double residue = 0.0;    // same levels, polygonal-minus-grid correction
  double high = 0.0;       // sup over levels with 2^j > n
  double total = 0.0;      // sup over every level
};

inline SplitStat split_statistics(const ArrayX<double>& increments, double p) {
  const Eigen::Index n = increments.size();
  if (n < 2) throw std::invalid_argument("split statistic: need at least two increments");
  if (!(p > 2.0)) throw std::invalid_argument("split statistic: p must exceed two");
  const double alpha = 0.5 - 1.0 / p;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ArrayX<double> prefix(n + 1);
  prefix[0] = 0.0;
  std::partial_sum(increments.data(), increments.data() + n, prefix.data() + 1);

  const auto polygonal = [&](Eigen::Index j, Eigen::Index k) {
    // path value at k 2^-j (times sqrt n); exact at the right endpoint
    const double t = std::ldexp(static_cast<double>(n) * static_cast<double>(k), -static_cast<int>(j));
    const double fl = std::floor(t);
    Eigen::Index u = static_cast<Eigen::Index>(fl);
    if (u >= n) return prefix[n];
    return prefix[u] + (t - fl) * increments[u];
  };
  const auto grid_value = [&](Eigen::Index j, Eigen::Index k) {
    const double t = std::ldexp(static_cast<double>(n) * static_cast<double>(k), -static_cast<int>(j));
    Eigen::Index u = static_cast<Eigen::Index>(std::floor(t));
    if (u > n) u = n;
    return prefix[u];
  };

  SplitStat out;
  const int jlow = std::bit_width(static_cast<std::uint64_t>(n)) - 1;  // largest j with 2^j <= n
  for (int j = 1; j <= jlow; ++j) {
    const double weight = std::pow(2.0, alpha * j) * scale;
    const Eigen::Index cells = Eigen::Index(1) << j;
    double level = 0.0, level_grid = 0.0, level_res = 0.0;
    double prev_pl = polygonal(j, 0), prev_grid = grid_value(j, 0);
    level_res = std::abs(prev_pl - prev_grid);
    for (Eigen::Index k = 1; k <= cells; ++k) {
      const double pl = polygonal(j, k);
      const double gv = grid_value(j, k);
      level = std::max(level, std::abs(pl - prev_pl));
      level_grid = std::max(level_grid, std::abs(gv - prev_grid));
      level_res = std::max(level_res, std::abs(pl - gv));
      prev_pl = pl;
      prev_grid = gv;
    }
    out.low = std::max(out.low, weight * level);
    out.grid_part = std::max(out.grid_part, weight * level_grid);
    out.residue = std::max(out.residue, weight * level_res);
  }

  // Fine levels: once 2^-j <= 1/(2n) every path segment contains a whole
  // dyadic cell, so the level maximum is exactly 2^-j n max|m| and the level
  // weight decays geometrically; the supremum over that range sits at the
  // first such level.  Levels between jlow and that point are enumerated.
  const int j2 = std::bit_width(static_cast<std::uint64_t>(2 * n - 1));  // ceil log2(2n)
  for (int j = jlow + 1; j < j2; ++j) {
    const double weight = std::pow(2.0, alpha * j) * scale;
    const Eigen::Index cells = Eigen::Index(1) << j;
    double level = 0.0;
    double prev_pl = polygonal(j, 0);
    for (Eigen::Index k = 1; k <= cells; ++k) {
      const double pl = polygonal(j, k);
      level = std::max(level, std::abs(pl - prev_pl));
      prev_pl = pl;
    }
    out.high = std::max(out.high, weight * level);
  }
  const double max_abs = increments.abs().maxCoeff();
  out.high = std::max(out.high, std::pow(2.0, (alpha - 1.0) * j2) * static_cast<double>(n) * scale * max_abs);
  out.total = std::max(out.low, out.high);
  return out;
}

// Pathwise split inequalities plus the weak-marginal bounds for the fine and
// interpolation parts.  weak_power_ref is sup_t t^p mu{|m| > t} of the
// increment marginal (analytic for the shipped streams).
inline std::vector<OracleRow> split_decomposition_check(const MartingaleSampler& sample,
                                                        Eigen::Index n, Eigen::Index replicas,
                                                        double p, const ArrayX<double>& t_grid,
                                                        double weak_power_ref,
                                                        const std::string& label) {
  if (replicas <= 0) throw std::invalid_argument("split check: need replicas");
  std::vector<SplitStat> stats_all;
  stats_all.reserve(static_cast<std::size_t>(replicas));
  long triangle_violations = 0;
  for (Eigen::Index r = 0; r < replicas; ++r) {
    const MartingaleReplica rep = sample(static_cast<std::uint64_t>(r));
    const SplitStat s = split_statistics(rep.increments, p);
    if (s.low > s.grid_part + 2.0 * s.residue + 1e-9 * (1.0 + s.low)) ++triangle_violations;
    stats_all.push_back(s);
  }
  std::vector<OracleRow> rows;
  {
    OracleRow row;
    row.check = "split-triangle";
    row.n = n;
    row.params = label;
    row.lhs = static_cast<double>(triangle_violations);
    row.rhs = 0.0;
    row.pass = triangle_violations == 0;
    row.evaluations = static_cast<long>(replicas);
    rows.push_back(std::move(row));
  }
  const double R = static_cast<double>(replicas);
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    long c_total = 0, c_low = 0, c_high = 0, c_res = 0;
    for (const SplitStat& s : stats_all) {
      c_total += (s.total > t) ? 1 : 0;
      c_low += (s.low > 0.5 * t) ? 1 : 0;
      c_high += (s.high > 0.5 * t) ? 1 : 0;
      c_res += (s.residue > 0.25 * t) ? 1 : 0;
    }
    {
      OracleRow row;  // halving of the level split, exact on the sample
      row.check = "split-halving";
      row.n = n;
      row.params = label + " " + detail::format_params("t=", t);
      row.lhs = static_cast<double>(c_total) / R;
      row.rhs = static_cast<double>(c_low + c_high) / R;
      row.pass = c_total <= c_low + c_high;
      row.evaluations = static_cast<long>(replicas);
      rows.push_back(std::move(row));
    }
    {
      OracleRow row;  // fine-level rate against the increment marginal
      row.check = "split-high-weak";
      row.n = n;
      row.params = label + " " + detail::format_params("t=", t);
      row.lhs = static_cast<double>(c_high) / R;
      row.rhs = std::pow(2.0 / t, p) * weak_power_ref;
      row.se = stats::binomial_se(row.lhs, static_cast<std::size_t>(replicas));
      row.pass = row.lhs <= row.rhs + 4.0 * row.se;
      rows.push_back(std::move(row));
    }
    {
      OracleRow row;  // interpolation-residue rate against the marginal
      row.check = "split-residue-weak";
      row.n = n;
      row.params = label + " " + detail::format_params("t=", t);
      row.lhs = static_cast<double>(c_res) / R;
      row.rhs = std::pow(4.0 / t, p) * weak_power_ref;
      row.se = stats::binomial_se(row.lhs, static_cast<std::size_t>(replicas));
      row.pass = row.lhs <= row.rhs + 4.0 * row.se;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// exact summation bounds

// finite geometric sum sum_{j=1..floor(log2 n)} 2^{j(p/2-1)} n^{1-p/2} against
// its closed-form cap (1 - 2^{1-p/2})^{-1}
inline OracleRow dyadic_geometric_check(double p, Eigen::Index n) {
  if (!(p > 2.0)) throw std::invalid_argument("dyadic sum: p must exceed two");
  if (n < 2) throw std::invalid_argument("dyadic sum: n must be at least two");
  const int jmax = std::bit_width(static_cast<std::uint64_t>(n)) - 1;
  double sum = 0.0;
  for (int j = 1; j <= jmax; ++j)
    sum += std::pow(2.0, (0.5 * p - 1.0) * j) * std::pow(static_cast<double>(n), 1.0 - 0.5 * p);
  OracleRow row;
  row.check = "dyadic-geometric";
  row.n = n;
  row.params = detail::format_params("p=", p);
  row.lhs = sum;
  row.rhs = 1.0 / (1.0 - std::pow(2.0, 1.0 - 0.5 * p));
  row.pass = row.lhs <= row.rhs * (1.0 + 1e-12);
  return row;
}

// geometric-tail moment bound for a discrete non-negative variable:
// sum_{j>=1} 2^j mu{g > 2^{2j/p}} against 2 E g^{p/2}
inline OracleRow tail_moment_check(const SimpleFunction<double>& g, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("tail moment: p must be positive");
  double vmax = 0.0;
  for (Eigen::Index i = 0; i < g.values.size(); ++i) {
    if (g.values[i] < 0.0) throw std::invalid_argument("tail moment: variable must be non-negative");
    vmax = std::max(vmax, g.values[i]);
  }
  double sum = 0.0;
  for (int j = 1;; ++j) {
    const double threshold = std::pow(2.0, 2.0 * j / p);
    if (threshold >= vmax) break;
    double mass = 0.0;
    for (Eigen::Index i = 0; i < g.values.size(); ++i)
      if (g.values[i] > threshold) mass += g.masses[i];
    sum += std::ldexp(mass, j);
  }
  double moment = 0.0;
  for (Eigen::Index i = 0; i < g.values.size(); ++i)
    moment += g.masses[i] * std::pow(g.values[i], 0.5 * p);
  OracleRow row;
  row.check = "dyadic-tail-moment";
  row.n = g.values.size();
  row.params = detail::format_params("p=", p);
  row.lhs = sum;
  row.rhs = 2.0 * moment;
  row.pass = row.lhs <= row.rhs * (1.0 + 1e-12) + 1e-300;
  return row;
}

// ---------------------------------------------------------------------------
// truncation transfer on a known non-negative marginal (the sign-modulated
// streams have |m| distributed as the tower function, so every conditional
// quantity below is a deterministic transform of that marginal)

// sup over t >= R of t^p mu{f > t}
inline double restricted_weak_power(const SimpleFunction<double>& f, double p, double R) {
  if (!(p > 0.0)) throw std::invalid_argument("restricted weak power: p must be positive");
  if (!(R >= 0.0)) throw std::invalid_argument("restricted weak power: R must be non-negative");
  double best = 0.0;
  double mass_ge = 0.0;   // mass of {f >= current value}
  double mass_gt_R = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    mass_ge += f.masses[i];
    if (f.values[i] >= R) best = std::max(best, std::pow(f.values[i], p) * mass_ge);
    if (f.values[i] > R) mass_gt_R += f.masses[i];
  }
  best = std::max(best, std::pow(R, p) * mass_gt_R);
  return best;
}

// Three truncation terms at each cut R, all exact on the atom list: the
// restricted weak power of the marginal, the weak power of the conditional
// truncated-tail expectation (equal to f 1{f > R} here), and the p/2 moment
// of the conditional truncated second moment.  Each must fall as R grows and
// the second term obeys the cut-transfer bound R^p mu{f > R} below the cut.
inline std::vector<OracleRow> truncation_tail_transfer(const SimpleFunction<double>& f, double p,
                                                       const ArrayX<double>& R_grid,
                                                       Eigen::Index t_points,
                                                       const std::string& label) {
  if (!(p > 0.0)) throw std::invalid_argument("truncation transfer: p must be positive");
  if (t_points < 2) throw std::invalid_argument("truncation transfer: need at least two cut evaluation points");
  std::vector<OracleRow> rows;
  double prev1 = std::numeric_limits<double>::infinity();
  double prev2 = prev1, prev3 = prev1;
  for (Eigen::Index ri = 0; ri < R_grid.size(); ++ri) {
    const double R = R_grid[ri];
    if (ri > 0 && !(R > R_grid[ri - 1])) throw std::invalid_argument("truncation transfer: cuts must increase");
    if (!(R > 0.0)) throw std::invalid_argument("truncation transfer: cuts must be positive");

    const double term1 = restricted_weak_power(f, p, R);
    // truncated-tail variable f 1{f > R}: same atoms above R, rest at zero
    std::vector<std::pair<double, double>> cut_atoms;
    double mass_gt_R = 0.0;
    double term3 = 0.0;
    for (Eigen::Index i = 0; i < f.values.size(); ++i)
      if (f.values[i] > R) {
        cut_atoms.emplace_back(f.values[i], f.masses[i]);
        mass_gt_R += f.masses[i];
        term3 += f.masses[i] * std::pow(f.values[i], p);
      }
    const SimpleFunction<double> cut = SimpleFunction<double>::from_atoms(cut_atoms);
    const double term2 = std::pow(weak_norm_exact(cut, p), p);

    const char* names[3] = {"truncation-term1", "truncation-term2", "truncation-term3"};
    const double values[3] = {term1, term2, term3};
    const double prevs[3] = {prev1, prev2, prev3};
    for (int k = 0; k < 3; ++k) {
      OracleRow row;
      row.check = names[k];
      row.n = f.values.size();
      row.params = label + " " + detail::format_params("R=", R);
      row.lhs = values[k];
      row.rhs = prevs[k];  // monotone decrease along the cut grid
      row.pass = values[k] <= prevs[k] * (1.0 + 1e-12) + 1e-300;
      rows.push_back(std::move(row));
    }
    prev1 = term1;
    prev2 = term2;
    prev3 = term3;

    // cut transfer below the cut: t^p mu{f 1{f>R} > t} <= R^p mu{f > R}
    const double transfer_rhs = std::pow(R, p) * mass_gt_R;
    const ArrayX<double> ts = detail::log_spaced(R * 1e-3, R * (1.0 - 1e-9), t_points);
    long violations = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    double worst_lhs = 0.0;
    for (Eigen::Index ti = 0; ti < ts.size(); ++ti) {
      double tail_mass = 0.0;
      for (Eigen::Index i = 0; i < cut.values.size(); ++i)
        if (cut.values[i] > ts[ti]) tail_mass += cut.masses[i];
      const double lhs = std::pow(ts[ti], p) * tail_mass;
      if (lhs > transfer_rhs * (1.0 + 1e-12) + 1e-300) ++violations;
      if (lhs - transfer_rhs > worst_margin) {
        worst_margin = lhs - transfer_rhs;
        worst_lhs = lhs;
      }
    }
    OracleRow row;
    row.check = "truncation-transfer";
    row.n = f.values.size();
    row.params = label + " " + detail::format_params("R=", R);
    row.lhs = worst_lhs;
    row.rhs = transfer_rhs;
    row.pass = violations == 0;
    row.evaluations = static_cast<long>(t_points);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// maximal-average and maximal-statistic ratio reports

using PathSampler = std::function<ArrayX<double>(std::uint64_t)>;

// L^{p/2} norm of the running-average supremum of a non-negative stationary
// stream against the L^{p/2} norm of the stream itself, one row per horizon
inline std::vector<OracleRow> stein_maximal_check(const PathSampler& sample, double p,
                                                  const std::vector<Eigen::Index>& horizons,
                                                  Eigen::Index replicas, double ratio_cap,
                                                  const std::string& label) {
  if (!(p > 2.0)) throw std::invalid_argument("maximal average check: p must exceed two");
  if (replicas <= 0) throw std::invalid_argument("maximal average check: need replicas");
  if (horizons.empty()) throw std::invalid_argument("maximal average check: need horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw std::invalid_argument("maximal average check: horizons must increase");
  const Eigen::Index longest = horizons.back();
  const double half = 0.5 * p;
  std::vector<double> sup_moment(horizons.size(), 0.0);
  double h_moment = 0.0;
  long h_count = 0;
  for (Eigen::Index r = 0; r < replicas; ++r) {
    const ArrayX<double> h = sample(static_cast<std::uint64_t>(r));
    if (h.size() < longest) throw std::invalid_argument("maximal average check: path shorter than horizon");
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      if (h[i] < 0.0) throw std::invalid_argument("maximal average check: stream must be non-negative");
      h_moment += std::pow(h[i], half);
    }
    h_count += h.size();
    double run = 0.0, sup = 0.0;
    std::size_t next = 0;
    for (Eigen::Index i = 0; i < longest; ++i) {
      run += h[i];
      sup = std::max(sup, run / static_cast<double>(i + 1));
      if (next < horizons.size() && i + 1 == horizons[next]) {
        sup_moment[next] += std::pow(sup, half);
        ++next;
      }
    }
  }
  const double h_norm = std::pow(h_moment / static_cast<double>(h_count), 1.0 / half);
  std::vector<OracleRow> rows;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const double sup_norm =
        std::pow(sup_moment[i] / static_cast<double>(replicas), 1.0 / half);
    OracleRow row;
    row.check = "stein-ratio";
    row.n = horizons[i];
    row.params = label + " " + detail::format_params("ratio=", h_norm > 0.0 ? sup_norm / h_norm : 0.0);
    row.lhs = sup_norm;
    row.rhs = ratio_cap * h_norm;
    row.pass = row.lhs <= row.rhs * (1.0 + 1e-12);
    rows.push_back(std::move(row));
  }
  return rows;
}

// weak-power functional of the path norm against the marginal weak power plus
// the p/2 moment of the conditional second moment; the bound constant is not
// pinned down, so the testable shadow is a trend-free ratio across horizons
inline std::vector<OracleRow> moment_maximal_statistic(const HorizonSampler& sample, double p,
                                                       const std::vector<Eigen::Index>& horizons,
                                                       Eigen::Index replicas,
                                                       double weak_power_ref,
                                                       double cond_moment_ref,
                                                       const std::string& label) {
  if (!(p > 2.0)) throw std::invalid_argument("maximal statistic: p must exceed two");
  if (replicas <= 1) throw std::invalid_argument("maximal statistic: need replicas");
  if (horizons.size() < 3) throw std::invalid_argument("maximal statistic: need at least three horizons");
  const double alpha = 0.5 - 1.0 / p;
  const double rhs = weak_power_ref + cond_moment_ref;
  std::vector<OracleRow> rows;
  std::vector<double> xs, ratios;
  for (Eigen::Index n : horizons) {
    ArrayX<double> norms(replicas);
    for (Eigen::Index r = 0; r < replicas; ++r) {
      const MartingaleReplica rep = sample(n, static_cast<std::uint64_t>(r));
      const PolygonalPath<double> path =
          build_polygonal(rep.increments, 1.0 / std::sqrt(static_cast<double>(n)));
      norms[r] = vertex_norm(path, alpha);
    }
    OracleRow row;
    row.check = "maximal-ratio";
    row.n = n;
    const double lhs = empirical_weak_power(norms, p);
    row.params = label + " " + detail::format_params("ratio=", rhs > 0.0 ? lhs / rhs : 0.0);
    row.lhs = lhs;
    row.rhs = rhs;
    row.pass = true;  // constant unspecified; the trend row carries the verdict
    xs.push_back(std::log2(static_cast<double>(n)));
    ratios.push_back(rhs > 0.0 ? lhs / rhs : 0.0);
    rows.push_back(std::move(row));
  }
  const stats::SlopeFit fit = stats::ls_slope(xs, ratios);
  double mean_ratio = 0.0;
  for (double v : ratios) mean_ratio += v;
  mean_ratio /= static_cast<double>(ratios.size());
  OracleRow trend;
  trend.check = "maximal-trend";
  trend.n = horizons.back();
  trend.params = label + " " + detail::format_params("slope=", fit.slope);
  trend.lhs = fit.slope;
  trend.rhs = 3.0 * fit.se + 0.05 * std::max(mean_ratio, 1e-300);
  trend.pass = trend.lhs <= trend.rhs;
  rows.push_back(std::move(trend));
  return rows;
}

}  // namespace holderlab
