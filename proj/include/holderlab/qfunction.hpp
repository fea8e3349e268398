#pragma once

// Two-part tail functions for martingale deviation bounds.  A QFunction packs
// the empirical tail of the running-maximum increment together with the tail
// of the conditional quadratic variation root; the Nagaev-type bound consumes
// it through an exact integral against u^{q-1} on [0, 1].  Both tails live on
// one shared evaluation grid so the pair can be compared point by point.
//
// The integral is computed exactly: the tails are step functions, so the
// integrand is piecewise u^{q-1} times a constant and every segment has the
// closed form (b^q - a^q)/q.  No quadrature error enters a bound check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "holderlab/path.hpp"

namespace holderlab {

// non-increasing step function on an ascending grid; evaluation takes the
// value at the last grid point <= x (and the first value below the grid)
struct TailGrid {
  ArrayX<double> u;
  ArrayX<double> tail;

  double operator()(double x) const {
    if (u.size() == 0) return 0.0;
    if (x < u[0]) return tail[0];
    const double* lo = u.data();
    const double* hi = u.data() + u.size();
    const double* it = std::upper_bound(lo, hi, x);
    return tail[static_cast<Eigen::Index>(it - lo) - 1];
  }
};

inline void validate(const TailGrid& g) {
  if (g.u.size() != g.tail.size()) throw std::invalid_argument("tail grid: point/value size mismatch");
  for (Eigen::Index i = 0; i < g.u.size(); ++i) {
    if (!(g.u[i] >= 0.0)) throw std::invalid_argument("tail grid: points must be non-negative");
    if (i > 0 && !(g.u[i] > g.u[i - 1])) throw std::invalid_argument("tail grid: points must increase");
    if (!(g.tail[i] >= 0.0) || !(g.tail[i] <= 1.0))
      throw std::invalid_argument("tail grid: values must lie in [0, 1]");
    if (i > 0 && g.tail[i] > g.tail[i - 1])
      throw std::invalid_argument("tail grid: values must be non-increasing");
  }
}

struct QFunction {
  Eigen::Index n = 0;  // horizon the statistics were collected at
  TailGrid max_increment_tail;
  TailGrid quad_var_tail;

  double operator()(double x) const { return max_increment_tail(x) + quad_var_tail(x); }
};

inline void validate(const QFunction& q) {
  if (q.n < 0) throw std::invalid_argument("q function: negative horizon");
  validate(q.max_increment_tail);
  validate(q.quad_var_tail);
}

namespace detail {

// exact empirical tail counts of `samples` at each grid point: #{s > u} / #s
inline ArrayX<double> tail_counts(std::vector<double> samples, const ArrayX<double>& grid) {
  if (samples.empty()) throw std::invalid_argument("q function: empty sample family");
  std::sort(samples.begin(), samples.end());
  ArrayX<double> out(grid.size());
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto it = std::upper_bound(samples.begin(), samples.end(), grid[i]);
    out[i] = static_cast<double>(samples.end() - it) * inv;
  }
  return out;
}

}  // namespace detail

// Build both tails on a shared grid.  grid_size == 0 requests the exact mode:
// the grid is zero plus every distinct positive sample value, so the stored
// tails reproduce the empirical tails everywhere.  A positive grid_size uses
// that many log-spaced points spanning the pooled positive samples instead;
// holding each value to the next grid point only ever rounds the tails up.
inline QFunction make_q_function(const std::vector<double>& max_samples,
                                 const std::vector<double>& quad_samples, Eigen::Index n,
                                 Eigen::Index grid_size = 0) {
  if (max_samples.empty() || quad_samples.empty())
    throw std::invalid_argument("q function: both sample families must be non-empty");
  for (double v : max_samples)
    if (!(v >= 0.0)) throw std::invalid_argument("q function: negative maximum statistic");
  for (double v : quad_samples)
    if (!(v >= 0.0)) throw std::invalid_argument("q function: negative variation statistic");

  std::vector<double> grid_points{0.0};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto* fam : {&max_samples, &quad_samples})
    for (double v : *fam)
      if (v > 0.0) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (grid_size <= 0) {
    for (const auto* fam : {&max_samples, &quad_samples})
      for (double v : *fam)
        if (v > 0.0) grid_points.push_back(v);
    std::sort(grid_points.begin(), grid_points.end());
    grid_points.erase(std::unique(grid_points.begin(), grid_points.end()), grid_points.end());
  } else if (hi > 0.0) {
    if (grid_size < 2) throw std::invalid_argument("q function: log grid needs at least two points");
    const double llo = std::log(lo), lhi = std::log(hi);
    for (Eigen::Index i = 0; i < grid_size; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(grid_size - 1);
      grid_points.push_back(std::exp(llo + t * (lhi - llo)));
    }
    std::sort(grid_points.begin(), grid_points.end());
    grid_points.erase(std::unique(grid_points.begin(), grid_points.end()), grid_points.end());
  }

  QFunction q;
  q.n = n;
  q.max_increment_tail.u = Eigen::Map<const ArrayX<double>>(grid_points.data(),
                                                            static_cast<Eigen::Index>(grid_points.size()));
  q.quad_var_tail.u = q.max_increment_tail.u;
  q.max_increment_tail.tail = detail::tail_counts(max_samples, q.max_increment_tail.u);
  q.quad_var_tail.tail = detail::tail_counts(quad_samples, q.quad_var_tail.u);
  validate(q);
  return q;
}

struct NagaevParams {
  double q = 4.0;
  double eta = 1.0;

  double eps() const { return eta / q; }
  double constant() const {
    return q * std::exp(3.0 * eta * std::exp(eta + 1.0) - eta - 1.0) / eta;
  }
};

inline void validate(const NagaevParams& par) {
  if (!(par.q > 0.0)) throw std::invalid_argument("deviation bound: q must be positive");
  if (!(par.eta > 0.0)) throw std::invalid_argument("deviation bound: eta must be positive");
}

// c(q, eta) * integral over [0, 1] of Q(eps * u * y) u^{q-1} du, evaluated
// exactly by splitting [0, 1] at every point where the step function changes
inline double nagaev_bound(const QFunction& q, double y, const NagaevParams& par) {
  validate(par);
  if (!(y > 0.0)) throw std::invalid_argument("deviation bound: y must be positive");
  const double scale = par.eps() * y;  // integrand argument is scale * u
  std::vector<double> cuts{0.0, 1.0};
  for (const TailGrid* g : {&q.max_increment_tail, &q.quad_var_tail})
    for (Eigen::Index i = 0; i < g->u.size(); ++i) {
      const double c = g->u[i] / scale;
      if (c > 0.0 && c < 1.0) cuts.push_back(c);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double value = q(scale * (0.5 * (a + b)));
    if (value > 0.0) integral += value * (std::pow(b, par.q) - std::pow(a, par.q)) / par.q;
  }
  return par.constant() * integral;
}

}  // namespace holderlab
