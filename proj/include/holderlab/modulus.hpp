#pragma once

// Exact Holder-modulus machinery for polygonal paths.
//
// Everything here reduces a two-point supremum to finitely many candidates:
//   * between vertices separated by g steps the ratio weight (n/g)^a is
//     constant, so per-gap maxima of |S_k - S_i| decide the vertex-pair sup;
//   * gap bands [g_lo, g_hi] give certified bounds
//       m * (n/g_hi)^a <= sup over the band <= m * (n/g_lo)^a
//     with m the band's largest increment, so a branch-and-bound refinement
//     returns the exact vertex-pair supremum (or answers a threshold query)
//     without visiting every gap;
//   * for a general mesh delta the supremum over |t - s| <= delta is attained
//     either at two vertices or with one point at a vertex and |t - s| exactly
//     delta: sliding the pair inside linearity pieces changes the ratio
//     monotonically unless slopes agree, and with one vertex endpoint the
//     ratio has no interior maximum along a linear piece.  Vertex pairs plus
//     the per-vertex points v +- delta therefore cover every extremum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <queue>
#include <stdexcept>
#include <vector>

#include "holderlab/path.hpp"

namespace holderlab {

namespace detail {

// max over index pairs (i, k) with g_lo <= k - i <= g_hi of |S_k - S_i|,
// via monotone min/max deques in O(n)
template <typename Scalar>
Scalar band_abs_max(const ArrayX<Scalar>& prefix, std::int64_t g_lo, std::int64_t g_hi) {
  const std::int64_t n = prefix.size() - 1;
  g_hi = std::min(g_hi, n);
  Scalar best = Scalar(0);
  std::deque<std::int64_t> maxq, minq;
  for (std::int64_t k = g_lo; k <= n; ++k) {
    const std::int64_t enter = k - g_lo;  // newest admissible left index
    const std::int64_t leave = k - g_hi;  // oldest admissible left index
    while (!maxq.empty() && prefix[maxq.back()] <= prefix[enter]) maxq.pop_back();
    maxq.push_back(enter);
    while (!minq.empty() && prefix[minq.back()] >= prefix[enter]) minq.pop_back();
    minq.push_back(enter);
    while (maxq.front() < leave) maxq.pop_front();
    while (minq.front() < leave) minq.pop_front();
    best = std::max(best, std::max(prefix[maxq.front()] - prefix[k],
                                   prefix[k] - prefix[minq.front()]));
  }
  return best;
}

template <typename Scalar>
struct GapBand {
  Scalar ub;
  Scalar m;
  std::int64_t g_lo;
  std::int64_t g_hi;
};

// shared branch-and-bound over gap bands.  With threshold = nullptr returns
// the exact supremum; otherwise stops early and reports via *exceeded whether
// some admissible pair beats *threshold.
template <typename Scalar>
Scalar vertex_pair_scan(const PolygonalPath<Scalar>& p, Scalar alpha, std::int64_t max_gap,
                        const Scalar* threshold, bool* exceeded) {
  const Scalar s = std::abs(p.scale);
  const Scalar n = static_cast<Scalar>(p.n);
  max_gap = std::min<std::int64_t>(max_gap, p.n);
  if (exceeded) *exceeded = false;
  if (max_gap < 1) return Scalar(0);
  auto weight = [&](std::int64_t g) { return Scalar(std::pow(n / Scalar(g), alpha)); };
  auto cmp = [](const GapBand<Scalar>& a, const GapBand<Scalar>& b) { return a.ub < b.ub; };
  std::priority_queue<GapBand<Scalar>, std::vector<GapBand<Scalar>>, decltype(cmp)> q(cmp);
  Scalar best = Scalar(0);
  auto push = [&](std::int64_t lo, std::int64_t hi) {
    GapBand<Scalar> b;
    b.g_lo = lo;
    b.g_hi = hi;
    b.m = band_abs_max(p.prefix, lo, hi);
    // small inflation keeps the bound sound against pow() misrounding
    b.ub = s * b.m * weight(lo) * (Scalar(1) + Scalar(1e-14));
    best = std::max(best, s * b.m * weight(hi));
    q.push(b);
  };
  push(1, max_gap);
  while (!q.empty()) {
    if (threshold && best > *threshold) {
      *exceeded = true;
      return best;
    }
    GapBand<Scalar> b = q.top();
    q.pop();
    if (threshold ? (b.ub <= *threshold) : (b.ub <= best)) break;
    if (b.g_lo == b.g_hi) {
      best = std::max(best, s * b.m * weight(b.g_lo));
      continue;
    }
    const std::int64_t mid = b.g_lo + (b.g_hi - b.g_lo) / 2;
    push(b.g_lo, mid);
    push(mid + 1, b.g_hi);
  }
  if (threshold && best > *threshold) *exceeded = true;
  return best;
}

inline void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument(std::string(where) + ": alpha must lie in (0,1)");
}

}  // namespace detail

// exact sup over vertex pairs (gap at most max_gap; 0 selects all gaps) of
//   |x(j/n) - x(i/n)| / ((j - i)/n)^alpha
template <typename Scalar>
Scalar vertex_norm(const PolygonalPath<Scalar>& p, Scalar alpha, std::int64_t max_gap = 0) {
  detail::check_alpha(static_cast<double>(alpha), "vertex_norm");
  if (max_gap <= 0) max_gap = p.n;
  return detail::vertex_pair_scan<Scalar>(p, alpha, max_gap, nullptr, nullptr);
}

// threshold query: does some vertex pair with gap <= max_gap exceed level?
// Prunes whole gap bands, so it is much cheaper than computing the norm when
// the answer is clear either way.
template <typename Scalar>
bool vertex_norm_exceeds(const PolygonalPath<Scalar>& p, Scalar alpha, Scalar level,
                         std::int64_t max_gap = 0) {
  detail::check_alpha(static_cast<double>(alpha), "vertex_norm_exceeds");
  if (max_gap <= 0) max_gap = p.n;
  bool exceeded = false;
  detail::vertex_pair_scan<Scalar>(p, alpha, max_gap, &level, &exceeded);
  return exceeded;
}

// exact two-point Holder modulus sup_{0 < |t-s| <= delta} |x(t)-x(s)|/|t-s|^alpha
template <typename Scalar>
Scalar holder_modulus(const PolygonalPath<Scalar>& p, Scalar alpha, Scalar delta) {
  detail::check_alpha(static_cast<double>(alpha), "holder_modulus");
  if (!(delta > Scalar(0))) throw std::invalid_argument("holder_modulus: delta must be positive");
  delta = std::min(delta, Scalar(1));
  const Scalar dn = delta * static_cast<Scalar>(p.n);
  std::int64_t g = static_cast<std::int64_t>(std::floor(dn));
  // snap up when delta*n sits a rounding error below an integer, so that
  // delta = k/n admits exactly the gaps {1, ..., k}
  if (Scalar(g + 1) - dn <= dn * Scalar(1e-12)) ++g;
  g = std::min<std::int64_t>(g, p.n);
  Scalar best = g >= 1 ? detail::vertex_pair_scan<Scalar>(p, alpha, g, nullptr, nullptr) : Scalar(0);
  const Scalar wd = Scalar(std::pow(delta, -alpha));
  for (Eigen::Index i = 0; i <= p.n; ++i) {
    const Scalar v = static_cast<Scalar>(i) / static_cast<Scalar>(p.n);
    const Scalar xv = p.vertex(i);
    if (v + delta <= Scalar(1))
      best = std::max(best, std::abs(p.value(v + delta) - xv) * wd);
    if (v - delta >= Scalar(0))
      best = std::max(best, std::abs(p.value(v - delta) - xv) * wd);
  }
  return best;
}

// exact Holder modulus for an integer-aligned mesh delta = k/n: every
// extremal pair lies on vertices, so per-gap sliding maxima decide it.
// O(n k) but branch-free and vectorized; the obviously-correct form used
// where k stays small.
template <typename Scalar>
Scalar holder_modulus_grid(const PolygonalPath<Scalar>& p, Scalar alpha, std::int64_t k) {
  detail::check_alpha(static_cast<double>(alpha), "holder_modulus_grid");
  if (k < 1 || k > p.n) throw std::invalid_argument("holder_modulus_grid: gap out of range");
  const Scalar s = std::abs(p.scale);
  const Scalar n = static_cast<Scalar>(p.n);
  Scalar best = Scalar(0);
  for (std::int64_t g = 1; g <= k; ++g) {
    const Eigen::Index len = p.n + 1 - g;
    const Scalar m = (p.prefix.segment(g, len) - p.prefix.segment(0, len)).abs().maxCoeff();
    best = std::max(best, s * m * Scalar(std::pow(n / Scalar(g), alpha)));
  }
  return best;
}

// max over u in [u_lo, u_hi], v in [1, v_max] of |S_{u+v} - S_u| on raw
// prefix sums; localized increment events over a started window
template <typename Scalar>
Scalar window_abs_max(const ArrayX<Scalar>& prefix, std::int64_t u_lo, std::int64_t u_hi,
                      std::int64_t v_max) {
  const std::int64_t n = prefix.size() - 1;
  u_lo = std::max<std::int64_t>(u_lo, 0);
  u_hi = std::min<std::int64_t>(u_hi, n - 1);
  Scalar best = Scalar(0);
  for (std::int64_t u = u_lo; u <= u_hi; ++u) {
    const Eigen::Index len = static_cast<Eigen::Index>(std::min<std::int64_t>(v_max, n - u));
    if (len <= 0) continue;
    best = std::max(best, (prefix.segment(u + 1, len) - prefix[u]).abs().maxCoeff());
  }
  return best;
}

}  // namespace holderlab
