#pragma once

// Faber-Schauder analysis of polygonal paths.
//
// Coefficients lambda_r = x(r) - (x(r+) + x(r-))/2 over the dyadic levels
// D_j = {(2l-1) 2^-j}, with lambda_0 = x(0) and lambda_1 = x(1).  Three facts
// make the sequential norm sup_{j>=0} 2^{j a} max_r |lambda_r| exactly
// computable for a polygonal path:
//   * a level-j cell ((2l-2)2^-j, 2l 2^-j) with no vertex strictly inside is
//     affine, so its coefficient is exactly zero; enumeration therefore walks
//     the vertex list and at most min(n, 2^{j-1}) cells per level survive.
//     Dyadic grids are nested, so once every vertex sits on the grid the
//     level is empty and so is every deeper one;
//   * |lambda_r| <= Lip(x) 2^-j at every level, and once each cell holds at
//     most one vertex (2^j >= 2n) the sharper bound
//     |lambda_r| <= max-slope-jump * 2^-j / 2 applies;
//   * both bounds decay like 2^{j(a-1)}, so when the certificate bound drops
//     to the running maximum the scan stops with the exact supremum.
// lambda is always formed from the two one-sided increments, which keeps the
// coefficient bound |lambda_r| <= max(|x(r+)-x(r)|, |x(r)-x(r-)|) exact in
// floating point as well.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "holderlab/path.hpp"

namespace holderlab {

template <typename Scalar = double>
struct SchauderEntry {
  std::int64_t cell;  // r = (2*cell - 1) * 2^-j, cell in [1, 2^{j-1}]
  Scalar lambda;
};

template <typename Scalar = double>
struct SchauderCoeffs {
  Scalar lambda0 = Scalar(0);  // x(0)
  Scalar lambda1 = Scalar(0);  // x(1)
  int max_level = 0;
  std::vector<std::vector<SchauderEntry<Scalar>>> levels;  // levels[j-1] holds level j
  Scalar lip = Scalar(0);  // |lambda_r| <= lip * 2^-j for every level j > max_level
};

namespace detail {

// hard stop for the level scan; reaching it would need increment magnitudes
// spanning ~2^40 in dynamic range, far outside anything this library feeds it
inline constexpr int kLevelCap = 52;

// Only cells whose open support ((2l-2)2^-j, 2l 2^-j) holds a vertex i/n can
// carry a nonzero coefficient; everything else is affine and is omitted, which
// keeps those coefficients exactly zero instead of evaluation noise.  At most
// min(n, 2^{j-1}) cells per level survive.
template <typename Scalar>
void level_coefficients(const PolygonalPath<Scalar>& p, int j,
                        std::vector<SchauderEntry<Scalar>>& out) {
  out.clear();
  const Scalar h = Scalar(std::ldexp(1.0, -j));
  const std::int64_t cells = std::int64_t(1) << (j - 1);
  std::int64_t last = 0;
  for (Eigen::Index i = 1; i < p.n; ++i) {
    const std::int64_t num = static_cast<std::int64_t>(i) * cells;
    if (num % p.n == 0) continue;  // vertex on a cell boundary contributes nothing
    const std::int64_t cell = num / p.n + 1;
    if (cell == last) continue;
    last = cell;
    const Scalar r = Scalar(2 * cell - 1) * h;
    const Scalar d_plus = p.value(r + h) - p.value(r);
    const Scalar d_minus = p.value(r - h) - p.value(r);
    out.push_back({cell, -(d_plus + d_minus) / Scalar(2)});
  }
}

template <typename Scalar>
Scalar level_abs_max(const std::vector<SchauderEntry<Scalar>>& entries) {
  Scalar m = Scalar(0);
  for (const auto& e : entries) m = std::max(m, std::abs(e.lambda));
  return m;
}

// largest jump of the scaled slope across interior vertices
template <typename Scalar>
Scalar max_slope_jump(const PolygonalPath<Scalar>& p) {
  Scalar m = Scalar(0);
  for (Eigen::Index i = 0; i + 1 < p.n; ++i)
    m = std::max(m, std::abs(p.increments[i + 1] - p.increments[i]));
  return m * std::abs(p.scale) * static_cast<Scalar>(p.n);
}

template <typename Scalar>
Scalar level_sup_from(const PolygonalPath<Scalar>& p, Scalar alpha, int from_level, Scalar cur) {
  const Scalar lip = p.max_slope();
  const Scalar half_jump = max_slope_jump(p) / Scalar(2);
  int jstar = 1;
  while ((std::int64_t(1) << jstar) < 2 * p.n) ++jstar;  // one vertex per cell beyond
  std::vector<SchauderEntry<Scalar>> level;
  for (int j = std::max(from_level, 1);; ++j) {
    if (j > kLevelCap)
      throw std::runtime_error("schauder level scan: certificate not reached (input range too extreme)");
    level_coefficients(p, j, level);
    // dyadic grids are nested, so once every vertex sits on the grid all
    // deeper levels are empty as well
    if (level.empty()) return cur;
    cur = std::max(cur, Scalar(std::pow(Scalar(2), alpha * j)) * level_abs_max(level));
    Scalar coeff = lip;
    if (j + 1 >= jstar) coeff = std::min(coeff, half_jump);
    if (coeff * Scalar(std::pow(Scalar(2), (alpha - Scalar(1)) * (j + 1))) <= cur) return cur;
  }
}

}  // namespace detail

// coefficients through max_level (max_level <= 0 selects the certified
// truncation level ceil(log2 2n); the stored Lipschitz constant bounds
// everything deeper)
template <typename Scalar>
SchauderCoeffs<Scalar> schauder_coefficients(const PolygonalPath<Scalar>& p, int max_level = 0) {
  SchauderCoeffs<Scalar> c;
  c.lambda0 = p.value(Scalar(0));
  c.lambda1 = p.value(Scalar(1));
  c.lip = p.max_slope();
  if (max_level <= 0) {
    max_level = 1;
    while ((std::int64_t(1) << max_level) < 2 * p.n) ++max_level;  // ceil(log2 2n)
  }
  if (max_level > detail::kLevelCap)
    throw std::invalid_argument("schauder_coefficients: level beyond supported depth");
  c.max_level = max_level;
  c.levels.resize(max_level);
  for (int j = 1; j <= max_level; ++j) detail::level_coefficients(p, j, c.levels[j - 1]);
  return c;
}

// partial reconstruction sum_{j<=J} of the Faber-Schauder series at t
template <typename Scalar>
Scalar schauder_reconstruct(const SchauderCoeffs<Scalar>& c, Scalar t, int through_level = -1) {
  if (through_level < 0) through_level = c.max_level;
  Scalar v = c.lambda0 * (Scalar(1) - t) + c.lambda1 * t;
  for (int j = 1; j <= through_level && j <= c.max_level; ++j) {
    const Scalar h = Scalar(std::ldexp(1.0, -j));
    const auto& level = c.levels[j - 1];
    // at most one tent per level covers t; locate it by its cell index
    const std::int64_t cell =
        std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(t / (2 * h))) + 1,
                               std::int64_t(1) << (j - 1));
    auto it = std::lower_bound(level.begin(), level.end(), cell,
                               [](const SchauderEntry<Scalar>& e, std::int64_t c0) {
                                 return e.cell < c0;
                               });
    if (it == level.end() || it->cell != cell) continue;
    const Scalar r = Scalar(2 * cell - 1) * h;
    const Scalar tent = std::max(Scalar(0), Scalar(1) - std::abs(t - r) / h);
    v += it->lambda * tent;
  }
  return v;
}

// exact sequential Holder norm sup_{j>=0} 2^{j a} max_{r in D_j} |lambda_r|
template <typename Scalar>
Scalar sequential_norm(const PolygonalPath<Scalar>& p, Scalar alpha) {
  if (!(alpha > Scalar(0) && alpha < Scalar(1)))
    throw std::invalid_argument("sequential_norm: alpha must lie in (0,1)");
  const Scalar level0 = std::max(std::abs(p.value(Scalar(0))), std::abs(p.value(Scalar(1))));
  return detail::level_sup_from(p, alpha, 1, level0);
}

// exact sup_{j>=J} 2^{j a} max_{r in D_j} |lambda_r|  (J = 0 gives the norm)
template <typename Scalar>
Scalar tightness_statistic(const PolygonalPath<Scalar>& p, Scalar alpha, int from_level) {
  if (!(alpha > Scalar(0) && alpha < Scalar(1)))
    throw std::invalid_argument("tightness_statistic: alpha must lie in (0,1)");
  if (from_level < 0) throw std::invalid_argument("tightness_statistic: negative level");
  if (from_level == 0) return sequential_norm(p, alpha);
  return detail::level_sup_from(p, alpha, from_level, Scalar(0));
}

// exact grid-increment majorant sup_{j>=1} 2^{j a} max_k |x((k+1)2^-j) - x(k 2^-j)|.
// For levels with 2^j >= 2n every cell increment is bounded by lip 2^-j and the
// bound is attained inside the steepest segment, so the deep-level supremum is
// the closed form lip 2^{(j*+1)(a-1)}.
template <typename Scalar>
Scalar increment_seq_bound(const PolygonalPath<Scalar>& p, Scalar alpha) {
  if (!(alpha > Scalar(0) && alpha < Scalar(1)))
    throw std::invalid_argument("increment_seq_bound: alpha must lie in (0,1)");
  const Scalar lip = p.max_slope();
  int jstar = 1;
  while ((std::int64_t(1) << jstar) < 2 * p.n) ++jstar;
  Scalar cur = Scalar(0);
  for (int j = 1; j <= jstar; ++j) {
    const Scalar h = Scalar(std::ldexp(1.0, -j));
    Scalar m = Scalar(0);
    Scalar prev = p.value(Scalar(0));
    for (std::int64_t k = 1; k <= (std::int64_t(1) << j); ++k) {
      const Scalar v = p.value(Scalar(k) * h);
      m = std::max(m, std::abs(v - prev));
      prev = v;
    }
    cur = std::max(cur, Scalar(std::pow(Scalar(2), alpha * j)) * m);
  }
  return std::max(cur, lip * Scalar(std::pow(Scalar(2), (alpha - Scalar(1)) * (jstar + 1))));
}

}  // namespace holderlab
