#pragma once

// Evaluation of the per-level annulus functions along tower orbits, and of
// the sign-modulated sums they generate.
//
// A level (L, I, J, n, k = 2^{I+J}) carries the function
//   f(floor i) = (n / 2^{I+j})^{1/p} / L   for i in [2^{I+j}, 2^{I+j+1}),
//                                              j = 0..J-1,
//   f(floor i) = (n / 2^I)^{1/p} / L       for i in [0, 2^I)   (the base
//                                              block, same value as j = 0),
//   f = 0 for i >= k or outside the tower.
// The dynamics is the rotation T x = x - theta (mod 1), under which the
// floor index *descends*: a point on floor i >= 1 moves to floor i-1, so an
// orbit walks down through the annuli toward the base and then exits.

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "holderlab/path.hpp"
#include "holderlab/rng.hpp"
#include "holderlab/schedule.hpp"
#include "holderlab/tower.hpp"
#include "holderlab/weak_lp.hpp"

namespace holderlab {

struct TowerFunction {
  int I = 1;
  int J = 1;
  std::int64_t n = 0;
  std::int64_t k = 0;
  double L = 1.0;
  std::vector<double> annulus_value;  // index j = 0..J-1

  double value_at_floor(std::int64_t i) const {
    if (i < 0 || i >= k) return 0.0;
    int j = 0;
    if (i >= 2) {
      const int w = std::bit_width(static_cast<std::uint64_t>(i)) - 1;  // floor log2
      j = w - I;
      if (j < 0) j = 0;
    }
    return annulus_value[static_cast<std::size_t>(j)];
  }
};

inline TowerFunction make_tower_function(const DeskLevel& lv, double p) {
  if (lv.n <= 0) throw std::invalid_argument("make_tower_function: level height missing");
  TowerFunction f;
  f.I = lv.I;
  f.J = lv.J;
  f.n = lv.n;
  f.k = lv.k();
  f.L = lv.L;
  f.annulus_value.resize(static_cast<std::size_t>(lv.J));
  for (int j = 0; j < lv.J; ++j)
    f.annulus_value[static_cast<std::size_t>(j)] =
        std::pow(static_cast<double>(lv.n) / std::ldexp(1.0, lv.I + j), 1.0 / p) / lv.L;
  return f;
}

// distribution of f over the tower: per-block atoms (value, block_length * epsilon)
inline SimpleFunction<double> tower_function_distribution(const TowerFunction& f, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("tower_function_distribution: epsilon must be positive");
  std::vector<std::pair<double, double>> atoms;
  atoms.emplace_back(f.annulus_value[0], std::ldexp(1.0, f.I) * epsilon);  // base block
  for (int j = 0; j < f.J; ++j)
    atoms.emplace_back(f.annulus_value[static_cast<std::size_t>(j)],
                       std::ldexp(1.0, f.I + j) * epsilon);
  return SimpleFunction<double>::from_atoms(std::move(atoms));
}

// annuli without the base block
inline SimpleFunction<double> tower_function_main_distribution(const TowerFunction& f,
                                                               double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("tower_function_main_distribution: epsilon must be positive");
  std::vector<std::pair<double, double>> atoms;
  for (int j = 0; j < f.J; ++j)
    atoms.emplace_back(f.annulus_value[static_cast<std::size_t>(j)],
                       std::ldexp(1.0, f.I + j) * epsilon);
  return SimpleFunction<double>::from_atoms(std::move(atoms));
}

// Closed forms for the exact weak norms.  With mass c = n * epsilon, the
// tail maximum of the full function is flat in the annulus index and equals
// (2c)^{1/p} / L; dropping the base block leaves the usual dyadic tail
// maximum c * max_j sum_{i<=j} 2^{i-j} = c (2 - 2^{1-J}).
inline double tower_weak_norm_closed(const DeskLevel& lv, double p) {
  return std::pow(2.0 * lv.c, 1.0 / p) / lv.L;
}

inline double tower_main_weak_norm_closed(const DeskLevel& lv, double p) {
  return std::pow(lv.c * (2.0 - std::ldexp(1.0, 1 - lv.J)), 1.0 / p) / lv.L;
}

// orbit position with incremental floor tracking
struct OrbitWalker {
  const RotationTower* tower = nullptr;
  double x = 0.0;
  std::int64_t floor = -1;

  void reset(const RotationTower& tw, double x0) {
    tower = &tw;
    x = x0;
    floor = floor_index(tw, x);
  }

  // one application of T (rotation by -theta); descending the tower is a
  // plain decrement, everything else re-searches
  void step() {
    x += 1.0 - kGoldenRotation;
    if (x >= 1.0) x -= 1.0;
    floor = (floor >= 1) ? floor - 1 : floor_index(*tower, x);
  }
};

// Per-level f paths and the shared sign sequence for one replica window.
struct ComponentPaths {
  ArrayX<double> signs;                 // iid +-1, length n
  std::vector<ArrayX<double>> f_paths;  // one per supplied tower, length n
};

// Independent uniform start per level, then n steps of the shared dynamics.
// Every random draw comes from the supplied stream in a fixed order, so a
// (seed, replica) pair reproduces the window bit for bit.
inline ComponentPaths eval_components(const std::vector<const TowerFunction*>& functions,
                                      const std::vector<const RotationTower*>& towers,
                                      Eigen::Index length, rng::Stream& rng) {
  if (functions.size() != towers.size())
    throw std::invalid_argument("eval_components: function/tower count mismatch");
  if (length <= 0) throw std::invalid_argument("eval_components: empty window");
  ComponentPaths out;
  const std::size_t m = functions.size();
  std::vector<OrbitWalker> walk(m);
  for (std::size_t l = 0; l < m; ++l) {
    if (towers[l] == nullptr || functions[l] == nullptr)
      throw std::invalid_argument("eval_components: missing level data");
    walk[l].reset(*towers[l], rng.u01());
  }
  out.signs.resize(length);
  out.f_paths.assign(m, ArrayX<double>(length));
  for (Eigen::Index u = 0; u < length; ++u) {
    out.signs[u] = rng.rademacher();
    for (std::size_t l = 0; l < m; ++l) {
      walk[l].step();
      out.f_paths[l][u] = functions[l]->value_at_floor(walk[l].floor);
    }
  }
  return out;
}

}  // namespace holderlab
