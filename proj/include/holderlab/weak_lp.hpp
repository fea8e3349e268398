#pragma once

// Weak-L^p quasi-norm, the N_p norm, and tail diagnostics for simple
// functions on a (sub-)probability space.
//
// A SimpleFunction is a finite list of disjoint atoms (value, mass) kept in
// canonical form: values strictly decreasing, masses positive, total mass at
// most one; the remaining mass is an implicit atom of value zero.  Both norms
// then reduce to exact scans:
//   * the tail t -> mu{f > t} is a right-continuous step function, so
//     sup_t t^p mu{f > t} is attained as t increases to one of the values,
//     giving max_j a_j^p sum_{i<=j} mu_i;
//   * for N_p(f) = sup_A mu(A)^{1/p-1} E[f 1_A] the best set of a given mass
//     packs the largest values, and along each linear piece of the packed
//     integral the objective has positive derivative past any critical point,
//     so the supremum sits at an atom-boundary mass.  Scanning prefix masses
//     is therefore exact.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "holderlab/path.hpp"

namespace holderlab {

template <typename Scalar = double>
struct SimpleFunction {
  ArrayX<Scalar> values;  // strictly decreasing, final value may be zero
  ArrayX<Scalar> masses;  // positive, total at most one

  Scalar total_mass() const { return masses.size() ? masses.sum() : Scalar(0); }

  // canonicalize an arbitrary atom list: drop zero-mass atoms, sort by value,
  // merge equal values
  static SimpleFunction from_atoms(std::vector<std::pair<Scalar, Scalar>> atoms) {
    Scalar total = Scalar(0);
    std::vector<std::pair<Scalar, Scalar>> kept;
    kept.reserve(atoms.size());
    for (const auto& [v, m] : atoms) {
      if (!(v >= Scalar(0))) throw std::invalid_argument("SimpleFunction: negative value");
      if (m < Scalar(0)) throw std::invalid_argument("SimpleFunction: negative mass");
      if (m == Scalar(0)) continue;
      total += m;
      kept.emplace_back(v, m);
    }
    if (total > Scalar(1) + Scalar(1e-9)) throw std::invalid_argument("SimpleFunction: total mass exceeds one");
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    SimpleFunction f;
    f.values.resize(static_cast<Eigen::Index>(kept.size()));
    f.masses.resize(static_cast<Eigen::Index>(kept.size()));
    Eigen::Index out = 0;
    for (const auto& [v, m] : kept) {
      if (out > 0 && f.values[out - 1] == v) {
        f.masses[out - 1] += m;
      } else {
        f.values[out] = v;
        f.masses[out] = m;
        ++out;
      }
    }
    f.values.conservativeResize(out);
    f.masses.conservativeResize(out);
    return f;
  }

  // equal-mass empirical distribution of |x_i|
  static SimpleFunction from_samples(const ArrayX<Scalar>& magnitudes, Scalar total = Scalar(1)) {
    if (magnitudes.size() == 0) throw std::invalid_argument("SimpleFunction: empty sample");
    std::vector<std::pair<Scalar, Scalar>> atoms;
    atoms.reserve(static_cast<std::size_t>(magnitudes.size()));
    const Scalar m = total / static_cast<Scalar>(magnitudes.size());
    for (Eigen::Index i = 0; i < magnitudes.size(); ++i)
      atoms.emplace_back(std::abs(magnitudes[i]), m);
    return from_atoms(std::move(atoms));
  }
};

// exact weak-L^p quasi-norm (sup_t t^p mu{f > t})^{1/p}
template <typename Scalar>
Scalar weak_norm_exact(const SimpleFunction<Scalar>& f, Scalar p) {
  if (!(p > Scalar(0))) throw std::invalid_argument("weak_norm_exact: p must be positive");
  Scalar best = Scalar(0);
  Scalar mass = Scalar(0);
  for (Eigen::Index j = 0; j < f.values.size(); ++j) {
    mass += f.masses[j];
    best = std::max(best, Scalar(std::pow(f.values[j], p)) * mass);
  }
  return Scalar(std::pow(best, Scalar(1) / p));
}

// majorant max_j a_j^p sum_{i<=j} mu_i over the atoms in the order given;
// dominates the p-th power of the weak norm for any ordering and matches it
// when the atoms arrive sorted by decreasing value
template <typename Scalar>
Scalar simple_weak_bound(const std::vector<std::pair<Scalar, Scalar>>& atoms, Scalar p) {
  if (!(p > Scalar(0))) throw std::invalid_argument("simple_weak_bound: p must be positive");
  Scalar best = Scalar(0);
  Scalar mass = Scalar(0);
  for (const auto& [v, m] : atoms) {
    mass += m;
    best = std::max(best, Scalar(std::pow(v, p)) * mass);
  }
  return best;
}

template <typename Scalar>
Scalar simple_weak_bound(const SimpleFunction<Scalar>& f, Scalar p) {
  std::vector<std::pair<Scalar, Scalar>> atoms;
  atoms.reserve(static_cast<std::size_t>(f.values.size()));
  for (Eigen::Index j = 0; j < f.values.size(); ++j) atoms.emplace_back(f.values[j], f.masses[j]);
  return simple_weak_bound(atoms, p);
}

// N_p(f) = sup over sets of positive mass of mu(A)^{1/p - 1} E[f 1_A],
// exact via the prefix-mass scan described above
template <typename Scalar>
Scalar np_norm(const SimpleFunction<Scalar>& f, Scalar p) {
  if (!(p > Scalar(1))) throw std::invalid_argument("np_norm: p must exceed one");
  Scalar best = Scalar(0);
  Scalar mass = Scalar(0);
  Scalar integral = Scalar(0);
  for (Eigen::Index j = 0; j < f.values.size(); ++j) {
    mass += f.masses[j];
    integral += f.values[j] * f.masses[j];
    best = std::max(best, Scalar(std::pow(mass, Scalar(1) / p - Scalar(1))) * integral);
  }
  return best;
}

template <typename Scalar>
Scalar np_norm(const ArrayX<Scalar>& magnitudes, Scalar p) {
  return np_norm(SimpleFunction<Scalar>::from_samples(magnitudes), p);
}

// sharp constant in weak-norm <= N_p <= kappa_p * weak-norm.  For a set of
// mass a and weak norm M, E[f 1_A] <= integral_0^inf min(M^p t^-p, a) dt;
// splitting at t* = M a^{-1/p} evaluates to a t* + M^p t*^{1-p}/(p-1)
// = M a^{1-1/p} p/(p-1).
template <typename Scalar>
Scalar kappa_p(Scalar p) {
  if (!(p > Scalar(1))) throw std::invalid_argument("kappa_p: p must exceed one");
  return p / (p - Scalar(1));
}

// constant absorbing a doubled dyadic tail: kappa_p (1 + 2^{1/p})
template <typename Scalar>
Scalar kappa_p_prime(Scalar p) {
  return kappa_p(p) * (Scalar(1) + Scalar(std::pow(Scalar(2), Scalar(1) / p)));
}

template <typename Scalar = double>
struct TailProfile {
  Scalar p = Scalar(0);
  ArrayX<Scalar> grid;    // increasing thresholds
  ArrayX<Scalar> values;  // t^p * empirical mass of {|f| > t}
  Scalar sup_estimate = Scalar(0);
};

// empirical tail map on a log-spaced grid from the sample median to the
// sample max; flat-zero samples yield an all-zero profile
template <typename Scalar>
TailProfile<Scalar> tail_profile(const ArrayX<Scalar>& sample, Scalar p, int grid_size = 64) {
  if (sample.size() == 0) throw std::invalid_argument("tail_profile: empty sample");
  if (grid_size < 2) throw std::invalid_argument("tail_profile: grid needs at least two points");
  ArrayX<Scalar> mags = sample.abs();
  std::vector<Scalar> sorted(mags.data(), mags.data() + mags.size());
  std::sort(sorted.begin(), sorted.end());
  const Scalar hi = sorted.back();
  TailProfile<Scalar> out;
  out.p = p;
  out.grid = ArrayX<Scalar>::Zero(grid_size);
  out.values = ArrayX<Scalar>::Zero(grid_size);
  if (hi <= Scalar(0)) return out;
  Scalar lo = sorted[sorted.size() / 2];
  if (lo <= Scalar(0)) lo = *std::upper_bound(sorted.begin(), sorted.end(), Scalar(0));
  const Scalar llo = std::log(lo), lhi = std::log(hi);
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(sorted.size());
  for (int k = 0; k < grid_size; ++k) {
    const Scalar t = std::exp(llo + (lhi - llo) * Scalar(k) / Scalar(grid_size - 1));
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    out.grid[k] = t;
    out.values[k] = Scalar(std::pow(t, p)) * static_cast<Scalar>(above) * inv_n;
  }
  out.sup_estimate = out.values.maxCoeff();
  return out;
}

// conditional expectation onto a finite grouping of the atoms: each group is
// replaced by one atom carrying its total mass and mass-weighted mean value.
// Groups index the canonical atom list; unlisted mass (the implicit zero
// atom) is untouched.
template <typename Scalar>
SimpleFunction<Scalar> conditional_coarsen(const SimpleFunction<Scalar>& f,
                                           const std::vector<std::vector<int>>& groups) {
  std::vector<char> seen(static_cast<std::size_t>(f.values.size()), 0);
  std::vector<std::pair<Scalar, Scalar>> atoms;
  atoms.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("conditional_coarsen: empty group");
    Scalar mass = Scalar(0), integral = Scalar(0);
    for (int idx : g) {
      if (idx < 0 || idx >= f.values.size()) throw std::invalid_argument("conditional_coarsen: atom index out of range");
      if (seen[static_cast<std::size_t>(idx)]) throw std::invalid_argument("conditional_coarsen: atom grouped twice");
      seen[static_cast<std::size_t>(idx)] = 1;
      mass += f.masses[idx];
      integral += f.values[idx] * f.masses[idx];
    }
    atoms.emplace_back(integral / mass, mass);
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("conditional_coarsen: grouping must cover all atoms");
  return SimpleFunction<Scalar>::from_atoms(std::move(atoms));
}

}  // namespace holderlab
