#pragma once

// Rank-one rotation towers over the golden rotation theta = (sqrt(5)-1)/2.
//
// The orbit grid {frac(i theta) : 0 <= i < n} has a certified minimal gap:
// by the three-distance theorem the closest return happens at the largest
// Fibonacci number F <= n-1, and for the golden rotation the distances obey
// |F_k theta - F_{k-1}| = theta^{k+1} exactly (with the ladder 1, 2, 3, 5, ...).
// A tower base C = [x_base, x_base + epsilon) with epsilon strictly below the
// minimal gap therefore has pairwise disjoint images T^{-i}C for i < n, and
// every point sits in at most one image.  The total mass n * epsilon stays
// strictly below one; we parametrize it as c = n * epsilon and require
// c > 1/2, which is only possible when n * min_gap > 1/2 -- an explicit
// admissibility window between consecutive Fibonacci numbers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace holderlab {

inline constexpr double kGoldenRotation = 0.61803398874989484820;

// raised when schedule or tower parameters admit no valid construction
struct InfeasibleScheduleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
// grids are materialized, so cap the tower height at a sane memory budget
inline constexpr std::int64_t kTowerSizeCap = std::int64_t(1) << 22;
}  // namespace detail

struct GapCertificate {
  std::int64_t fibonacci = 1;  // largest ladder entry <= n-1
  double gap = 0.0;            // theta^{k+1} for that ladder index
};

// certified minimal gap of the first n orbit points
inline GapCertificate min_gap_certificate(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("min_gap_certificate: need at least two points");
  std::int64_t fib_prev = 1, fib = 2;
  double power = kGoldenRotation * kGoldenRotation;  // distance at ladder entry 1
  while (fib <= n - 1) {
    const std::int64_t next = fib_prev + fib;
    fib_prev = fib;
    fib = next;
    power *= kGoldenRotation;
  }
  return {fib_prev, power};
}

// true when the mass window (1/2, n * min_gap) is nonempty
inline bool tower_admissible(std::int64_t n) {
  const auto cert = min_gap_certificate(n);
  return static_cast<double>(n) * cert.gap > 0.5;
}

// smallest admissible height >= n_min (walks the Fibonacci windows)
inline std::int64_t next_admissible_height(std::int64_t n_min, std::int64_t n_max) {
  if (n_min < 4) n_min = 4;
  std::int64_t fib_prev = 1, fib = 2;
  double power = kGoldenRotation * kGoldenRotation;
  // gap is constant on each window n in [fib+1, next_fib]
  while (fib_prev < n_max) {
    const std::int64_t window_lo = fib + 1;
    const std::int64_t next = fib_prev + fib;
    const std::int64_t window_hi = next;
    const double gap = power * kGoldenRotation;  // distance for heights in this window
    // need n * gap > 1/2
    const double min_n_real = 0.5 / gap;
    std::int64_t lo = window_lo;
    if (static_cast<double>(lo) * gap <= 0.5)
      lo = static_cast<std::int64_t>(std::floor(min_n_real)) + 1;
    lo = std::max(lo, n_min);
    if (lo <= window_hi && lo <= n_max && static_cast<double>(lo) * gap > 0.5) return lo;
    fib_prev = fib;
    fib = next;
    power *= kGoldenRotation;
  }
  throw InfeasibleScheduleError("no admissible tower height in range");
}

struct RotationTower {
  std::int64_t n = 0;
  double epsilon = 0.0;  // base width, strictly below the minimal gap
  double c = 0.0;        // n * epsilon, in (1/2, n * min_gap)
  double min_gap = 0.0;
  std::vector<double> fracs;        // sorted frac(i theta)
  std::vector<std::int64_t> index;  // orbit index of each sorted point
};

// Build the tower of height n with base [0, c/n).  c = 0 picks the midpoint
// of the admissible window.
inline RotationTower build_tower(std::int64_t n, double c = 0.0) {
  if (n < 2) throw std::invalid_argument("build_tower: height must be at least two");
  if (n > detail::kTowerSizeCap)
    throw std::invalid_argument("build_tower: height exceeds the in-memory grid budget");
  const auto cert = min_gap_certificate(n);
  const double upper = static_cast<double>(n) * cert.gap;
  if (!(upper > 0.5))
    throw InfeasibleScheduleError("build_tower: no admissible mass (n * min_gap <= 1/2)");
  if (c == 0.0) c = 0.5 * (0.5 + upper);
  if (!(c > 0.5) || !(c < upper))
    throw std::invalid_argument("build_tower: mass outside the admissible window");

  RotationTower tw;
  tw.n = n;
  tw.c = c;
  tw.epsilon = c / static_cast<double>(n);
  tw.min_gap = cert.gap;
  std::vector<std::pair<double, std::int64_t>> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = std::fmod(static_cast<double>(i) * kGoldenRotation, 1.0);
    pts.emplace_back(x, i);
  }
  std::sort(pts.begin(), pts.end());
  tw.fracs.resize(static_cast<std::size_t>(n));
  tw.index.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    tw.fracs[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(i)].first;
    tw.index[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(i)].second;
  }
  return tw;
}

// Orbit level of x: the unique i < n with frac(x - i theta) in the base, or
// -1 when x lies outside the tower.  Disjointness makes the predecessor grid
// point the only candidate.
inline std::int64_t floor_index(const RotationTower& tw, double x) {
  const auto it = std::upper_bound(tw.fracs.begin(), tw.fracs.end(), x);
  if (it != tw.fracs.begin()) {
    const std::size_t pos = static_cast<std::size_t>(it - tw.fracs.begin()) - 1;
    if (x - tw.fracs[pos] < tw.epsilon) return tw.index[pos];
  } else {
    // x below every grid point: only the topmost point's window can wrap
    const std::size_t last = tw.fracs.size() - 1;
    if (x + 1.0 - tw.fracs[last] < tw.epsilon) return tw.index[last];
  }
  return -1;
}

// direct O(n log n) disjointness audit of the sorted grid against the
// certificate; intended for moderate heights
inline void audit_tower(const RotationTower& tw) {
  double smallest = 1.0;
  for (std::size_t i = 1; i < tw.fracs.size(); ++i)
    smallest = std::min(smallest, tw.fracs[i] - tw.fracs[i - 1]);
  smallest = std::min(smallest, tw.fracs.front() + 1.0 - tw.fracs.back());
  if (std::abs(smallest - tw.min_gap) > 1e-6 * tw.min_gap)
    throw std::logic_error("audit_tower: certificate and measured gap disagree");
  if (!(tw.epsilon < smallest)) throw std::logic_error("audit_tower: base overlaps a neighbour");
}

}  // namespace holderlab
