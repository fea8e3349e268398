#pragma once

// Multi-level simulation schedules.  A schedule fixes, per level l, a mass
// scale L_l, dyadic radii (I_l annulus offset, J_l annulus count, window
// k_l = 2^{I_l+J_l}) and a tower height n_l, subject to the growth system
//   (G1)  n_l >= l^2 k_l n_{l-1}                       (budget growth)
//   (G2)  J_l * mu{|N| >= 4^{1/p} L_l} bounded below   (event-rate target)
//   (G3)  J_l 2^{-I_l/2} -> 0                          (normal-approx error)
//   (G4)  sum_{i>l} k_i/n_i light against 1/n_l        (higher-level leakage)
//   (G5)  sum_{i<l} (k_l/L_i)(n_i/2^{I_i})^{1/p} < n_l^{1/p}/2
//                                                      (lower-level drift)
// plus tower admissibility of each n_l.
//
// Two regimes are provided.  The desk regime searches small parameters that
// a workstation can simulate, replacing the limit conditions (G2)-(G4) by
// explicit finite targets; the search is greedy over levels but exhaustive
// over (I, J) within a level, and minimizing the level heights
// h_i = (n_i/2^{I_i})^{1/p}/L_i level by level also minimizes every later
// requirement, so an infeasibility report carries a true lower bound on the
// required height.  The faithful regime follows the growth system literally;
// its parameters explode past any machine-word range, so levels are kept as
// exponents (n_l = 2^{nu_l}, J_l = 2^{jexp_l}) with arbitrary-precision
// integers, and every invariant is certified by directed exponent bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "holderlab/stats.hpp"
#include "holderlab/tower.hpp"

namespace holderlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct InvariantCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline bool all_pass(const std::vector<InvariantCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

// ---------------------------------------------------------------- desk form

struct DeskLevel {
  double L = 1.0;
  int I = 1;
  int J = 1;
  std::int64_t n = 0;
  double c = 0.0;  // tower mass n * epsilon

  std::int64_t k() const { return std::int64_t(1) << (I + J); }
};

struct DeskSchedule {
  double p = 3.0;
  std::vector<DeskLevel> levels;
};

// largest L with J * mu{|N| >= 4^{1/p} L} >= 1/2
inline double desk_mass_scale_bound(double p, int J) {
  if (J < 1) throw std::invalid_argument("desk_mass_scale_bound: need J >= 1");
  return stats::normal_two_sided_quantile(0.5 / J) / std::pow(4.0, 1.0 / p);
}

inline double desk_level_height(const DeskLevel& lv, double p) {
  return std::pow(static_cast<double>(lv.n) / std::ldexp(1.0, lv.I), 1.0 / p) / lv.L;
}

namespace detail {

struct DeskCandidate {
  bool feasible = false;
  DeskLevel level;
  double h = 0.0;
  std::int64_t required = 0;  // minimal height before the bound clamp
};

inline DeskCandidate desk_search_level(double p, int level_index, int min_I, double sum_h,
                                       std::int64_t n_prev, std::int64_t n_max) {
  DeskCandidate best;
  std::int64_t least_required = std::numeric_limits<std::int64_t>::max();
  for (int I = min_I; I <= 26; ++I) {
    for (int J = 1; J <= 26 && I + J <= 39; ++J) {
      const std::int64_t k = std::int64_t(1) << (I + J);
      const double L = 0.995 * desk_mass_scale_bound(p, J);
      // (G5) strict lower bound on the height, empty for the first level
      double req_real = 4.0 * static_cast<double>(k);
      if (sum_h > 0.0) {
        const double drift = std::pow(2.0 * static_cast<double>(k) * sum_h, p);
        req_real = std::max(req_real, drift + 1.0);
      }
      if (n_prev > 0) {
        const double growth = static_cast<double>(level_index) * level_index *
                              static_cast<double>(k) * static_cast<double>(n_prev);
        const double leakage = 128.0 * static_cast<double>(k) * static_cast<double>(n_prev);
        req_real = std::max({req_real, growth, leakage});
      }
      if (req_real > 9.0e17) continue;  // outside any representable schedule
      const std::int64_t required = static_cast<std::int64_t>(std::ceil(req_real));
      least_required = std::min(least_required, required);
      if (required > n_max) continue;
      std::int64_t n;
      try {
        n = next_admissible_height(required, n_max);
      } catch (const InfeasibleScheduleError&) {
        continue;
      }
      DeskLevel lv{L, I, J, n, 0.0};
      const auto cert = min_gap_certificate(n);
      lv.c = 0.5 * (0.5 + static_cast<double>(n) * cert.gap);
      const double h = desk_level_height(lv, p);
      if (!best.feasible || h < best.h - 1e-15 ||
          (std::abs(h - best.h) <= 1e-15 && n < best.level.n)) {
        best.feasible = true;
        best.level = lv;
        best.h = h;
      }
    }
  }
  best.required = (least_required == std::numeric_limits<std::int64_t>::max())
                      ? -1
                      : least_required;
  return best;
}

}  // namespace detail

// Greedy-per-level, exhaustive-per-(I,J) search.  Throws an infeasibility
// report naming the first level whose minimal height exceeds the bound.
inline DeskSchedule build_desk_schedule(double p, int levels,
                                        std::int64_t n_max = std::int64_t(1) << 40) {
  if (!(p > 2.0)) throw std::invalid_argument("build_desk_schedule: p must exceed 2");
  if (levels < 1) throw std::invalid_argument("build_desk_schedule: need at least one level");
  DeskSchedule sched;
  sched.p = p;
  double sum_h = 0.0;
  std::int64_t n_prev = 0;
  int min_I = 1;
  for (int l = 1; l <= levels; ++l) {
    const auto cand = detail::desk_search_level(p, l, min_I, sum_h, n_prev, n_max);
    if (!cand.feasible) {
      std::ostringstream msg;
      msg << "desk schedule infeasible at level " << l << ": minimal admissible height ";
      if (cand.required > 0)
        msg << cand.required;
      else
        msg << "(beyond int64)";
      msg << " exceeds the bound " << n_max;
      throw InfeasibleScheduleError(msg.str());
    }
    sched.levels.push_back(cand.level);
    sum_h += cand.h;
    n_prev = cand.level.n;
    min_I = cand.level.I + 1;
  }
  return sched;
}

inline std::vector<InvariantCheck> validate_schedule(const DeskSchedule& s) {
  std::vector<InvariantCheck> out;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back({name, pass, detail});
  };
  std::ostringstream d;
  add("p-range", s.p > 2.0, "p > 2");
  add("levels-nonempty", !s.levels.empty(), "");
  if (s.levels.empty()) return out;

  const int L = static_cast<int>(s.levels.size());
  for (int l = 1; l <= L; ++l) {
    const auto& lv = s.levels[static_cast<std::size_t>(l - 1)];
    const std::string tag = "level-" + std::to_string(l) + "-";
    add(tag + "radii", lv.I >= 1 && lv.J >= 1 && lv.I + lv.J <= 62,
        "I >= 1, J >= 1, window in range");
    if (l >= 2)
      add(tag + "offset-increasing", lv.I > s.levels[static_cast<std::size_t>(l - 2)].I, "");
    add(tag + "doubling-ratio", 2.0 / (1.0 - std::ldexp(1.0, -lv.I)) <= 4.0,
        "2/(1-2^-I) <= 4");
    add(tag + "window-margin", lv.n > 2 * lv.k(), "n > 2k");

    bool adm = false, mass_ok = false;
    std::string gap_note;
    if (lv.n >= 2) {
      const auto cert = min_gap_certificate(lv.n);
      const double upper = static_cast<double>(lv.n) * cert.gap;
      adm = upper > 0.5;
      mass_ok = lv.c > 0.5 && lv.c < upper;
      std::ostringstream g;
      g << "n*min_gap = " << upper;
      gap_note = g.str();
    }
    add(tag + "tower-admissible", adm, gap_note);
    add(tag + "mass-window", mass_ok, "c in (1/2, n*min_gap)");

    const double rate = lv.J * stats::normal_two_sided_tail(std::pow(4.0, 1.0 / s.p) * lv.L);
    std::ostringstream r;
    r << "J*tail = " << rate;
    add(tag + "event-rate", rate >= 0.5, r.str());

    if (l >= 2) {
      const auto& pv = s.levels[static_cast<std::size_t>(l - 2)];
      add(tag + "budget-growth",
          static_cast<double>(lv.n) >=
              static_cast<double>(l) * l * static_cast<double>(lv.k()) * static_cast<double>(pv.n),
          "n_l >= l^2 k_l n_{l-1}");
      double drift = 0.0;
      for (int i = 1; i < l; ++i) {
        const auto& iv = s.levels[static_cast<std::size_t>(i - 1)];
        drift += static_cast<double>(lv.k()) / iv.L *
                 std::pow(static_cast<double>(iv.n) / std::ldexp(1.0, iv.I), 1.0 / s.p);
      }
      std::ostringstream m;
      m << "drift " << drift << " vs " << 0.5 * std::pow(static_cast<double>(lv.n), 1.0 / s.p);
      add(tag + "drift-bound", drift < 0.5 * std::pow(static_cast<double>(lv.n), 1.0 / s.p),
          m.str());
    }

    double leakage = 0.0;
    for (int i = l + 1; i <= L; ++i) {
      const auto& iv = s.levels[static_cast<std::size_t>(i - 1)];
      leakage += static_cast<double>(iv.k()) / static_cast<double>(iv.n);
    }
    std::ostringstream lk;
    lk << "2 n_l tail = " << 2.0 * static_cast<double>(lv.n) * leakage;
    add(tag + "leakage", 2.0 * static_cast<double>(lv.n) * leakage <= 1.0 / 32.0, lk.str());
  }
  return out;
}

// ------------------------------------------------------------ faithful form

struct FaithfulLevel {
  BigInt jexp;  // J = 2^jexp
  BigInt I;
  BigInt e;   // log2 k = I + J
  BigInt nu;  // log2 n
};

struct FaithfulSchedule {
  double p = 3.0;
  std::vector<FaithfulLevel> levels;
};

namespace detail {

// smallest m with 2^m >= v (v >= 1)
inline BigInt ceil_log2(const BigInt& v) {
  if (v <= 0) throw std::invalid_argument("ceil_log2: positive input required");
  BigInt m = 0, pow = 1;
  while (pow < v) {
    pow <<= 1;
    ++m;
  }
  return m;
}

// largest m with 2^m <= v
inline BigInt floor_log2(const BigInt& v) {
  if (v <= 0) throw std::invalid_argument("floor_log2: positive input required");
  BigInt m = 0, pow = 1;
  while ((pow << 1) <= v) {
    pow <<= 1;
    ++m;
  }
  return m;
}

inline BigInt floor_rat(const BigRat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

// base-2 log of the two-sided normal tail at 4^{1/p} l^2, as a double; the
// asymptotic series keeps ~1e-13 relative accuracy far past underflow
inline double tail_log2(double p, int l) {
  const double x = std::pow(4.0, 1.0 / p) * static_cast<double>(l) * l;
  return stats::log_normal_two_sided_tail(x) / std::log(2.0);
}

}  // namespace detail

inline FaithfulSchedule build_faithful_schedule(double p, int levels) {
  if (!(p > 2.0)) throw std::invalid_argument("build_faithful_schedule: p must exceed 2");
  if (levels < 1 || levels > 8)
    throw std::invalid_argument("build_faithful_schedule: level count out of range");
  FaithfulSchedule s;
  s.p = p;
  const BigRat p_rat(p);  // the double's exact dyadic value
  BigInt nu_prev = 0;
  BigInt e_prev = 0;
  std::vector<BigRat> height_log;  // (nu_i - I_i)/p per built level
  std::vector<BigInt> lsq_floor;   // floor log2 of L_i = i^2
  for (int l = 1; l <= levels; ++l) {
    FaithfulLevel lv;
    const double lt = detail::tail_log2(p, l);
    lv.jexp = BigInt(static_cast<long long>(std::ceil(-lt)));
    lv.I = 2 * (lv.jexp + l);
    lv.e = lv.I + (BigInt(1) << static_cast<unsigned>(lv.jexp.convert_to<long long>()));

    BigInt nu = lv.e + 8;  // first level: margin over the window
    if (l >= 2) {
      const BigInt g1 = detail::ceil_log2(BigInt(l) * l) + lv.e + nu_prev;
      const BigInt g4 = lv.e + nu_prev + 8;
      // (G5): bound each drift term by 2^{e_l - floor log2 L_i + ceil h_i},
      // sum by the count, and demand a strict exponent gap
      BigRat max_term(0);
      for (int i = 0; i < l - 1; ++i) {
        BigRat term = BigRat(lv.e - lsq_floor[static_cast<std::size_t>(i)]) +
                      height_log[static_cast<std::size_t>(i)];
        if (i == 0 || term > max_term) max_term = term;
      }
      const BigRat bound = BigRat(detail::ceil_log2(BigInt(l - 1))) + max_term;
      // need nu/p - 1 > bound + 1  =>  nu > p (bound + 2)
      const BigInt g5 = detail::floor_rat(p_rat * (bound + 2)) + 1;
      const BigInt gap = lv.e - (e_prev - nu_prev) + 1;  // keep e_i - nu_i falling
      nu = g1;
      if (g4 > nu) nu = g4;
      if (g5 > nu) nu = g5;
      if (gap > nu) nu = gap;
      if (nu_prev + 1 > nu) nu = nu_prev + 1;
    }
    lv.nu = nu;
    height_log.push_back(BigRat(lv.nu - lv.I) / p_rat);
    lsq_floor.push_back(detail::floor_log2(BigInt(l) * l));
    nu_prev = lv.nu;
    e_prev = lv.e;
    s.levels.push_back(std::move(lv));
  }
  return s;
}

inline std::vector<InvariantCheck> validate_schedule(const FaithfulSchedule& s) {
  std::vector<InvariantCheck> out;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    out.push_back({name, pass, detail});
  };
  add("p-range", s.p > 2.0, "p > 2");
  add("levels-nonempty", !s.levels.empty(), "");
  if (s.levels.empty()) return out;
  const BigRat p_rat(s.p);
  const int L = static_cast<int>(s.levels.size());
  for (int l = 1; l <= L; ++l) {
    const auto& lv = s.levels[static_cast<std::size_t>(l - 1)];
    const std::string tag = "level-" + std::to_string(l) + "-";

    add(tag + "radii", lv.I >= 1 && lv.jexp >= 0 && lv.e == lv.I + (BigInt(1) << static_cast<unsigned>(lv.jexp.convert_to<long long>())),
        "window exponent consistent");
    if (l >= 2)
      add(tag + "offset-increasing", lv.I > s.levels[static_cast<std::size_t>(l - 2)].I, "");

    // event-rate calibration: log2(J * tail) must land in [0, 1)
    const double lt = detail::tail_log2(s.p, l);
    const double cal = static_cast<double>(lv.jexp.convert_to<long long>()) + lt;
    std::ostringstream c;
    c << "log2(J*tail) = " << cal;
    add(tag + "event-rate", cal >= -1e-6 && cal < 1.0 + 1e-6, c.str());

    // normal-approx error: J 2^{-I/2} <= 2^{-l}, i.e. jexp - I/2 <= -l
    add(tag + "approx-error", BigRat(lv.jexp) - BigRat(lv.I) / 2 <= BigRat(-l), "jexp - I/2 <= -l");

    add(tag + "window-margin", lv.nu >= lv.e + 1, "n >= 2k");

    if (l >= 2) {
      const auto& pv = s.levels[static_cast<std::size_t>(l - 2)];
      add(tag + "budget-growth", lv.nu >= detail::ceil_log2(BigInt(l) * l) + lv.e + pv.nu,
          "nu_l >= ceil log2(l^2) + e_l + nu_{l-1}");
      // (G5) certificate: directed exponent bound on the drift sum
      BigRat max_term(0);
      for (int i = 1; i < l; ++i) {
        const auto& iv = s.levels[static_cast<std::size_t>(i - 1)];
        BigRat term = BigRat(lv.e - detail::floor_log2(BigInt(i) * i)) +
                      BigRat(iv.nu - iv.I) / p_rat;
        if (i == 1 || term > max_term) max_term = term;
      }
      const BigRat lhs_exp = BigRat(detail::ceil_log2(BigInt(l - 1))) + max_term;
      const BigRat rhs_exp = BigRat(lv.nu) / p_rat - 1;
      std::ostringstream m;
      m << "drift exponent bound vs height exponent";
      add(tag + "drift-bound", lhs_exp < rhs_exp, m.str());
      // the exponent gap e - nu must fall strictly, which powers the
      // geometric leakage majorant below
      add(tag + "gap-monotone", lv.e - lv.nu <= pv.e - pv.nu - 1, "e_l - nu_l decreasing");
    }
    if (l < L) {
      // leakage: sum_{i>l} 2^{e_i - nu_i} <= 2^{1 + e_{l+1} - nu_{l+1}} must
      // stay below 2^{-6 - nu_l}
      const auto& nx = s.levels[static_cast<std::size_t>(l)];
      add(tag + "leakage", nx.e - nx.nu + 1 <= -6 - lv.nu,
          "geometric tail against 2^{-6-nu_l}");
    }
  }
  return out;
}

// ------------------------------------------------------------ serialization

inline void save_schedule(std::ostream& os, const DeskSchedule& s) {
  os << "schedule v1\n";
  os << "mode desk\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s.p);
  os << "p " << buf << "\n";
  os << "levels " << s.levels.size() << "\n";
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const auto& lv = s.levels[i];
    std::snprintf(buf, sizeof buf, "%.17g", lv.L);
    os << "level " << (i + 1) << " L " << buf << " I " << lv.I << " J " << lv.J << " n " << lv.n;
    std::snprintf(buf, sizeof buf, "%.17g", lv.c);
    os << " c " << buf << "\n";
  }
}

inline void save_schedule(std::ostream& os, const FaithfulSchedule& s) {
  os << "schedule v1\n";
  os << "mode faithful\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s.p);
  os << "p " << buf << "\n";
  os << "levels " << s.levels.size() << "\n";
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const auto& lv = s.levels[i];
    os << "level " << (i + 1) << " jexp " << lv.jexp << " I " << lv.I << " e " << lv.e << " nu "
       << lv.nu << "\n";
  }
}

struct ScheduleFile {
  std::string mode;  // "desk" or "faithful"
  DeskSchedule desk;
  FaithfulSchedule faithful;
};

inline ScheduleFile load_schedule(std::istream& is) {
  auto fail = [](const std::string& why) -> ScheduleFile {
    throw std::invalid_argument("schedule file: " + why);
  };
  std::string line;
  if (!std::getline(is, line) || line != "schedule v1") return fail("missing header");
  std::string key, mode;
  if (!(is >> key >> mode) || key != "mode" || (mode != "desk" && mode != "faithful"))
    return fail("missing mode");
  double p = 0.0;
  if (!(is >> key >> p) || key != "p" || !(p > 2.0)) return fail("missing or invalid p");
  std::size_t levels = 0;
  if (!(is >> key >> levels) || key != "levels" || levels == 0) return fail("missing level count");
  ScheduleFile out;
  out.mode = mode;
  if (mode == "desk") {
    out.desk.p = p;
    for (std::size_t i = 0; i < levels; ++i) {
      std::size_t idx = 0;
      DeskLevel lv;
      std::string kL, kI, kJ, kn, kc;
      if (!(is >> key >> idx >> kL >> lv.L >> kI >> lv.I >> kJ >> lv.J >> kn >> lv.n >> kc >>
            lv.c) ||
          key != "level" || idx != i + 1 || kL != "L" || kI != "I" || kJ != "J" || kn != "n" ||
          kc != "c")
        return fail("malformed desk level");
      out.desk.levels.push_back(lv);
    }
  } else {
    out.faithful.p = p;
    for (std::size_t i = 0; i < levels; ++i) {
      std::size_t idx = 0;
      FaithfulLevel lv;
      std::string kj, kI, ke, kn, sj, sI, se, sn;
      if (!(is >> key >> idx >> kj >> sj >> kI >> sI >> ke >> se >> kn >> sn) || key != "level" ||
          idx != i + 1 || kj != "jexp" || kI != "I" || ke != "e" || kn != "nu")
        return fail("malformed faithful level");
      try {
        lv.jexp = BigInt(sj);
        lv.I = BigInt(sI);
        lv.e = BigInt(se);
        lv.nu = BigInt(sn);
      } catch (...) {
        return fail("bad bignum field");
      }
      out.faithful.levels.push_back(std::move(lv));
    }
  }
  return out;
}

}  // namespace holderlab
