#pragma once

// Projection norms, tail sums and the martingale/coboundary split for causal
// linear processes x_t = sum_k a_k eps_{t-k} with iid innovations.
//
// For such a process the projection of x_0 onto the k-th innovation is
// exactly a_k eps_{-k}, so each projection norm is |a_k| times the innovation
// p-norm, and the split into a martingale part plus a telescoping coboundary
// is available in closed form:
//   x_t = A eps_t + g_t - g_{t+1},  A = sum_k a_k,
//   g_t = sum_{j=1}^{K} c_j eps_{t-j},  c_j = sum_{i=j}^{K} a_i.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "holderlab/generators.hpp"
#include "holderlab/path.hpp"

namespace holderlab {

// ||eps||_p of the unit-variance innovation families
inline double innovation_p_norm(GeneratorKind kind, double p, double beta = 4.0) {
  if (!(p > 0.0)) throw std::invalid_argument("innovation_p_norm: p must be positive");
  switch (kind) {
    case GeneratorKind::iid_gaussian:
      // E|N|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
      return std::pow(std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(M_PI),
                      1.0 / p);
    case GeneratorKind::iid_rademacher:
      return 1.0;
    case GeneratorKind::iid_pareto:
      return std::pow(pareto_abs_moment(beta, p), 1.0 / p);
    default:
      throw std::invalid_argument("innovation_p_norm: not an iid kind");
  }
}

struct ProjectionSummary {
  ArrayX<double> norms;      // norms[k] = |a_k| * ||eps||_p
  ArrayX<double> tail_sums;  // tail_sums[K] = sum_{k > K} norms[k]
  bool summable_trend = true;
};

// Per-lag projection norms with their tail sums.  The trend flag is a
// heuristic octave test on the partial sums: if the last octave of lags adds
// almost as much as the one before it (harmonic-like growth), summability of
// the full sequence is suspect.
inline ProjectionSummary hannan_projections(const std::vector<double>& a, double eps_p_norm) {
  if (a.empty()) throw std::invalid_argument("hannan_projections: no coefficients");
  if (!(eps_p_norm > 0.0)) throw std::invalid_argument("hannan_projections: innovation norm must be positive");
  const Eigen::Index len = static_cast<Eigen::Index>(a.size());
  ProjectionSummary out;
  out.norms.resize(len);
  for (Eigen::Index k = 0; k < len; ++k) out.norms[k] = std::abs(a[static_cast<std::size_t>(k)]) * eps_p_norm;
  out.tail_sums = ArrayX<double>::Zero(len);
  for (Eigen::Index k = len - 2; k >= 0; --k) out.tail_sums[k] = out.tail_sums[k + 1] + out.norms[k + 1];
  if (len >= 8) {
    double full = 0.0, half = 0.0, quarter = 0.0;
    for (Eigen::Index k = 0; k < len; ++k) {
      full += out.norms[k];
      if (k < len / 2) half += out.norms[k];
      if (k < len / 4) quarter += out.norms[k];
    }
    const double last_octave = full - half;
    const double prev_octave = half - quarter;
    if (prev_octave > 0.0 && last_octave >= 0.6 * prev_octave) out.summable_trend = false;
  }
  return out;
}

struct CoboundarySplit {
  double m_coeff = 0.0;           // A = sum_k a_k
  std::vector<double> g_coeffs;   // c_1..c_K, suffix sums of the a_k
};

inline CoboundarySplit martingale_coboundary_split(const std::vector<double>& a) {
  if (a.empty()) throw std::invalid_argument("coboundary split: no coefficients");
  CoboundarySplit out;
  const std::size_t K = a.size() - 1;
  out.g_coeffs.assign(K, 0.0);
  double suffix = 0.0;
  for (std::size_t j = a.size(); j-- > 1;) {
    suffix += a[j];
    out.g_coeffs[j - 1] = suffix;
  }
  out.m_coeff = suffix + a[0];
  return out;
}

struct SplitPaths {
  ArrayX<double> f;  // the linear process itself
  ArrayX<double> m;  // martingale part A eps_t
  double g_first = 0.0;
  double g_last = 0.0;
};

// Evaluate process, martingale part and coboundary boundary terms on one
// innovation array of length n + K (burn-in included), so that
//   sum_t f_t = sum_t m_t + g_first - g_last   holds exactly.
inline SplitPaths split_paths(const std::vector<double>& a, const ArrayX<double>& eps) {
  const Eigen::Index K = static_cast<Eigen::Index>(a.size()) - 1;
  const Eigen::Index n = eps.size() - K;
  if (n <= 0) throw std::invalid_argument("split_paths: innovation array shorter than the burn-in");
  const CoboundarySplit cs = martingale_coboundary_split(a);
  SplitPaths out;
  out.f.resize(n);
  out.m.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k <= K; ++k) acc += a[static_cast<std::size_t>(k)] * eps[t + K - k];
    out.f[t] = acc;
    out.m[t] = cs.m_coeff * eps[t + K];
  }
  auto g_at = [&](Eigen::Index t) {
    double acc = 0.0;
    for (Eigen::Index j = 1; j <= K; ++j) acc += cs.g_coeffs[static_cast<std::size_t>(j - 1)] * eps[t + K - j];
    return acc;
  };
  out.g_first = (K > 0) ? g_at(0) : 0.0;
  out.g_last = (K > 0) ? g_at(n) : 0.0;
  return out;
}

// Empirical long-run variance: average of S_n^2 / n across replica paths
inline double eta_estimate(const std::vector<SamplePath>& paths) {
  if (paths.empty()) throw std::invalid_argument("eta_estimate: no paths");
  double acc = 0.0;
  for (const auto& p : paths) {
    if (p.n <= 0) throw std::invalid_argument("eta_estimate: empty path");
    const double s = p.values.sum();
    acc += s * s / static_cast<double>(p.n);
  }
  return acc / static_cast<double>(paths.size());
}

// Split a difference sequence at threshold R.  The bounded part keeps the
// small values; the remainder carries the rare large ones.  No recentering is
// applied, which preserves the martingale property exactly when the
// conditional law of each difference is symmetric.
inline std::pair<ArrayX<double>, ArrayX<double>> truncate_martingale(const ArrayX<double>& values,
                                                                     double R) {
  if (!(R > 0.0)) throw std::invalid_argument("truncate_martingale: threshold must be positive");
  ArrayX<double> small(values.size()), large(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) <= R) {
      small[i] = values[i];
      large[i] = 0.0;
    } else {
      small[i] = 0.0;
      large[i] = values[i];
    }
  }
  return {std::move(small), std::move(large)};
}

}  // namespace holderlab
