#pragma once

// Scalar statistical helpers shared across the library: Gaussian tails (with a
// log-scale branch for arguments far beyond double underflow), two-sample
// Kolmogorov-Smirnov, Kendall concordance, and the usual Monte Carlo error
// bookkeeping.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace holderlab::stats {

// mu{ N >= x } for a standard normal
inline double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// mu{ |N| >= x }
inline double normal_two_sided_tail(double x) { return std::erfc(std::abs(x) / std::sqrt(2.0)); }

// log mu{ |N| >= x }, valid far past the underflow point of erfc.
// For large y = x/sqrt(2):  log erfc(y) = -y^2 - log(y sqrt(pi)) + log(S),
// S = 1 - 1/(2y^2) + 3/(4y^4) - 15/(8y^6) + ...
inline double log_normal_two_sided_tail(double x) {
  x = std::abs(x);
  const double y = x / std::sqrt(2.0);
  if (y < 24.0) return std::log(std::erfc(y));
  const double iy2 = 1.0 / (2.0 * y * y);
  double term = 1.0, s = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2 * k - 1) * iy2;
    s += term;
  }
  return -y * y - std::log(y * std::sqrt(M_PI)) + std::log(s);
}

// x with mu{|N| >= x} = q, for q in (0,1); bisection on the monotone tail
inline double normal_two_sided_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("tail level must be in (0,1)");
  double lo = 0.0, hi = 1.0;
  while (normal_two_sided_tail(hi) > q) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_two_sided_tail(mid) > q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// standard error of an empirical probability
inline double binomial_se(double p_hat, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(n));
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// two-sample Kolmogorov-Smirnov with the asymptotic p-value
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lam = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = 2.0 * sign * std::exp(-2.0 * k * k * lam * lam);
    p += t;
    sign = -sign;
    if (std::abs(t) < 1e-12) break;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

struct KendallResult {
  long concordant = 0;
  long discordant = 0;
  double tau = 0.0;
};

// Kendall tau-a on paired vectors (small inputs; ties count for neither side)
inline KendallResult kendall(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall: size mismatch");
  KendallResult r;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (x[j] - x[i]) * (y[j] - y[i]);
      if (s > 0) ++r.concordant;
      else if (s < 0) ++r.discordant;
    }
  const long total = static_cast<long>(n * (n - 1) / 2);
  if (total > 0) r.tau = static_cast<double>(r.concordant - r.discordant) / total;
  return r;
}

// one-sided sign-test p-value for "concordant pairs exceed discordant", pooling
// pair counts across independent repetitions (normal approximation)
inline double concordance_p_value(long concordant, long discordant) {
  const double m = static_cast<double>(concordant + discordant);
  if (m == 0) return 1.0;
  const double z = (concordant - discordant) / std::sqrt(m);
  return normal_upper_tail(z);
}

struct SlopeFit {
  double slope = 0.0;
  double se = 0.0;
};

// least-squares slope of y against x with its standard error
inline SlopeFit ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw std::invalid_argument("ls_slope: need >= 3 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n; my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("ls_slope: degenerate x");
  const double b = sxy / sxx, a = my - b * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (a + b * x[i]);
    ss += e * e;
  }
  const double s2 = ss / (n - 2);
  return {b, std::sqrt(s2 / sxx)};
}

}  // namespace holderlab::stats
