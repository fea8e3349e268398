#pragma once

// Stationary input sequences for the simulation harness: iid families,
// causal linear processes with a burn-in, and a truncated-to-bounded variant.
// Every generator draws from a replica-keyed Stream so that (seed, replica)
// fully determines the path.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "holderlab/path.hpp"
#include "holderlab/rng.hpp"

namespace holderlab {

enum class GeneratorKind {
  iid_gaussian,
  iid_rademacher,
  iid_pareto,
  linear_process,
  bounded_martingale,
};

// lower support point making the symmetric Pareto variance equal to one
inline double pareto_x_min(double beta) {
  if (!(beta > 2.0)) throw std::invalid_argument("pareto: tail exponent must exceed 2");
  return std::sqrt((beta - 2.0) / beta);
}

// E|X|^q of the unit-variance symmetric Pareto, finite only for q < beta
inline double pareto_abs_moment(double beta, double q) {
  const double xm = pareto_x_min(beta);
  if (!(q < beta)) throw std::invalid_argument("pareto: moment order must stay below the tail exponent");
  return beta * std::pow(xm, q) / (beta - q);
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::iid_gaussian;
  std::uint64_t seed = 0;
  double beta = 4.0;                                       // pareto tail exponent
  std::vector<double> coeffs;                              // linear process weights a_0..a_K
  GeneratorKind innovation = GeneratorKind::iid_gaussian;  // linear process driver
  double truncation = 0.0;                                 // bounded variant: keep |x| <= this
};

struct SamplePath {
  Eigen::Index n = 0;
  ArrayX<double> values;
};

namespace detail {

inline double draw_iid(rng::Stream& rng, GeneratorKind kind, double beta) {
  switch (kind) {
    case GeneratorKind::iid_gaussian: return rng.normal();
    case GeneratorKind::iid_rademacher: return rng.rademacher();
    case GeneratorKind::iid_pareto: return rng.pareto_symmetric(beta, pareto_x_min(beta));
    default: throw std::invalid_argument("generator: not an iid kind");
  }
}

}  // namespace detail

inline void validate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::iid_gaussian:
    case GeneratorKind::iid_rademacher:
      return;
    case GeneratorKind::iid_pareto:
      pareto_x_min(spec.beta);
      return;
    case GeneratorKind::linear_process:
      if (spec.coeffs.empty()) throw std::invalid_argument("linear process: no coefficients");
      if (spec.innovation == GeneratorKind::linear_process ||
          spec.innovation == GeneratorKind::bounded_martingale)
        throw std::invalid_argument("linear process: innovation must be an iid kind");
      if (spec.innovation == GeneratorKind::iid_pareto) pareto_x_min(spec.beta);
      return;
    case GeneratorKind::bounded_martingale:
      pareto_x_min(spec.beta);
      if (!(spec.truncation > 0.0)) throw std::invalid_argument("bounded variant: truncation must be positive");
      return;
  }
  throw std::invalid_argument("generator: unknown kind");
}

// One replica of length n.  Linear processes burn in K extra innovations so
// x_0 already carries the full coefficient window; the truncated Pareto stays
// centered because dropping a symmetric tail keeps the mean at zero.
inline SamplePath generate(const GeneratorSpec& spec, Eigen::Index n, std::uint64_t replica = 0) {
  validate(spec);
  if (n <= 0) throw std::invalid_argument("generator: path length must be positive");
  rng::Stream rng = rng::Stream::for_replica(spec.seed, replica);
  SamplePath out;
  out.n = n;
  out.values.resize(n);
  switch (spec.kind) {
    case GeneratorKind::iid_gaussian:
    case GeneratorKind::iid_rademacher:
    case GeneratorKind::iid_pareto:
      for (Eigen::Index t = 0; t < n; ++t)
        out.values[t] = detail::draw_iid(rng, spec.kind, spec.beta);
      break;
    case GeneratorKind::linear_process: {
      const Eigen::Index K = static_cast<Eigen::Index>(spec.coeffs.size()) - 1;
      ArrayX<double> eps(n + K);
      for (Eigen::Index i = 0; i < eps.size(); ++i)
        eps[i] = detail::draw_iid(rng, spec.innovation, spec.beta);
      for (Eigen::Index t = 0; t < n; ++t) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k <= K; ++k) acc += spec.coeffs[static_cast<std::size_t>(k)] * eps[t + K - k];
        out.values[t] = acc;
      }
      break;
    }
    case GeneratorKind::bounded_martingale:
      for (Eigen::Index t = 0; t < n; ++t) {
        const double x = rng.pareto_symmetric(spec.beta, pareto_x_min(spec.beta));
        out.values[t] = (std::abs(x) <= spec.truncation) ? x : 0.0;
      }
      break;
  }
  return out;
}

}  // namespace holderlab
