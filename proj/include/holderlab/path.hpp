#pragma once

// Polygonal partial-sum paths.  A path is the linear interpolation of the
// scaled prefix sums of an increment vector on the uniform grid i/n; all of
// the Holder-norm machinery in this library operates on this type.

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace holderlab {

template <typename Scalar = double>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
struct PolygonalPath {
  Eigen::Index n = 0;
  ArrayX<Scalar> increments;  // x_1..x_n
  Scalar scale = Scalar(1);
  ArrayX<Scalar> prefix;  // unscaled partial sums S_0..S_n

  Scalar vertex(Eigen::Index i) const { return scale * prefix[i]; }

  // value at t in [0,1]: scale * (S_[nt] + (nt - [nt]) x_{[nt]+1}).
  // For dyadic t with n*t exactly representable the grid index is exact.
  Scalar value(Scalar t) const {
    if (!(t >= Scalar(0) && t <= Scalar(1)))
      throw std::invalid_argument("path value: t outside [0,1]");
    const Scalar nt = t * static_cast<Scalar>(n);
    auto u = static_cast<Eigen::Index>(std::floor(static_cast<double>(nt)));
    if (u >= n) return scale * prefix[n];
    const Scalar frac = nt - static_cast<Scalar>(u);
    return scale * (prefix[u] + frac * increments[u]);
  }

  // Lipschitz constant of the scaled path
  Scalar max_slope() const {
    return increments.abs().maxCoeff() * std::abs(scale) * static_cast<Scalar>(n);
  }
};

// accepts any Eigen array expression; scale = 0 selects the n^{-1/2} scaling
template <typename Derived>
PolygonalPath<typename Derived::Scalar> build_polygonal(
    const Eigen::ArrayBase<Derived>& expr, typename Derived::Scalar scale = 0) {
  using Scalar = typename Derived::Scalar;
  ArrayX<Scalar> x = expr;
  const Eigen::Index n = x.size();
  if (n < 1) throw std::invalid_argument("build_polygonal: need at least one increment");
  if (!x.isFinite().all()) throw std::invalid_argument("build_polygonal: non-finite increment");
  PolygonalPath<Scalar> p;
  p.n = n;
  if (scale == Scalar(0))
    p.scale = Scalar(1) / std::sqrt(static_cast<Scalar>(n));
  else
    p.scale = scale;
  if (!(p.scale > Scalar(0))) throw std::invalid_argument("build_polygonal: scale must be positive");
  p.prefix.resize(n + 1);
  p.prefix[0] = Scalar(0);
  for (Eigen::Index i = 0; i < n; ++i) p.prefix[i + 1] = p.prefix[i] + x[i];
  p.increments = std::move(x);
  return p;
}

template <typename Derived>
PolygonalPath<typename Derived::Scalar> build_polygonal_default(const Eigen::ArrayBase<Derived>& expr) {
  return build_polygonal(expr);
}

}  // namespace holderlab
