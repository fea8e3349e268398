#pragma once

#include "holderlab/path.hpp"
#include "holderlab/rng.hpp"

namespace testutil {

inline holderlab::ArrayX<double> uniform_increments(holderlab::rng::Stream& s, int n,
                                                    double lo = -1.0, double hi = 1.0) {
  holderlab::ArrayX<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * s.u01();
  return x;
}

inline holderlab::ArrayX<double> rademacher_increments(holderlab::rng::Stream& s, int n) {
  holderlab::ArrayX<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = static_cast<double>(s.rademacher());
  return x;
}

}  // namespace testutil
