#pragma once

#include <cmath>

#include "branchflow/errors.hpp"

namespace branchflow {

/// Parameters of the capacity-aware edge cost. `alpha` is the concavity
/// exponent in [0,1], `capacity` the channel width c > 0. `int_snap` is the
/// tolerance at which a weight/capacity ratio is treated as an exact integer,
/// so that H(n*c) evaluates to n instead of falling on the wrong side of the
/// floor. We identify 0^0 := 1 (std::pow already does).
struct CostParams {
  double alpha = 0.5;
  double capacity = 1.0;
  double int_snap = 1e-12;
};

inline bool params_valid(const CostParams& p) {
  return p.alpha >= 0.0 && p.alpha <= 1.0 && p.capacity > 0.0 &&
         p.int_snap > 0.0 && p.int_snap <= 1e-9;
}

/// Split of x/c into an integer channel count and a fractional remainder,
/// with `whole` integer-valued and `frac` in [0,1). Ratios within `int_snap`
/// of an integer snap to (n, 0).
struct HParts {
  double whole = 0.0;
  double frac = 0.0;
};

inline HParts h_parts(double x, const CostParams& p) {
  if (x < 0.0) throw NegativeWeight("h_parts: negative weight");
  const double u = x / p.capacity;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= p.int_snap) return {nearest, 0.0};
  const double fl = std::floor(u);
  return {fl, u - fl};
}

/// H_{c,alpha}(x) = floor(x/c) + (x/c - floor(x/c))^alpha.
/// H(n*c) = n for integers n; increasing in x; for alpha in (0,1] concave and
/// continuous, for alpha = 0 piecewise constant and lower semicontinuous.
inline double h_value(double x, const CostParams& p) {
  const HParts parts = h_parts(x, p);
  if (parts.frac == 0.0) return parts.whole;
  return parts.whole + std::pow(parts.frac, p.alpha);
}

}  // namespace branchflow
