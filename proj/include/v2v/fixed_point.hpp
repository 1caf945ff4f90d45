#pragma once

#include <functional>

namespace v2v {

struct FixedPointReport {
  double value = 0.0;     // the solved probability
  double residual = 0.0;  // |value - map(value)|
  int iterations = 0;
  double lo = 0.0;        // bracket used
  double hi = 0.0;
};

inline constexpr double kFixedPointTolerance = 1e-10;
inline constexpr int kFixedPointMaxIterations = 200;

// Fixed point of a monotone non-increasing map on [lo, hi] by bisection on
// map(P) - P. Endpoints that are already fixed (within tol) are returned
// directly; otherwise the bracket is halved until it collapses to adjacent
// doubles, so the returned residual is usually far below tol.
//
// Throws BracketError without a sign change, NonConvergenceError when the
// residual is still above tol after the iteration cap.
FixedPointReport fixed_point_bisect(const std::function<double(double)>& map, double lo,
                                    double hi, double tol = kFixedPointTolerance);

}  // namespace v2v
