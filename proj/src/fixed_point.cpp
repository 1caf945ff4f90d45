#include "v2v/fixed_point.hpp"

#include <algorithm>
#include <cmath>

#include "v2v/errors.hpp"

namespace v2v {

FixedPointReport fixed_point_bisect(const std::function<double(double)>& map, double lo,
                                    double hi, double tol) {
  if (!(lo <= hi)) throw BracketError("fixed_point_bisect: lo > hi");
  FixedPointReport report;
  report.lo = lo;
  report.hi = hi;

  const double g_lo = map(lo) - lo;
  if (std::abs(g_lo) <= tol) {
    report.value = lo;
    report.residual = std::abs(g_lo);
    return report;
  }
  const double g_hi = map(hi) - hi;
  if (std::abs(g_hi) <= tol) {
    report.value = hi;
    report.residual = std::abs(g_hi);
    return report;
  }
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw BracketError("fixed_point_bisect: map(P) - P does not change sign on the bracket");
  }

  // Orient so that gap(a) > 0 > gap(b).
  double a = g_lo > 0.0 ? lo : hi;
  double b = g_lo > 0.0 ? hi : lo;
  double best = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
  double best_residual = std::min(std::abs(g_lo), std::abs(g_hi));
  int it = 0;
  for (; it < kFixedPointMaxIterations; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const double gap = map(mid) - mid;
    if (std::abs(gap) < best_residual) {
      best = mid;
      best_residual = std::abs(gap);
    }
    if (gap == 0.0) break;
    if (gap > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  report.iterations = it;
  report.value = best;
  report.residual = best_residual;
  if (best_residual > tol) {
    throw NonConvergenceError("fixed_point_bisect: residual above tolerance after bisection");
  }
  return report;
}

}  // namespace v2v
