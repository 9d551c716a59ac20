#pragma once

// Bracketed scalar root finding: plain bisection and a Newton iteration
// safeguarded by a shrinking bracket.

#include <cmath>
#include <tuple>
#include <utility>

namespace prcg::roots {

struct RootResult {
  double x = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct Tolerances {
  double x_rel = 1e-15;   // stop when the bracket is this narrow (relative)
  double residual = 0.0;  // stop when |g(x)| <= residual
  int max_iterations = 400;
};

/// Bisection for g on [lo, hi] with g(lo) and g(hi) of opposite sign.
/// Only the sign of g is used to shrink the bracket.
template <class Fn>
RootResult bisect(Fn&& g, double lo, double hi, const Tolerances& tol = {}) {
  const bool increasing = g(lo) < 0.0;
  RootResult out;
  for (int it = 1; it <= tol.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    out.x = mid;
    out.iterations = it;
    if (std::abs(g_mid) <= tol.residual ||
        (hi - lo) <= tol.x_rel * std::abs(mid)) {
      out.converged = true;
      return out;
    }
    if (mid == lo || mid == hi) break;  // bracket at machine resolution
    if ((g_mid < 0.0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.converged = (hi - lo) <= tol.x_rel * std::abs(out.x);
  return out;
}

/// Newton steps inside a bracket. `g_dg(x)` returns {g(x), g'(x)}. A Newton
/// step that leaves the bracket, or fails to halve it fast enough, is
/// replaced by a bisection step, so convergence is guaranteed whenever the
/// bracket holds a sign change.
template <class Fn>
RootResult bisect_newton(Fn&& g_dg, double lo, double hi,
                         const Tolerances& tol = {}) {
  auto [g_lo, d_lo] = g_dg(lo);
  auto [g_hi, d_hi] = g_dg(hi);
  (void)d_lo;
  (void)d_hi;
  RootResult out;
  if (g_lo == 0.0) return {lo, 0, true};
  if (g_hi == 0.0) return {hi, 0, true};
  // Orient so that g(low) < 0 < g(high).
  double low = g_lo < 0.0 ? lo : hi;
  double high = g_lo < 0.0 ? hi : lo;

  double x = 0.5 * (lo + hi);
  double step_before_last = std::abs(hi - lo);
  double last_step = step_before_last;
  auto [g, dg] = g_dg(x);
  for (int it = 1; it <= tol.max_iterations; ++it) {
    out.iterations = it;
    const bool newton_leaves =
        ((x - high) * dg - g) * ((x - low) * dg - g) > 0.0;
    const bool too_slow = std::abs(2.0 * g) > std::abs(step_before_last * dg);
    step_before_last = last_step;
    double step;
    if (newton_leaves || too_slow || dg == 0.0) {
      step = 0.5 * (high - low);
      x = low + step;
    } else {
      step = g / dg;
      x -= step;
    }
    last_step = step;
    std::tie(g, dg) = g_dg(x);
    if (std::abs(g) <= tol.residual ||
        std::abs(step) <= tol.x_rel * std::abs(x)) {
      out.x = x;
      out.converged = true;
      return out;
    }
    if (g < 0.0) {
      low = x;
    } else {
      high = x;
    }
  }
  out.x = x;
  return out;
}

}  // namespace prcg::roots
